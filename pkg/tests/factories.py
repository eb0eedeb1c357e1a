"""Random dataset builders shared by the test modules."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

from floer_ainfty.ainfty import BETA0, AInftyData, BetaClass, deform
from floer_ainfty.bimodule import BimoduleData
from floer_ainfty.chains import Generator
from floer_ainfty.models import algebra_sign, truncated_polynomial_algebra
from floer_ainfty.novikov import Integers, NovikovElement, Rationals, TruncationPolicy

ZZ = Integers()
QQ = Rationals()


def tau_exponent_oracle(mu: int, degs: list[int]) -> int:
    """Written out independently of the library: mu/2 + k + 1 + pair sum of shifted degrees."""
    k = len(degs)
    s = sum((degs[i] - 1) * (degs[j] - 1) for i in range(k) for j in range(i + 1, k))
    return mu // 2 + k + 1 + s


def random_generators(rng: random.Random, n: int, lo: int = 0, hi: int = 3) -> list[Generator]:
    gens = [Generator(f"g{i}", rng.randint(lo, hi)) for i in range(n)]
    # make sure every degree in range has at least one generator
    for d in range(lo, hi + 1):
        if not any(g.degree == d for g in gens):
            gens.append(Generator(f"g{len(gens)}", d))
    return gens


def random_classes(rng: random.Random, count: int, mus: tuple[int, ...] = (0, 2, -2)) -> list[BetaClass]:
    out: set[BetaClass] = set()
    while len(out) < count:
        out.add(BetaClass(Fraction(rng.randint(1, 6), rng.choice((1, 2))), rng.choice(mus)))
    return sorted(out)


def _output_for(rng, gens, degree):
    cands = [g.name for g in gens if g.degree == degree]
    return rng.choice(cands) if cands else None


def random_dataset(
    rng: random.Random,
    n_gens: int = 4,
    n_classes: int = 2,
    max_k: int = 3,
    n_constants: int = 12,
    ring=ZZ,
) -> AInftyData:
    """Degree-lawful random constants; the A-infinity relations generally fail."""
    gens = random_generators(rng, n_gens)
    classes = random_classes(rng, n_classes)
    consts: dict = {}
    for _ in range(n_constants * 4):
        if len(consts) >= n_constants:
            break
        k = rng.randint(0, max_k)
        beta = rng.choice([BETA0, *classes])
        if k == 0 and beta == BETA0:
            continue
        ins = tuple(rng.choice(gens) for _ in range(k))
        out_deg = sum(g.degree for g in ins) + 2 - k - beta.maslov
        out = _output_for(rng, gens, out_deg)
        if out is None:
            continue
        key = (k, beta, tuple(g.name for g in ins))
        consts.setdefault(key, {})[out] = rng.choice((-2, -1, 1, 2, 3))
    return AInftyData(ring, 3, gens, consts, classes=classes)


def random_symmetric_dataset(rng: random.Random, ring=ZZ) -> AInftyData:
    """Constants symmetrized with the involution sign; all Maslov indices are 0 mod 4."""
    gens = random_generators(rng, rng.randint(2, 5))
    classes = random_classes(rng, rng.randint(1, 3), mus=(0, 4, 8))
    consts: dict = {}

    def bump(key, out, c):
        row = consts.setdefault(key, {})
        row[out] = row.get(out, 0) + c

    for _ in range(rng.randint(3, 12)):
        k = rng.randint(0, 3)
        beta = rng.choice(classes) if k == 0 else rng.choice([BETA0, *classes])
        ins = [rng.choice(gens) for _ in range(k)]
        out = _output_for(rng, gens, sum(g.degree for g in ins) + 2 - k - beta.maslov)
        if out is None:
            continue
        c = rng.choice((-3, -1, 1, 2))
        sign = -1 if tau_exponent_oracle(beta.maslov, [g.degree for g in ins]) % 2 else 1
        bump((k, beta, tuple(g.name for g in ins)), out, c)
        bump((k, beta, tuple(g.name for g in reversed(ins))), out, sign * c)
    consts = {key: {o: c for o, c in row.items() if c} for key, row in consts.items()}
    consts = {key: row for key, row in consts.items() if row}
    return AInftyData(ring, 3, gens, consts, classes=classes)


# ---------------------------------------------------------------------------
# complexes with a homotopy perturbation


def random_integer_differential(rng: random.Random, gens: list[Generator]) -> dict[str, dict[str, int]]:
    """``D = E D0 E^-1`` with ``D0`` a disjoint union of ``x -> c y`` and ``E`` degree-preserving unimodular."""
    names = [g.name for g in gens]
    idx = {n: i for i, n in enumerate(names)}
    deg = {g.name: g.degree for g in gens}
    size = len(gens)
    M = [[0] * size for _ in range(size)]  # M[target][source]
    free = names[:]
    rng.shuffle(free)
    used: set[str] = set()
    for s in free:
        if s in used:
            continue
        tgts = [t for t in names if deg[t] == deg[s] + 1 and t not in used and t != s]
        if tgts and rng.random() < 0.7:
            t = rng.choice(tgts)
            M[idx[t]][idx[s]] = rng.choice((-2, -1, 1, 2))
            used |= {s, t}
    for _ in range(3 * size):
        i, j = rng.sample(range(size), 2)
        if deg[names[i]] != deg[names[j]]:
            continue
        a = rng.choice((-1, 1))
        # M <- E M E^-1 with E = I + a e_ij
        for c in range(size):
            M[i][c] += a * M[j][c]
        for r in range(size):
            M[r][j] -= a * M[r][i]
    return {
        names[s]: {names[t]: M[t][s] for t in range(size) if M[t][s]}
        for s in range(size)
        if any(M[t][s] for t in range(size))
    }


def random_pbar_dataset(rng: random.Random):
    """``(generator names, m10, pbar, policy)`` with at most 8 generators and 3 classes."""
    gens, m10, pbar, policy = random_pbar_setup(rng)
    return [g.name for g in gens], m10, pbar, policy


def random_pbar_setup(rng: random.Random):
    gens = random_generators(rng, rng.randint(3, 7), 0, 2)[:8]
    m10 = random_integer_differential(rng, gens)
    classes = random_classes(rng, rng.randint(1, 3), mus=(0,))
    names = [g.name for g in gens]
    deg = {g.name: g.degree for g in gens}
    pbar = {}
    for beta in classes:
        f = {}
        for s in names:
            row = {t: rng.choice((-2, -1, 1, 2)) for t in names if deg[t] == deg[s] and rng.random() < 0.35}
            if row:
                f[s] = row
        if f:
            pbar[beta] = f
    emin = min(c.energy for c in classes)
    policy = TruncationPolicy(energy_cutoff=4 * emin + Fraction(1, 2))
    return gens, m10, pbar, policy


# ---------------------------------------------------------------------------
# Maurer-Cartan toys for the bimodule


def _random_positive_cochain(rng, data: AInftyData, sparse_top: bool) -> dict[str, NovikovElement]:
    ring = data.ring
    out: dict[str, NovikovElement] = {}
    terms_a1 = [(Fraction(rng.randint(1, 4), 2), 0, rng.choice((-2, -1, 1, 2)))]
    out["a1"] = NovikovElement(ring, terms_a1)
    if sparse_top and "a3" in data.gen:
        out["a3"] = NovikovElement(ring, [(Fraction(rng.randint(1, 4), 2), -1, rng.choice((-1, 1, 3)))])
    return out


def mc_toy_pair(rng: random.Random, ring=QQ):
    """``(A', b1, b0, policy)``: a deformed truncated polynomial algebra and two
    Maurer-Cartan elements of it that differ in their top-degree parts."""
    r = rng.randint(3, 5)
    A = truncated_polynomial_algebra(r, ring)
    policy = TruncationPolicy(energy_cutoff=Fraction(6), max_tensor_length=4)
    c = A.chain(_random_positive_cochain(rng, A, True))
    Ad = deform(A, c, policy)
    minus_c = -c

    def with_extra():
        w = NovikovElement(ring, [(Fraction(rng.randint(1, 4), 2), -1, rng.choice((-2, -1, 1, 2)))])
        return minus_c + Ad.chain({"a3": w})

    return Ad, with_extra(), with_extra(), policy


def diagonal(data: AInftyData) -> BimoduleData:
    return BimoduleData.diagonal(data)


def all_degree_tuples(lo: int, hi: int, max_len: int):
    for k in range(max_len + 1):
        yield from product(range(lo, hi + 1), repeat=k)


__all__ = [
    "QQ",
    "ZZ",
    "algebra_sign",
    "all_degree_tuples",
    "diagonal",
    "mc_toy_pair",
    "random_classes",
    "random_dataset",
    "random_generators",
    "random_integer_differential",
    "random_pbar_dataset",
    "random_symmetric_dataset",
    "tau_exponent_oracle",
]
