"""Orientation sign calculus for anti-symplectic involutions.

Every sign is computed from an explicit parity formula; nothing here is
re-derived at chain level.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any, Sequence

from .ainfty import AInftyData, BetaClass
from .chains import GradedChain
from .novikov import NovikovElement, TruncationPolicy


class SignError(ValueError):
    pass


def _parity_sign(exp: int) -> int:
    return -1 if exp % 2 else 1


def _check_even(mu: int) -> None:
    if mu % 2:
        raise SignError(f"Maslov index must be even, got {mu}")


@dataclass(frozen=True)
class SignContext:
    maslov: int
    k: int
    m: int = 0
    degs: tuple[int, ...] = ()
    n: int = 0
    degQs: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        _check_even(self.maslov)
        object.__setattr__(self, "degs", tuple(self.degs))
        object.__setattr__(self, "degQs", tuple(self.degQs))
        if self.degs and len(self.degs) != self.k:
            raise SignError(f"k = {self.k} but {len(self.degs)} degrees given")


def shifted_pair_sum(degs: Sequence[int]) -> int:
    """``sum_{i<j} deg' P_i deg' P_j``."""
    total, run = 0, 0
    for d in degs:
        total += run * (d - 1)
        run += d - 1
    return total


def tau_sign_basic(mu: int) -> int:
    """+1 iff ``mu = 0 mod 4``."""
    _check_even(mu)
    return 1 if mu % 4 == 0 else -1


def tau_exponent_marked(mu: int, k: int, m: int) -> int:
    _check_even(mu)
    return mu // 2 + k + 1 + m


def tau_sign_marked(mu: int, k: int, m: int) -> int:
    """Parity of ``mu/2 + k + 1 + m`` (``k = -1`` is accepted)."""
    return _parity_sign(tau_exponent_marked(mu, k, m))


def tau_exponent_main(mu: int, k: int, m: int, degs: Sequence[int]) -> int:
    if len(degs) != k:
        raise SignError(f"k = {k} but {len(degs)} degrees given")
    return tau_exponent_marked(mu, k, m) + shifted_pair_sum(degs)


def tau_sign_main(mu: int, k: int, m: int, degs: Sequence[int]) -> int:
    s = _parity_sign(tau_exponent_main(mu, k, m, degs))
    assert s == tau_sign_marked(mu, k, m) * _parity_sign(shifted_pair_sum(degs))
    return s


def transposition_sign(deg_a: int, deg_b: int) -> int:
    """Sign of swapping adjacent entries of degrees ``deg_a``, ``deg_b``."""
    return _parity_sign((deg_a + 1) * (deg_b + 1))


def _check_perm(perm: Sequence[int], k: int) -> None:
    if sorted(perm) != list(range(1, k + 1)):
        raise SignError(f"{list(perm)} is not a permutation of 1..{k}")


def sign_of_decomposition(degs: Sequence[int], swaps: Sequence[int]) -> int:
    """Product of transposition signs along adjacent swaps.

    ``swaps`` lists 1-based positions ``i``; each exchanges the entries currently
    at ``i`` and ``i+1``.
    """
    cur = list(degs)
    s = 1
    for i in swaps:
        if not 1 <= i < len(cur):
            raise SignError(f"swap position {i} out of range")
        s *= transposition_sign(cur[i - 1], cur[i])
        cur[i - 1], cur[i] = cur[i], cur[i - 1]
    return s


def permutation_sign(degs: Sequence[int], perm: Sequence[int]) -> int:
    """Sign of rearranging ``degs`` into the order ``(degs[perm[0]-1], degs[perm[1]-1], ...)``."""
    _check_perm(perm, len(degs))
    return sign_of_decomposition(degs, bubble_swaps(perm))


def bubble_swaps(perm: Sequence[int]) -> list[int]:
    """Adjacent swaps turning the identity into ``perm`` (1-based positions)."""
    _check_perm(perm, len(perm))
    cur = list(range(1, len(perm) + 1))
    swaps = []
    for target_pos, v in enumerate(perm):
        j = cur.index(v)
        while j > target_pos:
            swaps.append(j)
            cur[j - 1], cur[j] = cur[j], cur[j - 1]
            j -= 1
    return swaps


def random_decomposition(perm: Sequence[int], rng: random.Random, max_len: int = 12) -> list[int]:
    """A random adjacent-swap word realizing ``perm``, padded with cancelling pairs."""
    base = bubble_swaps(perm)
    k = len(perm)
    word = list(base)
    if k < 2:
        return word
    while len(word) + 2 <= max_len and rng.random() < 0.8:
        pos = rng.randrange(len(word) + 1)
        i = rng.randrange(1, k)
        word[pos:pos] = [i, i]
    return word


def fiber_twist_exponent_P(n: int, degs: Sequence[int]) -> int:
    """``(n+1) sum_{j=1}^{k-1} sum_{i<=j} deg P_i``."""
    k = len(degs)
    total, run = 0, 0
    for j in range(k - 1):
        run += degs[j]
        total += run
    return (n + 1) * total


def fiber_twist_P(n: int, degs: Sequence[int]) -> int:
    return _parity_sign(fiber_twist_exponent_P(n, degs))


def fiber_twist_PQ(n: int, k: int, degs: Sequence[int], degQs: Sequence[int]) -> int:
    exp = fiber_twist_exponent_P(n, degs) + ((k + 1) * (n + 1) + 1) * sum(degQs)
    return _parity_sign(exp)


def relspin_change_sign(x_eval: int) -> int:
    if x_eval not in (0, 1):
        raise SignError("relative-spin pairing must be 0 or 1")
    return _parity_sign(x_eval)


# ---------------------------------------------------------------------------
# dataset-level checks


@dataclass(frozen=True)
class SymmetryViolation:
    k: int
    beta: BetaClass
    inputs: tuple[str, ...]
    output: str
    lhs: Any
    rhs: Any

    def to_json(self) -> dict[str, Any]:
        return {
            "k": self.k,
            "energy": str(self.beta.energy),
            "maslov": self.beta.maslov,
            "inputs": list(self.inputs),
            "output": self.output,
            "value": str(self.lhs),
            "expected": str(self.rhs),
        }


@dataclass(frozen=True)
class SymmetryReport:
    violations: tuple[SymmetryViolation, ...]
    checked: int

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict[str, Any]:
        return {"ok": self.ok, "checked": self.checked, "violations": [v.to_json() for v in self.violations]}


def tau_exponent_for(data: AInftyData, beta: BetaClass, names: Sequence[str]) -> int:
    """Exponent relating ``m_{k,beta}(P_1..P_k)`` to ``m_{k,beta}(P_k..P_1)``,
    including the relative-spin pairing recorded for ``beta``."""
    degs = [data.gen[n].degree for n in names]
    return tau_exponent_main(beta.maslov, len(names), 0, degs) + data.relspin.get(beta, 0)


def check_tau_symmetry(data: AInftyData) -> SymmetryReport:
    ring = data.ring
    viol: list[SymmetryViolation] = []
    seen: set[tuple] = set()
    for (k, beta, names), _ in data.constants.items():
        rev = tuple(reversed(names))
        for key in ((k, beta, names), (k, beta, rev)):
            if key in seen:
                continue
            seen.add(key)
            a = data.constant(*key)
            b = data.constant(k, beta, tuple(reversed(key[2])))
            s = _parity_sign(tau_exponent_for(data, beta, key[2]))
            for out in sorted(set(a) | set(b), key=data.index.__getitem__):
                lhs = a.get(out, ring.zero())
                rhs = ring.mul(s, b.get(out, ring.zero()))
                if not ring.is_zero(ring.add(lhs, ring.neg(rhs))):
                    viol.append(SymmetryViolation(k, beta, key[2], out, lhs, rhs))
    return SymmetryReport(tuple(viol), len(seen))


def cup_product(
    data: AInftyData, P1: GradedChain, P2: GradedChain, policy: TruncationPolicy | None = None
) -> GradedChain:
    """``P1 cup_Q P2 = (-1)^(deg P1 (deg P2 + 1)) m_2(P1, P2)`` extended bilinearly.

    Degrees are the generator degrees; Novikov weights are even and move freely.
    """
    policy = policy or TruncationPolicy()
    acc: dict[str, NovikovElement] = {}
    for g1, w1 in P1.items():
        for g2, w2 in P2.items():
            s = _parity_sign(g1.degree * (g2.degree + 1))
            w = w1 * w2
            for o, v in data.assembled((g1.name, g2.name)).items():
                x = (w * v).truncate(policy)
                if s < 0:
                    x = -x
                x = acc[o] + x if o in acc else x
                if x:
                    acc[o] = x
                else:
                    acc.pop(o, None)
    return data.chain(acc)


@dataclass(frozen=True)
class CommutativityReport:
    failures: tuple[tuple[str, str], ...]
    checked: int

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict[str, Any]:
        return {"ok": self.ok, "checked": self.checked, "failures": [list(f) for f in self.failures]}


def check_graded_commutativity(data: AInftyData, policy: TruncationPolicy | None = None) -> CommutativityReport:
    """``P1 cup P2 = (-1)^(deg P1 deg P2) P2 cup P1`` on all basis pairs."""
    fails = []
    count = 0
    for g1 in data.generators:
        for g2 in data.generators:
            count += 1
            c1 = GradedChain.of(data.ring, g1)
            c2 = GradedChain.of(data.ring, g2)
            lhs = cup_product(data, c1, c2, policy)
            rhs = cup_product(data, c2, c1, policy)
            if g1.degree * g2.degree % 2:
                rhs = -rhs
            if lhs != rhs:
                fails.append((g1.name, g2.name))
    return CommutativityReport(tuple(fails), count)

