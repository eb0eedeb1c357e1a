"""Filtered A-infinity bimodules, their sandwich differential, deformation by
bounding cochains, and the chain map built from homotopy operators ``pbar``."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Any, Iterable, Mapping, Sequence

from .ainfty import (
    BETA0,
    AInftyData,
    BetaClass,
    DatasetError,
    MCSolution,
    Names,
    check_maurer_cartan,
    dhat_basis,
)
from .chains import Generator, GradedChain
from .novikov import CoefficientRing, NovikovElement, TruncationPolicy


class MaurerCartanError(ValueError):
    """A supplied bounding cochain does not satisfy the Maurer-Cartan equation."""


BKey = tuple[int, int, BetaClass, Names, str, Names]
Sandwich = tuple[Names, str, Names]
SandwichSum = dict[Sandwich, NovikovElement]


def _add(acc: dict, key: Any, w: NovikovElement) -> None:
    if not w:
        return
    if key in acc:
        v = acc[key] + w
        if v:
            acc[key] = v
        else:
            del acc[key]
    else:
        acc[key] = w


class BimoduleData:
    """Structure constants ``n_{k1,k0,B}(left; y; right) -> {output: coeff}``."""

    def __init__(
        self,
        left: AInftyData,
        right: AInftyData,
        module_generators: Sequence[Generator],
        constants: Mapping[BKey, Mapping[str, Any]],
    ) -> None:
        if left.ring != right.ring:
            raise DatasetError("left and right algebras use different rings")
        self.left, self.right, self.ring = left, right, left.ring
        self.module_generators = tuple(Generator(g.name, int(g.degree)) for g in module_generators)
        self.gen = {g.name: g for g in self.module_generators}
        if len(self.gen) != len(self.module_generators):
            raise DatasetError("duplicate module generator names")
        consts: dict[BKey, dict[str, Any]] = {}
        for (k1, k0, B, L, y, R), outs in constants.items():
            L, R = tuple(L), tuple(R)
            if len(L) != k1 or len(R) != k0:
                raise DatasetError(f"arity ({k1},{k0}) does not match inputs {L}, {R}")
            for n in L:
                left.generator(n)
            for n in R:
                right.generator(n)
            if y not in self.gen:
                raise DatasetError(f"unknown module generator {y!r}")
            din = sum(left.gen[n].degree for n in L) + self.gen[y].degree + sum(right.gen[n].degree for n in R)
            clean = {}
            for out, c in outs.items():
                if out not in self.gen:
                    raise DatasetError(f"unknown module generator {out!r}")
                c = self.ring.coerce(c)
                if self.ring.is_zero(c):
                    continue
                expect = din + 1 - k1 - k0 - B.maslov
                if self.gen[out].degree != expect:
                    raise DatasetError(
                        f"degree law fails for n_{k1},{k0},{B.label()}({L};{y};{R}) -> {out}: "
                        f"deg {self.gen[out].degree}, expected {expect}"
                    )
                clean[out] = c
            if clean:
                consts[(k1, k0, B, L, y, R)] = clean
        self.constants = MappingProxyType(consts)
        asm: dict[Sandwich, dict[str, NovikovElement]] = {}
        for (k1, k0, B, L, y, R), outs in consts.items():
            slot = asm.setdefault((L, y, R), {})
            for out, c in outs.items():
                _add(slot, out, B.weight(self.ring, c))
        self._assembled = {k: v for k, v in asm.items() if v}

    @classmethod
    def diagonal(cls, data: AInftyData) -> BimoduleData:
        """``n_{k1,k0} = m_{k1+k0+1}`` with the algebra acting on itself."""
        consts: dict[BKey, dict[str, Any]] = {}
        for (k, beta, names), outs in data.constants.items():
            for k1 in range(k):
                L, y, R = names[:k1], names[k1], names[k1 + 1 :]
                consts[(k1, k - 1 - k1, beta, L, y, R)] = dict(outs)
        return cls(data, data, data.generators, consts)

    def assembled(self, L: Names, y: str, R: Names) -> Mapping[str, NovikovElement]:
        return self._assembled.get((L, y, R), {})

    def chain(self, coeffs: Mapping[str, NovikovElement]) -> GradedChain:
        return GradedChain(self.ring, {self.gen[n]: w for n, w in coeffs.items()})


def _expand(chains: Sequence[GradedChain], ring: CoefficientRing) -> dict[Names, NovikovElement]:
    out: dict[Names, NovikovElement] = {(): NovikovElement.one(ring)}
    for c in chains:
        nxt: dict[Names, NovikovElement] = {}
        for t, w in out.items():
            for g, v in c.items():
                _add(nxt, t + (g.name,), w * v)
        out = nxt
    return out


def apply_n(
    data: BimoduleData,
    k1: int,
    k0: int,
    left_inputs: Sequence[GradedChain],
    y: GradedChain,
    right_inputs: Sequence[GradedChain],
    policy: TruncationPolicy,
) -> GradedChain:
    """Assembled ``n_{k1,k0}``; weights multiply into ``T^lambda' e^mu'``."""
    if len(left_inputs) != k1 or len(right_inputs) != k0:
        raise DatasetError(f"n_{k1},{k0} takes ({k1},{k0}) inputs, got ({len(left_inputs)},{len(right_inputs)})")
    ring = data.ring
    acc: dict[str, NovikovElement] = {}
    for L, wl in _expand(left_inputs, ring).items():
        for R, wr in _expand(right_inputs, ring).items():
            for g, wy in y.items():
                base = wl * wy * wr
                for out, v in data.assembled(L, g.name, R).items():
                    _add(acc, out, (base * v).truncate(policy))
    return data.chain(acc)


def _shifted_sum(alg: AInftyData, names: Names) -> int:
    return sum(alg.gen[n].degree - 1 for n in names)


def dhat_bimodule_basis(data: BimoduleData, s: Sandwich) -> SandwichSum:
    L, y, R = s
    out: SandwichSum = {}
    nL = len(L)
    # n applied around y, absorbing a suffix of L and a prefix of R
    for a in range(nL + 1):
        head = L[:a]
        sign = -1 if _shifted_sum(data.left, head) % 2 else 1
        for b in range(len(R) + 1):
            res = data._assembled.get((L[a:], y, R[:b]))
            if not res:
                continue
            tail = R[b:]
            for o, w in res.items():
                _add(out, (head, o, tail), w if sign > 0 else -w)
    for t, w in dhat_basis(data.left, L).items():
        _add(out, (t, y, R), w)
    sign = -1 if (_shifted_sum(data.left, L) + data.gen[y].degree - 1) % 2 else 1
    for t, w in dhat_basis(data.right, R).items():
        _add(out, (L, y, t), w if sign > 0 else -w)
    return out


def _trunc(w: NovikovElement, policy: TruncationPolicy | None) -> NovikovElement:
    return w.truncate(policy) if policy is not None else w


def dhat_bimodule_sum(data: BimoduleData, src: SandwichSum, policy: TruncationPolicy | None = None) -> SandwichSum:
    out: SandwichSum = {}
    for s, w in src.items():
        for t, v in dhat_bimodule_basis(data, s).items():
            _add(out, t, _trunc(w * v, policy))
    return out


def apply_dhat_bimodule(
    data: BimoduleData,
    left: Sequence[GradedChain],
    y: GradedChain,
    right: Sequence[GradedChain],
    policy: TruncationPolicy,
) -> SandwichSum:
    if len(left) + len(right) > policy.max_tensor_length:
        raise DatasetError("sandwich longer than max_tensor_length")
    ring = data.ring
    src: SandwichSum = {}
    for L, wl in _expand(left, ring).items():
        for R, wr in _expand(right, ring).items():
            for g, wy in y.items():
                _add(src, (L, g.name, R), wl * wy * wr)
    return dhat_bimodule_sum(data, src, policy)


def sandwiches(data: BimoduleData, max_total: int) -> Iterable[Sandwich]:
    ln = [g.name for g in data.left.generators]
    rn = [g.name for g in data.right.generators]
    for total in range(max_total + 1):
        for k1 in range(total + 1):
            for L in itertools.product(ln, repeat=k1):
                for R in itertools.product(rn, repeat=total - k1):
                    for g in data.module_generators:
                        yield (L, g.name, R)


def check_bimodule_dhat_squared(
    data: BimoduleData, policy: TruncationPolicy, max_total: int | None = None
) -> list[tuple[Sandwich, Sandwich, NovikovElement]]:
    """Nonzero entries of ``d^ d^`` on all sandwiches with ``k1 + k0 <= max_total``."""
    max_total = policy.max_tensor_length if max_total is None else max_total
    bad = []
    for s in sandwiches(data, max_total):
        sq = dhat_bimodule_sum(data, dhat_bimodule_basis(data, s), policy)
        for t, w in sq.items():
            bad.append((s, t, w))
    return bad


# ---------------------------------------------------------------------------
# deformation by bounding cochains

NovikovMap = dict[str, dict[str, NovikovElement]]


def _as_chain(b: MCSolution | GradedChain) -> GradedChain:
    return b.b if isinstance(b, MCSolution) else b


def deformed_n00(
    data: BimoduleData,
    b1: MCSolution | GradedChain,
    b0: MCSolution | GradedChain,
    policy: TruncationPolicy,
) -> NovikovMap:
    """``y -> sum n_{k1,k0}(b1,..,b1, y, b0,..,b0)`` as ``{y: {output: weight}}``."""
    c1, c0 = _as_chain(b1), _as_chain(b0)
    for side, alg, c in (("left", data.left, c1), ("right", data.right, c0)):
        res = check_maurer_cartan(alg, c, policy)
        if res:
            raise MaurerCartanError(f"{side} cochain has nonzero Maurer-Cartan residual {res}")
    w1 = {g.name: w for g, w in c1.items()}
    w0 = {g.name: w for g, w in c0.items()}
    out: NovikovMap = {}
    for (L, y, R), res in data._assembled.items():
        if not all(n in w1 for n in L) or not all(n in w0 for n in R):
            continue
        w = NovikovElement.one(data.ring)
        for n in L:
            w = (w * w1[n]).truncate(policy)
        for n in R:
            w = (w * w0[n]).truncate(policy)
        if not w:
            continue
        slot = out.setdefault(y, {})
        for o, v in res.items():
            _add(slot, o, (w * v).truncate(policy))
    return {y: row for y, row in out.items() if row}


def compose_novikov(f: NovikovMap, g: NovikovMap, policy: TruncationPolicy | None = None) -> NovikovMap:
    """``f o g`` for maps stored as ``{src: {tgt: weight}}``."""
    out: NovikovMap = {}
    for src, row in g.items():
        acc: dict[str, NovikovElement] = {}
        for mid, w in row.items():
            for tgt, v in f.get(mid, {}).items():
                _add(acc, tgt, _trunc(w * v, policy))
        if acc:
            out[src] = acc
    return out


def add_novikov(f: NovikovMap, g: NovikovMap, sign: int = 1) -> NovikovMap:
    out: NovikovMap = {s: dict(r) for s, r in f.items()}
    for s, row in g.items():
        slot = out.setdefault(s, {})
        for t, w in row.items():
            _add(slot, t, w if sign > 0 else -w)
    return {s: r for s, r in out.items() if r}


# ---------------------------------------------------------------------------
# chain map from homotopy operators

CoeffMap = dict[str, dict[str, Any]]


def _cm_compose(ring: CoefficientRing, f: CoeffMap, g: CoeffMap) -> CoeffMap:
    """``f o g``."""
    out: CoeffMap = {}
    for src, row in g.items():
        acc: dict[str, Any] = {}
        for mid, a in row.items():
            for tgt, b in f.get(mid, {}).items():
                acc[tgt] = ring.add(acc.get(tgt, ring.zero()), ring.mul(a, b))
        acc = {t: c for t, c in acc.items() if not ring.is_zero(c)}
        if acc:
            out[src] = acc
    return out


def _cm_add(ring: CoefficientRing, *terms: tuple[int, CoeffMap]) -> CoeffMap:
    out: CoeffMap = {}
    for sign, f in terms:
        for s, row in f.items():
            slot = out.setdefault(s, {})
            for t, c in row.items():
                c = ring.coerce(c)
                slot[t] = ring.add(slot.get(t, ring.zero()), c if sign > 0 else ring.neg(c))
    cleaned = {s: {t: c for t, c in r.items() if not ring.is_zero(c)} for s, r in out.items()}
    return {s: r for s, r in cleaned.items() if r}


def _weighted(ring: CoefficientRing, parts: Mapping[BetaClass, CoeffMap], policy: TruncationPolicy | None) -> NovikovMap:
    out: NovikovMap = {}
    for beta, f in parts.items():
        if policy is not None and not policy.keeps(beta.energy, beta.e_power):
            continue
        for s, row in f.items():
            slot = out.setdefault(s, {})
            for t, c in row.items():
                _add(slot, t, beta.weight(ring, c))
    return {s: r for s, r in out.items() if r}


def class_monoid(generators: Iterable[BetaClass], cutoff) -> list[BetaClass]:
    """Nonzero sums of the given classes with energy below ``cutoff``, sorted."""
    base = sorted(set(generators))
    for b in base:
        if b.energy <= 0:
            raise DatasetError(f"class {b.label()} must have positive energy")
    seen: set[BetaClass] = set()
    frontier = list(base)
    while frontier:
        nxt = []
        for x in frontier:
            if x.energy >= cutoff or x in seen:
                continue
            seen.add(x)
            nxt.extend(x + b for b in base)
        frontier = nxt
    return sorted(seen)


@dataclass(frozen=True)
class ChainMapI:
    ring: CoefficientRing
    generators: tuple[str, ...]
    m10: CoeffMap
    m1_beta: Mapping[BetaClass, CoeffMap]
    P: Mapping[BetaClass, CoeffMap]
    policy: TruncationPolicy

    @property
    def I(self) -> NovikovMap:
        ident = {g: {g: NovikovElement.one(self.ring)} for g in self.generators}
        return add_novikov(ident, _weighted(self.ring, self.P, self.policy))

    @property
    def m1(self) -> NovikovMap:
        return _weighted(self.ring, {BETA0: self.m10, **self.m1_beta}, self.policy)


def build_chain_map_I(
    pbar: Mapping[BetaClass, CoeffMap],
    m10: CoeffMap,
    policy: TruncationPolicy,
    ring: CoefficientRing,
    generators: Sequence[str] | None = None,
) -> ChainMapI:
    """Define ``m_{1,beta}`` from ``pbar`` by the homotopy identity, recursively in
    energy, and assemble ``I = id + sum_beta P(beta) T^omega e^(mu/2)`` with
    ``P(beta) = sum (-1)^k pbar_{beta_1} o ... o pbar_{beta_k}``."""
    if BETA0 in pbar:
        raise DatasetError("pbar is indexed by nonzero classes")
    gens = tuple(generators) if generators is not None else tuple(
        sorted({*m10, *(t for r in m10.values() for t in r), *(x for f in pbar.values() for x in f)}
               | {t for f in pbar.values() for r in f.values() for t in r})
    )
    classes = class_monoid(pbar, policy.energy_cutoff)
    m1: dict[BetaClass, CoeffMap] = {}
    P: dict[BetaClass, CoeffMap] = {}
    for beta in classes:
        pb = pbar.get(beta, {})
        terms: list[tuple[int, CoeffMap]] = [(1, _cm_compose(ring, m10, pb)), (-1, _cm_compose(ring, pb, m10))]
        ps: list[tuple[int, CoeffMap]] = [(-1, pb)]
        for b1, f in pbar.items():
            b2 = _difference(beta, b1)
            if b2 is None:
                continue
            if b2 in m1:
                terms.append((-1, _cm_compose(ring, f, m1[b2])))
            if b2 in P:
                ps.append((-1, _cm_compose(ring, f, P[b2])))
        m1[beta] = _cm_add(ring, *terms)
        P[beta] = _cm_add(ring, *ps)
    return ChainMapI(
        ring,
        gens,
        m10,
        {b: f for b, f in m1.items() if f},
        {b: f for b, f in P.items() if f},
        policy,
    )


def _difference(beta: BetaClass, b1: BetaClass) -> BetaClass | None:
    e, m = beta.energy - b1.energy, beta.maslov - b1.maslov
    if e <= 0:
        return None
    return BetaClass(e, m)


def verify_pbar_identity(
    pbar: Mapping[BetaClass, CoeffMap],
    m10: CoeffMap,
    m1_beta: Mapping[BetaClass, CoeffMap],
    ring: CoefficientRing,
    cutoff: Fraction | None = None,
) -> dict[BetaClass, CoeffMap]:
    """Residual of ``-m10 pbar_b + m1_b + pbar_b m10 + sum pbar_b1 m1_b2`` per class
    (classes of energy ``>= cutoff`` skipped)."""
    out = {}
    for beta in sorted(set(m1_beta) | set(pbar)):
        if cutoff is not None and beta.energy >= cutoff:
            continue
        pb = pbar.get(beta, {})
        terms = [
            (-1, _cm_compose(ring, m10, pb)),
            (1, m1_beta.get(beta, {})),
            (1, _cm_compose(ring, pb, m10)),
        ]
        for b1, f in pbar.items():
            b2 = _difference(beta, b1)
            if b2 is not None and b2 in m1_beta:
                terms.append((1, _cm_compose(ring, f, m1_beta[b2])))
        res = _cm_add(ring, *terms)
        if res:
            out[beta] = res
    return out


def verify_I_chain_map(cm: ChainMapI) -> NovikovMap:
    """``m1 o I - I o m10`` truncated below the cutoff; empty means a chain map."""
    p = cm.policy
    m10 = _weighted(cm.ring, {BETA0: cm.m10}, p)
    lhs = compose_novikov(cm.m1, cm.I, p)
    rhs = compose_novikov(cm.I, m10, p)
    return add_novikov(lhs, rhs, -1)
