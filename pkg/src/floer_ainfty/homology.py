"""Cohomology of Novikov complexes.

Two routes:

* :func:`homology_field` computes Betti numbers over the Novikov field for
  field coefficients, by exact fraction-free elimination.
* :func:`homology_truncated_Z` handles integer coefficients.  It expands the
  complex q-adically (``q`` the monoid generator of all weights), computes
  integer homology piece by piece with Smith normal form, and reads off cyclic
  families ``Lambda_0 / (c T^shift)`` from how groups evolve with the q-level.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence

from .ainfty import AInftyData
from .chains import Generator
from .linalg import (  # noqa: F401  (re-export)
    Vector,
    integer_kernel,
    invariant_factors,
    lattice_basis,
    novikov_rank,
    quotient_invariants,
    saturation_meet,
    smith_normal_form,
)
from .novikov import CoefficientRing, Integers, NovikovElement, TruncationPolicy


class ComplexError(ValueError):
    pass


Entry = Mapping[str, NovikovElement]


@dataclass(frozen=True)
class NovikovComplex:
    """Generators with a degree +1 differential ``src -> {tgt: weight}``."""

    ring: CoefficientRing
    generators: tuple[Generator, ...]
    differential: Mapping[str, Entry]

    def __post_init__(self) -> None:
        object.__setattr__(self, "generators", tuple(self.generators))
        gen = {g.name: g for g in self.generators}
        if len(gen) != len(self.generators):
            raise ComplexError("duplicate generator names")
        clean: dict[str, dict[str, NovikovElement]] = {}
        for src, row in self.differential.items():
            if src not in gen:
                raise ComplexError(f"unknown generator {src!r}")
            for tgt, w in row.items():
                if tgt not in gen:
                    raise ComplexError(f"unknown generator {tgt!r}")
                if w.ring != self.ring:
                    raise ComplexError(f"entry {src}->{tgt} has coefficients in {w.ring}, expected {self.ring}")
                for _, mu, _ in w.terms:
                    if gen[tgt].degree + 2 * mu != gen[src].degree + 1:
                        raise ComplexError(f"entry {src}->{tgt} is not of degree +1")
                if w:
                    clean.setdefault(src, {})[tgt] = w
        object.__setattr__(self, "differential", clean)

    @classmethod
    def from_ainfty(cls, data: AInftyData, policy: TruncationPolicy | None = None) -> NovikovComplex:
        diff: dict[str, dict[str, NovikovElement]] = {}
        for g in data.generators:
            row = data.assembled((g.name,))
            if policy is not None:
                row = {t: w.truncate(policy) for t, w in row.items()}
            if row:
                diff[g.name] = dict(row)
        return cls(data.ring, data.generators, diff)

    @property
    def gen(self) -> dict[str, Generator]:
        return {g.name: g for g in self.generators}

    def change_ring(self, ring: CoefficientRing) -> NovikovComplex:
        diff = {
            s: {t: NovikovElement(ring, [(l, m, ring.coerce(c)) for l, m, c in w.terms]) for t, w in row.items()}
            for s, row in self.differential.items()
        }
        return NovikovComplex(ring, self.generators, diff)

    def square_defect(self, policy: TruncationPolicy | None = None) -> tuple[str, str, NovikovElement] | None:
        """First ``(src, tgt, value)`` with ``(d d)(src)`` nonzero at ``tgt``, if any."""
        order = {g.name: i for i, g in enumerate(self.generators)}
        for g in self.generators:
            acc: dict[str, NovikovElement] = {}
            for mid, w in self.differential.get(g.name, {}).items():
                for tgt, v in self.differential.get(mid, {}).items():
                    x = w * v
                    acc[tgt] = acc[tgt] + x if tgt in acc else x
            for tgt in sorted(acc, key=order.__getitem__):
                val = acc[tgt].truncate(policy) if policy else acc[tgt]
                if val:
                    return g.name, tgt, val
        return None

    def require_square_zero(self, policy: TruncationPolicy | None = None) -> None:
        bad = self.square_defect(policy)
        if bad:
            src, tgt, val = bad
            raise ComplexError(f"d o d is nonzero: {src} -> {tgt} with coefficient {val}")


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True, order=True)
class TorsionFactor:
    """Cyclic summand annihilated by ``c T^lambda_shift``."""

    c: int
    lambda_shift: Fraction

    def to_json(self) -> dict[str, Any]:
        return {"c": self.c, "lambda_shift": str(self.lambda_shift)}


@dataclass(frozen=True)
class DegreeSummary:
    degree: int
    free_rank: int
    torsion: tuple[TorsionFactor, ...] = ()

    def to_json(self) -> dict[str, Any]:
        return {
            "degree": self.degree,
            "free_rank": self.free_rank,
            "torsion": [t.to_json() for t in sorted(self.torsion)],
        }

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion


@dataclass(frozen=True)
class HomologyReport:
    ring: str
    degrees: tuple[DegreeSummary, ...]
    truncation_level: int | None = None
    q: tuple[Fraction, int] | None = None
    raw: tuple[DegreeSummary, ...] = ()
    artifacts: tuple[DegreeSummary, ...] = ()
    warnings: tuple[str, ...] = ()
    total_betti: int | None = None
    degree_split_exact: bool | None = None

    @property
    def free_rank(self) -> int:
        return sum(d.free_rank for d in self.degrees)

    @property
    def torsion(self) -> list[tuple[int, TorsionFactor]]:
        return [(d.degree, t) for d in self.degrees for t in sorted(d.torsion)]

    def betti(self) -> dict[int, int]:
        return {d.degree: d.free_rank for d in self.degrees}

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "ring": self.ring,
            "degrees": [d.to_json() for d in self.degrees],
            "free_rank": self.free_rank,
            "torsion_families": len(self.torsion),
            "warnings": list(self.warnings),
        }
        if self.truncation_level is not None:
            out["truncation_level"] = self.truncation_level
            out["q"] = None if self.q is None else {"lambda": str(self.q[0]), "maslov": 2 * self.q[1]}
            out["raw_exact"] = [d.to_json() for d in self.raw]
            out["truncation_artifacts"] = [d.to_json() for d in self.artifacts]
        if self.total_betti is not None:
            out["total_betti"] = self.total_betti
            out["degree_split_exact"] = self.degree_split_exact
        return out

    def to_canonical_json(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# field coefficients


def homology_field(cx: NovikovComplex) -> HomologyReport:
    """Betti numbers over the Novikov field, split by generator degree.

    In degree ``k``: ``dim(ker d on C^k) - dim(im d in C^k)``, where
    ``dim(im d in C^k) = rank d - rank(d with the C^k rows deleted)``.
    The split is exact when these sum to the total Betti number.
    """
    if not cx.ring.is_field:
        raise ComplexError(f"field homology needs field coefficients, got {cx.ring}")
    cx.require_square_zero()
    idx = {g.name: i for i, g in enumerate(cx.generators)}
    deg = {g.name: g.degree for g in cx.generators}
    cols = {g.name: {idx[t]: w for t, w in cx.differential.get(g.name, {}).items()} for g in cx.generators}
    rank = novikov_rank(list(cols.values()))
    n = len(cx.generators)
    degrees = sorted({g.degree for g in cx.generators})
    out = []
    for k in degrees:
        src_k = [cols[g.name] for g in cx.generators if g.degree == k]
        ker = len(src_k) - novikov_rank(src_k)
        pruned = [{i: w for i, w in row.items() if deg[cx.generators[i].name] != k} for row in cols.values()]
        im = rank - novikov_rank(pruned)
        out.append(DegreeSummary(k, ker - im))
    total = n - 2 * rank
    split = sum(d.free_rank for d in out) == total
    return HomologyReport(
        ring=str(cx.ring),
        degrees=tuple(out),
        total_betti=total,
        degree_split_exact=split,
        warnings=() if split else ("per-degree split is not exact for this complex",),
    )


# ---------------------------------------------------------------------------
# integer coefficients


def _frac_gcd(values: Iterable[Fraction]) -> Fraction:
    g = Fraction(0)
    for v in values:
        a, b = g, Fraction(v)
        num = math.gcd(a.numerator * b.denominator, b.numerator * a.denominator)
        g = Fraction(num, a.denominator * b.denominator)
    return g


def infer_q(cx: NovikovComplex) -> tuple[Fraction, int] | None:
    """``(lambda_q, mu_q)`` with every entry exponent a multiple ``j (lambda_q, mu_q)``.

    Returns ``None`` when no entry carries positive energy; raises
    :class:`ComplexError` when no single generator exists.
    """
    exps = {(l, m) for row in cx.differential.values() for w in row.values() for l, m, _ in w.terms}
    for l, m in exps:
        if l == 0 and m != 0:
            raise ComplexError("zero-energy entry with nonzero e-power")
    pos = [(l, m) for l, m in exps if l > 0]
    if not pos:
        return None
    lq = _frac_gcd(l for l, _ in pos)
    mq: Fraction | None = None
    for l, m in pos:
        j = l / lq
        cand = Fraction(m) / j
        if mq is None:
            mq = cand
        elif cand != mq:
            raise ComplexError("entries are not powers of a single monomial q")
    assert mq is not None
    # the generator must itself be a lattice point
    if mq.denominator != 1:
        raise ComplexError("entries are not powers of a single monomial q")
    return lq, int(mq)


def _piece_homology(
    basis: dict[int, list[tuple[str, int]]],
    maps: Mapping[tuple[str, int], dict[tuple[str, int], int]],
    D: int,
) -> DegreeSummary:
    here = basis.get(D, [])
    prev = basis.get(D - 1, [])
    nxt = basis.get(D + 1, [])
    pos_here = {b: i for i, b in enumerate(here)}
    pos_next = {b: i for i, b in enumerate(nxt)}
    A_in = [[0] * len(prev) for _ in here]
    for j, src in enumerate(prev):
        for tgt, c in maps.get(src, {}).items():
            if tgt in pos_here:
                A_in[pos_here[tgt]][j] += c
    A_out = [[0] * len(here) for _ in nxt]
    for j, src in enumerate(here):
        for tgt, c in maps.get(src, {}).items():
            if tgt in pos_next:
                A_out[pos_next[tgt]][j] += c
    f_in = invariant_factors(A_in) if here and prev else ()
    r_out = len(invariant_factors(A_out)) if here and nxt else 0
    free = len(here) - r_out - len(f_in)
    return DegreeSummary(D, free, tuple(TorsionFactor(c, Fraction(0)) for c in f_in if c > 1))


def _integer_homology_by_degree(cx: NovikovComplex) -> list[DegreeSummary]:
    """Integer cohomology of a complex with constant entries, per generator degree."""
    basis: dict[int, list[tuple[str, int]]] = {}
    for g in cx.generators:
        basis.setdefault(g.degree, []).append((g.name, 0))
    maps = {
        (s, 0): {(t, 0): int(w.coefficient(0, 0)) for t, w in row.items()} for s, row in cx.differential.items()
    }
    return [_piece_homology(basis, maps, D) for D in sorted(basis)]


def _piece_lattices(
    basis: dict[int, list[tuple[str, int]]],
    maps: Mapping[tuple[str, int], dict[tuple[str, int], int]],
    D: int,
) -> tuple[list[Vector], list[Vector]]:
    """Cocycle basis and coboundary generators of one degree piece, as
    integer vectors over ``basis[D]``."""
    here = basis.get(D, [])
    pos_here = {b: i for i, b in enumerate(here)}
    pos_next = {b: i for i, b in enumerate(basis.get(D + 1, []))}
    A_out = [[0] * len(here) for _ in pos_next]
    for j, src in enumerate(here):
        for tgt, c in maps.get(src, {}).items():
            if tgt in pos_next:
                A_out[pos_next[tgt]][j] += c
    cocycles = integer_kernel(A_out, len(here))
    bounds = []
    for src in basis.get(D - 1, []):
        v = [0] * len(here)
        for tgt, c in maps.get(src, {}).items():
            if tgt in pos_here:
                v[pos_here[tgt]] += c
        if any(v):
            bounds.append(v)
    return cocycles, bounds


@dataclass
class _Level:
    degree: int
    basis: list[tuple[str, int]]
    cocycles: list[Vector]
    bounds: list[Vector]


def _extract_families(levels: Sequence[_Level], lam_q: Fraction) -> tuple[list[DegreeSummary], str | None]:
    """Read cyclic families off consecutive levels ``H_{r + 2 mu_q s}`` of one residue.

    Bars come from the ranks of ``q^k`` on the rational groups.  A bar
    ``[b, a)`` ends either in a ``Z/c`` summand, found in the torsion of
    ``H_a`` reached from level ``b`` but not from ``b - 1`` or ``a - 1``, or in
    zero (``c = 1``).  Torsion present at its first level is born with
    shift zero.
    """
    L = len(levels)
    dims = [len(lv.basis) for lv in levels]
    index = [{g: i for i, g in enumerate(lv.basis)} for lv in levels]

    def push(vecs: Sequence[Vector], s: int, k: int) -> list[Vector]:
        out = []
        for v in vecs:
            w = [0] * dims[s + k]
            for i, c in enumerate(v):
                if c:
                    name, lev = levels[s].basis[i]
                    w[index[s + k][(name, lev + k)]] = c
            out.append(w)
        return out

    bound_rank = [len(lattice_basis(lv.bounds, dims[s])) for s, lv in enumerate(levels)]
    reach: dict[tuple[int, int], list[Vector]] = {}  # q^(a-b) Z_b + B_a

    def reached(b: int, a: int) -> list[Vector]:
        if (b, a) not in reach:
            gens = (push(levels[b].cocycles, b, a - b) if b >= 0 else []) + levels[a].bounds
            reach[b, a] = lattice_basis(gens, dims[a])
        return reach[b, a]

    def rk(b: int, a: int) -> int:
        return 0 if b < 0 else len(reached(b, a)) - bound_rank[a]

    tors: dict[tuple[int, int], list[Vector]] = {}

    def torsion_from(b: int, a: int) -> list[Vector]:
        if (b, a) not in tors:
            if b < 0:
                tors[b, a] = lattice_basis(levels[a].bounds, dims[a])
            else:
                tors[b, a] = saturation_meet(reached(b, a), levels[a].bounds, dims[a])
        return tors[b, a]

    by_deg: dict[int, tuple[int, list[TorsionFactor]]] = {}

    def record(D: int, free: int = 0, factor: TorsionFactor | None = None) -> None:
        f, t = by_deg.get(D, (0, []))
        by_deg[D] = (f + free, t + ([factor] if factor else []))

    for a in range(L):
        for b in range(a + 1):
            sub = torsion_from(b - 1, a) + (push(torsion_from(b, a - 1), a - 1, 1) if b < a else [])
            _, factors = quotient_invariants(torsion_from(b, a), sub, dims[a])
            for c in factors:
                record(levels[b].degree, factor=TorsionFactor(c, (a - b) * lam_q))
            if b < a:
                bars = rk(b, a - 1) - rk(b, a) - rk(b - 1, a - 1) + rk(b - 1, a)
                deaths = bars - len(factors)
                if deaths < 0:
                    return [], f"homology at degree {levels[a].degree} is not a sum of cyclic families"
                for _ in range(deaths):
                    record(levels[b].degree, factor=TorsionFactor(1, (a - b) * lam_q))
        if a == L - 1:
            for b in range(L):
                record(levels[b].degree, free=rk(b, a) - rk(b - 1, a))
    out = [DegreeSummary(D, f, tuple(sorted(t))) for D, (f, t) in sorted(by_deg.items())]
    return out, None


def homology_truncated_Z(
    cx: NovikovComplex, N: int, q: tuple[Fraction, int] | None = None
) -> HomologyReport:
    """Integer cohomology of ``C tensor Z[q]/(q^N)`` read as cyclic families.

    ``q = T^lambda_q e^mu_q`` is inferred from the entries unless given.  A
    degree piece is exact when every basis element ``g q^j`` in it satisfies
    ``j + d_max <= N - 1`` (``d_max`` the largest q-power in the differential);
    groups of non-exact pieces are reported as truncation artifacts and never
    enter the family reading.
    """
    if not isinstance(cx.ring, Integers):
        raise ComplexError(f"truncated integer homology needs Z coefficients, got {cx.ring}")
    if N < 1:
        raise ComplexError("truncation level must be positive")
    cx.require_square_zero()
    warnings: list[str] = []
    if q is None:
        try:
            q = infer_q(cx)
        except ComplexError as exc:
            return _slicewise(cx, N, f"{exc}; falling back to slicewise computation")
    if q is None:
        degrees = _integer_homology_by_degree(cx)
        return HomologyReport("Z", tuple(d for d in degrees if not d.is_zero()), N, None, tuple(degrees))
    lam_q, mu_q = Fraction(q[0]), int(q[1])
    if lam_q <= 0 or mu_q <= 0:
        return _slicewise(cx, N, "q must have positive energy and positive degree for level reading; slicewise fallback")

    maps: dict[tuple[str, int], dict[tuple[str, int], int]] = {}
    dmax = 0
    for s, row in cx.differential.items():
        for t, w in row.items():
            for l, m, c in w.terms:
                j = l / lam_q
                if j.denominator != 1 or m != j * mu_q:
                    raise ComplexError(f"entry {s}->{t} is not a power of q")
                dmax = max(dmax, int(j))
    for s, row in cx.differential.items():
        for lev in range(N):
            out: dict[tuple[str, int], int] = {}
            for t, w in row.items():
                for l, m, c in w.terms:
                    j = lev + int(l / lam_q)
                    if j < N:
                        out[(t, j)] = out.get((t, j), 0) + int(c)
            maps[(s, lev)] = {k: v for k, v in out.items() if v}

    step = 2 * mu_q
    basis: dict[int, list[tuple[str, int]]] = {}
    exact: dict[int, bool] = {}
    for g in cx.generators:
        for lev in range(N):
            D = g.degree + step * lev
            basis.setdefault(D, []).append((g.name, lev))
            exact[D] = exact.get(D, True) and lev + dmax <= N - 1
    raw = {D: _piece_homology(basis, maps, D) for D in sorted(basis)}

    degrees: list[DegreeSummary] = []
    residues = sorted({D % step for D in basis})
    for r in residues:
        Ds = [D for D in sorted(basis) if D % step == r]
        lo = Ds[0]
        levels: list[_Level] = []
        D = lo
        while D in basis and exact[D]:
            levels.append(_Level(D, basis[D], *_piece_lattices(basis, maps, D)))
            D += step
        fams, problem = _extract_families(levels, lam_q)
        if problem:
            warnings.append(problem)
            continue
        degrees.extend(fams)
    degrees = sorted((d for d in degrees if not d.is_zero()), key=lambda d: d.degree)
    raw_exact = tuple(raw[D] for D in sorted(raw) if exact[D] and not raw[D].is_zero())
    artifacts = tuple(raw[D] for D in sorted(raw) if not exact[D] and not raw[D].is_zero())
    return HomologyReport(
        "Z",
        tuple(_merge_degrees(degrees)),
        N,
        (lam_q, mu_q),
        raw_exact,
        artifacts,
        tuple(warnings),
    )


def _merge_degrees(items: Iterable[DegreeSummary]) -> list[DegreeSummary]:
    acc: dict[int, tuple[int, list[TorsionFactor]]] = {}
    for d in items:
        f, t = acc.get(d.degree, (0, []))
        acc[d.degree] = (f + d.free_rank, t + list(d.torsion))
    return [DegreeSummary(D, f, tuple(sorted(t))) for D, (f, t) in sorted(acc.items())]


def _slicewise(cx: NovikovComplex, N: int, reason: str) -> HomologyReport:
    """Raw integer homology of the expansion over all weight exponents below
    ``N`` times the smallest positive energy, graded by total degree."""
    exps = sorted({(l, m) for row in cx.differential.values() for w in row.values() for l, m, _ in w.terms})
    if any(l == 0 and m != 0 for l, m in exps):
        raise ComplexError("zero-energy entry with nonzero e-power; cannot expand")
    pos = [l for l, _ in exps if l > 0]
    lam_min = min(pos) if pos else Fraction(1)
    cut = N * lam_min
    # exponent monoid below the cutoff
    shifts = {(Fraction(0), 0)}
    frontier = list(shifts)
    while frontier:
        nxt = []
        for a in frontier:
            for e in exps:
                b = (a[0] + e[0], a[1] + e[1])
                if e[0] > 0 and b[0] < cut and b not in shifts:
                    shifts.add(b)
                    nxt.append(b)
        frontier = nxt
    lam_d = max((l for l, _ in exps), default=Fraction(0))
    basis: dict[int, list[tuple[str, Any]]] = {}
    exact: dict[int, bool] = {}
    for g in cx.generators:
        for s in sorted(shifts):
            D = g.degree + 2 * s[1]
            basis.setdefault(D, []).append((g.name, s))
            exact[D] = exact.get(D, True) and s[0] + lam_d < cut
    maps: dict[Any, dict[Any, int]] = {}
    for src, row in cx.differential.items():
        for s in shifts:
            out: dict[Any, int] = {}
            for t, w in row.items():
                for l, m, c in w.terms:
                    key = (t, (s[0] + l, s[1] + m))
                    if key[1] in shifts:
                        out[key] = out.get(key, 0) + int(c)
            maps[(src, s)] = out
    raw = {D: _piece_homology(basis, maps, D) for D in sorted(basis)}  # type: ignore[arg-type]
    return HomologyReport(
        "Z",
        (),
        N,
        None,
        tuple(raw[D] for D in sorted(raw) if exact[D] and not raw[D].is_zero()),
        tuple(raw[D] for D in sorted(raw) if not exact[D] and not raw[D].is_zero()),
        (reason,),
    )


def field_betti_from_families(report: HomologyReport, p: int) -> int:
    """Total Betti number over the Novikov field with ``F_p`` coefficients
    predicted by the integer families: each free family contributes 1 and
    each torsion family with ``p | c`` contributes 2."""
    return report.free_rank + 2 * sum(1 for _, t in report.torsion if t.c % p == 0)
