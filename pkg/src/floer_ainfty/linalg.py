"""Exact linear algebra: Smith normal form over Z, echelon solves over fields,
and fraction-free rank over Novikov Laurent polynomials."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .novikov import CoefficientRing, Integers, NovikovElement

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(a))]


def determinant(a: Matrix) -> int:
    """Bareiss fraction-free determinant."""
    n = len(a)
    if n == 0:
        return 1
    m = [row[:] for row in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


@dataclass(frozen=True)
class SmithForm:
    """``U @ M @ V == D`` with ``D`` diagonal, ``factors`` its nonzero diagonal (``d_1 | d_2 | ...``)."""

    factors: tuple[int, ...]
    U: Matrix | None
    V: Matrix | None
    shape: tuple[int, int]

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.factors if d > 1)

    def diagonal(self) -> Matrix:
        m, n = self.shape
        return [[self.factors[i] if i == j and i < len(self.factors) else 0 for j in range(n)] for i in range(m)]


def smith_normal_form(M: Sequence[Sequence[int]], transforms: bool = True) -> SmithForm:
    A = [[int(x) for x in row] for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U = identity(m) if transforms else None
    V = identity(n) if transforms else None

    def swap_rows(i: int, j: int) -> None:
        A[i], A[j] = A[j], A[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i: int, j: int) -> None:
        for row in A:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(dst: int, src: int, q: int) -> None:
        # row_dst += q * row_src
        rs, rd = A[src], A[dst]
        for c in range(n):
            if rs[c]:
                rd[c] += q * rs[c]
        if U is not None:
            us, ud = U[src], U[dst]
            for c in range(m):
                if us[c]:
                    ud[c] += q * us[c]

    def add_col(dst: int, src: int, q: int) -> None:
        for row in A:
            if row[src]:
                row[dst] += q * row[src]
        if V is not None:
            for row in V:
                if row[src]:
                    row[dst] += q * row[src]

    factors: list[int] = []
    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i0, j0 = best
        swap_rows(t, i0)
        swap_cols(t, j0)
        while True:
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    if A[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    if A[t][j]:
                        clean = False
            if not clean:
                # move the smallest remainder into the pivot slot and repeat
                cand = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
                _, i1, j1 = min(cand)
                if i1 != t:
                    swap_rows(t, i1)
                else:
                    swap_cols(t, j1)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
        factors.append(A[t][t])
    return SmithForm(tuple(factors), U, V, (m, n))


def invariant_factors(M: Sequence[Sequence[int]]) -> tuple[int, ...]:
    return smith_normal_form(M, transforms=False).factors


def solve_integer(A: Sequence[Sequence[int]], y: Sequence[int]) -> list[int] | None:
    """An integer solution of ``A x = y`` or ``None`` if none exists."""
    m = len(A)
    n = len(A[0]) if m else 0
    if m == 0:
        return [0] * n
    snf = smith_normal_form(A)
    assert snf.U is not None and snf.V is not None
    c = [sum(snf.U[i][k] * y[k] for k in range(m)) for i in range(m)]
    z = [0] * n
    for i, d in enumerate(snf.factors):
        if c[i] % d:
            return None
        z[i] = c[i] // d
    if any(c[i] for i in range(len(snf.factors), m)):
        return None
    return [sum(snf.V[j][k] * z[k] for k in range(n)) for j in range(n)]


Vector = list[int]


def integer_kernel(M: Sequence[Sequence[int]], ncols: int) -> list[Vector]:
    """A basis of ``{x in Z^ncols : M x = 0}``."""
    if not M:
        return [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    snf = smith_normal_form(M)
    assert snf.V is not None
    return [[snf.V[j][k] for j in range(ncols)] for k in range(snf.rank, ncols)]


def lattice_basis(gens: Sequence[Sequence[int]], dim: int) -> list[Vector]:
    """A basis of the subgroup of ``Z^dim`` spanned by ``gens``."""
    gens = [list(g) for g in gens if any(g)]
    if not gens:
        return []
    cols = [[g[i] for g in gens] for i in range(dim)]  # dim x k, generators as columns
    snf = smith_normal_form(cols)
    assert snf.V is not None
    k = len(gens)
    return [[sum(cols[i][j] * snf.V[j][t] for j in range(k)) for i in range(dim)] for t in range(snf.rank)]


def saturation_meet(L: Sequence[Sequence[int]], B: Sequence[Sequence[int]], dim: int) -> list[Vector]:
    """Basis of ``L`` intersected with the rational span of ``B``."""
    if not L or not any(any(b) for b in B):
        return []
    ann = integer_kernel([list(b) for b in B], dim)  # y with y . b = 0
    if not ann:
        return [list(v) for v in L]
    A = [[sum(y[i] * v[i] for i in range(dim)) for v in L] for y in ann]
    coords = integer_kernel(A, len(L))
    return [[sum(c[t] * L[t][i] for t in range(len(L))) for i in range(dim)] for c in coords]


def quotient_invariants(L: Sequence[Sequence[int]], M: Sequence[Sequence[int]], dim: int) -> tuple[int, tuple[int, ...]]:
    """``(free rank, torsion factors > 1)`` of ``span(L) / span(M)``; ``L`` a
    basis and ``M`` inside its span."""
    if not L:
        return 0, ()
    cols = [[v[i] for v in L] for i in range(dim)]
    coords = []
    for m in M:
        c = solve_integer(cols, m)
        if c is None:
            raise ValueError("sublattice is not contained in the lattice")
        coords.append(c)
    if not coords:
        return len(L), ()
    factors = invariant_factors([[c[t] for c in coords] for t in range(len(L))])
    return len(L) - len(factors), tuple(d for d in factors if d > 1)


def rref(ring: CoefficientRing, A: Sequence[Sequence[object]]) -> tuple[list[list[object]], list[int]]:
    """Reduced row echelon form over a field; pivots chosen left to right."""
    if not ring.is_field:
        raise ValueError(f"row reduction needs a field, got {ring}")
    M = [[ring.coerce(x) for x in row] for row in A]
    m = len(M)
    n = len(M[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if not ring.is_zero(M[i][c])), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = ring.div(ring.one(), M[r][c])
        M[r] = [ring.mul(x, inv) for x in M[r]]
        for i in range(m):
            if i != r and not ring.is_zero(M[i][c]):
                f = M[i][c]
                M[i] = [ring.add(a, ring.neg(ring.mul(f, b))) for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    return M, pivots


def rank_over(ring: CoefficientRing, A: Sequence[Sequence[object]]) -> int:
    if isinstance(ring, Integers):
        return len(invariant_factors(A))
    return len(rref(ring, A)[1])


def solve_field(ring: CoefficientRing, A: Sequence[Sequence[object]], y: Sequence[object]) -> list[object] | None:
    """Echelon-minimal solution of ``A x = y`` (free variables set to zero)."""
    m = len(A)
    n = len(A[0]) if m else 0
    aug = [list(row) + [y[i]] for i, row in enumerate(A)]
    R, pivots = rref(ring, aug)
    if n in pivots:
        return None
    x = [ring.zero()] * n
    for r, c in enumerate(pivots):
        x[c] = R[r][n]
    return x


def solve_linear(ring: CoefficientRing, A: Sequence[Sequence[object]], y: Sequence[object]) -> list[object] | None:
    if ring.is_field:
        return solve_field(ring, A, y)
    if isinstance(ring, Integers):
        return solve_integer(A, y)  # type: ignore[arg-type]
    raise ValueError(f"linear solve over the non-field {ring} is ambiguous; use Q or a prime field")


SparseRow = dict[int, NovikovElement]


def novikov_rank(rows: Sequence[SparseRow]) -> int:
    """Rank of a Novikov matrix over a field of coefficients.

    Fraction-free elimination: entries are finite sums, hence Laurent
    polynomials over a domain, and ``row_r <- p row_r - a row_p`` preserves
    the rank over the fraction field.  Pivot: lowest valuation, then lowest
    column index, then lowest row index.
    """
    work = [dict(r) for r in rows if r]
    if work and not work[0][next(iter(work[0]))].ring.is_field:
        raise ValueError("Novikov rank needs field coefficients")
    rank = 0
    while work:
        best = None
        for ri, row in enumerate(work):
            for c, v in row.items():
                key = (v.valuation(), c, ri)
                if best is None or key < best:
                    best = key
        if best is None:
            break
        _, c, ri = best
        prow = work.pop(ri)
        p = prow[c]
        nxt = []
        for row in work:
            a = row.get(c)
            if a is None:
                nxt.append(row)
                continue
            new: SparseRow = {}
            for col in set(row) | set(prow):
                if col == c:
                    continue
                v = row.get(col)
                w = prow.get(col)
                if w is None:
                    val = v * p
                elif v is None:
                    val = -(a * w)
                else:
                    val = v * p - a * w
                if val:
                    new[col] = val
            if new:
                nxt.append(new)
        work = [r for r in nxt if r]
        rank += 1
    return rank
