import random
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm

from hypothesis import given, settings
from hypothesis import strategies as st

from floer_ainfty.linalg import (
    determinant,
    integer_kernel,
    invariant_factors,
    lattice_basis,
    matmul,
    novikov_rank,
    quotient_invariants,
    rank_over,
    rref,
    saturation_meet,
    smith_normal_form,
    solve_integer,
    solve_linear,
)
from floer_ainfty.novikov import IntegersMod, NovikovElement, PrimeField, Rationals

QQ = Rationals()

matrices = st.integers(1, 5).flatmap(
    lambda m: st.integers(1, 5).flatmap(
        lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=m, max_size=m)
    )
)


def determinantal_divisors(M):
    """``gcd`` of all ``k x k`` minors, ``k = 1..``; stops at the first zero."""
    m, n = len(M), len(M[0])
    out = []
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in combinations(range(m), k):
            for cols in combinations(range(n), k):
                g = gcd(g, determinant([[M[r][c] for c in cols] for r in rows]))
        if g == 0:
            break
        out.append(g)
    return out


def test_small_examples():
    assert invariant_factors([[2, 0], [0, 3]]) == (1, 6)
    assert invariant_factors([[0, 0], [0, 0]]) == ()
    assert invariant_factors([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]) == (2, 6, 12)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_snf_matches_determinantal_divisors(M):
    snf = smith_normal_form(M)
    dd = determinantal_divisors(M)
    prods = []
    acc = 1
    for d in snf.factors:
        acc *= d
        prods.append(acc)
    assert prods == dd
    assert all(b % a == 0 for a, b in zip(snf.factors, snf.factors[1:]))
    assert matmul(matmul(snf.U, M), snf.V) == snf.diagonal()
    assert abs(determinant(snf.U)) == 1 and abs(determinant(snf.V)) == 1


@settings(max_examples=60, deadline=None)
@given(matrices, st.randoms(use_true_random=False))
def test_snf_invariant_under_shuffles(M, rnd):
    rows = list(range(len(M)))
    cols = list(range(len(M[0])))
    rnd.shuffle(rows)
    rnd.shuffle(cols)
    P = [[M[r][c] for c in cols] for r in rows]
    assert invariant_factors(P) == invariant_factors(M)


@settings(max_examples=100, deadline=None)
@given(matrices, st.lists(st.integers(-5, 5), min_size=5, max_size=5))
def test_solve_integer(M, x):
    n = len(M[0])
    y = [sum(M[i][j] * x[j] for j in range(n)) for i in range(len(M))]
    sol = solve_integer(M, y)
    assert sol is not None
    assert [sum(M[i][j] * sol[j] for j in range(n)) for i in range(len(M))] == y


def test_solve_integer_detects_divisibility_obstruction():
    assert solve_integer([[2]], [1]) is None
    assert solve_integer([[2, 0], [0, 0]], [2, 1]) is None


def test_rref_and_solve_over_fields():
    F3 = PrimeField(3)
    M, piv = rref(F3, [[1, 2], [2, 1]])
    assert piv == [0]
    assert rank_over(QQ, [[1, 2], [2, 4]]) == 1
    assert solve_linear(QQ, [[2, 0], [0, 0]], [1, 0]) == [Fraction(1, 2), 0]
    assert solve_linear(QQ, [[1, 1]], [3]) == [3, 0]


def test_solve_over_non_field_quotient_refused():
    import pytest

    with pytest.raises(ValueError):
        solve_linear(IntegersMod(4), [[2]], [2])


# ---------------------------------------------------------------------------
# Novikov rank against random specialization


def specialize(x: NovikovElement, s: int, u: int, den: int) -> Fraction:
    total = Fraction(0)
    for lam, mu, c in x.terms:
        total += Fraction(c) * Fraction(s) ** int(lam * den) * Fraction(u) ** mu
    return total


def random_novikov_matrix(rng, ring, m, n):
    rows = []
    for _ in range(m):
        row = {}
        for c in range(n):
            if rng.random() < 0.5:
                terms = [(Fraction(rng.randint(0, 4), rng.choice((1, 2))), rng.randint(-1, 1), rng.randint(-3, 3))
                         for _ in range(rng.randint(1, 2))]
                v = NovikovElement(ring, terms)
                if v:
                    row[c] = v
        rows.append(row)
    # plant dependencies
    if m >= 3 and rows[0] and rows[1]:
        t = NovikovElement(ring, [(Fraction(1, 2), 0, 2)])
        rows[2] = {}
        for c in set(rows[0]) | set(rows[1]):
            v = rows[0].get(c, NovikovElement.zero(ring)) * t + rows[1].get(c, NovikovElement.zero(ring))
            if v:
                rows[2][c] = v
    return rows


def test_novikov_rank_matches_generic_specialization():
    rng = random.Random(7)
    for _ in range(60):
        m, n = rng.randint(1, 5), rng.randint(1, 5)
        rows = random_novikov_matrix(rng, QQ, m, n)
        den = lcm(*[lam.denominator for r in rows for v in r.values() for lam, _, _ in v.terms] or [1])
        best = 0
        for _ in range(4):
            s, u = rng.randint(2, 50), rng.randint(2, 50)
            A = [[specialize(r[c], s, u, den) if c in r else Fraction(0) for c in range(n)] for r in rows]
            best = max(best, rank_over(QQ, A))
        assert novikov_rank(rows) == best


def test_novikov_rank_unit_up_to_shift():
    x = NovikovElement(QQ, [(Fraction(3), 0, 2)])
    assert novikov_rank([{0: x}]) == 1


# ---------------------------------------------------------------------------
# sublattices


@settings(max_examples=80, deadline=None)
@given(matrices)
def test_integer_kernel(M):
    n = len(M[0])
    ker = integer_kernel(M, n)
    assert len(ker) == n - len(invariant_factors(M))
    for v in ker:
        assert all(sum(r[j] * v[j] for j in range(n)) == 0 for r in M)
    # a kernel basis is saturated: nothing to add over Q
    assert quotient_invariants(saturation_meet(identity_basis(n), ker, n), ker, n) == (0, ())


def identity_basis(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


@settings(max_examples=80, deadline=None)
@given(matrices)
def test_lattice_quotient_matches_snf(M):
    # Z^m / column span of M
    m, n = len(M), len(M[0])
    cols = [[M[i][j] for i in range(m)] for j in range(n)]
    free, tors = quotient_invariants(identity_basis(m), cols, m)
    f = invariant_factors(M)
    assert free == m - len(f)
    assert tors == tuple(d for d in f if d > 1)
    assert len(lattice_basis(cols, m)) == len(f)


def test_saturation_example():
    # span of (2, 4) saturates to (1, 2); the lattice Z (1,0) + Z (0,1) meets it in Z (1, 2)
    sat = saturation_meet(identity_basis(2), [[2, 4]], 2)
    assert quotient_invariants(sat, [[1, 2]], 2) == (0, ())
    assert quotient_invariants(sat, [[2, 4]], 2) == (0, (2,))
    assert quotient_invariants(identity_basis(2), [[2, 0], [0, 3]], 2) == (0, (6,))
