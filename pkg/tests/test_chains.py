from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from floer_ainfty.chains import (
    BarTensor,
    ChainError,
    Generator,
    GradedChain,
    chain_add,
    chain_scale,
    koszul_prefix_sign,
    shifted_degree,
)
from floer_ainfty.novikov import Integers, NovikovElement, TruncationPolicy

ZZ = Integers()
GENS = [Generator(f"x{d}", d) for d in range(-2, 5)]


def mono(g, c=1, lam=0, mu=0):
    return GradedChain.of(ZZ, g, c, lam, mu)


def test_shifted_degree():
    assert shifted_degree(Generator("p", 1)) == 0
    assert shifted_degree(Generator("p", 0)) == -1
    # a weight e^mu raises the degree by 2 mu
    c = mono(Generator("p", 3), 1, 1, 2)
    assert c.degree() - 1 == 3 + 4 - 1


def test_prefix_sign_examples():
    x2, x1 = Generator("a", 2), Generator("b", 1)
    assert koszul_prefix_sign(BarTensor((mono(x2),)), 1) == 1
    assert koszul_prefix_sign(BarTensor((mono(x2), mono(x1))), 2) == -1
    assert koszul_prefix_sign(BarTensor((mono(x1), mono(x2), mono(x1))), 3) == -1


def test_prefix_sign_rejects_bad_factors():
    a, b = Generator("a", 1), Generator("b", 2)
    with pytest.raises(ChainError):
        koszul_prefix_sign(BarTensor((mono(a) + mono(b), mono(a))), 2)
    with pytest.raises(ChainError):
        koszul_prefix_sign(BarTensor((GradedChain(ZZ), mono(a))), 2)
    with pytest.raises(ChainError):
        koszul_prefix_sign(BarTensor((mono(a),)), 3)


def test_prefix_sign_flip_exhaustive():
    # raising the shifted degree of one earlier factor by one flips the sign exactly when it lies in the prefix
    for k in range(1, 5):
        for degs in product(range(-2, 5), repeat=k):
            gens = [Generator(f"x{d}", d) for d in degs]
            for i in range(1, k + 2):
                base = koszul_prefix_sign(gens, i)
                expected = (-1) ** sum(d + 1 for d in degs[: i - 1])
                assert base == expected
                for j in range(k):
                    bumped = list(gens)
                    bumped[j] = Generator("y", degs[j] + 1)
                    flip = -1 if j < i - 1 else 1
                    assert koszul_prefix_sign(bumped, i) == flip * base


def test_cancel_and_unit_scale():
    c = mono(GENS[3], 2, 1) + mono(GENS[4], -1, 0, 1)
    assert not chain_add(c, -c)
    assert chain_scale(c, NovikovElement.one(ZZ)) == c


def test_bar_tensor_expand_and_length():
    a, b = Generator("a", 1), Generator("b", 2)
    t = BarTensor((mono(a, 2, 1) + mono(b), mono(b, 3)))
    ex = t.expand()
    assert ex[(a, b)] == NovikovElement.monomial(ZZ, 6, 1)
    assert ex[(b, b)] == NovikovElement.monomial(ZZ, 3)
    with pytest.raises(ChainError):
        t.check_length(TruncationPolicy(max_tensor_length=1))


weights = st.lists(
    st.tuples(st.fractions(0, 4, max_denominator=3), st.integers(-1, 1), st.integers(-3, 3)), max_size=3
).map(lambda ts: NovikovElement(ZZ, ts))
chains = st.dictionaries(st.sampled_from(GENS), weights, max_size=4).map(lambda d: GradedChain(ZZ, d))


@settings(max_examples=100)
@given(chains, weights, weights)
def test_scale_associative(c, s, t):
    assert chain_scale(chain_scale(c, s), t) == chain_scale(c, s * t)


@settings(max_examples=100)
@given(chains, chains, weights, st.fractions(Fraction(1, 2), 5, max_denominator=2))
def test_linear_ops_commute_with_truncation(a, b, s, E):
    pol = TruncationPolicy(energy_cutoff=E)
    assert (a + b).truncate(pol) == a.truncate(pol) + b.truncate(pol)
    assert a.scale(s).truncate(pol) == a.truncate(pol).scale(s.truncate(pol)).truncate(pol)
