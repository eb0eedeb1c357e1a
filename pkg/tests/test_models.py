from fractions import Fraction

import pytest
from factories import QQ, ZZ

from floer_ainfty.ainfty import BETA0
from floer_ainfty.models import (
    ModelError,
    SpinStatus,
    build_qcp,
    build_rp_floer,
    maslov_double,
    maslov_of_sphere,
    mc_toy,
    parse_model,
    rp_cellular_coboundary,
    rp_maslov,
    rp_spin_status,
    stiefel_whitney_rp,
    truncated_polynomial_algebra,
    w2_rp,
)
from floer_ainfty.novikov import NovikovElement


def lucas_bit(n, i):
    # C(n, i) is odd iff the binary digits of i sit inside those of n
    return int(i & n == i)


def test_stiefel_whitney_against_lucas():
    for m in range(1, 65):
        assert stiefel_whitney_rp(m) == [lucas_bit(m + 1, i) for i in range(m + 1)]


def test_small_stiefel_whitney():
    assert stiefel_whitney_rp(3) == [1, 0, 0, 0]
    assert w2_rp(3) == "0"
    assert w2_rp(5) == "x^2"
    assert stiefel_whitney_rp(4)[1] == 1
    for n in range(8):
        assert (w2_rp(2 * n + 1) == "x^2") == (n % 2 == 0 and n > 0)


def test_spin_table():
    assert rp_spin_status(7) is SpinStatus.SPIN_AND_TAU_REL_SPIN
    assert rp_spin_status(1) is SpinStatus.SPIN_AND_TAU_REL_SPIN
    assert rp_spin_status(5) is SpinStatus.REL_SPIN_NOT_TAU_REL_SPIN
    assert rp_spin_status(4) is SpinStatus.NON_ORIENTABLE
    for m in range(1, 65):
        s = rp_spin_status(m)
        if m % 2 == 0:
            assert s is SpinStatus.NON_ORIENTABLE
        elif m % 4 == 1 and m >= 5:
            assert s is SpinStatus.REL_SPIN_NOT_TAU_REL_SPIN
        else:
            assert s is SpinStatus.SPIN_AND_TAU_REL_SPIN


def test_bad_dimension():
    for f in (stiefel_whitney_rp, rp_spin_status):
        with pytest.raises(ModelError):
            f(0)


def test_maslov_helpers():
    for n in range(1, 6):
        assert maslov_double(2 * n + 2) == 2 * n + 2
        assert rp_maslov(2 * n + 1, 1) == 2 * n + 2
    assert maslov_of_sphere(0) == 0
    assert maslov_of_sphere(3) == 6
    with pytest.raises(ModelError):
        maslov_double(3)
    # RP^1 in CP^1: odd degree discs have Maslov 2 mod 4
    assert [rp_maslov(1, ell) % 4 for ell in (1, 2, 3)] == [2, 0, 2]


# ---------------------------------------------------------------------------
# real projective model


def test_cellular_coboundary_pattern():
    assert rp_cellular_coboundary(3) == {"p1": {"p2": 2}}
    assert rp_cellular_coboundary(5) == {"p1": {"p2": 2}, "p3": {"p4": 2}}


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_rp_model_square_zero_and_degree(n):
    rp = build_rp_floer(n)
    cx = rp.complex()
    assert cx.square_defect() is None
    assert rp.disc_class.maslov == 2 * n + 2
    top = rp.data.gen[f"p{2 * n + 1}"]
    # degree law for the disc term: deg out = deg in + 2 - 1 - mu
    assert top.degree + 2 - 1 - rp.disc_class.maslov == 0
    assert rp.data.constants[(1, rp.disc_class, (top.name,))] == {"p0": 2}


def test_rp_sign_flag():
    assert build_rp_floer(1, (-1, -1)).data.constants[(1, build_rp_floer(1).disc_class, ("p3",))] == {"p0": -2}
    with pytest.raises(ModelError):
        build_rp_floer(1, (1, -1))
    with pytest.raises(ModelError):
        build_rp_floer(0)


# ---------------------------------------------------------------------------
# quantum diagonal


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_qcp_unit_and_shape(n):
    d = build_qcp(n).data
    for g in d.generators:
        # m_2(1, x) = x and m_2(x, 1) = (-1)^deg x * x with the algebra sign
        assert d.constants[(2, BETA0, ("h0", g.name))] == {g.name: 1}
        assert d.constants[(2, BETA0, (g.name, "h0"))] == {g.name: (-1) ** g.degree}
    assert all(k == 2 for k, _, _ in d.constants)


def test_qcp_line_parameter():
    q = build_qcp(2, energy=Fraction(3, 2))
    assert q.q == NovikovElement.monomial(ZZ, 1, Fraction(3, 2), 3)
    assert q.data.constants[(2, q.line, ("h2", "h1"))] == {"h0": 1}


def test_poly_and_toys():
    p = truncated_polynomial_algebra(3)
    assert p.constants[(2, BETA0, ("a1", "a1"))] == {"a2": 1}
    assert p.constants[(2, BETA0, ("a1", "a2"))] == {"a3": -1}
    t = mc_toy()
    assert (1, BETA0, ("a",)) in t.constants
    assert (1, BETA0, ("a",)) not in mc_toy(True).constants


def test_parse_model():
    assert parse_model("qcp:2") == build_qcp(2).data
    assert parse_model("rp:1", QQ).ring == QQ
    assert parse_model("poly:2") == truncated_polynomial_algebra(2)
    assert parse_model("toy") == mc_toy()
    for bad in ("rp:x", "cp:2", "rp:0", "toy:1", ""):
        with pytest.raises(ModelError):
            parse_model(bad)
