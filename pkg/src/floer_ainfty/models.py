"""Built-in datasets: the odd real projective space Floer complex, the quantum
diagonal of complex projective space, small Maurer-Cartan toys, and
Stiefel-Whitney / spin-status arithmetic for real projective spaces."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import comb

from .ainfty import BETA0, AInftyData, BetaClass, ConstKey
from .chains import Generator
from .novikov import CoefficientRing, Integers, NovikovElement


class ModelError(ValueError):
    pass


# ---------------------------------------------------------------------------
# RP^{2n+1} in CP^{2n+1}


@dataclass(frozen=True)
class RPModel:
    n: int
    epsilon_signs: tuple[int, int]
    data: AInftyData
    disc_class: BetaClass

    @property
    def dim(self) -> int:
        return 2 * self.n + 1

    def complex(self):
        from .homology import NovikovComplex

        return NovikovComplex.from_ainfty(self.data)


def rp_cellular_coboundary(m: int) -> dict[str, dict[str, int]]:
    """Cellular coboundary of RP^m: ``p_k -> (1 + (-1)^(k+1)) p_{k+1}``."""
    out: dict[str, dict[str, int]] = {}
    for k in range(m):
        c = 1 + (-1) ** (k + 1)
        if c:
            out[f"p{k}"] = {f"p{k + 1}": c}
    return out


def build_rp_floer(
    n: int,
    epsilon_signs: tuple[int, int] = (1, 1),
    ring: CoefficientRing | None = None,
    floer_term: bool = True,
    energy: Fraction | int = 1,
) -> RPModel:
    """Floer complex of RP^{2n+1}: cellular coboundary plus the disc term
    ``p_{2n+1} -> (eps_1 + eps_2) T^energy e^(n+1) p_0``."""
    if n < 1:
        raise ModelError("n must be at least 1")
    e1, e2 = epsilon_signs
    if {e1, e2} - {1, -1} or e1 != e2:
        raise ModelError("epsilon signs must be equal and in {+1, -1}")
    ring = ring or Integers()
    m = 2 * n + 1
    gens = [Generator(f"p{k}", k) for k in range(m + 1)]
    B = BetaClass(Fraction(energy), 2 * n + 2)
    consts: dict[ConstKey, dict[str, int]] = {}
    for src, outs in rp_cellular_coboundary(m).items():
        consts[(1, BETA0, (src,))] = dict(outs)
    if floer_term:
        consts[(1, B, (f"p{m}",))] = {"p0": e1 + e2}
    relspin = {B: 1} if n % 2 == 0 else {}
    data = AInftyData(ring, m, gens, consts, classes=[B], relspin=relspin, class_names={B: "B"})
    return RPModel(n, (e1, e2), data, B)


# ---------------------------------------------------------------------------
# quantum diagonal of CP^n


@dataclass(frozen=True)
class QCPModel:
    n: int
    data: AInftyData
    line: BetaClass

    @property
    def q(self) -> NovikovElement:
        return self.line.weight(self.data.ring)


def algebra_sign(deg_x: int, deg_y: int) -> int:
    """Sign turning an associative graded product into ``m_2``."""
    return -1 if deg_x * (deg_y + 1) % 2 else 1


def build_qcp(n: int, ring: CoefficientRing | None = None, energy: Fraction | int = 1) -> QCPModel:
    """``m_2`` realizing the quantum cup product of CP^n on the basis ``h0..hn``."""
    if n < 1:
        raise ModelError("n must be at least 1")
    ring = ring or Integers()
    gens = [Generator(f"h{i}", 2 * i) for i in range(n + 1)]
    line = BetaClass(Fraction(energy), 2 * (n + 1))
    consts: dict[ConstKey, dict[str, int]] = {}
    for i in range(n + 1):
        for j in range(n + 1):
            s = algebra_sign(2 * i, 2 * j)
            if i + j <= n:
                consts[(2, BETA0, (f"h{i}", f"h{j}"))] = {f"h{i + j}": s}
            else:
                consts[(2, line, (f"h{i}", f"h{j}"))] = {f"h{i + j - n - 1}": s}
    relspin = {line: (n + 1) % 2}
    data = AInftyData(ring, 2 * n, gens, consts, classes=[line], relspin=relspin, class_names={line: "L"})
    return QCPModel(n, data, line)


# ---------------------------------------------------------------------------
# Maurer-Cartan toys


def truncated_polynomial_algebra(r: int, ring: CoefficientRing | None = None) -> AInftyData:
    """``R[a]/(a^(r+1))`` with ``|a| = 1`` as an A-infinity algebra with only ``m_2``."""
    ring = ring or Integers()
    gens = [Generator(f"a{i}", i) for i in range(r + 1)]
    consts: dict[ConstKey, dict[str, int]] = {}
    for i in range(r + 1):
        for j in range(r + 1 - i):
            consts[(2, BETA0, (f"a{i}", f"a{j}"))] = {f"a{i + j}": algebra_sign(i, j)}
    return AInftyData(ring, r, gens, consts)


def mc_toy(obstructed: bool = False, ring: CoefficientRing | None = None) -> AInftyData:
    """Generators ``a`` (deg 1), ``c`` (deg 2) with ``m_0 = T c``.

    Unobstructed when ``m_{1,beta_0}(a) = c``; the bounding cochain is ``-T a``.
    """
    ring = ring or Integers()
    gens = [Generator("a", 1), Generator("c", 2)]
    beta = BetaClass(Fraction(1), 0)
    consts: dict[ConstKey, dict[str, int]] = {(0, beta, ()): {"c": 1}}
    if not obstructed:
        consts[(1, BETA0, ("a",))] = {"c": 1}
    return AInftyData(ring, 1, gens, consts, classes=[beta], class_names={beta: "D"})


def parse_model(text: str, ring: CoefficientRing | None = None) -> AInftyData:
    """``rp:n``, ``qcp:n``, ``toy`` or ``toy-obstructed``."""
    name, _, arg = text.partition(":")
    try:
        if name == "rp":
            return build_rp_floer(int(arg), ring=ring).data
        if name == "qcp":
            return build_qcp(int(arg), ring=ring).data
        if name == "poly":
            return truncated_polynomial_algebra(int(arg), ring=ring)
    except ValueError as exc:
        raise ModelError(f"bad model {text!r}: {exc}") from None
    if text == "toy":
        return mc_toy(False, ring)
    if text == "toy-obstructed":
        return mc_toy(True, ring)
    raise ModelError(f"unknown model {text!r}; expected rp:n, qcp:n, poly:r, toy or toy-obstructed")


# ---------------------------------------------------------------------------
# Stiefel-Whitney classes and spin status


class SpinStatus(Enum):
    NON_ORIENTABLE = "NonOrientable"
    SPIN_AND_TAU_REL_SPIN = "SpinAndTauRelSpin"
    REL_SPIN_NOT_TAU_REL_SPIN = "RelSpinNotTauRelSpin"


def stiefel_whitney_rp(m: int) -> list[int]:
    """Coefficients of ``w(T RP^m) = (1+x)^(m+1)`` mod 2 in degrees ``0..m``."""
    if m < 1:
        raise ModelError("m must be at least 1")
    return [comb(m + 1, i) % 2 for i in range(m + 1)]


def w2_rp(m: int) -> str:
    w = stiefel_whitney_rp(m)
    return "x^2" if len(w) > 2 and w[2] else "0"


def rp_spin_status(m: int) -> SpinStatus:
    if m < 1:
        raise ModelError("m must be at least 1")
    if m % 2 == 0:
        status = SpinStatus.NON_ORIENTABLE
    elif m == 1 or m % 4 == 3:
        status = SpinStatus.SPIN_AND_TAU_REL_SPIN
    else:
        status = SpinStatus.REL_SPIN_NOT_TAU_REL_SPIN
    w = stiefel_whitney_rp(m)
    w1, w2 = w[1], (w[2] if len(w) > 2 else 0)
    expected = (
        SpinStatus.NON_ORIENTABLE
        if w1
        else SpinStatus.SPIN_AND_TAU_REL_SPIN
        if not w2
        else SpinStatus.REL_SPIN_NOT_TAU_REL_SPIN
    )
    if status is not expected:
        raise AssertionError(f"spin table disagrees with Stiefel-Whitney classes at m = {m}")
    return status


def maslov_double(mu: int) -> int:
    """First Chern pairing of the doubled sphere of a disc with Maslov index ``mu``."""
    if mu % 2:
        raise ModelError(f"Maslov index must be even, got {mu}")
    return mu


def maslov_of_sphere(c1_pairing: int) -> int:
    """Maslov index of a sphere attached through the boundary: ``2 c_1``."""
    return 2 * c1_pairing


def rp_maslov(n: int, ell: int) -> int:
    """Maslov index of a degree-``ell`` disc class of RP^n in CP^n."""
    return ell * (n + 1)
