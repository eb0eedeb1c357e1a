"""Exact arithmetic in universal Novikov rings.

An element is a finite sum ``sum a_i T^lambda_i e^mu_i`` with rational energy
exponents ``lambda_i`` and integer ``mu_i``.  The monomial ``T^lambda e^mu`` has
degree ``2 mu``.  Completion is modelled by :class:`TruncationPolicy`.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Iterable, Union

Coeff = Union[int, Fraction]
Exponent = Fraction


class NovikovError(ValueError):
    """Raised on mode mismatches and malformed elements."""


# ---------------------------------------------------------------------------
# coefficient rings


class CoefficientRing(ABC):
    name: str
    is_field: bool
    is_domain: bool

    @abstractmethod
    def coerce(self, x: Any) -> Coeff: ...

    def zero(self) -> Coeff:
        return self.coerce(0)

    def one(self) -> Coeff:
        return self.coerce(1)

    def add(self, a: Coeff, b: Coeff) -> Coeff:
        return self.coerce(a + b)

    def mul(self, a: Coeff, b: Coeff) -> Coeff:
        return self.coerce(a * b)

    def neg(self, a: Coeff) -> Coeff:
        return self.coerce(-a)

    def is_zero(self, a: Coeff) -> bool:
        return self.coerce(a) == 0

    @abstractmethod
    def divides(self, a: Coeff, b: Coeff) -> bool:
        """True when ``a`` divides ``b``."""

    @abstractmethod
    def div(self, b: Coeff, a: Coeff) -> Coeff:
        """Exact quotient ``b / a``; raises ``ZeroDivisionError`` or ``ValueError``."""

    def to_str(self, a: Coeff) -> str:
        return str(a)

    def parse(self, s: str | int) -> Coeff:
        if isinstance(s, int):
            return self.coerce(s)
        return self.coerce(Fraction(s))

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Integers(CoefficientRing):
    name = "Z"
    is_field = False
    is_domain = True

    def coerce(self, x: Any) -> int:
        if isinstance(x, bool):
            return int(x)
        if isinstance(x, int):
            return x
        f = Fraction(x)
        if f.denominator != 1:
            raise NovikovError(f"{x!r} is not an integer")
        return f.numerator

    def add(self, a: int, b: int) -> int:
        return a + b

    def mul(self, a: int, b: int) -> int:
        return a * b

    def neg(self, a: int) -> int:
        return -a

    def is_zero(self, a: int) -> bool:
        return a == 0

    def divides(self, a: int, b: int) -> bool:
        if a == 0:
            return b == 0
        return b % a == 0

    def div(self, b: int, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("division by zero")
        if b % a:
            raise ValueError(f"{a} does not divide {b} in Z")
        return b // a


@dataclass(frozen=True)
class Rationals(CoefficientRing):
    name = "Q"
    is_field = True
    is_domain = True

    def coerce(self, x: Any) -> Fraction:
        return x if type(x) is Fraction else Fraction(x)

    def add(self, a: Fraction, b: Fraction) -> Fraction:
        return a + b

    def mul(self, a: Fraction, b: Fraction) -> Fraction:
        return a * b

    def neg(self, a: Fraction) -> Fraction:
        return -a

    def is_zero(self, a: Fraction) -> bool:
        return a == 0

    def divides(self, a: Fraction, b: Fraction) -> bool:
        return a != 0 or b == 0

    def div(self, b: Fraction, a: Fraction) -> Fraction:
        if a == 0:
            raise ZeroDivisionError("division by zero")
        return Fraction(b) / Fraction(a)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(p) + 1))


@dataclass(frozen=True)
class IntegersMod(CoefficientRing):
    """``Z/n``; a field exactly when ``n`` is prime."""

    modulus: int

    def __post_init__(self) -> None:
        if self.modulus < 2:
            raise NovikovError("modulus must be at least 2")

    @property
    def name(self) -> str:  # type: ignore[override]
        return f"F{self.modulus}" if self.is_field else f"Z/{self.modulus}"

    @property
    def is_field(self) -> bool:  # type: ignore[override]
        return _is_prime(self.modulus)

    @property
    def is_domain(self) -> bool:  # type: ignore[override]
        return self.is_field

    def coerce(self, x: Any) -> int:
        if isinstance(x, int):
            return x % self.modulus
        f = Fraction(x)
        return (f.numerator * pow(f.denominator, -1, self.modulus)) % self.modulus

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.modulus

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.modulus

    def neg(self, a: int) -> int:
        return (-a) % self.modulus

    def is_zero(self, a: int) -> bool:
        return a % self.modulus == 0

    def divides(self, a: int, b: int) -> bool:
        return b % math.gcd(a, self.modulus) == 0

    def div(self, b: int, a: int) -> int:
        n = self.modulus
        g = math.gcd(a, n)
        if a % n == 0:
            raise ZeroDivisionError("division by zero")
        if b % g:
            raise ValueError(f"{a} does not divide {b} in Z/{n}")
        m = n // g
        return ((b // g) * pow(a // g, -1, m)) % m


def PrimeField(p: int) -> IntegersMod:
    """``F_p`` as an :class:`IntegersMod` after checking that ``p`` is prime."""
    if not _is_prime(p):
        raise NovikovError(f"{p} is not prime")
    return IntegersMod(p)


def parse_ring(text: str) -> CoefficientRing:
    """Parse ``Z``, ``Q``, ``F2``, ``Fp:7`` or ``Z/4``."""
    s = text.strip()
    if s in ("Z", "ZZ"):
        return Integers()
    if s in ("Q", "QQ"):
        return Rationals()
    try:
        if s.startswith("Fp:"):
            return PrimeField(int(s[3:]))
        if s.startswith("F") and s[1:].isdigit():
            return PrimeField(int(s[1:]))
        if s.startswith("Z/") and s[2:].isdigit():
            return IntegersMod(int(s[2:]))
    except (NovikovError, ValueError) as exc:
        raise NovikovError(f"bad coefficient ring {text!r}: {exc}") from None
    raise NovikovError(f"unknown coefficient ring {text!r}")


# ---------------------------------------------------------------------------
# elements


class Mode(Enum):
    LAMBDA0 = "Lambda0"
    LAMBDA = "Lambda"


@dataclass(frozen=True)
class TruncationPolicy:
    """Finite model of the completed ring: energies below ``energy_cutoff``,
    bar tensors up to ``max_tensor_length``, and ``|mu| <= mu_window``."""

    energy_cutoff: Fraction = Fraction(10)
    max_tensor_length: int = 4
    mu_window: int = 10**6

    def __post_init__(self) -> None:
        object.__setattr__(self, "energy_cutoff", Fraction(self.energy_cutoff))
        if self.energy_cutoff <= 0 or self.max_tensor_length <= 0 or self.mu_window <= 0:
            raise NovikovError("truncation bounds must be positive")

    def keeps(self, lam: Fraction, mu: int) -> bool:
        return lam < self.energy_cutoff and abs(mu) <= self.mu_window


Term = tuple[Fraction, int, Coeff]


class NovikovElement:
    """Immutable finite Novikov sum; ``terms`` are ``(lambda, mu, coeff)`` sorted by ``(lambda, mu)``."""

    __slots__ = ("ring", "mode", "terms", "_hash")

    ring: CoefficientRing
    mode: Mode
    terms: tuple[Term, ...]

    def __init__(
        self,
        ring: CoefficientRing,
        terms: Iterable[tuple[Any, int, Any]] = (),
        mode: Mode = Mode.LAMBDA0,
    ) -> None:
        acc: dict[tuple[Fraction, int], Coeff] = {}
        for lam, mu, c in terms:
            key = (Fraction(lam), int(mu))
            c = ring.coerce(c)
            if key in acc:
                acc[key] = ring.add(acc[key], c)
            else:
                acc[key] = c
        self._set(ring, mode, acc)

    def _set(self, ring: CoefficientRing, mode: Mode, acc: dict[tuple[Fraction, int], Coeff]) -> None:
        out = tuple(
            (lam, mu, c) for (lam, mu), c in sorted(acc.items()) if not ring.is_zero(c)
        )
        if mode is Mode.LAMBDA0 and out and out[0][0] < 0:
            raise NovikovError("negative energy exponent in Lambda0 mode")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "terms", out)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, ring: CoefficientRing, mode: Mode, acc: dict[tuple[Fraction, int], Coeff]) -> NovikovElement:
        obj = cls.__new__(cls)
        obj._set(ring, mode, acc)
        return obj

    def __setattr__(self, name: str, value: Any) -> None:
        raise AttributeError("NovikovElement is immutable")

    def __reduce__(self):
        return (NovikovElement, (self.ring, self.terms, self.mode))

    # constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, ring: CoefficientRing, mode: Mode = Mode.LAMBDA0) -> NovikovElement:
        return cls(ring, (), mode)

    @classmethod
    def one(cls, ring: CoefficientRing, mode: Mode = Mode.LAMBDA0) -> NovikovElement:
        return cls(ring, [(0, 0, 1)], mode)

    @classmethod
    def monomial(
        cls, ring: CoefficientRing, coeff: Any = 1, lam: Any = 0, mu: int = 0, mode: Mode = Mode.LAMBDA0
    ) -> NovikovElement:
        return cls(ring, [(lam, mu, coeff)], mode)

    # arithmetic -------------------------------------------------------------

    def _check(self, other: NovikovElement) -> None:
        if not isinstance(other, NovikovElement):
            raise TypeError(f"expected NovikovElement, got {type(other).__name__}")
        if other.mode is not self.mode:
            raise NovikovError(f"mode mismatch: {self.mode.value} vs {other.mode.value}")
        if other.ring != self.ring:
            raise NovikovError(f"ring mismatch: {self.ring} vs {other.ring}")

    def __add__(self, other: NovikovElement) -> NovikovElement:
        self._check(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        ring = self.ring
        acc = {(lam, mu): c for lam, mu, c in self.terms}
        for lam, mu, c in other.terms:
            key = (lam, mu)
            acc[key] = ring.add(acc[key], c) if key in acc else c
        return NovikovElement._raw(ring, self.mode, acc)

    def __neg__(self) -> NovikovElement:
        ring = self.ring
        return NovikovElement._raw(ring, self.mode, {(lam, mu): ring.neg(c) for lam, mu, c in self.terms})

    def __sub__(self, other: NovikovElement) -> NovikovElement:
        return self + (-other)

    def __mul__(self, other: NovikovElement | int | Fraction) -> NovikovElement:
        if not isinstance(other, NovikovElement):
            return self.scale(other)
        self._check(other)
        ring = self.ring
        acc: dict[tuple[Fraction, int], Coeff] = {}
        for l1, m1, c1 in self.terms:
            for l2, m2, c2 in other.terms:
                key = (l1 + l2, m1 + m2)
                c = ring.mul(c1, c2)
                acc[key] = ring.add(acc[key], c) if key in acc else c
        return NovikovElement._raw(ring, self.mode, acc)

    def __rmul__(self, other: int | Fraction) -> NovikovElement:
        return self.scale(other)

    def scale(self, c: Any) -> NovikovElement:
        """Multiply by a coefficient-ring scalar."""
        ring = self.ring
        c = ring.coerce(c)
        return NovikovElement._raw(ring, self.mode, {(lam, mu): ring.mul(a, c) for lam, mu, a in self.terms})

    def shift(self, lam: Fraction, mu: int, c: Any = 1) -> NovikovElement:
        """Multiply by the monomial ``c T^lam e^mu``."""
        ring = self.ring
        c = ring.coerce(c)
        return NovikovElement._raw(
            ring, self.mode, {(l + lam, m + mu): ring.mul(a, c) for l, m, a in self.terms}
        )

    def pow(self, k: int) -> NovikovElement:
        out = NovikovElement.one(self.ring, self.mode)
        for _ in range(k):
            out = out * self
        return out

    # predicates & structure ---------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NovikovElement):
            return NotImplemented
        return self.terms == other.terms and self.mode is other.mode and self.ring == other.ring

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.terms, self.mode))
            object.__setattr__(self, "_hash", h)
        return h

    def valuation(self) -> Fraction | float:
        return self.terms[0][0] if self.terms else math.inf

    def truncate(self, policy: TruncationPolicy) -> NovikovElement:
        if all(policy.keeps(lam, mu) for lam, mu, _ in self.terms):
            return self
        return NovikovElement._raw(
            self.ring, self.mode, {(lam, mu): c for lam, mu, c in self.terms if policy.keeps(lam, mu)}
        )

    def is_positive(self) -> bool:
        if self.mode is not Mode.LAMBDA0:
            raise NovikovError("positivity is defined in Lambda0 mode only")
        return all(lam > 0 for lam, _, _ in self.terms)

    def mus(self) -> set[int]:
        return {mu for _, mu, _ in self.terms}

    def degree(self) -> int | None:
        """``2 mu`` if all terms share one ``mu`` (zero has no degree)."""
        mus = self.mus()
        return 2 * next(iter(mus)) if len(mus) == 1 else None

    def coefficient(self, lam: Any, mu: int) -> Coeff:
        lam = Fraction(lam)
        for l, m, c in self.terms:
            if l == lam and m == mu:
                return c
        return self.ring.zero()

    def leading(self) -> Term | None:
        return self.terms[0] if self.terms else None

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    # serialization ------------------------------------------------------------

    def to_json(self) -> list[dict[str, Any]]:
        return [
            {"coeff": self.ring.to_str(c), "lambda": str(lam), "mu": mu}
            for lam, mu, c in self.terms
        ]

    @classmethod
    def from_json(cls, ring: CoefficientRing, data: list[dict[str, Any]], mode: Mode = Mode.LAMBDA0) -> NovikovElement:
        return cls(ring, [(Fraction(t["lambda"]), int(t["mu"]), ring.parse(t["coeff"])) for t in data], mode)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for lam, mu, c in self.terms:
            mono = "".join(
                s for s in (f"T^{lam}" if lam else "", f"e^{mu}" if mu else "") if s
            )
            parts.append(f"{c}{'*' + mono if mono else ''}")
        return " + ".join(parts)


def nov_add(a: NovikovElement, b: NovikovElement) -> NovikovElement:
    return a + b


def nov_mul(a: NovikovElement, b: NovikovElement) -> NovikovElement:
    return a * b


def nov_valuation(a: NovikovElement) -> Fraction | float:
    return a.valuation()


def nov_truncate(a: NovikovElement, policy: TruncationPolicy) -> NovikovElement:
    return a.truncate(policy)


def nov_is_positive(a: NovikovElement) -> bool:
    return a.is_positive()
