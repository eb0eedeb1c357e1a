"""Graded generators, Novikov-linear chains, bar tensors and Koszul signs."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

from .novikov import CoefficientRing, Mode, NovikovElement, TruncationPolicy


class ChainError(ValueError):
    pass


class Generator(NamedTuple):
    name: str
    degree: int

    @property
    def shifted_degree(self) -> int:
        return self.degree - 1


def shifted_degree(g: Generator) -> int:
    return g.degree - 1


class GradedChain:
    """Finitely supported map ``Generator -> NovikovElement`` with zeros removed."""

    __slots__ = ("ring", "mode", "_coeffs")

    def __init__(
        self,
        ring: CoefficientRing,
        coeffs: Mapping[Generator, NovikovElement] | Iterable[tuple[Generator, NovikovElement]] = (),
        mode: Mode = Mode.LAMBDA0,
    ) -> None:
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[Generator, NovikovElement] = {}
        for g, w in items:
            if w.ring != ring or w.mode is not mode:
                raise ChainError(f"coefficient of {g.name} lives in a different ring or mode")
            acc[g] = acc[g] + w if g in acc else w
        self.ring = ring
        self.mode = mode
        self._coeffs = {g: w for g, w in sorted(acc.items()) if w}

    @classmethod
    def of(cls, ring: CoefficientRing, g: Generator, coeff: object = 1, lam: object = 0, mu: int = 0) -> GradedChain:
        return cls(ring, {g: NovikovElement.monomial(ring, coeff, lam, mu)})

    @property
    def coeffs(self) -> dict[Generator, NovikovElement]:
        return dict(self._coeffs)

    def items(self) -> Iterator[tuple[Generator, NovikovElement]]:
        return iter(self._coeffs.items())

    def __getitem__(self, g: Generator) -> NovikovElement:
        return self._coeffs.get(g) or NovikovElement.zero(self.ring, self.mode)

    def __len__(self) -> int:
        return len(self._coeffs)

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GradedChain):
            return NotImplemented
        return self._coeffs == other._coeffs and self.ring == other.ring

    def __hash__(self) -> int:
        return hash(tuple(self._coeffs.items()))

    def __add__(self, other: GradedChain) -> GradedChain:
        return GradedChain(self.ring, [*self._coeffs.items(), *other._coeffs.items()], self.mode)

    def __neg__(self) -> GradedChain:
        return GradedChain(self.ring, {g: -w for g, w in self._coeffs.items()}, self.mode)

    def __sub__(self, other: GradedChain) -> GradedChain:
        return self + (-other)

    def scale(self, s: NovikovElement) -> GradedChain:
        return GradedChain(self.ring, {g: w * s for g, w in self._coeffs.items()}, self.mode)

    def truncate(self, policy: TruncationPolicy) -> GradedChain:
        return GradedChain(self.ring, {g: w.truncate(policy) for g, w in self._coeffs.items()}, self.mode)

    def total_degrees(self) -> set[int]:
        return {g.degree + 2 * mu for g, w in self._coeffs.items() for _, mu, _ in w.terms}

    def degree(self) -> int | None:
        """Common total degree ``deg g + 2 mu`` of every term, or ``None``."""
        degs = self.total_degrees()
        return next(iter(degs)) if len(degs) == 1 else None

    def is_homogeneous(self) -> bool:
        return len(self.total_degrees()) <= 1

    def valuation(self):
        return min((w.valuation() for w in self._coeffs.values()), default=float("inf"))

    def __repr__(self) -> str:
        if not self._coeffs:
            return "GradedChain(0)"
        return " + ".join(f"({w})*{g.name}" for g, w in self._coeffs.items())


def chain_add(a: GradedChain, b: GradedChain) -> GradedChain:
    return a + b


def chain_scale(c: GradedChain, s: NovikovElement) -> GradedChain:
    return c.scale(s)


@dataclass(frozen=True)
class BarTensor:
    """Ordered tensor ``x_1 (x) ... (x) x_k`` of chains; the empty tensor is the unit."""

    factors: tuple[GradedChain, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "factors", tuple(self.factors))

    def __len__(self) -> int:
        return len(self.factors)

    def check_length(self, policy: TruncationPolicy) -> None:
        if len(self.factors) > policy.max_tensor_length:
            raise ChainError(
                f"tensor length {len(self.factors)} exceeds max_tensor_length {policy.max_tensor_length}"
            )

    def expand(self) -> dict[tuple[Generator, ...], NovikovElement]:
        """Multilinear expansion into weighted basis tensors.

        Weights have even degree, so moving them to the front costs no sign.
        """
        if not self.factors:
            raise ChainError("the empty tensor needs a ring to expand; use expand_unit")
        ring, mode = self.factors[0].ring, self.factors[0].mode
        out: dict[tuple[Generator, ...], NovikovElement] = {(): NovikovElement.one(ring, mode)}
        for f in self.factors:
            nxt: dict[tuple[Generator, ...], NovikovElement] = {}
            for t, w in out.items():
                for g, c in f.items():
                    key = t + (g,)
                    v = w * c
                    nxt[key] = nxt[key] + v if key in nxt else v
            out = nxt
        return {t: w for t, w in out.items() if w}


TensorSum = dict[tuple[Generator, ...], NovikovElement]


def tensor_sum_add(acc: TensorSum, key: tuple[Generator, ...], w: NovikovElement) -> None:
    """In-place ``acc[key] += w`` dropping zeros."""
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


def koszul_exponent(gens: Sequence[Generator], i: int) -> int:
    """``sum_{j<i} deg' x_j`` for 1-based insertion position ``i``."""
    return sum(g.degree - 1 for g in gens[: i - 1])


def koszul_prefix_sign(tensor: BarTensor | Sequence[Generator], i: int) -> int:
    """``(-1)^(deg x_1 + ... + deg x_{i-1} + i - 1)`` for 1-based ``i``."""
    if isinstance(tensor, BarTensor):
        n = len(tensor.factors)
        if not 1 <= i <= n + 1:
            raise ChainError(f"position {i} out of range for length {n}")
        total = 0
        for j, f in enumerate(tensor.factors[: i - 1], start=1):
            d = f.degree()
            if d is None:
                if not f:
                    raise ChainError(f"factor {j} is zero and has no degree")
                raise ChainError(f"factor {j} is not homogeneous")
            total += d - 1
    else:
        if not 1 <= i <= len(tensor) + 1:
            raise ChainError(f"position {i} out of range for length {len(tensor)}")
        total = koszul_exponent(tensor, i)
    return -1 if total % 2 else 1
