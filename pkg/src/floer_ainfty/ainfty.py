"""Filtered A-infinity datasets: assembled operations, the bar coderivation,
relation checking, Maurer-Cartan solving and deformation by a bounding cochain.

Structure constants are stored per disc class with coefficients in the ground
ring.  The weight ``T^energy e^(maslov/2)`` is attached only when operations are
assembled.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Any, Iterable, Mapping, Sequence

from .chains import BarTensor, Generator, GradedChain, tensor_sum_add
from .linalg import solve_linear
from .novikov import CoefficientRing, Mode, NovikovElement, TruncationPolicy


class DatasetError(ValueError):
    """Structural problem in an A-infinity dataset."""


class DeformationError(ValueError):
    """Bounding cochain candidate has the wrong degree or is not positive."""


class HypothesisError(ValueError):
    """Preconditions of a vanishing statement are not met."""


@dataclass(frozen=True, order=True)
class BetaClass:
    """Disc class recorded by its energy and (even) Maslov index."""

    energy: Fraction
    maslov: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "energy", Fraction(self.energy))
        if self.energy < 0:
            raise DatasetError(f"negative energy {self.energy}")
        if self.maslov % 2:
            raise DatasetError(f"odd Maslov index {self.maslov}")

    def __add__(self, other: BetaClass) -> BetaClass:
        return BetaClass(self.energy + other.energy, self.maslov + other.maslov)

    @property
    def e_power(self) -> int:
        return self.maslov // 2

    def is_zero(self) -> bool:
        return self.energy == 0 and self.maslov == 0

    def weight(self, ring: CoefficientRing, coeff: Any = 1) -> NovikovElement:
        return NovikovElement.monomial(ring, coeff, self.energy, self.e_power)

    def label(self) -> str:
        return f"({self.energy},{self.maslov})"


BETA0 = BetaClass(Fraction(0), 0)

ConstKey = tuple[int, BetaClass, tuple[str, ...]]
Names = tuple[str, ...]
BasisSum = dict[Names, NovikovElement]


class AInftyData:
    """Validated, immutable A-infinity dataset.

    ``constants`` maps ``(k, beta, input names)`` to ``{output name: coeff}``.
    ``relspin`` optionally records the pairing of a relative-spin change class
    with each disc class (a bit), used by the involution symmetry check.
    """

    def __init__(
        self,
        ring: CoefficientRing,
        dim_L: int,
        generators: Sequence[Generator],
        constants: Mapping[ConstKey, Mapping[str, Any]],
        classes: Iterable[BetaClass] = (),
        relspin: Mapping[BetaClass, int] | None = None,
        class_names: Mapping[BetaClass, str] | None = None,
    ) -> None:
        self.ring = ring
        self.dim_L = int(dim_L)
        self.generators: tuple[Generator, ...] = tuple(Generator(g.name, int(g.degree)) for g in generators)
        self.gen: dict[str, Generator] = {}
        for g in self.generators:
            if g.name in self.gen:
                raise DatasetError(f"duplicate generator name {g.name!r}")
            self.gen[g.name] = g
        self.index = {g.name: i for i, g in enumerate(self.generators)}

        consts: dict[ConstKey, dict[str, Any]] = {}
        cls_set = {BETA0, *classes}
        for (k, beta, names), outs in constants.items():
            names = tuple(names)
            if not isinstance(beta, BetaClass):
                raise DatasetError(f"class {beta!r} is not a BetaClass")
            if k < 0 or len(names) != k:
                raise DatasetError(f"arity {k} does not match inputs {names}")
            if k == 0 and beta == BETA0:
                raise DatasetError("m_{0,beta_0} must vanish")
            for nm in names:
                if nm not in self.gen:
                    raise DatasetError(f"unknown generator {nm!r} in inputs of m_{k},{beta.label()}")
            din = sum(self.gen[nm].degree for nm in names)
            clean: dict[str, Any] = {}
            for out, c in outs.items():
                if out not in self.gen:
                    raise DatasetError(f"unknown output generator {out!r}")
                c = ring.coerce(c)
                if ring.is_zero(c):
                    continue
                expect = din + 2 - k - beta.maslov
                if self.gen[out].degree != expect:
                    raise DatasetError(
                        f"degree law fails for m_{k},{beta.label()}{names} -> {out}: "
                        f"deg {self.gen[out].degree}, expected {expect}"
                    )
                clean[out] = c
            if clean:
                key = (k, beta, names)
                if key in consts:
                    for out, c in clean.items():
                        consts[key][out] = ring.add(consts[key].get(out, ring.zero()), c)
                else:
                    consts[key] = clean
                cls_set.add(beta)
        self.constants: Mapping[ConstKey, Mapping[str, Any]] = MappingProxyType(
            {k: MappingProxyType(v) for k, v in sorted(consts.items(), key=_const_sort_key(self.index))}
        )
        self.classes: tuple[BetaClass, ...] = tuple(sorted(cls_set))
        self.relspin: Mapping[BetaClass, int] = MappingProxyType(
            {b: int(x) % 2 for b, x in (relspin or {}).items()}
        )
        self.class_names: Mapping[BetaClass, str] = MappingProxyType(dict(class_names or {}))

        assembled: dict[Names, dict[str, NovikovElement]] = {}
        for (k, beta, names), outs in self.constants.items():
            slot = assembled.setdefault(names, {})
            for out, c in outs.items():
                w = beta.weight(ring, c)
                slot[out] = slot[out] + w if out in slot else w
        self._assembled = {n: {o: w for o, w in d.items() if w} for n, d in assembled.items()}
        self.arities: tuple[int, ...] = tuple(sorted({len(n) for n in self._assembled}))

    # pickling keeps the validated state
    def __getstate__(self) -> dict[str, Any]:
        return {
            "ring": self.ring,
            "dim_L": self.dim_L,
            "generators": self.generators,
            "constants": {k: dict(v) for k, v in self.constants.items()},
            "classes": self.classes,
            "relspin": dict(self.relspin),
            "class_names": dict(self.class_names),
        }

    def __setstate__(self, state: dict[str, Any]) -> None:
        self.__init__(**state)  # type: ignore[misc]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AInftyData):
            return NotImplemented
        return self.__getstate__() == other.__getstate__()

    def __repr__(self) -> str:
        return (
            f"AInftyData(ring={self.ring}, dim_L={self.dim_L}, generators={len(self.generators)}, "
            f"constants={len(self.constants)}, classes={len(self.classes)})"
        )

    @property
    def max_arity(self) -> int:
        return self.arities[-1] if self.arities else 0

    def generator(self, name: str) -> Generator:
        try:
            return self.gen[name]
        except KeyError:
            raise DatasetError(f"unknown generator {name!r}") from None

    def assembled(self, names: Names) -> Mapping[str, NovikovElement]:
        """Assembled ``m_k`` on a basis tensor, as ``{output: weight}``."""
        return self._assembled.get(names, {})

    def constant(self, k: int, beta: BetaClass, names: Sequence[str]) -> Mapping[str, Any]:
        return self.constants.get((k, beta, tuple(names)), {})

    def linear_part(self, beta: BetaClass = BETA0) -> dict[str, dict[str, Any]]:
        """``m_{1,beta}`` as ``{input: {output: coeff}}``."""
        return {names[0]: dict(outs) for (k, b, names), outs in self.constants.items() if k == 1 and b == beta}

    def chain(self, coeffs: Mapping[str, NovikovElement]) -> GradedChain:
        return GradedChain(self.ring, {self.gen[n]: w for n, w in coeffs.items()})

    def zero_chain(self) -> GradedChain:
        return GradedChain(self.ring)

    def with_changes(self, **kw: Any) -> AInftyData:
        state = self.__getstate__()
        state.update(kw)
        return AInftyData(**state)


def _const_sort_key(index: Mapping[str, int]):
    def key(item):
        (k, beta, names), _ = item
        return (k, beta, tuple(index[n] for n in names))

    return key


# ---------------------------------------------------------------------------
# assembled operations


def _sign(exp: int) -> int:
    return -1 if exp % 2 else 1


def _chain_to_names(c: GradedChain) -> dict[str, NovikovElement]:
    return {g.name: w for g, w in c.items()}


def _check_inputs(data: AInftyData, chains: Iterable[GradedChain]) -> None:
    for c in chains:
        for g, _ in c.items():
            if data.gen.get(g.name) != g:
                raise DatasetError(f"unknown generator {g} in input")


def apply_mk(data: AInftyData, k: int, inputs: Sequence[GradedChain], policy: TruncationPolicy) -> GradedChain:
    if len(inputs) != k:
        raise DatasetError(f"m_{k} takes {k} inputs, got {len(inputs)}")
    _check_inputs(data, inputs)
    ring = data.ring
    out: dict[str, NovikovElement] = {}
    one = NovikovElement.one(ring)
    basis: BasisSum = {(): one}
    for c in inputs:
        nxt: BasisSum = {}
        for t, w in basis.items():
            for g, v in c.items():
                tensor_sum_add(nxt, t + (g.name,), w * v)
        basis = nxt
    for names, w in basis.items():
        for o, v in data.assembled(names).items():
            x = (w * v).truncate(policy)
            if x:
                out[o] = out[o] + x if o in out else x
    return data.chain(out)


def dhat_basis(data: AInftyData, names: Names) -> BasisSum:
    """Coderivation ``d^ = sum_k m^_k`` on one basis tensor, untruncated."""
    out: BasisSum = {}
    n = len(names)
    exp = 0
    for i in range(n + 1):
        s = _sign(exp)
        for k in data.arities:
            if i + k > n:
                break
            res = data._assembled.get(names[i : i + k])
            if not res:
                continue
            head, tail = names[:i], names[i + k :]
            for g, w in res.items():
                tensor_sum_add(out, head + (g,) + tail, w if s > 0 else -w)
        if i < n:
            exp += data.gen[names[i]].degree - 1
    return out


def dhat_sum(data: AInftyData, tensors: BasisSum, policy: TruncationPolicy | None = None) -> BasisSum:
    out: BasisSum = {}
    for names, w in tensors.items():
        for t, v in dhat_basis(data, names).items():
            x = w * v
            if policy is not None:
                x = x.truncate(policy)
            tensor_sum_add(out, t, x)
    return out


def apply_dhat(data: AInftyData, t: BarTensor, policy: TruncationPolicy) -> dict[tuple[Generator, ...], NovikovElement]:
    """``d^`` on a bar tensor; the result is a sum of weighted basis tensors."""
    t.check_length(policy)
    _check_inputs(data, t.factors)
    if len(t) == 0:
        src: BasisSum = {(): NovikovElement.one(data.ring)}
    else:
        src = {tuple(g.name for g in gs): w for gs, w in t.expand().items()}
    res = dhat_sum(data, src, policy)
    return {tuple(data.gen[n] for n in names): w for names, w in res.items()}


def dhat_squared_length_one(data: AInftyData, names: Names, policy: TruncationPolicy | None = None) -> dict[str, NovikovElement]:
    """Length-one part of ``d^ d^`` on a basis tensor.

    Only the term of the outer ``d^`` that consumes the whole tensor lands in
    length one, so the outer step is a single ``m_k`` lookup with sign ``+1``.
    """
    out: BasisSum = {}
    for t, w in dhat_basis(data, names).items():
        res = data._assembled.get(t)
        if not res:
            continue
        for g, v in res.items():
            x = w * v
            if policy is not None:
                x = x.truncate(policy)
            tensor_sum_add(out, (g,), x)
    return {t[0]: w for t, w in out.items()}


def dhat_squared_basis(data: AInftyData, names: Names, policy: TruncationPolicy | None = None) -> BasisSum:
    return dhat_sum(data, dhat_basis(data, names), policy)


# ---------------------------------------------------------------------------
# A-infinity relations


@dataclass(frozen=True)
class RelationCell:
    k: int
    inputs: Names
    output: str
    energy: Fraction
    e_power: int
    coeff: Any

    def to_json(self) -> dict[str, Any]:
        return {
            "k": self.k,
            "inputs": list(self.inputs),
            "output": self.output,
            "energy": str(self.energy),
            "maslov": 2 * self.e_power,
            "coeff": str(self.coeff),
        }


@dataclass(frozen=True)
class RelationReport:
    cells: tuple[RelationCell, ...]
    checked: int

    @property
    def ok(self) -> bool:
        return not self.cells

    @property
    def first_failure(self) -> RelationCell | None:
        return self.cells[0] if self.cells else None

    @property
    def max_residual(self) -> int | Fraction:
        return max((abs(c.coeff) for c in self.cells), default=0)

    def to_json(self) -> dict[str, Any]:
        return {
            "ok": self.ok,
            "checked_tuples": self.checked,
            "max_residual": str(self.max_residual),
            "first_failure": self.first_failure.to_json() if self.cells else None,
            "residuals": [c.to_json() for c in self.cells],
        }


def relation_residual(data: AInftyData, names: Names) -> dict[str, NovikovElement]:
    """``sum (-1)^(sum_{j<i} deg' x_j) m_{k1}(x_1..m_{k2}(x_i..)..x_k)`` on one tuple."""
    acc: dict[str, NovikovElement] = {}
    k = len(names)
    asm = data._assembled
    prefix = [0]
    for nm in names:
        prefix.append(prefix[-1] + data.gen[nm].degree - 1)
    for k2 in data.arities:
        if k2 > k:
            break
        for i in range(k - k2 + 1):
            inner = asm.get(names[i : i + k2])
            if not inner:
                continue
            s = _sign(prefix[i])
            head, tail = names[:i], names[i + k2 :]
            for g, w in inner.items():
                outer = asm.get(head + (g,) + tail)
                if not outer:
                    continue
                sw = w if s > 0 else -w
                for h, v in outer.items():
                    x = sw * v
                    if h in acc:
                        x = acc[h] + x
                    if x:
                        acc[h] = x
                    else:
                        acc.pop(h, None)
    return acc


def _residual_cells(data: AInftyData, tuples: Sequence[Names], policy: TruncationPolicy) -> list[RelationCell]:
    cells: list[RelationCell] = []
    for names in tuples:
        res = relation_residual(data, names)
        for h in sorted(res, key=data.index.__getitem__):
            for lam, mu, c in res[h].truncate(policy).terms:
                cells.append(RelationCell(len(names), names, h, lam, mu, c))
    return cells


def _chunk_worker(args: tuple[AInftyData, list[Names], TruncationPolicy]) -> list[RelationCell]:
    return _residual_cells(*args)


def relation_tuples(data: AInftyData, policy: TruncationPolicy) -> list[Names]:
    names = [g.name for g in data.generators]
    out: list[Names] = []
    for k in range(policy.max_tensor_length + 1):
        out.extend(itertools.product(names, repeat=k))
    return out


def resolve_jobs(jobs: int | None) -> int:
    if jobs is None:
        env = os.environ.get("FLOER_AINFTY_JOBS")
        jobs = int(env) if env else 1
    return max(1, jobs)


def check_ainfty_relations(data: AInftyData, policy: TruncationPolicy, jobs: int | None = 1) -> RelationReport:
    """Evaluate the A-infinity relations on every generator tuple of length ``<= K``.

    Cells come back in lexicographic order (arity, tuple, output, energy)
    regardless of ``jobs``.
    """
    tuples = relation_tuples(data, policy)
    jobs = resolve_jobs(jobs)
    if jobs == 1 or len(tuples) < 64:
        cells = _residual_cells(data, tuples, policy)
    else:
        size = -(-len(tuples) // (4 * jobs))
        chunks = [tuples[i : i + size] for i in range(0, len(tuples), size)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            cells = [c for part in pool.map(_chunk_worker, [(data, ch, policy) for ch in chunks]) for c in part]
    return RelationReport(tuple(cells), len(tuples))


def cross_check_dhat(data: AInftyData, policy: TruncationPolicy) -> list[tuple[Names, str]]:
    """Compare the length-1 part of ``d^ d^`` with :func:`relation_residual` on every tuple.

    Returns the mismatching ``(tuple, output)`` pairs; empty means agreement.
    """
    bad: list[tuple[Names, str]] = []
    for names in relation_tuples(data, policy):
        lhs = dhat_squared_length_one(data, names, policy)
        rhs = {h: w.truncate(policy) for h, w in relation_residual(data, names).items()}
        rhs = {h: w for h, w in rhs.items() if w}
        for h in sorted(set(lhs) | set(rhs)):
            if lhs.get(h) != rhs.get(h):
                bad.append((names, h))
    return bad


# ---------------------------------------------------------------------------
# bounding cochains


def _b_weights(data: AInftyData, b: GradedChain) -> dict[str, NovikovElement]:
    _check_inputs(data, [b])
    out = {}
    for g, w in b.items():
        for lam, mu, _ in w.terms:
            if g.degree + 2 * mu != 1:
                raise DeformationError(f"term of b on {g.name} has total degree {g.degree + 2 * mu}, expected 1")
            if lam <= 0:
                raise DeformationError(f"term of b on {g.name} has energy {lam}, expected > 0")
        out[g.name] = w
    return out


def _insertion_sums(
    data: AInftyData, bw: Mapping[str, NovikovElement], policy: TruncationPolicy, only_k: int | None = None
) -> dict[Names, dict[str, NovikovElement]]:
    """All ``m^b_k(x)``: every stored input tuple splits into b-slots and x-slots."""
    out: dict[Names, dict[str, NovikovElement]] = {}
    for names, res in data._assembled.items():
        slots = [i for i, n in enumerate(names) if n in bw]
        for r in range(len(slots) + 1):
            for chosen in itertools.combinations(slots, r):
                rest = tuple(n for i, n in enumerate(names) if i not in chosen)
                if only_k is not None and len(rest) != only_k:
                    continue
                w = None
                for i in chosen:
                    w = bw[names[i]] if w is None else (w * bw[names[i]]).truncate(policy)
                slot = out.setdefault(rest, {})
                for o, v in res.items():
                    x = (v if w is None else w * v).truncate(policy)
                    if not x:
                        continue
                    x = slot[o] + x if o in slot else x
                    if x:
                        slot[o] = x
                    else:
                        slot.pop(o, None)
    return {n: d for n, d in out.items() if d}


def check_maurer_cartan(data: AInftyData, b: GradedChain, policy: TruncationPolicy) -> GradedChain:
    """Truncated sum ``m_0(1) + m_1(b) + m_2(b,b) + ...``."""
    bw = _b_weights(data, b)
    return data.chain(_insertion_sums(data, bw, policy, only_k=0).get((), {}))


def deform(data: AInftyData, b: GradedChain, policy: TruncationPolicy) -> AInftyData:
    """The deformed structure ``m^b`` with new disc classes read off from the weights."""
    bw = _b_weights(data, b)
    consts: dict[ConstKey, dict[str, Any]] = {}
    for rest, res in _insertion_sums(data, bw, policy).items():
        for o, w in res.items():
            for lam, mu, c in w.terms:
                key = (len(rest), BetaClass(lam, 2 * mu), rest)
                consts.setdefault(key, {})[o] = c
    return AInftyData(
        data.ring,
        data.dim_L,
        data.generators,
        consts,
        classes=[c for c in data.classes if c.energy < policy.energy_cutoff],
        relspin=data.relspin,
        class_names=data.class_names,
    )


@dataclass(frozen=True)
class MCSolution:
    b: GradedChain
    residual_cutoff: Fraction
    provenance: tuple[dict[str, Any], ...] = field(default=())
    ok: bool = True

    def to_json(self) -> dict[str, Any]:
        return {
            "status": "solved",
            "residual_cutoff": str(self.residual_cutoff),
            "b": chain_to_json(self.b),
            "levels": list(self.provenance),
        }


@dataclass(frozen=True)
class ObstructionReport:
    level: Fraction
    e_power: int
    obstruction: GradedChain
    is_cocycle: bool
    provenance: tuple[dict[str, Any], ...] = field(default=())
    ok: bool = False

    def to_json(self) -> dict[str, Any]:
        return {
            "status": "obstructed",
            "level": str(self.level),
            "maslov": 2 * self.e_power,
            "obstruction": chain_to_json(self.obstruction),
            "is_cocycle": self.is_cocycle,
            "levels": list(self.provenance),
        }


def chain_to_json(c: GradedChain) -> dict[str, Any]:
    return {g.name: w.to_json() for g, w in c.items()}


def energy_levels(classes: Iterable[BetaClass], cutoff: Fraction) -> list[Fraction]:
    """Positive sums of class energies below ``cutoff``."""
    base = sorted({c.energy for c in classes if c.energy > 0})
    levels: set[Fraction] = set()
    frontier = [Fraction(0)]
    while frontier:
        nxt = []
        for x in frontier:
            for e in base:
                y = x + e
                if y >= cutoff:
                    break
                if y not in levels:
                    levels.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(levels)


def mc_solve(data: AInftyData, policy: TruncationPolicy) -> MCSolution | ObstructionReport:
    """Solve the Maurer-Cartan equation order by order in energy.

    At each level the equation ``m_{1,beta_0}(b_lambda) = -o_lambda`` is solved
    separately for each power of ``e``.  Over a field the echelon-minimal
    solution is used; over ``Z`` a Smith-form solution.
    """
    ring = data.ring
    E = policy.energy_cutoff
    for c in data.classes:
        if c.energy == 0 and c.maslov != 0:
            raise DatasetError(f"class {c.label()} has zero energy; levels are not discrete")
    if not any(k == 0 for k, _, _ in data.constants):
        return MCSolution(data.zero_chain(), E)
    if not ring.is_field and not ring.is_domain:
        raise ValueError(f"linear solve over the non-field {ring} is ambiguous; use Q or a prime field")

    d0 = data.linear_part(BETA0)
    gens = data.generators
    b = data.zero_chain()
    provenance: list[dict[str, Any]] = []
    for lam in energy_levels(data.classes, E):
        r = check_maurer_cartan(data, b, policy)
        groups: dict[int, dict[str, Any]] = {}
        for g, w in r.items():
            for l2, mu, c in w.terms:
                if l2 < lam:
                    raise AssertionError(f"residual below the current level {lam}")
                if l2 == lam:
                    groups.setdefault(mu, {})[g.name] = c
        step: dict[str, NovikovElement] = {}
        for mu in sorted(groups):
            o = groups[mu]
            rows = [g.name for g in gens if g.degree == 2 - 2 * mu]
            cols = [g.name for g in gens if g.degree == 1 - 2 * mu]
            A = [[d0.get(cn, {}).get(rn, ring.zero()) for cn in cols] for rn in rows]
            y = [ring.neg(o.get(rn, ring.zero())) for rn in rows]
            x = solve_linear(ring, A, y) if cols else None
            if x is None and any(not ring.is_zero(v) for v in y):
                ob = data.chain({n: NovikovElement.monomial(ring, c, lam, mu) for n, c in o.items()})
                image: dict[str, Any] = {}
                for n, c in o.items():
                    for out, v in d0.get(n, {}).items():
                        image[out] = ring.add(image.get(out, ring.zero()), ring.mul(c, v))
                cocycle = all(ring.is_zero(v) for v in image.values())
                return ObstructionReport(lam, mu, ob, cocycle, tuple(provenance))
            for cn, v in zip(cols, x or []):
                if not ring.is_zero(v):
                    step[cn] = NovikovElement.monomial(ring, v, lam, mu) + step.get(
                        cn, NovikovElement.zero(ring)
                    )
        if step:
            db = data.chain(step)
            b = b + db
            provenance.append({"level": str(lam), "b": chain_to_json(db)})
    final = check_maurer_cartan(data, b, policy)
    if final:
        raise AssertionError(f"Maurer-Cartan residual survived: {final}")
    return MCSolution(b, E, tuple(provenance))


def symmetrize_m0_vanishing(data: AInftyData) -> bool:
    """Check the hypotheses forcing ``m_0(1) = 0`` and report whether it vanishes.

    The involution symmetry at ``k = 0`` gives ``m_{0,beta} = (-1)^(mu/2 + 1 + x) m_{0,beta}``
    where ``x`` is the relative-spin pairing of the class; the hypothesis is that
    this exponent is odd for every class carrying an ``m_0`` constant.
    """
    from .signs import check_tau_symmetry

    rep = check_tau_symmetry(data)
    if not rep.ok:
        raise HypothesisError(f"dataset is not involution-symmetric: {rep.violations[0]}")
    for (k, beta, _), outs in data.constants.items():
        if k == 0 and outs:
            x = data.relspin.get(beta, 0)
            if (beta.e_power + 1 + x) % 2 == 0:
                raise HypothesisError(
                    f"class {beta.label()} carries m_0 but mu/2 + 1 + x is even (mu = {beta.maslov})"
                )
    return not data.assembled(())
