"""JSON dataset format.

Rationals are ``"p/q"`` strings, the zero class is the reserved name ``"0"``,
and canonical output sorts keys so that export is byte-stable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping

import jsonschema

from .ainfty import BETA0, AInftyData, BetaClass, ConstKey, DatasetError
from .bimodule import BimoduleData, BKey, CoeffMap
from .chains import Generator, GradedChain
from .novikov import NovikovElement, NovikovError, parse_ring

FORMAT_VERSION = 1

_RATIONAL = {"type": ["string", "integer"], "pattern": r"^-?\d+(/\d+)?$"}
_COEFFS = {"type": "object", "additionalProperties": _RATIONAL}
_NAMES = {"type": "array", "items": {"type": "string"}}
_GENS = {
    "type": "array",
    "items": {
        "type": "object",
        "required": ["name", "degree"],
        "properties": {"name": {"type": "string", "minLength": 1}, "degree": {"type": "integer"}},
        "additionalProperties": False,
    },
}

SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["version", "ring", "dim_L", "generators"],
    "additionalProperties": False,
    "properties": {
        "version": {"const": FORMAT_VERSION},
        "ring": {"type": "string"},
        "dim_L": {"type": "integer"},
        "generators": _GENS,
        "classes": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "energy", "maslov"],
                "properties": {"name": {"type": "string"}, "energy": _RATIONAL, "maslov": {"type": "integer"}},
                "additionalProperties": False,
            },
        },
        "operations": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["k", "class", "inputs", "output"],
                "properties": {
                    "k": {"type": "integer", "minimum": 0},
                    "class": {"type": "string"},
                    "inputs": _NAMES,
                    "output": _COEFFS,
                },
                "additionalProperties": False,
            },
        },
        "relspin": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["class", "x"],
                "properties": {"class": {"type": "string"}, "x": {"enum": [0, 1]}},
                "additionalProperties": False,
            },
        },
        "bimodule": {
            "type": "object",
            "properties": {
                "diagonal": {"type": "boolean"},
                "module_generators": _GENS,
                "operations": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["k1", "k0", "class", "left", "y", "right", "output"],
                        "properties": {
                            "k1": {"type": "integer", "minimum": 0},
                            "k0": {"type": "integer", "minimum": 0},
                            "class": {"type": "string"},
                            "left": _NAMES,
                            "y": {"type": "string"},
                            "right": _NAMES,
                            "output": _COEFFS,
                        },
                        "additionalProperties": False,
                    },
                },
            },
            "additionalProperties": False,
        },
        "pbar": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["class", "input", "output"],
                "properties": {"class": {"type": "string"}, "input": {"type": "string"}, "output": _COEFFS},
                "additionalProperties": False,
            },
        },
    },
}


class DatasetFormatError(ValueError):
    """Unreadable or schema-invalid dataset file."""


@dataclass(frozen=True)
class Dataset:
    algebra: AInftyData
    bimodule: BimoduleData | None = None
    bimodule_diagonal: bool = False
    pbar: Mapping[BetaClass, CoeffMap] | None = None


def _class_names(data: AInftyData) -> dict[BetaClass, str]:
    names = {BETA0: "0"}
    used = {"0"}
    for c, n in data.class_names.items():
        if c != BETA0:
            names[c] = n
            used.add(n)
    i = 1
    for c in data.classes:
        if c not in names:
            while f"c{i}" in used:
                i += 1
            names[c] = f"c{i}"
            used.add(f"c{i}")
    return names


def _coeffs_json(ring, outs: Mapping[str, Any], order: Mapping[str, int]) -> dict[str, str]:
    return {o: ring.to_str(outs[o]) for o in sorted(outs, key=order.__getitem__)}


def dataset_to_json(ds: Dataset | AInftyData) -> dict[str, Any]:
    if isinstance(ds, AInftyData):
        ds = Dataset(ds)
    data = ds.algebra
    names = _class_names(data)
    order = data.index
    out: dict[str, Any] = {
        "version": FORMAT_VERSION,
        "ring": str(data.ring),
        "dim_L": data.dim_L,
        "generators": [{"name": g.name, "degree": g.degree} for g in data.generators],
        "classes": [
            {"name": names[c], "energy": str(c.energy), "maslov": c.maslov} for c in data.classes if c != BETA0
        ],
        "operations": [
            {
                "k": k,
                "class": names[beta],
                "inputs": list(ins),
                "output": _coeffs_json(data.ring, outs, order),
            }
            for (k, beta, ins), outs in data.constants.items()
        ],
    }
    if data.relspin:
        out["relspin"] = [{"class": names[c], "x": x} for c, x in sorted(data.relspin.items())]
    if ds.bimodule_diagonal:
        out["bimodule"] = {"diagonal": True}
    elif ds.bimodule is not None:
        bm = ds.bimodule
        morder = {g.name: i for i, g in enumerate(bm.module_generators)}
        ops = sorted(
            bm.constants.items(),
            key=lambda kv: (
                kv[0][0],
                kv[0][1],
                kv[0][2],
                tuple(order[n] for n in kv[0][3]),
                morder[kv[0][4]],
                tuple(order[n] for n in kv[0][5]),
            ),
        )
        out["bimodule"] = {
            "module_generators": [{"name": g.name, "degree": g.degree} for g in bm.module_generators],
            "operations": [
                {
                    "k1": k1,
                    "k0": k0,
                    "class": names.get(B) or _new_class_error(B),
                    "left": list(L),
                    "y": y,
                    "right": list(R),
                    "output": _coeffs_json(data.ring, outs, morder),
                }
                for (k1, k0, B, L, y, R), outs in ops
            ],
        }
    if ds.pbar is not None:
        out["pbar"] = [
            {"class": names[c], "input": src, "output": _coeffs_json(data.ring, ds.pbar[c][src], order)}
            for c in sorted(ds.pbar)
            for src in sorted(ds.pbar[c], key=order.__getitem__)
        ]
    return out


def _new_class_error(B: BetaClass) -> str:
    raise DatasetError(f"bimodule class {B.label()} must also be declared among the algebra classes")


def dumps_canonical(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def export_dataset(ds: Dataset | AInftyData) -> str:
    return dumps_canonical(dataset_to_json(ds))


def load_dataset(text: str) -> Dataset:
    """Parse, schema-check and validate a dataset.  Raises :class:`DatasetFormatError`."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DatasetFormatError(f"invalid JSON: {exc}") from None
    return dataset_from_json(raw)


def dataset_from_json(raw: Any) -> Dataset:
    try:
        jsonschema.validate(raw, SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise DatasetFormatError(f"schema violation at {path}: {exc.message}") from None
    try:
        return _build(raw)
    except (DatasetError, NovikovError, ValueError, ZeroDivisionError) as exc:
        raise DatasetFormatError(str(exc)) from None


def _build(raw: dict[str, Any]) -> Dataset:
    ring = parse_ring(raw["ring"])
    gens = [Generator(g["name"], g["degree"]) for g in raw["generators"]]
    classes: dict[str, BetaClass] = {"0": BETA0}
    for c in raw.get("classes", []):
        if c["name"] in classes:
            raise DatasetError(f"duplicate class name {c['name']!r}")
        beta = BetaClass(Fraction(c["energy"]), c["maslov"])
        if beta in classes.values():
            raise DatasetError(f"class {c['name']!r} repeats energy and Maslov index of another class")
        classes[c["name"]] = beta

    def cls(name: str) -> BetaClass:
        if name not in classes:
            raise DatasetError(f"unknown class {name!r}")
        return classes[name]

    consts: dict[ConstKey, dict[str, Any]] = {}
    for op in raw.get("operations", []):
        key = (op["k"], cls(op["class"]), tuple(op["inputs"]))
        if key in consts:
            raise DatasetError(f"duplicate operation entry {key[0]}, {op['class']}, {op['inputs']}")
        consts[key] = {o: ring.parse(c) for o, c in op["output"].items()}
    relspin = {cls(r["class"]): r["x"] for r in raw.get("relspin", [])}
    names = {b: n for n, b in classes.items() if n != "0"}
    data = AInftyData(ring, raw["dim_L"], gens, consts, classes.values(), relspin, names)

    bimodule, diagonal = None, False
    bm = raw.get("bimodule")
    if bm is not None:
        if bm.get("diagonal"):
            if "operations" in bm or "module_generators" in bm:
                raise DatasetError("diagonal bimodule takes no explicit operations")
            diagonal = True
            bimodule = BimoduleData.diagonal(data)
        else:
            mgens = [Generator(g["name"], g["degree"]) for g in bm.get("module_generators", [])]
            bconsts: dict[BKey, dict[str, Any]] = {}
            for op in bm.get("operations", []):
                key = (op["k1"], op["k0"], cls(op["class"]), tuple(op["left"]), op["y"], tuple(op["right"]))
                if key in bconsts:
                    raise DatasetError("duplicate bimodule operation entry")
                bconsts[key] = {o: ring.parse(c) for o, c in op["output"].items()}
            bimodule = BimoduleData(data, data, mgens, bconsts)

    pbar = None
    if "pbar" in raw:
        pbar = {}
        for e in raw["pbar"]:
            beta = cls(e["class"])
            if beta == BETA0:
                raise DatasetError("pbar entries need a nonzero class")
            data.generator(e["input"])
            for o in e["output"]:
                data.generator(o)
            pbar.setdefault(beta, {})[e["input"]] = {o: ring.parse(c) for o, c in e["output"].items()}
    return Dataset(data, bimodule, diagonal, pbar)


def chain_from_json(data: AInftyData, raw: Mapping[str, Any]) -> GradedChain:
    """``{generator: [terms]}`` as produced by :func:`floer_ainfty.ainfty.chain_to_json`."""
    try:
        return data.chain({n: NovikovElement.from_json(data.ring, terms) for n, terms in raw.items()})
    except (KeyError, TypeError, ValueError) as exc:
        raise DatasetFormatError(f"bad chain: {exc}") from None
