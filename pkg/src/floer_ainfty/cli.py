"""Command-line entry point.

Exit codes: 0 all requested checks pass, 1 a semantic check failed,
2 the input could not be read or validated.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import models
from .ainfty import (
    BETA0,
    DatasetError,
    DeformationError,
    HypothesisError,
    MCSolution,
    check_ainfty_relations,
    deform,
    mc_solve,
)
from .bimodule import build_chain_map_I, check_bimodule_dhat_squared, verify_I_chain_map, verify_pbar_identity
from .homology import ComplexError, NovikovComplex, homology_field, homology_truncated_Z
from .io import Dataset, DatasetFormatError, chain_from_json, dumps_canonical, export_dataset, load_dataset
from .novikov import Integers, NovikovError, TruncationPolicy, parse_ring
from .signs import (
    SignError,
    check_tau_symmetry,
    tau_exponent_main,
    tau_sign_basic,
    tau_sign_main,
    tau_sign_marked,
)


class InputError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def _load(args: argparse.Namespace) -> Dataset:
    path = getattr(args, "file", None) or getattr(args, "file_opt", None)
    model = getattr(args, "model", None)
    if model and path:
        raise InputError("give either a dataset file or --model, not both")
    if model:
        try:
            return Dataset(models.parse_model(model))
        except models.ModelError as exc:
            raise InputError(str(exc)) from None
    if not path:
        raise InputError("no dataset given; pass FILE, '-' for stdin, or --model")
    try:
        return load_dataset(_read(path))
    except DatasetFormatError as exc:
        raise InputError(f"{path}: {exc}") from None


def _policy(args: argparse.Namespace, default_cutoff: str = "10") -> TruncationPolicy:
    cutoff = getattr(args, "cutoff", None) or default_cutoff
    try:
        return TruncationPolicy(Fraction(cutoff), getattr(args, "max_length", None) or 4)
    except (ValueError, ZeroDivisionError, NovikovError) as exc:
        raise InputError(f"bad truncation settings: {exc}") from None


def _emit(obj: Any) -> None:
    sys.stdout.write(dumps_canonical(obj))


# ---------------------------------------------------------------------------


def cmd_check(args: argparse.Namespace) -> int:
    ds = _load(args)
    policy = _policy(args)
    wanted = {k for k in ("ainfty", "symmetry", "bimodule", "pbar") if getattr(args, k)}
    if not wanted:
        wanted = {"ainfty"}
        if ds.bimodule is not None:
            wanted.add("bimodule")
        if ds.pbar is not None:
            wanted.add("pbar")
    report: dict[str, Any] = {}
    ok = True
    if "ainfty" in wanted:
        rep = check_ainfty_relations(ds.algebra, policy, jobs=args.jobs)
        report["ainfty"] = rep.to_json()
        ok &= rep.ok
    if "symmetry" in wanted:
        sym = check_tau_symmetry(ds.algebra)
        report["symmetry"] = sym.to_json()
        ok &= sym.ok
    if "bimodule" in wanted:
        if ds.bimodule is None:
            raise InputError("dataset has no bimodule block")
        limit = min(3, policy.max_tensor_length)
        bad = check_bimodule_dhat_squared(ds.bimodule, policy, limit)
        report["bimodule"] = {
            "ok": not bad,
            "max_sandwich_length": limit,
            "residuals": [
                {
                    "source": {"left": list(s[0]), "y": s[1], "right": list(s[2])},
                    "target": {"left": list(t[0]), "y": t[1], "right": list(t[2])},
                    "value": w.to_json(),
                }
                for s, t, w in bad
            ],
        }
        ok &= not bad
    if "pbar" in wanted:
        if ds.pbar is None:
            raise InputError("dataset has no pbar block")
        m10 = ds.algebra.linear_part()
        cm = build_chain_map_I(ds.pbar, m10, policy, ds.algebra.ring, [g.name for g in ds.algebra.generators])
        res = verify_I_chain_map(cm)
        entry: dict[str, Any] = {
            "ok": not res,
            "residual": {s: {t: w.to_json() for t, w in row.items()} for s, row in res.items()},
        }
        declared = {c: ds.algebra.linear_part(c) for c in ds.algebra.classes if c != BETA0}
        declared = {c: f for c, f in declared.items() if f}
        if declared:
            # the dataset's own m_{1,beta} must satisfy the homotopy identity with pbar
            bad = verify_pbar_identity(ds.pbar, m10, declared, ds.algebra.ring, policy.energy_cutoff)
            entry["identity_residual"] = {
                c.label(): {s: {t: ds.algebra.ring.to_str(v) for t, v in row.items()} for s, row in f.items()}
                for c, f in bad.items()
            }
            entry["ok"] = entry["ok"] and not entry["identity_residual"]
        report["pbar"] = entry
        ok &= entry["ok"]
    report["ok"] = ok
    _emit(report)
    return 0 if ok else 1


def cmd_homology(args: argparse.Namespace) -> int:
    ds = _load(args)
    data = ds.algebra
    policy = _policy(args, default_cutoff=args.cutoff_energy or "10")
    if args.mc and args.b_file:
        raise InputError("use either --mc or --b-file")
    if args.mc or args.b_file:
        if args.mc:
            sol = mc_solve(data, policy)
            if not isinstance(sol, MCSolution):
                _emit(sol.to_json())
                return 1
            b = sol.b
        else:
            try:
                b = chain_from_json(data, json.loads(_read(args.b_file)))
            except json.JSONDecodeError as exc:
                raise InputError(f"bad b file: {exc}") from None
        data = deform(data, b, policy)
    cx = NovikovComplex.from_ainfty(data, policy)
    try:
        ring = parse_ring(args.ring)
    except NovikovError as exc:
        raise InputError(str(exc)) from None
    if isinstance(ring, Integers):
        if not isinstance(data.ring, Integers):
            raise InputError(f"dataset over {data.ring} cannot be read over Z")
        rep = homology_truncated_Z(cx, args.truncate)
    else:
        rep = homology_field(cx.change_ring(ring))
    sys.stdout.write(rep.to_canonical_json())
    return 0


def cmd_mc(args: argparse.Namespace) -> int:
    ds = _load(args)
    sol = mc_solve(ds.algebra, _policy(args))
    _emit(sol.to_json())
    return 0 if sol.ok else 1


def _int_list(text: str | None) -> list[int]:
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"expected comma-separated integers, got {text!r}") from None


def cmd_signs(args: argparse.Namespace) -> int:
    degs = _int_list(args.degs)
    k = args.k if args.k is not None else len(degs)
    out: dict[str, Any] = {
        "maslov": args.mu,
        "k": k,
        "m": args.m,
        "tau_sign_basic": tau_sign_basic(args.mu),
        "tau_sign_marked": tau_sign_marked(args.mu, k, args.m),
    }
    if degs or k == 0:
        out["degs"] = degs
        out["epsilon"] = tau_exponent_main(args.mu, k, args.m, degs)
        out["tau_sign_main"] = tau_sign_main(args.mu, k, args.m, degs)
    _emit(out)
    return 0


def cmd_sw(args: argparse.Namespace) -> int:
    m = args.rp
    w = models.stiefel_whitney_rp(m)
    _emit(
        {
            "m": m,
            "w": w,
            "w1": "x" if w[1] else "0",
            "w2": models.w2_rp(m),
            "status": models.rp_spin_status(m).value,
        }
    )
    return 0


def cmd_export(args: argparse.Namespace) -> int:
    ds = _load(args)
    sys.stdout.write(export_dataset(ds))
    return 0


def _add_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("file", nargs="?", help="dataset JSON file, or '-' for stdin")
    p.add_argument("--file", dest="file_opt", help="dataset JSON file (alternative to the positional)")
    p.add_argument("--model", help="built-in model: rp:n, qcp:n, poly:r, toy, toy-obstructed")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="floer-ainfty", description="Filtered A-infinity algebra toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="check A-infinity relations, symmetry, bimodule and pbar identities")
    _add_source(p)
    p.add_argument("--ainfty", action="store_true")
    p.add_argument("--symmetry", action="store_true")
    p.add_argument("--bimodule", action="store_true")
    p.add_argument("--pbar", action="store_true")
    p.add_argument("--cutoff", help="energy cutoff E (rational)")
    p.add_argument("--max-length", type=int, help="maximal tensor length K")
    p.add_argument("--jobs", type=int, help="worker processes (default: $FLOER_AINFTY_JOBS or 1)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("homology", help="Floer cohomology of the (deformed) m_1")
    _add_source(p)
    p.add_argument("--ring", default="Z", help="Z, Q, F2 or Fp:p")
    p.add_argument("--truncate", type=int, default=8, help="q-adic truncation order N for Z")
    p.add_argument("--cutoff-energy", help="energy cutoff E for deformation and truncation")
    p.add_argument("--mc", action="store_true", help="deform by the solution of the Maurer-Cartan equation")
    p.add_argument("--b-file", help="deform by the bounding cochain in this JSON file")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("mc", help="solve the Maurer-Cartan equation order by order")
    _add_source(p)
    p.add_argument("--cutoff", help="energy cutoff E")
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("signs", help="involution orientation signs")
    p.add_argument("--mu", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--degs", help="comma-separated degrees of the boundary inputs")
    p.set_defaults(func=cmd_signs)

    p = sub.add_parser("sw", help="Stiefel-Whitney classes and spin status of RP^m")
    p.add_argument("--rp", type=int, required=True)
    p.set_defaults(func=cmd_sw)

    p = sub.add_parser("export", help="print a dataset or model in canonical JSON")
    _add_source(p)
    p.set_defaults(func=cmd_export)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SignError, models.ModelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ComplexError, DeformationError, HypothesisError) as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return 1
    except (DatasetError, NovikovError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
