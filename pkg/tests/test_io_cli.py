import io
import json
import random
import sys

import pytest
from factories import ZZ, random_dataset, random_pbar_setup

from floer_ainfty.ainfty import BETA0, AInftyData
from floer_ainfty.bimodule import build_chain_map_I
from floer_ainfty.cli import main
from floer_ainfty.io import Dataset, DatasetFormatError, dataset_to_json, export_dataset, load_dataset
from floer_ainfty.models import build_qcp, mc_toy, parse_model

MODELS = ["rp:1", "rp:2", "qcp:1", "qcp:3", "poly:3", "toy", "toy-obstructed"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, obj, name="d.json"):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


# ---------------------------------------------------------------------------
# file format


@pytest.mark.parametrize("model", MODELS)
def test_round_trip_byte_identical(model):
    text = export_dataset(parse_model(model))
    ds = load_dataset(text)
    assert ds.algebra == parse_model(model)
    assert export_dataset(ds) == text


def test_round_trip_random_datasets():
    rng = random.Random(1)
    for _ in range(20):
        d = random_dataset(rng)
        text = export_dataset(d)
        assert export_dataset(load_dataset(text)) == text


def test_round_trip_with_blocks():
    ds = Dataset(build_qcp(2).data, bimodule_diagonal=True)
    text = export_dataset(ds)
    back = load_dataset(text)
    assert back.bimodule is not None and back.bimodule_diagonal
    assert export_dataset(back) == text


@pytest.mark.parametrize(
    "mutate, message",
    [
        (lambda r: r.pop("ring"), "ring"),
        (lambda r: r.update(version=2), "version"),
        (lambda r: r.update(extra=1), "extra"),
        (lambda r: r["operations"][0].update(k=-1), "operations"),
        (lambda r: r["operations"][0]["output"].update(c="1/x"), "operations"),
        (lambda r: r["operations"][0].update(inputs=["zz"]), "zz"),
        (lambda r: r["operations"][0].update({"class": "nope"}), "nope"),
        (lambda r: r["generators"].append({"name": "a", "degree": 4}), "a"),
        (lambda r: r.update(ring="Z/0"), "Z/0"),
    ],
)
def test_schema_and_validation_errors(mutate, message):
    raw = dataset_to_json(mc_toy())
    mutate(raw)
    with pytest.raises(DatasetFormatError) as info:
        load_dataset(json.dumps(raw))
    assert message in str(info.value)


def test_degree_law_checked_on_load():
    raw = dataset_to_json(mc_toy())
    raw["operations"][1]["output"] = {"a": "1"}
    with pytest.raises(DatasetFormatError, match="degree"):
        load_dataset(json.dumps(raw))


# ---------------------------------------------------------------------------
# check


def test_check_model(capsys):
    code, out, _ = run(capsys, "check", "--model", "qcp:2", "--ainfty", "--symmetry")
    assert code == 0
    rep = json.loads(out)
    assert rep["ok"] and rep["ainfty"]["ok"] and rep["symmetry"]["ok"]


def test_check_mutated_file(capsys, tmp_path):
    raw = dataset_to_json(build_qcp(2).data)
    op = next(o for o in raw["operations"] if o["inputs"] == ["h1", "h1"])
    op["output"] = {"h2": "2"}
    code, out, _ = run(capsys, "check", write(tmp_path, raw), "--max-length", "3")
    assert code == 1
    rep = json.loads(out)
    assert not rep["ok"]
    cell = rep["ainfty"]["first_failure"]
    assert cell is not None and "h1" in cell["inputs"]


def test_check_empty_dataset(capsys, tmp_path):
    path = write(tmp_path, {"version": 1, "ring": "Z", "dim_L": 0, "generators": []})
    code, out, _ = run(capsys, "check", path)
    assert code == 0 and json.loads(out)["ok"]


def test_jobs_do_not_change_output(capsys, monkeypatch, tmp_path):
    raw = dataset_to_json(build_qcp(2).data)
    next(o for o in raw["operations"] if o["inputs"] == ["h1", "h2"])["output"] = {"h0": "-1"}
    path = write(tmp_path, raw)
    base = run(capsys, "check", path, "--max-length", "3", "--jobs", "1")
    assert base[0] == 1
    assert run(capsys, "check", path, "--max-length", "3", "--jobs", "2") == base
    monkeypatch.setenv("FLOER_AINFTY_JOBS", "2")
    assert run(capsys, "check", path, "--max-length", "3") == base


def test_input_errors_exit_2(capsys, tmp_path):
    assert run(capsys, "check", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "check", write(tmp_path, "{not json"))[0] == 2
    assert run(capsys, "check", write(tmp_path, {}))[0] == 2
    assert run(capsys, "check", "--model", "cp:3")[0] == 2
    assert run(capsys, "check")[0] == 2
    assert run(capsys, "check", "--model", "toy", "--bimodule")[0] == 2
    assert run(capsys, "check", "--model", "toy", "--cutoff", "abc")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    code, _, err = run(capsys, "check", write(tmp_path, {}))
    assert "schema" in err


def test_stdin(capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO(export_dataset(build_qcp(1).data)))
    code, out, _ = run(capsys, "check", "-")
    assert code == 0 and json.loads(out)["ok"]


def test_check_bimodule_block(capsys, tmp_path):
    path = write(tmp_path, export_dataset(Dataset(build_qcp(2).data, bimodule_diagonal=True)))
    code, out, _ = run(capsys, "check", path)
    rep = json.loads(out)
    assert code == 0 and rep["bimodule"]["ok"] and rep["bimodule"]["max_sandwich_length"] == 3


def test_check_pbar_block(capsys, tmp_path):
    rng = random.Random(21)
    while True:
        gens, m10, pbar, pol = random_pbar_setup(rng)
        cm = build_chain_map_I(pbar, m10, pol, ZZ, [g.name for g in gens])
        if cm.m1_beta:
            break
    consts = {(1, BETA0, (s,)): dict(row) for s, row in m10.items() if row}
    for beta, f in cm.m1_beta.items():
        for s, row in f.items():
            if row:
                consts[(1, beta, (s,))] = dict(row)
    data = AInftyData(ZZ, 2, gens, consts, classes=sorted(set(pbar) | set(cm.m1_beta)))
    raw = dataset_to_json(Dataset(data, pbar=pbar))
    cutoff = str(pol.energy_cutoff)
    code, out, _ = run(capsys, "check", write(tmp_path, raw), "--pbar", "--cutoff", cutoff)
    rep = json.loads(out)
    assert code == 0, rep
    assert rep["pbar"]["identity_residual"] == {}
    op = next(o for o in raw["operations"] if o["class"] != "0")
    t = next(iter(op["output"]))
    op["output"][t] = str(int(op["output"][t]) + 1)
    code, out, _ = run(capsys, "check", write(tmp_path, raw, "bad.json"), "--pbar", "--cutoff", cutoff)
    assert code == 1 and json.loads(out)["pbar"]["identity_residual"]


# ---------------------------------------------------------------------------
# other commands


def test_homology_examples(capsys):
    code, out, _ = run(capsys, "homology", "--model", "rp:1", "--ring", "Z", "--truncate", "6")
    rep = json.loads(out)
    assert code == 0 and rep["torsion_families"] == 2 and rep["free_rank"] == 0
    assert all(t["c"] == 2 for d in rep["degrees"] for t in d["torsion"])
    code, out, _ = run(capsys, "homology", "--model", "rp:2", "--ring", "F2")
    assert code == 0
    assert [d["free_rank"] for d in json.loads(out)["degrees"]] == [1] * 6
    code, out, _ = run(capsys, "homology", "--model", "rp:2", "--ring", "Q")
    assert code == 0 and json.loads(out)["free_rank"] == 0
    code, out, _ = run(capsys, "homology", "--model", "rp:1", "--ring", "Fp:3")
    assert code == 0 and json.loads(out)["free_rank"] == 0


def test_homology_after_mc(capsys):
    code, out, _ = run(capsys, "homology", "--model", "toy", "--ring", "Q", "--mc")
    assert code == 0 and json.loads(out)["free_rank"] == 0
    code, out, _ = run(capsys, "homology", "--model", "toy-obstructed", "--ring", "Q", "--mc")
    assert code == 1 and json.loads(out)["level"] == "1"


def test_homology_b_file(capsys, tmp_path):
    b = write(tmp_path, {"a": [{"coeff": "-1", "lambda": "1", "mu": 0}]}, "b.json")
    code, out, _ = run(capsys, "homology", "--model", "toy", "--ring", "Q", "--b-file", b)
    assert code == 0, out


def test_homology_square_defect_exit_1(capsys, tmp_path):
    raw = {
        "version": 1,
        "ring": "Z",
        "dim_L": 1,
        "generators": [{"name": "a", "degree": 0}, {"name": "b", "degree": 1}, {"name": "c", "degree": 2}],
        "operations": [
            {"k": 1, "class": "0", "inputs": ["a"], "output": {"b": "1"}},
            {"k": 1, "class": "0", "inputs": ["b"], "output": {"c": "1"}},
        ],
    }
    code, _, err = run(capsys, "homology", write(tmp_path, raw))
    assert code == 1 and "a" in err


def test_homology_ring_errors(capsys):
    assert run(capsys, "homology", "--model", "rp:1", "--ring", "R")[0] == 2
    assert run(capsys, "homology", "--model", "rp:1", "--ring", "Fp:4")[0] == 2


def test_mc_command(capsys):
    code, out, _ = run(capsys, "mc", "--model", "toy", "--cutoff", "5")
    rep = json.loads(out)
    assert code == 0
    assert rep["b"] == {"a": [{"coeff": "-1", "lambda": "1", "mu": 0}]}
    code, out, _ = run(capsys, "mc", "--model", "toy-obstructed", "--cutoff", "5")
    assert code == 1


def test_signs_and_sw(capsys):
    code, out, _ = run(capsys, "signs", "--mu", "4", "--k", "2", "--m", "0", "--degs", "2,2")
    rep = json.loads(out)
    assert code == 0 and rep["tau_sign_main"] == 1 and rep["epsilon"] == 6
    assert run(capsys, "signs", "--mu", "3")[0] == 2
    assert run(capsys, "signs", "--mu", "4", "--degs", "1,x")[0] == 2
    code, out, _ = run(capsys, "sw", "--rp", "5")
    rep = json.loads(out)
    assert code == 0 and rep["w2"] == "x^2" and rep["status"] == "RelSpinNotTauRelSpin"
    assert run(capsys, "sw", "--rp", "0")[0] == 2


def test_export_round_trip(capsys, tmp_path):
    code, out, _ = run(capsys, "export", "--model", "qcp:2")
    assert code == 0
    code, again, _ = run(capsys, "export", "--file", write(tmp_path, out))
    assert again == out


@pytest.mark.parametrize(
    "argv",
    [
        ("check", "--model", "qcp:3", "--symmetry"),
        ("homology", "--model", "rp:3"),
        ("mc", "--model", "toy"),
        ("export", "--model", "rp:2"),
    ],
)
def test_output_deterministic(capsys, argv):
    assert run(capsys, *argv) == run(capsys, *argv)


def test_module_entry_point():
    import subprocess

    res = subprocess.run(
        [sys.executable, "-m", "floer_ainfty", "sw", "--rp", "7"], capture_output=True, text=True, check=False
    )
    assert res.returncode == 0
    assert json.loads(res.stdout)["status"] == "SpinAndTauRelSpin"
