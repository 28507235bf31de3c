import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from fracclifft.cli import RunConfig, build_parser, main


def _run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def _table(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    rows = list(csv.DictReader(io.StringIO("\n".join(lines))))
    meta = dict(ln[2:].split("=", 1) for ln in text.splitlines() if ln.startswith("# "))
    return rows, meta


# kernel


def test_kernel_both_routes(capsys):
    code, out, err = _run(["kernel", "--m", "2", "--alpha", "1.5708", "--beta", "1.5708", "--route", "both", "--grid-n", "7"], capsys)
    assert code == 0
    rows, _ = _table(out)
    assert len(rows) == 49
    assert max(float(r["discrepancy"]) for r in rows) <= 1e-9
    assert err.startswith("max discrepancy")
    assert list(rows[0]) == ["x1", "x2", "y1", "y2", "scalar_re", "scalar_im", "e1e2_re", "e1e2_im", "discrepancy"]


def test_kernel_beta_zero_is_scalar(capsys):
    code, out, _ = _run(["kernel", "--m", "4", "--alpha", "0.9", "--beta", "0", "--grid-n", "4"], capsys)
    assert code == 0
    rows, _ = _table(out)
    biv = [k for k in rows[0] if k.startswith("e")]
    assert len(biv) == 12
    assert all(float(r[k]) == 0.0 for r in rows for k in biv)


def test_kernel_odd_closed_refused(capsys):
    code, _, err = _run(["kernel", "--m", "3", "--route", "closed"], capsys)
    assert code != 0
    assert "closed form requires even m" in err


def test_kernel_pi_fraction_and_17_digits(capsys):
    _, a, _ = _run(["kernel", "--m", "2", "--alpha", "1/2", "--beta", "1/3", "--pi-fraction", "--grid-n", "3"], capsys)
    _, b, _ = _run(["kernel", "--m", "2", "--alpha", repr(math.pi / 2), "--beta", repr(math.pi / 3), "--grid-n", "3"], capsys)
    assert a == b
    rows, _ = _table(a)
    assert any(len(r["scalar_re"].lstrip("-").replace(".", "").lstrip("0").split("e")[0]) == 17 for r in rows)


def test_kernel_input_file_and_json(tmp_path, capsys):
    pairs = tmp_path / "pairs.csv"
    pairs.write_text("1,0,0,1\n0.5,0.2,-0.3,0.4\n", encoding="utf-8")
    out_file = tmp_path / "k.json"
    code, _, _ = _run(["kernel", "--m", "2", "--alpha", "1/2", "--beta", "1/2", "--pi-fraction", "-i", str(pairs), "-o", str(out_file), "--format", "json"], capsys)
    assert code == 0
    data = json.loads(out_file.read_text(encoding="utf-8"))
    assert len(data) == 2
    first = data[0]["value"]["coeffs"]
    assert first["0"][0] == pytest.approx(math.cos(1), abs=1e-14)
    assert first["3"][0] == pytest.approx(math.sin(1), abs=1e-14)


def test_kernel_bad_point(capsys):
    code, _, err = _run(["kernel", "--m", "2", "--y", "1,2,3"], capsys)
    assert code == 2 and "expected 2 coordinates" in err


# transform


def test_transform_gaussian_ratio(capsys):
    code, out, _ = _run(["transform", "--m", "2", "--alpha", "0.8", "--beta", "2.1", "--function", "psi:even:0:0", "--points", "0.5,0.25;-1,0.3", "--nodes-per-axis", "96"], capsys)
    assert code == 0
    rows, meta = _table(out)
    assert meta["under_resolved"] == "False"
    for r in rows:
        assert complex(float(r["ratio_re"]), float(r["ratio_im"])) == pytest.approx(1.0, abs=1e-6)


def test_transform_odd_ratio(capsys):
    alpha, beta = 0.8, 2.1
    code, out, _ = _run(["transform", "--m", "2", "--alpha", str(alpha), "--beta", str(beta), "--function", "psi:odd:0:0", "--points", "0.5,0.25", "--nodes-per-axis", "96"], capsys)
    rows, _ = _table(out)
    expected = np.exp(-1j * alpha) * np.exp(1j * beta)
    assert complex(float(rows[0]["ratio_re"]), float(rows[0]["ratio_im"])) == pytest.approx(expected, abs=1e-6)


def test_transform_exceptional_parity(capsys):
    code, out, _ = _run(["transform", "--m", "2", "--alpha", "1", "--beta", "0", "--pi-fraction", "--function", "psi:odd:0:0", "--points", "0.5,0.25"], capsys)
    assert code == 0
    rows, meta = _table(out)
    assert meta["route"] == "exceptional"
    g = math.exp(-(0.25 + 0.0625) / 2)
    assert float(rows[0]["e1_re"]) == pytest.approx(-0.5 * g, abs=1e-15)
    assert float(rows[0]["ratio_re"]) == pytest.approx(-1.0, abs=1e-15)


def test_transform_manifest_json(tmp_path, capsys):
    manifest = {"params": {"alpha": 1.0, "beta": 0.4, "m": 2}, "quadrature": {"nodes_per_axis": 96},
                "function": {"kind": "psi", "parity": "even", "j": 1, "k": 0}, "output_points": [[0.2, 0.1]]}
    path = tmp_path / "m.json"
    path.write_text(json.dumps(manifest), encoding="utf-8")
    code, out, _ = _run(["transform", "--manifest", str(path), "--format", "json"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["meta"]["eigenvalue"] == pytest.approx([math.cos(2.0), -math.sin(2.0)])
    assert data["results"][0]["ratio"] == pytest.approx(data["meta"]["eigenvalue"], abs=1e-8)


def test_transform_bad_function(capsys):
    code, _, err = _run(["transform", "--function", "gauss"], capsys)
    assert code == 2 and "psi:PARITY" in err


# basis


def test_basis_json(capsys):
    code, out, _ = _run(["basis", "--m", "2", "--parity", "odd", "--j", "1", "--k", "2", "--ell", "1"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["eigenvalues"] == {"H": 5, "Gamma": 3}
    assert data["gaussian"] is True and data["m"] == 2


# verify


def test_verify_subset_and_exit_code(capsys):
    code, out, _ = _run(["verify", "--only", "pde_first"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 2 and all(ln.startswith("PASS pde_first_order") for ln in lines)


def test_verify_json_reproducible(capsys):
    _, a, _ = _run(["verify", "--only", "laguerre", "--seed", "7", "--json"], capsys)
    _, b, _ = _run(["verify", "--only", "laguerre", "--seed", "7", "--json"], capsys)
    assert a == b
    rep = json.loads(a)
    assert rep["name"] == "laguerre_hankel" and rep["passed"] is True


# configuration


def test_config_round_trip(tmp_path, capsys):
    code, out, _ = _run(["transform", "--m", "2", "--alpha", "1/3", "--pi-fraction", "--seed", "5", "--dump-config"], capsys)
    assert code == 0
    cfg = RunConfig.from_json(out)
    assert RunConfig.from_json(cfg.to_json()) == cfg
    assert cfg.angle("alpha") == pytest.approx(math.pi / 3, rel=1e-15)
    assert cfg.options["function"] == "psi:even:0:0:0"
    path = tmp_path / "cfg.json"
    path.write_text(out, encoding="utf-8")
    code, again, _ = _run(["transform", "--config", str(path), "--dump-config"], capsys)
    assert RunConfig.from_json(again) == cfg
    with pytest.raises(ValueError):
        RunConfig.from_json('{"subcommand": "kernel", "colour": 1}')


def test_unknown_flag_and_help(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["kernel", "--bogus"])
    assert exc.value.code != 0
    with pytest.raises(SystemExit):
        build_parser().parse_args(["verify", "--help"])
    out = capsys.readouterr().out
    for flag in ("--only", "--json", "--full", "--threads", "--seed", "--pi-fraction"):
        assert flag in out


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fracclifft.cli", "basis", "--m", "2"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["eigenvalues"] == {"H": 0, "Gamma": 0}


def test_verify_default_run_passes(capsys):
    code, out, _ = _run(["verify"], capsys)
    assert code == 0
    assert len(out.strip().splitlines()) == 22
    assert "FAIL" not in out
