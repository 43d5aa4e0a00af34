import csv
import io
import json
import os
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from hankelspec.cli import main
from hankelspec.hankel_analysis import AnalysisReport
from hankelspec.jsonio import decode_coefficients, decode_complex, encode_coefficients
from hankelspec.symbol_synthesis import SpectralData, random_spectral_data

GOLDEN = Path(__file__).parent / "golden"

RATIONAL = {
    "v": 1,
    "s": [2.0],
    "s_tilde": [1.0],
    "psi": [{"phase": 0.0, "zeros": [], "atoms": []}],
    "psi_tilde": [{"phase": 0.0, "zeros": [], "atoms": []}],
}


def run(*args, stdin=None, env=None):
    full_env = dict(os.environ, **(env or {}))
    return subprocess.run(
        [sys.executable, "-m", "hankelspec", *args],
        input=stdin,
        capture_output=True,
        text=True,
        env=full_env,
    )


@pytest.fixture
def lam_file(tmp_path):
    p = tmp_path / "lambda.json"
    p.write_text(json.dumps(RATIONAL))
    return p


def test_synthesize_happy_path(lam_file, tmp_path):
    out = tmp_path / "coeffs.json"
    assert main(["synthesize", "--in", str(lam_file), "--order", "128", "--out", str(out)]) == 0
    obj = json.loads(out.read_text())
    c = decode_coefficients(obj)
    assert c.shape == (128,)
    assert np.max(np.abs(c - 3 / 2.0 ** (np.arange(128) + 1))) <= 1e-12
    assert obj["tail"] <= 1e-15


def test_synthesize_trace_and_csv(lam_file, tmp_path, capsys):
    trace = tmp_path / "trace.csv"
    assert main(["synthesize", "--in", str(lam_file), "--order", "16", "--no-strict", "--csv", "--trace", str(trace)]) == 0
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert rows[0] == ["n", "re", "im"] and len(rows) == 17
    assert float(rows[2][1]) == pytest.approx(0.75)
    assert len(trace.read_text().splitlines()) == 65


def test_synthesize_tail_error(lam_file, capsys):
    assert main(["synthesize", "--in", str(lam_file), "--order", "16"]) == 1
    err = json.loads(capsys.readouterr().err)
    assert err["error"]["kind"] == "TailTooLarge"


def test_roundtrip_command(lam_file, capsys):
    assert main(["roundtrip", "--in", str(lam_file), "--order", "256"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["passed"]
    assert all(report["errors"][k] <= report["thresholds"][k] for k in report["errors"])


def test_analyze_empty_exits_1(tmp_path):
    p = tmp_path / "empty-coeffs.json"
    p.write_text(json.dumps({"coefficients": [0, 0, 0, 0]}))
    proc = run("analyze", "--in", str(p))
    assert proc.returncode == 1
    assert json.loads(proc.stderr.strip().splitlines()[-1])["error"]["kind"] == "EmptySpectrum"


def test_analyze_from_stdin():
    coeffs = encode_coefficients(3 / 2.0 ** (np.arange(128) + 1))
    proc = run("analyze", "--in", "-", stdin=json.dumps(coeffs))
    assert proc.returncode == 0, proc.stderr
    rep = AnalysisReport.from_json(json.loads(proc.stdout))
    assert rep.sigma_H[0][0] == pytest.approx(2.0, abs=1e-10)
    assert rep.to_json() == json.loads(proc.stdout)


def test_usage_errors(capsys):
    assert main([]) == 2
    assert main(["frobnicate"]) == 2
    assert main(["synthesize", "--order", "12", "--json", "{}"]) == 2
    assert main(["analyze"]) == 2
    assert main(["analyze", "--in", "/nonexistent/file.json"]) == 2
    assert json.loads(capsys.readouterr().err.strip().splitlines()[-1])["error"]["kind"] == "UsageError"


def test_schema_error(capsys):
    assert main(["synthesize", "--json", '{"s": [1]}']) == 1
    assert json.loads(capsys.readouterr().err)["error"]["kind"] == "InvalidSpectralData"
    assert main(["analyze", "--json", "not json"]) == 1


def test_cauchy_report(capsys):
    assert main(["cauchy-report", "--json", '{"s": [3, 1], "s_tilde": [2, 0.5]}', "--samples", "2000", "--seed", "4"]) == 0
    first = json.loads(capsys.readouterr().out)
    assert set(first) == {"n", "min_sigma", "samples", "worst_point"}
    assert first["min_sigma"] > 0 and first["samples"] == 4000
    main(["cauchy-report", "--json", '{"s": [3, 1], "s_tilde": [2, 0.5]}', "--samples", "2000", "--seed", "4"])
    assert json.loads(capsys.readouterr().out) == first


def test_verify_small(capsys):
    code = main(["verify", "--seed", "1", "--trials", "1", "--max-n", "3", "--max-degree", "1", "--max-order", "32"])
    report = json.loads(capsys.readouterr().out)
    assert code == 0 and report["passed"]
    assert len(report["checks"]) == 22


def test_verify_rejects_caps(capsys):
    assert main(["verify", "--max-n", "12"]) == 2


def _rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_sample_identity_golden(capsys):
    assert main(["sample", "--json", '{"coefficients": [0, 1]}', "--points", "4"]) == 0
    text = capsys.readouterr().out
    assert text == (GOLDEN / "sample_z_4.csv").read_text()
    vals = np.array([[float(x) for x in r[1:3]] for r in _rows(text)[1:]])
    assert np.allclose(vals, [[1, 0], [0, 1], [-1, 0], [0, -1]], atol=1e-15)
    assert "\r" not in text


def test_sample_rational_golden(capsys):
    assert main(["sample", "--json", json.dumps(RATIONAL), "--points", "8"]) == 0
    text = capsys.readouterr().out
    assert text == (GOLDEN / "sample_rational_8.csv").read_text()
    for t, re_, im, ab in (map(float, r) for r in _rows(text)[1:]):
        exact = 3 / (2 - np.exp(1j * t))
        assert abs(complex(re_, im) - exact) <= 1e-14 and abs(ab - abs(exact)) <= 1e-14


def test_sample_constant(capsys):
    main(["sample", "--json", '{"coefficients": [{"re": 0.5, "im": -2}]}', "--points", "5"])
    rows = _rows(capsys.readouterr().out)[1:]
    assert {(r[1], r[2]) for r in rows} == {("0.5", "-2")}


def test_sample_atom_on_grid(capsys):
    lam = dict(RATIONAL, psi=[{"phase": 0.0, "zeros": [], "atoms": [{"angle": 0.0, "mass": 1.0}]}])
    assert main(["sample", "--json", json.dumps(lam), "--points", "8"]) == 1
    assert json.loads(capsys.readouterr().err)["error"]["kind"] == "AtomSingularity"


def test_log_env_var():
    lam = dict(RATIONAL, psi=[{"phase": 0.0, "zeros": [{"re": 0.95, "im": 0}], "atoms": []}])
    proc = run("roundtrip", "--json", json.dumps(lam), "--order", "16", "--no-strict", env={"HST_LOG": "debug"})
    assert "INFO hankelspec: roundtrip at order 16" in proc.stderr
    quiet = run("roundtrip", "--json", json.dumps(lam), "--order", "16", "--no-strict", env={"HST_LOG": "error"})
    assert quiet.stderr == ""


def test_console_script_entry():
    proc = run("--version")
    assert proc.returncode == 0 and proc.stdout.startswith("hankelspec")


def test_spectral_data_json_roundtrip():
    data = random_spectral_data(3, np.random.default_rng(8), allow_singular=True)
    text = json.dumps(data.to_json())
    assert SpectralData.from_json(json.loads(text)) == data


def test_coefficient_encodings():
    assert decode_complex({"re": 1, "im": 2}) == 1 + 2j
    assert decode_complex([1, 2]) == 1 + 2j
    assert decode_complex(3) == 3
    c = np.array([1 + 1e-17j, -2.5, 3j])
    assert np.array_equal(decode_coefficients(json.loads(json.dumps(encode_coefficients(c)))), c)
