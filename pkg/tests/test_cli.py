import csv
import io
import json
import math
import subprocess
import sys
import time

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lowlying import numeric, selftest
from lowlying.cli import main
from lowlying.output import fmt_float


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def table(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def test_moments_rows(capsys):
    code, out, _ = run(["moments", "--q", "101", "--s", "0.75", "--m", "1,2,3,5"], capsys)
    rows = table(out)
    assert code == 0 and len(rows) == 4
    assert all(r["pass"] == "true" for r in rows)
    assert out.startswith("# tool: lowlying\n# version: 0.1.0\n# command: moments\n")


def test_moments_central_value(capsys):
    code, out, _ = run(["moments", "--q", "101", "--s", "0.5", "--m", "1"], capsys)
    assert code == 0
    assert float(table(out)[0]["brute_re"]) == pytest.approx(235.47, abs=0.01)
    assert float(table(out)[0]["main_re"]) == pytest.approx(196.8, abs=0.1)


def test_not_prime_is_usage_error(capsys):
    code, _, err = run(["moments", "--q", "4"], capsys)
    assert code == 2 and "not prime" in err


def test_bad_flag_exits_2(capsys):
    with pytest.raises(SystemExit) as e:
        main(["moments", "--bogus"])
    assert e.value.code == 2


def test_ceiling_failure_exits_1(capsys):
    code, out, err = run(["moments", "--q", "101", "--s", "0.75", "--ceiling", "0.01"], capsys)
    assert code == 1 and table(out)[0]["pass"] == "false"


def test_density_range(capsys):
    code, out, _ = run(["density", "--q-range", "1009:5003", "--q-count", "5", "--s", "0.5,0.75",
                        "--phi", "triangle:0.3333"], capsys)
    rows = table(out)
    assert code == 0 and len(rows) == 10
    assert rows[0]["q"] == "1009" and rows[-1]["q"] == "5003"
    for r in rows:
        L = math.log(int(r["q"]))
        target = 0.7037 if r["s"] == "0.5" else 1.0
        assert abs(float(r["value"]) - target) <= 5 / L


def test_density_support_flag(capsys):
    code, out, err = run(["density", "--q", "101", "--phi", "triangle:0.9", "--s", "0.5"], capsys)
    assert code == 0
    assert table(out)[0]["support_ok"] == "false"
    assert "support hypothesis" in err


def test_density_zero_mode_needs_height(capsys):
    code, _, err = run(["density", "--q", "101", "--mode", "zero"], capsys)
    assert code == 2 and "--T" in err


def test_density_json(capsys):
    code, out, _ = run(["density", "--q", "211", "--s", "0.6", "--format", "json"], capsys)
    doc = json.loads(out)
    assert code == 0 and set(doc) == {"meta", "rows"}
    assert doc["meta"]["config"]["q"] == [211]
    assert list(doc["rows"][0])[:3] == ["q", "s", "phi"]


def test_zeros_export(capsys):
    code, out, _ = run(["zeros", "--q", "3", "--T", "10"], capsys)
    assert code == 0
    rows = table(out)
    assert [r["gamma"] for r in rows] == ["-8.03973715568", "8.03973715568"]


def test_fourier_check(capsys):
    code, out, _ = run(["fourier-check"], capsys)
    rows = table(out)
    assert code == 0 and all(r["pass"] == "true" for r in rows)
    assert len([r for r in rows if r["check"].startswith("window_hat")]) == 5


def test_output_is_deterministic(tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert main(["density", "--q", "1009,2003", "--s", "0.5,0.9", "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_timing_only_on_request(capsys):
    _, out, _ = run(["density", "--q", "101", "--timing"], capsys)
    assert "# wall_time_s:" in out
    _, out, _ = run(["density", "--q", "101"], capsys)
    assert "wall_time" not in out


def test_fmt_float_cases():
    assert fmt_float(0.1) == "0.1"
    assert fmt_float(1 / 3) == "0.333333333333"
    assert fmt_float(2.0) == "2"
    assert fmt_float(float("nan")) == "nan"
    assert fmt_float(-1e-20) == "-1e-20"


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_fmt_float_precision(x):
    s = fmt_float(x)
    assert len(s.lstrip("-").split("e")[0].replace(".", "").lstrip("0")) <= 12
    assert float(s) == float(f"{x:.12g}")


def test_selftest_fault_injection(monkeypatch):
    bad = numeric.EM_COEFFS.copy()
    bad[0] *= 1.001
    monkeypatch.setattr(numeric, "EM_COEFFS", bad)
    out = io.StringIO()
    try:
        assert selftest.main(out) == 1
    finally:
        selftest.clear_caches()
    text = out.getvalue()
    assert "FAIL hurwitz_closed_forms" in text and "FAIL hurwitz_half_identity" in text


def test_selftest_subprocess_passes_and_is_repeatable():
    outs = []
    for _ in range(2):
        t0 = time.perf_counter()
        proc = subprocess.run([sys.executable, "-m", "lowlying", "selftest"], capture_output=True, text=True)
        assert proc.returncode == 0, proc.stdout + proc.stderr
        assert time.perf_counter() - t0 <= 300
        outs.append(proc.stdout)
    assert outs[0] == outs[1]
