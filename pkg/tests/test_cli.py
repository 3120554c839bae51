import subprocess
import sys
from pathlib import Path

import pytest

from tscale.cli import run

SCALES = Path(__file__).resolve().parent.parent / "scales"
LOG_SINE = "sin(pi*ln(abs(t))/ln(0.5))"


def sc(name):
    return str(SCALES / name)


def call(capsys, *argv):
    code = run([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_axioms_reports_fifteen_properties(capsys):
    code, out, _ = call(capsys, "axioms", "--scale", sc("qz.scale"), "--shift", "multiplicative")
    lines = [l for l in out.splitlines() if l.startswith(("PASS", "FAIL"))]
    assert code == 0 and len(lines) == 15
    assert all(l.startswith("PASS") for l in lines)
    assert {l.split()[1] for l in lines} >= {"P.1", "P.5", "lemma.i", "lemma.x"}


def test_shift_from_scale_file(capsys):
    code, out, _ = call(capsys, "axioms", "--scale", sc("signed_squares.scale"), "--samples", "200")
    assert code == 0


def test_broken_user_pair_fails_with_counterexample(capsys, tmp_path):
    out_csv = tmp_path / "ax.csv"
    code, out, _ = call(capsys, "axioms", "--scale", sc("z.scale"), "--shift",
                        'user plus="t" minus="t" t0=0', "--samples", "200", "--out", out_csv)
    assert code == 1
    assert "FAIL P.2" in out and "counterexample" in out
    text = out_csv.read_text()
    assert text.startswith("t,s,lhs,rhs,residual,check_name,u")
    assert "P.2" in text


def test_verify_fn(capsys):
    base = ["verify-fn", "--scale", sc("rstar.scale"), "--shift", "signed_multiplicative",
            "--fn", LOG_SINE]
    assert call(capsys, *base, "--T", "4")[0] == 0
    assert call(capsys, *base, "--T", "2")[0] == 1


def test_verify_delta_fn(capsys):
    base = ["verify-delta-fn", "--scale", sc("powers2.scale"), "--shift", "multiplicative"]
    assert call(capsys, *base, "--fn", "1/t", "--T", "2")[0] == 0
    assert call(capsys, *base, "--fn", "1", "--T", "2")[0] == 1


def test_classic_period(capsys):
    assert call(capsys, "classic-period", "--scale", sc("hz.scale"), "--P", "0.5")[0] == 0
    assert call(capsys, "classic-period", "--scale", sc("blocks.scale"), "--P", "2")[0] == 0
    code, out, _ = call(capsys, "classic-period", "--scale", sc("qz.scale"), "--P", "1")
    assert code == 1 and "counterexample: t=0.0" in out


def test_ts_period(capsys):
    code, out, _ = call(capsys, "ts-period", "--scale", sc("blocks4.scale"))
    assert code == 0 and "P=4.0" in out
    code, out, _ = call(capsys, "ts-period", "--scale", sc("rstar.scale"))
    assert code == 0 and "no period" in out
    code, out, _ = call(capsys, "ts-period", "--scale", sc("twoN.scale"))
    assert code == 1 and "not periodic" in out
    assert call(capsys, "ts-period", "--scale", sc("qz.scale"), "--P", "2")[0] == 0


def test_ts_period_user_pair_needs_candidate(capsys):
    user = 'user plus="s*t" minus="t/s" t0=1'
    code, _, err = call(capsys, "ts-period", "--scale", sc("powers2.scale"), "--shift", user)
    assert code == 2 and "--P" in err
    assert call(capsys, "ts-period", "--scale", sc("powers2.scale"), "--shift", user,
                "--P", "2")[0] == 0


def test_commute_and_structure(capsys):
    for name in ("signed_squares.scale", "qz.scale", "blocks4.scale", "logistic.scale"):
        assert call(capsys, "commute", "--scale", sc(name))[0] == 0
        assert call(capsys, "structure", "--scale", sc(name))[0] == 0


def test_integrate(capsys, tmp_path):
    out_csv = tmp_path / "int.csv"
    code, out, _ = call(capsys, "integrate", "--scale", sc("powers2.scale"), "--fn", "1/t",
                        "--range", "1:1024", "--out", out_csv)
    assert code == 0 and "value 10.0" in out
    assert out_csv.read_text().splitlines()[1].split(",")[2] == "10.0"


def test_invariance(capsys):
    base = ["invariance", "--scale", sc("powers2.scale"), "--T", "2"]
    assert call(capsys, *base, "--fn", "1/t", "--at", "1,4,64")[0] == 0
    code, out, _ = call(capsys, *base, "--fn", "1", "--at", "4")
    assert code == 1 and "FAIL integral_invariance 3.0 1" in out


def test_substitute(capsys):
    code, out, _ = call(capsys, "substitute", "--scale", sc("powers2.scale"), "--fn", "1/(4*t)",
                        "--nu", "4*t", "--range", "1:4")
    assert code == 0 and "PASS substitution 0.0 1" in out
    assert call(capsys, "substitute", "--scale", sc("blocks4.scale"), "--fn", "t", "--T", "4",
                "--range", "1:4")[0] == 0


def test_sample_negative_range_and_points(capsys, tmp_path):
    out_csv = tmp_path / "curve.csv"
    code, _, err = call(capsys, "sample", "--fn", LOG_SINE, "--range", "-5:5", "--points", "11",
                        "--at", "sqrt(2),1", "--out", out_csv)
    assert code == 0
    lines = out_csv.read_text().splitlines()
    assert lines[0] == "t,f"
    # t = 0 is undefined and skipped; t = 1 is already on the grid
    assert len(lines) == 1 + 10 + 1 and "1 undefined" in err


def test_sample_on_scale(capsys):
    code, out, _ = call(capsys, "sample", "--scale", sc("powers2.scale"), "--fn", "t^2",
                        "--range", "1:8")
    assert code == 0
    assert out.splitlines() == ["t,f", "1.0,1.0", "2.0,4.0", "4.0,16.0", "8.0,64.0"]


@pytest.mark.parametrize("argv", [
    ["axioms"],
    ["bogus"],
    ["verify-fn", "--scale", "nope.scale", "--fn", "t", "--T", "2"],
    ["verify-fn", "--scale", "SC:powers2.scale", "--T", "2"],
    ["verify-fn", "--scale", "SC:powers2.scale", "--fn", "2t", "--T", "2"],
    ["verify-fn", "--scale", "SC:powers2.scale", "--fn", "t", "--T", "3"],
    ["axioms", "--scale", "SC:z.scale", "--shift", "multiplicative"],
    ["axioms", "--scale", "SC:z.scale", "--shift", "nonsense"],
    ["axioms", "--scale", "SC:z.scale", "--tol", "-1"],
    ["axioms", "--scale", "SC:z.scale", "--samples", "0"],
    ["sample", "--fn", "t"],
    ["sample", "--fn", "t", "--range", "-1:1", "--spacing", "log"],
])
def test_usage_errors(capsys, argv):
    argv = [a.replace("SC:", str(SCALES) + "/") for a in argv]
    assert run(argv) == 2
    capsys.readouterr()


def test_window_exhausted_exit_code(capsys):
    code, _, err = call(capsys, "substitute", "--scale", sc("powers2.scale"), "--shift",
                        "multiplicative", "--fn", "1", "--T", "4", "--range", "1:1048576")
    assert code == 3 and "window exhausted" in err


def test_help_exits_zero(capsys):
    assert run(["--help"]) == 0
    capsys.readouterr()


def _csv_for(tmp_path, capsys, name, *extra, env_seed=None, monkeypatch=None):
    path = tmp_path / name
    if monkeypatch is not None:
        if env_seed is None:
            monkeypatch.delenv("TSCALE_SEED", raising=False)
        else:
            monkeypatch.setenv("TSCALE_SEED", env_seed)
    code = run(["verify-fn", "--scale", sc("rstar.scale"), "--shift", "signed_multiplicative",
                "--fn", LOG_SINE, "--T", "2", "--samples", "50", "--out", str(path), *extra])
    capsys.readouterr()
    assert code == 1
    return path.read_bytes()


def test_csv_is_deterministic(tmp_path, capsys, monkeypatch):
    a = _csv_for(tmp_path, capsys, "a.csv", monkeypatch=monkeypatch)
    b = _csv_for(tmp_path, capsys, "b.csv", monkeypatch=monkeypatch)
    assert a == b
    c = _csv_for(tmp_path, capsys, "c.csv", "--seed", "7", monkeypatch=monkeypatch)
    assert c != a


def test_seed_environment_override(tmp_path, capsys, monkeypatch):
    flag = _csv_for(tmp_path, capsys, "flag.csv", "--seed", "7", monkeypatch=monkeypatch)
    env = _csv_for(tmp_path, capsys, "env.csv", "--seed", "99", env_seed="7",
                   monkeypatch=monkeypatch)
    assert flag == env
    monkeypatch.setenv("TSCALE_SEED", "x")
    assert run(["axioms", "--scale", sc("z.scale")]) == 2
    capsys.readouterr()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "tscale", "classic-period", "--scale",
                           sc("z.scale"), "--P", "1"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("PASS classic_period")
