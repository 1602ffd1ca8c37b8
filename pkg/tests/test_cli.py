import subprocess
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from kgoursat.cli import SUBCOMMANDS, main, parse_args
from kgoursat.errors import UsageError
from kgoursat.field import read_field_csv


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_valid_specs():
    a = parse_args(["solve", "--f", "ramp", "--g", "zero", "--xmax", "2", "--ymin", "-2",
                    "--nx", "41", "--ny", "41", "--method", "riemann"])
    assert a.command == "solve" and a.nx == 41 and a.f.kind == "ramp"
    a = parse_args(["regime", "--q", "1", "--theta1", "0.5", "--theta2", "1.5"])
    assert a.q == [1.0]


def test_parse_missing_flag_is_named():
    with pytest.raises(UsageError, match="--g"):
        parse_args(["solve", "--f", "ramp"])
    with pytest.raises(UsageError, match="--wat"):
        parse_args(["regime", "--q", "1", "--theta1", "1", "--theta2", "1", "--wat", "3"])


def test_regime_line(capsys):
    code, out, _ = run(["regime", "--q", "1", "--theta1", "0.5", "--theta2", "1.5"], capsys)
    assert code == 0 and out.strip() == "UniqueForced Thm-main-1-0"


def test_incompatible_corner_exit(capsys):
    code, _, err = run(["solve", "--f", "one", "--g", "zero", "--xmax", "1", "--ymin", "-1"], capsys)
    assert code == 3 and "CompatibilityError" in err


def test_convergence_exit(capsys):
    code, _, err = run(["solve", "--f", "ramp", "--g", "zero", "--xmax", "2", "--ymin", "-2",
                        "--method", "picard", "--max-iter", "2"], capsys)
    assert code == 2 and "ConvergenceError" in err


def test_usage_exit(capsys):
    assert run(["solve", "--f", "ramp"], capsys)[0] == 1
    assert run([], capsys)[0] == 1
    assert run(["bogus"], capsys)[0] == 1
    assert run(["solve", "--f", "ramp", "--g", "zero", "--xmax", "1", "--ymin", "-1",
                "--nodes-per-panel", "40"], capsys)[0] == 1


def test_solve_writes_deterministic_csv(tmp_path, capsys):
    argv = ["solve", "--f", "ramp", "--g", "poly:0,1", "--xmax", "1", "--ymin", "-1",
            "--nx", "6", "--ny", "5"]
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(argv + ["--out", str(p1)], capsys)[0] == 0
    assert run(argv + ["--out", str(p2)], capsys)[0] == 0
    t1, t2 = p1.read_text(), p2.read_text()
    assert t1.replace("a.csv", "") == t2.replace("b.csv", "")
    assert any(line.startswith("# argv: kgoursat solve") for line in t1.splitlines())
    u = read_field_csv(p1)
    assert u.grid.shape == (6, 5)
    assert np.allclose(u.row(0.0), np.clip(u.grid.xs, 0, 1))


def test_picard_and_riemann_agree_through_cli(tmp_path, capsys):
    base = ["solve", "--f", "ramp", "--g", "zero", "--xmax", "2", "--ymin", "-2", "--nx", "11", "--ny", "11"]
    run(base + ["--out", str(tmp_path / "r.csv")], capsys)
    run(base + ["--method", "picard", "--out", str(tmp_path / "p.csv")], capsys)
    r = read_field_csv(tmp_path / "r.csv")
    p = read_field_csv(tmp_path / "p.csv")
    assert np.max(np.abs(r.values - p.values)) <= 1e-6


def test_residual_and_glue(tmp_path, capsys):
    code, out, _ = run(["residual", "--f", "ramp", "--g", "zero", "--nx", "11", "--ny", "11"], capsys)
    assert code == 0 and float(out.split()[1]) <= 1e-6
    code, out, _ = run(["residual", "--f", "one", "--g", "one", "--rect", "0,1,-1,0"], capsys)
    assert code == 0 and float(out.split()[-1]) <= 1e-8
    code, out, _ = run(["glue", "--line", "horizontal:0", "--lower-f", "ramp", "--lower-g", "zero",
                        "--upper-f", "ramp", "--upper-g", "poly:0,0,1", "--xmin", "0", "--xmax", "2"], capsys)
    assert code == 0 and float(out.split()[1]) <= 1e-6
    code, _, err = run(["glue", "--line", "horizontal:0", "--lower-f", "one", "--lower-g", "one",
                        "--upper-f", "poly:2", "--upper-g", "poly:2"], capsys)
    assert code == 3 and "ContinuityError" in err
    assert run(["glue", "--line", "slanted:0", "--lower-f", "one", "--lower-g", "one",
                "--upper-f", "one", "--upper-g", "one"], capsys)[0] == 1


def test_laplace_commands(tmp_path, capsys):
    code, out, _ = run(["laplace", "--f", "one", "--zeta", "2"], capsys)
    assert code == 0 and abs(float(out.split()[2]) - 0.5) <= 1e-11
    code, _, err = run(["laplace", "--f", "poly:1", "--zeta", "2"], capsys)
    assert code == 3 and "MetadataError" in err
    out_csv = tmp_path / "e.csv"
    code, out, _ = run(["evolve-check", "--f", "ramp", "--nx", "4", "--out", str(out_csv)], capsys)
    assert code == 0 and float(out.split()[1]) <= 1e-5
    lines = [l for l in out_csv.read_text().splitlines() if not l.startswith("#")]
    assert lines[0] == "re_zeta,im_zeta,y,re_lhs,im_lhs,re_rhs,im_rhs,deviation"
    assert len(lines) == 10


def test_bound_sweep_csv(tmp_path, capsys):
    p = tmp_path / "b.csv"
    code, out, _ = run(["bound-sweep", "--out", str(p)], capsys)
    assert code == 0 and out.strip() == "cells 81 violations 0"
    rows = [l.split(",") for l in p.read_text().splitlines() if not l.startswith("#")]
    assert rows[0] == ["q", "theta", "sigma", "integral", "bound", "ok"]
    assert len(rows) == 82 and all(r[-1] == "true" for r in rows[1:])


def test_regime_csv(tmp_path, capsys):
    p = tmp_path / "r.csv"
    code, out, _ = run(["regime", "--q", "1,0.5", "--theta1", "0.5", "--theta2", "1.5,20", "--out", str(p)], capsys)
    assert code == 0 and len(out.splitlines()) == 4
    rows = [l for l in p.read_text().splitlines() if not l.startswith("#")]
    assert rows[0] == "q,theta1,theta2,verdict,theorem"
    assert rows[1].endswith("UniqueForced,Thm-main-1-0")
    assert rows[4].endswith("Unknown,Thm-main-3")


def test_analysis_commands(capsys):
    code, out, _ = run(["covering", "--Y", "arith:1,300", "--M", "1", "--q", "0.75", "--y1", "-1", "--depth", "-250"], capsys)
    assert code == 0 and out.strip() == "true"
    code, out, _ = run(["covering", "--Y", "geom:2,11", "--M", "1", "--q", "0.75", "--y1", "-1", "--depth", "-1000"], capsys)
    assert code == 0 and out.startswith("false")
    code, _, err = run(["covering", "--Y", "0,1", "--M", "1", "--q", "0.75", "--y1", "-1", "--depth", "-2"], capsys)
    assert code == 3 and "SpecError" in err
    code, out, _ = run(["legendre", "--theta2", "1", "--t", "1,10"], capsys)
    assert code == 0 and out.splitlines()[0].endswith("= 0")
    code, out, _ = run(["bessel", "--a", "0", "--x", "1", "--y", "1"], capsys)
    assert code == 0 and "0.2238907791412356" in out
    code, _, err = run(["bessel", "--a", "0", "--x", "20", "--y", "20"], capsys)
    assert code == 3 and "DomainError" in err


def test_growth_demo(tmp_path, capsys):
    code, out, _ = run(["growth-demo", "--xmax", "3", "--ymin", "-3", "--nx", "16", "--ny", "16",
                        "--out", str(tmp_path / "u1.csv")], capsys)
    words = out.split()
    assert code == 0 and float(words[1]) <= 1e-8 and float(words[3]) <= 1.1
    assert read_field_csv(tmp_path / "u1.csv").grid.shape == (16, 16)


def test_every_subcommand_has_help():
    for cmd in SUBCOMMANDS:
        out = subprocess.run([sys.executable, "-m", "kgoursat", cmd, "--help"], capture_output=True, text=True)
        assert out.returncode == 0 and "usage" in out.stdout


junk = st.text(alphabet=st.characters(blacklist_categories=("Cs",)), max_size=12)


@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(cmd=st.sampled_from(SUBCOMMANDS), flags=st.lists(st.tuples(st.sampled_from(
    ["--f", "--g", "--q", "--theta1", "--theta2", "--xmax", "--ymin", "--nx", "--zeta", "--t",
     "--Y", "--M", "--line", "--a", "--x", "--y", "--bogus"]), junk), max_size=4))
def test_malformed_input_never_crashes(cmd, flags, capsys):
    argv = [cmd] + [tok for pair in flags for tok in pair]
    code = main(argv)
    capsys.readouterr()
    assert code in (0, 1, 2, 3)
