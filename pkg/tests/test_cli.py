import json

import pytest

from latticewh.cli import parse_complex, run


def _run(capsys, argv):
    code = run(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("text, value", [
    ("1+0.2i", 1 + 0.2j), ("0.3i", 0.3j), ("2", 2), ("-1-2i", -1 - 2j), ("1e-1+i", 0.1 + 1j),
])
def test_parse_complex(text, value):
    assert parse_complex(text) == value


def test_dispersion_files(tmp_path, capsys):
    code, out, _ = _run(capsys, ["dispersion", "--ktilde", "1+0.2i", "--samples", "256",
                                 "--out", str(tmp_path)])
    assert code == 0
    rep = json.loads(out)
    assert rep["schema"] == "v1"
    assert len(rep["branch_points"]) == 4
    lines = (tmp_path / "dispersion.csv").read_text().splitlines()
    assert lines[0] == "re_s,im_s,re_q,im_q,re_upsilon,im_upsilon"
    assert len(lines) == 257


def test_analogy_check(capsys):
    code, out, _ = _run(capsys, ["analogy-check", "--problem", "staggered", "--side", "discrete",
                                 "--M", "3", "--N", "2", "--ktilde", "1+0.2i", "--sin", "1.5"])
    assert code == 0
    rep = json.loads(out)
    assert rep["max_residual"] <= 1e-12 and rep["problem"] == "staggered"


def test_solve_with_verify(tmp_path, capsys):
    code, out, _ = _run(capsys, ["solve", "--problem", "half-plane-dirichlet", "--ktilde",
                                 "1+0.15i", "--sin", "1.5", "--window", "20", "--verify",
                                 "--out", str(tmp_path)])
    assert code == 0
    diag = json.loads((tmp_path / "diagnostics.json").read_text())
    assert diag["index"] == 0
    assert diag["verify"]["field_relative"] < 5e-3
    rows = (tmp_path / "field.csv").read_text().splitlines()
    assert rows[0] == "m,n,re,im" and len(rows) == 1 + 21 * 21


def test_reproducible_outputs(tmp_path, capsys):
    args = ["kernel", "--problem", "soft-hard", "--ktilde", "1+0.2i", "--sin", "1.5",
            "--samples", "32"]
    run(args + ["--out", str(tmp_path / "a")])
    run(args + ["--out", str(tmp_path / "b")])
    capsys.readouterr()
    for name in ("kernel.csv", "kernel.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_other_subcommands(capsys):
    code, out, _ = _run(capsys, ["greens-check", "--ktilde", "1+0.2i", "--rect", "0", "8", "0", "4",
                                 "--rect", "0", "4", "0", "8", "--pairs", "3"])
    assert code == 0 and json.loads(out)["max_relative"] < 1e-12
    code, out, _ = _run(capsys, ["oracle", "--problem", "finite-strip", "--ktilde", "1+0.2i",
                                 "--sin", "1.5", "--M", "3", "--R", "50", "--samples", "64"])
    assert code == 0 and json.loads(out)["wh_residual"] < 1e-2
    code, out, _ = _run(capsys, ["fem-check"])
    rep = json.loads(out)
    assert code == 0 and all(r["factor"] == "1" for r in rep["equivalence"])
    code, out, _ = _run(capsys, ["analogy-check", "--problem", "finite-strip", "--side",
                                 "continuous", "--k", "1.5+0.2i", "--theta", "0.7", "--a", "2"])
    assert code == 0 and json.loads(out)["max_residual"] < 1e-12


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["dispersion", "--ktilde", "1"],
    ["dispersion", "--ktilde", "abc"],
    ["solve", "--problem", "half-plane-dirichlet", "--ktilde", "1+0.15i", "--sin", "0.5"],
    ["kernel", "--problem", "finite-strip", "--ktilde", "1+0.2i", "--sin", "1.5"],
])
def test_invalid_input_exit_code(capsys, argv):
    code, _, err = _run(capsys, argv)
    assert code == 1
    assert "invalid input" in err


def test_numerical_failure_exit_code(capsys):
    # nearly lossless: the unit-circle samples sit on the cut of q(s)
    code, _, err = _run(capsys, ["analogy-check", "--problem", "half-plane-dirichlet",
                                 "--ktilde", "2+1e-13i", "--sin", "1.5", "--samples", "4"])
    assert code == 2
    assert "numerical failure" in err
