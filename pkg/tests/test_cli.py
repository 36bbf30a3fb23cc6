"""
End-to-end tests for the theta-iwasawa command line.
"""

import json

import pytest

from thetalab.cli import build_parser, main

pytestmark = pytest.mark.unit


def _write(tmp_path, payload, name="element.json"):
    path = tmp_path / name
    path.write_text(payload if isinstance(payload, str) else json.dumps(payload))
    return str(path)


# =============================================================================
# invariants
# =============================================================================

def test_invariants_finite_level(tmp_path, capsys):
    path = _write(tmp_path, {"p": 5, "N": 10, "level": 1, "coeffs": ["5", "5", "0", "0", "0"]})
    assert main(["invariants", path]) == 0
    assert capsys.readouterr().out == "mu=1 lambda=0\n"


def test_invariants_cyclotomic(tmp_path, capsys):
    coeffs = ["3", "9", "18", "21", "15", "6", "1", "0", "0"]
    path = _write(tmp_path, {"p": 3, "N": 8, "level": 2, "coeffs": coeffs})
    assert main(["invariants", path]) == 0
    assert capsys.readouterr().out == "mu=0 lambda=6\n"


def test_invariants_series(tmp_path, capsys):
    path = _write(tmp_path, {"p": 3, "N": 8, "deg": 4, "coeffs": ["9", "3", "6", "1", "0"]})
    assert main(["invariants", path]) == 0
    assert capsys.readouterr().out == "mu=0 lambda=3\n"


def test_invariants_zero_element(tmp_path, capsys):
    path = _write(tmp_path, {"p": 3, "N": 4, "level": 1, "coeffs": ["0", "81", "0"]})
    assert main(["invariants", path]) == 4
    assert capsys.readouterr().out == "zero-at-precision\n"


@pytest.mark.parametrize(
    "payload",
    [
        {"p": 3, "N": 4, "level": 1, "coeffs": []},
        {"p": 3, "N": 4, "level": 1, "coeffs": ["1", "2"]},
        {"p": 4, "N": 4, "level": 0, "coeffs": ["1"]},
        {"p": 3, "N": 4, "coeffs": ["1"]},
        {"p": 3, "N": 4, "level": -1, "coeffs": ["1"]},
        {"p": 3, "N": 4, "level": 1, "coeffs": [1.9, 0, 0]},
        "{not json",
    ],
)
def test_invariants_bad_input(tmp_path, capsys, payload):
    assert main(["invariants", _write(tmp_path, payload)]) == 3
    assert capsys.readouterr().out == ""


def test_invariants_missing_file(tmp_path):
    assert main(["invariants", str(tmp_path / "absent.json")]) == 3


# =============================================================================
# Experiments
# =============================================================================

SMALL = ["--p", "3", "--precision", "10", "--n-max", "2", "--trials", "2", "--seed", "3"]


@pytest.mark.parametrize(
    "argv",
    [
        ["nonordinary", "--trials", "0"],
        ["nonordinary", "--p", "4"],
        ["nonordinary", *SMALL, "--a-p", "1"],
        ["ordinary", *SMALL, "--a-p", "3"],
        ["verify-lemmas", *SMALL, "--trunc", "4"],
        ["nonordinary", *SMALL, "--perturb", "3:0"],
        ["nonordinary", *SMALL, "--perturb", "1:3"],
        ["ordinary", *SMALL, "--perturb", "two"],
        ["ordinary", *SMALL, "--n-max", "1", "--perturb", "1:0"],
    ],
)
def test_config_errors_exit_2(argv, capsys):
    assert main(argv) == 2
    assert capsys.readouterr().out == ""


def test_nonordinary_out_is_deterministic(tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["nonordinary", *SMALL, "--out", str(first)]) == 0
    assert main(["nonordinary", *SMALL, "--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()
    report = json.loads(first.read_text())
    assert report["command"] == "nonordinary"
    assert report["summary"]["trials"] == 2


def test_nonordinary_csv(capsys):
    assert main(["nonordinary", *SMALL, "--lambda", "1", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "trial,n,parity,mu_theta,lambda_theta,q_n,expected_lambda,verdict"
    assert len(lines) == 1 + 2 * 2


@pytest.mark.parametrize("command", ["nonordinary", "ordinary"])
def test_perturbed_control_exits_1(command, capsys):
    assert main([command, *SMALL, "--perturb", "2:0"]) == 1
    report = json.loads(capsys.readouterr().out)
    assert report["summary"]["fail"] == 2
    assert report["config"]["perturb"] == "2:0"
    assert all(trial["reason"] == "three-term" for trial in report["trials"])


def test_ordinary_run(capsys):
    assert main(["ordinary", *SMALL]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["summary"]["fail"] == 0


def test_verify_lemmas_run(capsys):
    assert main(["verify-lemmas", *SMALL]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["passed"]


def test_list_experiments(capsys):
    assert main(["--list-experiments"]) == 0
    out = capsys.readouterr().out
    for name in ("elements", "lemmas", "nonordinary", "ordinary"):
        assert name in out


def test_no_command(capsys):
    assert main([]) == 2


def test_parser_flags():
    args = build_parser().parse_args(["nonordinary", "--lambda", "3", "--a-p", "5", "--format", "csv"])
    assert (args.lam, args.a_p, args.fmt) == (3, 5, "csv")
    with pytest.raises(SystemExit):
        build_parser().parse_args(["nonordinary", "--format", "xml"])
