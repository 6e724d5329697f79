import json
import pathlib

import numpy as np
import pytest

from ratcheb import cli
from ratcheb.asymptotics import AsymptoticsRow
from ratcheb.cli import RunConfig, flag_inventory, main, parse_args, parse_points
from ratcheb.csv_handler import CSVHandler
from ratcheb.errors import ArgumentError, ConvergenceError, UsageError

GOLDEN = pathlib.Path(__file__).parent / "golden"


def test_parse_points():
    assert parse_points("2;2i; 1-0.5i ;") == [2, 2j, 1 - 0.5j]
    assert parse_points("inf")[0].real == float("inf")


@pytest.mark.parametrize("text", ["", ";", "abc"])
def test_parse_points_rejects_bad_input(text):
    with pytest.raises(ArgumentError):
        parse_points(text)


def test_solve_writes_json(capsys):
    assert main(["solve", "--set", "[-1,1]", "--poles", "2:1", "--xstar", "2"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["schema"] == 1
    assert data["command"] == "solve"
    assert data["solution"]["m"] == pytest.approx(3.0, rel=1e-9)
    assert data["structure"]["passed"] is True


def test_green_writes_csv(capsys):
    assert main(["green", "--set", "[-1,1]", "--pole", "inf", "--eval", "2;2i"]) == 0
    header, rows = CSVHandler.load_csv_from_string(capsys.readouterr().out)
    assert header == ["z_re", "z_im", "G"]
    assert rows[0][2] == pytest.approx(1.3169578969248166, abs=1e-10)
    assert len(rows) == 2


def test_green_as_json(capsys):
    assert main(["green", "--set", "[-1,1]", "--pole", "2", "--eval", "3", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["columns"] == ["z_re", "z_im", "G"]
    assert data["pole"] == "2.0"


def test_malformed_set_is_a_usage_error(capsys):
    assert main(["solve", "--set", "[1,-1]", "--poles", "inf:2", "--xstar", "inf"]) == 1
    assert "--set" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["solve", "--set", "[-1,1]"],
        ["integrate", "--set", "[-1,1]"],
        [],
        ["asymptotics", "--set", "[-1,1]", "--atoms", "inf:1", "--nmax", "0", "--eval", "2"],
        ["asymptotics", "--set", "[-1,1]", "--atoms", "inf:1", "--nmax", "3", "--nlist", "5", "--eval", "2"],
        ["solve", "--set", "[-1,1]", "--poles", "inf:2", "--xstar", "inf", "--tol", "-1"],
    ],
)
def test_usage_errors_exit_with_one(argv, capsys):
    assert main(argv) == 1
    assert capsys.readouterr().err.startswith("ratcheb: error:")


def test_usage_error_carries_flag():
    with pytest.raises(UsageError) as info:
        parse_args(["green", "--set", "[-1,1]", "--pole", "x", "--eval", "2"])
    assert info.value.flag == "--pole"


def test_help_exits_with_zero(capsys):
    assert main(["solve", "--help"]) == 0
    assert "--xstar" in capsys.readouterr().out


def test_pole_on_set_exits_with_one(capsys):
    assert main(["solve", "--set", "[-1,1]", "--poles", "0.5:1", "--xstar", "inf"]) == 1
    assert "lies on the set" in capsys.readouterr().err


def test_convergence_failure_exits_with_two(monkeypatch, capsys):
    def failing(problem, options=None):
        raise ConvergenceError("no convergence", 1e-3, 200)

    monkeypatch.setattr(cli, "solve", failing)
    assert main(["solve", "--set", "[-1,1]", "--poles", "inf:2", "--xstar", "inf"]) == 2
    data = json.loads(capsys.readouterr().out)
    assert data["error"]["type"] == "convergence"
    assert data["error"]["iterations"] == 200


def test_output_file(tmp_path, capsys):
    target = tmp_path / "sol.json"
    assert main(["solve", "--set", "[-1,1]", "--poles", "inf:3", "--xstar", "inf", "--output", str(target)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(target.read_text())["solution"]["m"] == pytest.approx(4.0)


def test_verify_chebyshev_polynomial(capsys):
    assert main(["verify", "--set", "[-1,1]", "--poles", "inf:3", "--xstar", "inf", "--samples", "10"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["passed"] is True
    assert data["checks"]["bands"]["open_bands"] == 3


def test_asymptotics_csv(capsys):
    argv = ["asymptotics", "--set", "[-1,1]", "--atoms", "inf:1", "--nmax", "3", "--eval", "2"]
    assert main(argv) == 0
    header, rows = CSVHandler.load_csv_from_string(capsys.readouterr().out)
    assert header == list(AsymptoticsRow.COLUMNS)
    assert [row[0] for row in rows] == [1, 2, 3]


def test_selftest_subcommand(capsys):
    assert main(["selftest", "--check", "green-closed-forms"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["passed"] is True
    assert [c["name"] for c in data["checks"]] == ["green-closed-forms"]


@pytest.mark.parametrize(
    "argv",
    [
        ["solve", "--set", "[-2,-1];[0,1]", "--poles=-0.5:1", "--xstar", "inf"],
        ["solve", "--set", "[-1,1]", "--poles", "inf:3,2:1", "--xstar", "2", "--tol", "1e-12", "--init", "equal"],
        ["green", "--set", "[-inf,-1];[1,inf]", "--pole", "0", "--eval", "0.5;2i", "--format", "json"],
        ["verify", "--set", "[-1,1]", "--poles", "inf:2", "--xstar", "inf", "--samples", "7", "--verbose"],
        ["asymptotics", "--set", "[-1,1]", "--atoms", "2:1/2,-2:1/2", "--mode", "periodic", "--kind", "szego",
         "--nmax", "12", "--residue", "0", "--eval", "2i;3"],
        ["selftest", "--check", "koosis", "--check", "grid-oracle", "--output", "out.json"],
    ],
)
def test_canonical_argv_round_trip(argv):
    cfg = parse_args(argv)
    again = parse_args(cfg.to_argv())
    assert again == cfg
    assert again.to_argv() == cfg.to_argv()


def test_run_config_equality():
    assert RunConfig("solve") == RunConfig("solve")
    assert RunConfig("solve") != RunConfig("green")


@pytest.mark.parametrize("subcommand", cli.SUBCOMMANDS)
def test_flag_inventory_matches_golden(subcommand):
    expected = (GOLDEN / f"{subcommand}.txt").read_text().split()
    assert flag_inventory(subcommand) == expected


def test_negative_pole_literal_is_a_value(capsys):
    argv = ["solve", "--set", "[-2,-1];[0,1]", "--poles", "-0.5:1", "--xstar", "inf"]
    assert main(argv) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["structure"]["passed"] is True


def test_join_negative_values():
    argv = ["green", "--set", "[-1,1]", "--pole", "-inf", "--eval", "-2;3"]
    assert cli.join_negative_values(argv) == ["green", "--set", "[-1,1]", "--pole=-inf", "--eval=-2;3"]
    assert cli.join_negative_values(["solve", "--verbose", "--poles", "inf:2"]) == [
        "solve", "--verbose", "--poles", "inf:2"]


@pytest.mark.parametrize("error", [np.linalg.LinAlgError("singular matrix"), FloatingPointError("overflow")])
def test_linear_algebra_failure_exits_with_two(monkeypatch, capsys, error):
    def failing(problem, options=None):
        raise error

    monkeypatch.setattr(cli, "solve", failing)
    assert main(["solve", "--set", "[-1,1]", "--poles", "inf:2", "--xstar", "inf"]) == 2
    data = json.loads(capsys.readouterr().out)
    assert data["error"]["type"] == "numeric"
    assert type(error).__name__ in data["error"]["message"]
