"""
tests/test_cli.py

Command-line surface: argument resolution, output formats, exit codes, config
files and the run ledger.
"""

import argparse
import json

import pytest

from src.analytic import violation_probability_height1
from src.cli import parse_rational, read_csv
from src.core.params import ProtocolParams
from src.logger import RunLedger
from src.main import main

BITCOIN = ["--preset", "bitcoin", "--beta", "0.25"]


def _rows(text: str):
    return read_csv(text.strip())


def test_parse_rational():
    assert parse_rational("1/600") == 1 / 600
    assert parse_rational(" 0.25 ") == 0.25
    with pytest.raises(argparse.ArgumentTypeError):
        parse_rational("one")
    with pytest.raises(argparse.ArgumentTypeError):
        parse_rational("1/0")


@pytest.mark.parametrize(
    "argv",
    [
        ["tradeoff"],
        ["tradeoff", "--a", "1", "--h", "3", "--lambda", "4", "--beta", "0.25"],
        ["tradeoff", "--a", "1"],
        ["tradeoff", "--lambda", "1", "--beta", "1.5"],
    ],
)
def test_rate_pairs_must_be_unambiguous(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_tradeoff_csv(capsys):
    assert main(["tradeoff", *BITCOIN]) == 0
    rows = _rows(capsys.readouterr().out)
    assert rows[0] == ["k", "probability", "e_tail_bound", "latency_seconds"]
    assert len(rows) == 13
    expected = violation_probability_height1(ProtocolParams.from_rates(1 / 600, 0.25, 10.0))
    assert float(rows[1][1]) == pytest.approx(expected, rel=1e-15)
    assert float(rows[2][3]) == pytest.approx(1200.0)


def test_tradeoff_json_and_required_depth(tmp_path, capsys):
    output = tmp_path / "curve.json"
    code = main(["tradeoff", *BITCOIN, "--k-max", "4", "--format", "json", "--epsilon", "1e-30", "-o", str(output)])
    assert code == 0
    rows = json.loads(output.read_text())
    assert [row["k"] for row in rows] == [1, 2, 3, 4]
    assert "no depth up to k=4" in capsys.readouterr().err


def test_general_target_adds_lead_truncation(capsys):
    assert main(["tradeoff", *BITCOIN, "--k-max", "2", "--target", "general"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert rows[0][-1] == "lead_truncation"
    assert [row[-1] for row in rows[1:]] == ["0", "1"]


def test_out_of_tolerance_exit_code(capsys):
    assert main(["tradeoff", "--a", "1/2", "--h", "1", "--delta", "1"]) == 3
    assert "largest admissible beta" in capsys.readouterr().err


def test_verify_mdp_requires_zero_delay():
    with pytest.raises(SystemExit) as exc:
        main(["verify-mdp", *BITCOIN])
    assert exc.value.code == 2


def test_verify_mdp_passes(tmp_path):
    output = tmp_path / "verify.json"
    code = main(
        ["verify-mdp", "--a", "1", "--h", "3", "--k", "2", "--policy", "private-mining", "-o", str(output)]
    )
    assert code == 0
    summary = json.loads(output.read_text())
    assert summary["failures"] == 0
    lo, hi = summary["genesis"]
    assert lo - 1e-9 <= summary["analytic"] <= hi + 1e-9
    assert summary["policy"]["name"] == "private-mining"


def test_race_pmf_without_adversary(capsys):
    assert main(["pmf", "--a", "0", "--h", "1", "--max-i", "3"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert rows == [["i", "e"], ["0", "1"], ["1", "0"], ["2", "0"], ["3", "0"]]


def test_window_pmf_for_several_leads(capsys):
    assert main(["pmf", *BITCOIN, "--which", "window", "--max-i", "2", "--lead", "0", "1"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert rows[0] == ["l", "w", "p"]
    assert [row[0] for row in rows[1:]] == ["0", "0", "0", "1", "1", "1"]


def test_matrices_rows_sum_to_one(capsys):
    assert main(["matrices", "--preset", "etc", "--beta", "0.25", "--k", "2"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert rows[0] == ["matrix", "lead", "row", "y0", "y1", "y2", "row_sum"]
    assert len(rows) == 1 + 2 * 3
    assert all(float(row[-1]) == pytest.approx(1.0) for row in rows[1:])


def test_simulate_is_reproducible(capsys):
    argv = ["simulate", *BITCOIN, "--runs", "50", "--seed", "3", "--deficit-cutoff", "10"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    second = capsys.readouterr().out
    assert first == second
    payload = json.loads(first)
    assert payload["runs"] == 50 and payload["seed"] == 3
    assert "timestamp" not in payload


def test_unknown_policy_is_a_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["simulate", *BITCOIN, "--runs", "5", "--policy", "nope"])
    assert exc.value.code == 2


def test_config_file_supplies_flags(tmp_path, capsys):
    config = tmp_path / "run.conf"
    config.write_text("preset=bitcoin\nbeta=0.25\nk-max=3\n")
    assert main(["tradeoff", "--config", str(config)]) == 0
    assert len(_rows(capsys.readouterr().out)) == 4

    # explicit flags win over the file
    assert main(["tradeoff", "--config", str(config), "--k-max", "2"]) == 0
    assert len(_rows(capsys.readouterr().out)) == 3


def test_missing_config_file():
    with pytest.raises(SystemExit) as exc:
        main(["tradeoff", "--config", "/nonexistent/run.conf"])
    assert exc.value.code == 2


def test_settings_overlay(tmp_path, capsys):
    settings = tmp_path / "settings.yaml"
    settings.write_text("output:\n  digits: 4\n")
    assert main(["tradeoff", *BITCOIN, "--k-max", "1", "--settings", str(settings)]) == 0
    rows = _rows(capsys.readouterr().out)
    expected = violation_probability_height1(ProtocolParams.from_rates(1 / 600, 0.25, 10.0))
    assert rows[1][1] == f"{expected:.4g}"


def test_ledger_records_runs(tmp_path):
    ledger = tmp_path / "runs.jsonl"
    assert main(["tradeoff", *BITCOIN, "--k-max", "2", "--ledger", str(ledger), "-o", str(tmp_path / "c.csv")]) == 0
    assert main(["tradeoff", "--a", "1/2", "--h", "1", "--delta", "1", "--ledger", str(ledger)]) == 3

    entries = RunLedger(str(ledger)).entries()
    assert [e["command"] for e in entries] == ["tradeoff", "tradeoff"]
    assert [e["exit_code"] for e in entries] == [0, 3]
    assert entries[0]["result"]["rows"] == 2


def test_tradeoff_help_describes_columns(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["tradeoff", "--help"])
    assert exc.value.code == 0
    text = capsys.readouterr().out
    for column in ("e_tail_bound", "latency_seconds", "lead_truncation"):
        assert column in text
