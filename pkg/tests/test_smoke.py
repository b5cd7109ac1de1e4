import pytest


def test_smoke():
    """Basic smoke test to ensure test runner works and imports are valid."""
    from src.main import SUBCOMMANDS, main  # noqa: F401

    assert set(SUBCOMMANDS) == {"tradeoff", "simulate", "verify-mdp", "pmf", "matrices", "check"}


def test_help_exits_cleanly(capsys):
    from src.main import main

    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0
    assert "tradeoff" in capsys.readouterr().out
