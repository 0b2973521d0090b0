import pytest

from growth1324 import verify
from growth1324.cli import main


@pytest.mark.parametrize("suite", ["gf", "means", "embed"])
def test_suite_passes(suite):
    results = verify.run_checks(verify.SUITES[suite]())
    failed = [(c.name, c.detail) for c in results if not c.passed]
    assert not failed


def test_oracle_suite_passes():
    results = verify.run_checks(verify.oracle_checks(n=8, samples=500, seed=3))
    assert all(c.passed for c in results), [(c.name, c.detail) for c in results if not c.passed]


def test_crashing_check_fails():
    (c,) = verify.run_checks([("boom", lambda: 1 / 0)])
    assert not c.passed and "ZeroDivisionError" in c.detail


def test_cli_verify_gf(capsys):
    assert main(["verify", "gf", "--max-k", "8"]) == 0
    assert "checks passed" in capsys.readouterr().out


def test_small_patterns():
    assert len(verify.small_patterns(3)) == 8
