"""Acceptance criteria 1-12, one test each; every test prints its PASS/FAIL line."""
import pytest

from cantor_fiber.verify import CHECKS, run_check


@pytest.mark.parametrize("number", sorted(CHECKS), ids=lambda n: f"criterion_{n:02d}")
def test_criterion(number):
    result = run_check(number)
    print(result.line())
    assert result.passed, result.line()
