"""Acceptance battery on Par<=2: one test and one printed PASS/FAIL line per criterion.

Run directly (``python3 tests/test_acceptance.py``) to print just the lines.
"""

import pytest

from laxfact.acceptance import CRITERIA, criterion_determinism, run_suite

LINES: list[str] = []


@pytest.fixture(scope="module")
def results():
    got = {c.number: c for c in run_suite(2, 1)}
    got[11] = criterion_determinism(2, 1, 8)
    for n in sorted(got):
        LINES.append(got[n].line())
        print(got[n].line())
    return got


@pytest.mark.parametrize("number", range(1, len(CRITERIA) + 2))
def test_criterion(results, number):
    c = results[number]
    assert c.passed, f"{c.line()}\n{c.details}"


if __name__ == "__main__":
    for c in run_suite(2, 1):
        print(c.line())
    print(criterion_determinism(2, 1, 8).line())
