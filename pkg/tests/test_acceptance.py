"""Acceptance suite: one pass/fail line per criterion, each within its time budget.

Run directly with ``python tests/test_acceptance.py`` or through pytest.
"""

import sys

import pytest

from sdquiver.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=[f"{c[0]:02d}-{c[1]}" for c in CRITERIA])
def test_criterion(number, capsys):
    res = run_criterion(number)
    with capsys.disabled():
        print("\n" + res.line())
    assert res.ok, res.detail
    assert res.seconds < res.budget, f"took {res.seconds:.2f}s, budget {res.budget}s"


if __name__ == "__main__":
    results = [run_criterion(c[0]) for c in CRITERIA]
    for r in results:
        print(r.line())
    sys.exit(0 if all(r.passed for r in results) else 1)
