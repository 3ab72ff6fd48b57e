"""Acceptance criteria 1-11, each run as one verification group under its time limit.

Run with ``pytest tests/test_acceptance.py`` (a PASS/FAIL line per criterion is
printed in the terminal summary) or ``python tests/test_acceptance.py``.
"""
import sys

import pytest

from modlie.suites import SUITES, run_suite

CRITERIA = [
    (1, "dimensions"),
    (2, "simplicity"),
    (3, "restrictability"),
    (4, "witt"),
    (5, "sandwich"),
    (6, "toral_rank"),
    (7, "winter"),
    (8, "jacobson"),
    (9, "melikian"),
    (10, "filtration"),
    (11, "weights"),
]

RESULTS: dict[int, str] = {}


def evaluate(number: int, suite: str) -> tuple[bool, str]:
    limit = SUITES[suite][1]
    checks, secs = run_suite(suite)
    bad = [c for c in checks if not c.passed]
    ok = not bad and secs < limit
    why = f"{len(checks) - len(bad)}/{len(checks)} checks, {secs:.1f}s (limit {limit}s)"
    if bad:
        why += "; failed: " + ", ".join(f"{c.name} [{c.detail}]" for c in bad)
    line = f"criterion {number:2d} {suite:16s} {'PASS' if ok else 'FAIL'}  {why}"
    RESULTS[number] = line
    print(line)
    return ok, why


@pytest.mark.parametrize("number,suite", CRITERIA, ids=[f"{n}-{s}" for n, s in CRITERIA])
def test_criterion(number, suite):
    ok, why = evaluate(number, suite)
    assert ok, why


if __name__ == "__main__":
    results = [evaluate(n, s)[0] for n, s in CRITERIA]
    sys.exit(0 if all(results) else 1)
