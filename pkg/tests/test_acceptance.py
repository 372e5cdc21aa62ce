"""Acceptance catalogue: one test and one PASS/FAIL line per criterion.

Run directly (python tests/test_acceptance.py) for the summary alone.
"""
import sys

import pytest

from raygeom import acceptance
from raygeom import curves as cv

SEED = 42


def _line(res):
    worst = [c for c in res.checks if not c.passed]
    tail = "" if not worst else f"  ({worst[0].name}: {worst[0].computed} vs {worst[0].expected})"
    return f"{'PASS' if res.passed else 'FAIL'}  criterion {res.id:2d}  {res.title}{tail}"


@pytest.mark.parametrize("crit", acceptance.REGISTRY, ids=lambda c: f"criterion-{c.id:02d}")
def test_criterion(crit, capsys):
    res = crit.run(SEED)
    with capsys.disabled():
        print("\n" + _line(res))
    for c in res.checks:
        assert c.passed, f"{c.name}: computed {c.computed}, expected {c.expected}, tol {c.tol}"


def test_registry_is_complete():
    assert sorted(c.id for c in acceptance.REGISTRY) == list(range(1, 13))


def test_flipped_dynamical_phase_is_caught(monkeypatch):
    # a sign error in the dynamical phase must break the latitude check
    orig = cv.dynamical_phase
    monkeypatch.setattr(cv, "dynamical_phase", lambda c, rule="trapezoid": -orig(c, rule))
    (res,) = acceptance.run_all(SEED, filter="bloch-latitude")
    assert not res.passed
    bad = [c.name for c in res.checks if not c.passed]
    assert any("latitude" in n or "phi_g" in n for n in bad), bad


def test_filter_selects_by_tag():
    ids = [c.id for c in acceptance.REGISTRY if "gaussian" in c.tags]
    res = acceptance.run_all(SEED, filter="gaussian")
    assert [r.id for r in res] == ids and ids


if __name__ == "__main__":
    results = acceptance.run_all(SEED)
    for r in results:
        print(_line(r))
    sys.exit(0 if all(r.passed for r in results) else 1)
