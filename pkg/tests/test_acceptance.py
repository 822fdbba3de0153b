"""All acceptance criteria at their stated tolerances, one pass/fail line each."""

import pytest
from conftest import ACCEPTANCE_KEY

from rhsplit.acceptance import CHECKS, AcceptanceConfig, run_checks

IDS = [f"criterion_{c[0]:02d}_{c[1].replace(' ', '_')}" for c in CHECKS]


@pytest.fixture(scope="module")
def results():
    return {r.number: r for r in run_checks(AcceptanceConfig())}


@pytest.mark.parametrize("number", [c[0] for c in CHECKS], ids=IDS)
def test_criterion(results, number, request):
    r = results[number]
    request.config.stash.setdefault(ACCEPTANCE_KEY, []).append(r.line())
    assert r.passed, r.detail

