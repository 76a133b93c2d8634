"""Acceptance criteria, one test each, at full size.

Every criterion prints a single ``PASS``/``FAIL`` line (collected again in the
terminal summary).  Run standalone with ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import time

import pytest

from quadiwasawa import verify

RESULTS: list[str] = []
C1_BUDGET_SECONDS = 600


def _report(res: verify.CheckResult) -> None:
    line = res.line()
    RESULTS.append(line)
    print(line)


@pytest.fixture(scope="module")
def sweep():
    t0 = time.perf_counter()
    s = verify.real_sweep(500)
    return s, time.perf_counter() - t0


def test_c1_cross_route_agreement(sweep):
    s, elapsed = sweep
    res = verify.check_cross_route(s)
    timed = verify.CheckResult(res.name, res.passed and elapsed <= C1_BUDGET_SECONDS,
                               f"{res.detail}; {elapsed:.1f}s", res.failures)
    _report(timed)
    assert s.stabilized > 0
    assert elapsed <= C1_BUDGET_SECONDS
    assert not s.disagreements, f"{len(s.disagreements)} disagreements: {s.disagreements}"


def test_c2_imaginary_verdicts():
    res = verify.check_imaginary(-500)
    _report(res)
    assert res.passed, res.failures


def test_c3_knot_group_oracle():
    res = verify.check_knot(500)
    _report(res)
    assert res.passed, res.failures


def test_c4_chevalley_pins():
    res = verify.check_chevalley()
    _report(res)
    assert res.passed, res.failures


def test_c5_padic_core():
    res = verify.check_padic()
    _report(res)
    assert res.passed, res.failures


def test_c6_wcl_robustness():
    res = verify.check_wcl_robustness(50)
    _report(res)
    assert res.passed, res.failures


def test_c7_class_numbers():
    res = verify.check_class_numbers(10_000)
    _report(res)
    assert res.passed, res.failures


def test_c8_heuristic_trend(sweep):
    res = verify.check_heuristic(sweep[0])
    _report(res)
    assert res.passed, res.detail


def test_c9_external_cross_check():
    res = verify.check_pari(verify.C9_PAIRS)
    if res is None:
        RESULTS.append("SKIP  C9 wCl vs external bnflog (optional): cypari2 not installed")
        pytest.skip("cypari2 not installed")
    _report(res)
    assert res.passed, res.failures


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
