import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as stn

from s3lab.lattice import (
    AnnulusQuery,
    SetBQuery,
    annulus_measure,
    count_hyperbola,
    count_quadric,
    scan_constants,
    setB_measure,
    setB_measure_monte_carlo,
)

SETTINGS = dict(max_examples=40, deadline=None, database=None, derandomize=True)


def brute_annulus(C, K, xi2c, nx=2_000_001, span=None):
    """Independent row-×-grid oracle for the annulus measure."""
    span = span or math.sqrt(max(C + K, 0.0)) + 1.0
    total = 0.0
    dmax = int(math.floor(math.sqrt(max(C + K, 0.0))))
    xs = np.linspace(-span, span, nx)
    dx = xs[1] - xs[0]
    for d in range(-dmax, dmax + 1):
        r2 = xs**2 + float(d) ** 2
        total += dx * np.count_nonzero((r2 >= C) & (r2 <= C + K))
    return total


def test_annulus_basic_row():
    q = AnnulusQuery(C=0.0, K=1.0, center=(0.0, 0))
    assert annulus_measure(q) == pytest.approx(2.0)


def test_annulus_empty():
    assert annulus_measure(AnnulusQuery(C=-10.0, K=2.0, center=(3.0, 1))) == 0.0


def test_annulus_against_grid_oracle():
    for C, K in [(2.5, 1.0), (10.0, 3.0), (0.0, 7.0)]:
        exact = annulus_measure(AnnulusQuery(C=C, K=K, center=(0.0, 0)))
        approx = brute_annulus(C, K, 0)
        assert exact == pytest.approx(approx, abs=5e-3)


def test_annulus_k_guard():
    with pytest.raises(ValueError):
        AnnulusQuery(C=0.0, K=0.5, center=(0.0, 0))


@given(stn.floats(min_value=-50, max_value=1e4), stn.floats(min_value=1, max_value=100),
       stn.floats(min_value=-1e3, max_value=1e3), stn.integers(min_value=-100, max_value=100))
@settings(**SETTINGS)
def test_annulus_translation_invariance(C, K, x1c, x2c):
    base = annulus_measure(AnnulusQuery(C=C, K=K, center=(0.0, 0)))
    shifted = annulus_measure(AnnulusQuery(C=C, K=K, center=(x1c, x2c)))
    assert shifted == base  # exact equality: row lengths never depend on the center


@given(stn.floats(min_value=0, max_value=1e4), stn.floats(min_value=1, max_value=50),
       stn.floats(min_value=0, max_value=50))
@settings(**SETTINGS)
def test_annulus_monotone_in_k(C, K, extra):
    a = annulus_measure(AnnulusQuery(C=C, K=K, center=(0.0, 0)))
    b = annulus_measure(AnnulusQuery(C=C, K=K + extra, center=(0.0, 0)))
    assert b >= a - 1e-12


def brute_quadric(k, C, N):
    return sum(
        1
        for m in range(-N, N + 1)
        for n in range(-N, N + 1)
        if m * m + n * n + k * m + k * n == C
    )


def test_quadric_circle():
    assert count_quadric(0, 25, 5) == 12
    assert count_quadric(0, 25, 5) == brute_quadric(0, 25, 5)


def test_quadric_negative_empty():
    assert count_quadric(0, -1, 100) == 0


@given(stn.integers(min_value=-200, max_value=200), stn.integers(min_value=-400, max_value=400),
       stn.integers(min_value=1, max_value=25))
@settings(**SETTINGS)
def test_quadric_matches_brute_force(k, C, N):
    assert count_quadric(k, C, N) == brute_quadric(k, C, N)


def test_quadric_symmetries():
    # (m, n) -> (n, m) always; sign flips at k = 0
    for k, C, N in [(3, 17, 12), (0, 40, 10)]:
        sols = [
            (m, n)
            for m in range(-N, N + 1)
            for n in range(-N, N + 1)
            if m * m + n * n + k * m + k * n == C
        ]
        assert len(sols) == count_quadric(k, C, N)
        assert all((n, m) in sols for (m, n) in sols)
        if k == 0:
            assert all((-m, -n) in sols for (m, n) in sols)


def brute_hyperbola(k, C, N):
    return sum(
        1
        for m in range(k - N, k + N + 1)
        for n in range(-N, N + 1)
        if m != 0 and n != 0 and m * n == C
    )


def test_hyperbola_divisors():
    assert count_hyperbola(0, 12, 12) == 12
    assert count_hyperbola(0, 12, 12) == brute_hyperbola(0, 12, 12)
    assert count_hyperbola(0, 0, 10) == 0


def test_hyperbola_far_offset_box():
    k, C, N = 10**6, 7 * 10**6, 16
    assert count_hyperbola(k, C, N) == 1  # only m = 10^6, n = 7 lands in the box


@given(stn.integers(min_value=-60, max_value=60), stn.integers(min_value=-500, max_value=500),
       stn.integers(min_value=1, max_value=20))
@settings(**SETTINGS)
def test_hyperbola_matches_brute_force(k, C, N):
    assert count_hyperbola(k, C, N) == brute_hyperbola(k, C, N)


def brute_setB(q: SetBQuery, slack: float, nx: int = 400_001) -> float:
    xs = np.linspace(-2 * q.l, 2 * q.l, nx)
    dx = xs[1] - xs[0]
    N = int(q.N)
    total = 0.0
    for m in range(q.k - N, q.k + N + 1):
        if m == 0:
            continue
        for n in range(-N, N + 1):
            if n == 0:
                continue
            total += dx * np.count_nonzero(np.abs(q.l * xs + m * n + q.C) <= slack)
    return total


def test_setB_small_case_against_oracle():
    q = SetBQuery(l=1.0, k=0, C=0.0, M=4.0, N=4.0)
    exact = setB_measure(q, slack=1.0)
    assert exact == pytest.approx(brute_setB(q, 1.0), abs=2e-2)
    # hand count: |x + mn| <= 1 on |x| <= 2 gives length 2 for |mn| <= 1
    # (4 pairs) and length 1 for |mn| = 2 (8 pairs)
    assert exact == pytest.approx(16.0)


def test_setB_monte_carlo_cross_check():
    q = SetBQuery(l=2.0, k=3, C=-5.0, M=8.0, N=8.0)
    exact = setB_measure(q, slack=1.0)
    mc, sigma = setB_measure_monte_carlo(q, 1.0, 400_000, 0)
    assert abs(mc - exact) <= 3.0 * sigma + 1e-9


def test_setB_upper_bound_by_interval_count():
    q = SetBQuery(l=3.0, k=1, C=2.0, M=4.0, N=4.0)
    val = setB_measure(q, slack=1.0)
    N = int(q.N)
    count = sum(
        1
        for m in range(q.k - N, q.k + N + 1)
        for n in range(-N, N + 1)
        if m != 0 and n != 0
    )
    assert val <= 4.0 * q.l * count + 1e-12


def test_setB_parameter_validation():
    with pytest.raises(ValueError):
        SetBQuery(l=0.5, k=0, C=0.0, M=2.0, N=4.0)
    with pytest.raises(ValueError):
        SetBQuery(l=1.0, k=0, C=0.0, M=8.0, N=4.0)
    with pytest.raises(ValueError):
        SetBQuery(l=100.0, k=0, C=0.0, M=2.0, N=4.0)  # above the cap


def test_scans_deterministic():
    r1, s1 = scan_constants("5.1", seed=5, n_queries=200)
    r2, s2 = scan_constants("5.1", seed=5, n_queries=200)
    assert s1 == s2 and r1 == r2
    r3, s3 = scan_constants("5.2a", seed=5, Ns=[16, 32], per_n=20)
    r4, s4 = scan_constants("5.2a", seed=5, Ns=[16, 32], per_n=20)
    assert s3 == s4 and r3 == r4


def test_scan_53_cases_present():
    rows, summary = scan_constants("5.3", seed=2, Ns=[64, 128], per_config=2)
    cases = {r["case"] for r in rows}
    assert cases == {"a", "b", "c"}
    assert set(summary["case_max"]) == {"a", "b", "c"}


def test_scan_unknown_lemma():
    with pytest.raises(ValueError):
        scan_constants("9.9", seed=0)
