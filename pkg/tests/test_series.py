import math

import numpy as np
import pytest

from stabledens import oracle, series
from stabledens.exceptions import DomainError, PlanError
from stabledens.params import make_params

# Frozen regression constants, computed from the radius formulas directly
# and cross-checked in extended precision (mpmath) once.
RADIUS_ZETA_A2_N10_EPS14 = 0.14585073211973813
RADIUS_INF_A05_N43_EPS14 = 0.11967124834890278


def test_mode_value_is_k0_term():
    for alpha in (0.5, 0.75, 1.25, 1.5, 2.0):
        p = make_params(alpha, 0.0)
        got = series.series_at_zeta(0.0, p, 1)
        assert got == pytest.approx(math.gamma(1 / alpha) / (alpha * math.pi), rel=1e-15)


def test_gaussian_mode_closed_form():
    p = make_params(2.0, 0.0)
    assert series.series_at_zeta(0.0, p, 1) == pytest.approx(
        1.0 / (2.0 * math.sqrt(math.pi)), rel=1e-15
    )


def test_series_at_zeta_matches_oracle_within_bound():
    p = make_params(1.3, 0.4)
    x = p.zeta + 0.1
    got = series.series_at_zeta(x, p, 30)
    ref = oracle.pdf_oracle_fourier(x, p, 1e-13).value
    assert abs(got - ref) <= series.series_bound_at_zeta(x, p, 30) + 1e-13


def test_series_at_zeta_alpha_one_rejected():
    with pytest.raises(DomainError):
        series.series_at_zeta(0.1, make_params(1.0, 0.0), 5)


def test_radius_at_zeta_monotone_in_eps():
    p = make_params(1.4, 0.3)
    assert series.radius_at_zeta(p, 20, 1e-8) >= series.radius_at_zeta(p, 20, 1e-14)


def test_radius_at_zeta_frozen_value():
    p = make_params(2.0, 0.0)
    assert series.radius_at_zeta(p, 10, 1e-14) == pytest.approx(
        RADIUS_ZETA_A2_N10_EPS14, rel=1e-13
    )


def test_zeta_bound_holds_randomly():
    rng = np.random.default_rng(1)
    for _ in range(30):
        alpha = rng.uniform(1.05, 2.0)  # convergent side
        beta = rng.uniform(-1, 1)
        n = int(rng.integers(5, 40))
        p = make_params(alpha, beta)
        radius = series.radius_at_zeta(p, n, 1e-10)
        x = p.zeta + rng.uniform(-1, 1) * radius
        got = series.series_at_zeta(x, p, n)
        ref = oracle.pdf_oracle_fourier(x, p, 1e-13).value
        assert abs(got - ref) <= 1e-10 + 1e-12


def test_tail_single_term_is_pareto():
    alpha, x = 0.8, 30.0
    p = make_params(alpha, 0.0)
    expected = (
        (alpha / math.pi)
        * math.gamma(alpha)
        * math.sin(math.pi * alpha / 2)
        * x ** (-alpha - 1.0)
    )
    assert series.series_at_infinity(x, p, 1) == pytest.approx(expected, rel=1e-14)


def test_tail_series_matches_oracle():
    p = make_params(0.7, 0.0)
    x = series.radius_at_infinity(p, 43, 1e-14) + 1.0
    got = series.series_at_infinity(x, p, 42)
    ref = oracle.pdf_oracle_fourier(x, p, 1e-14).value
    assert got == pytest.approx(ref, abs=1e-13)


def test_tail_series_alpha_one_beta_zero_is_cauchy():
    p = make_params(1.0, 0.0)
    for x in (2.5, 10.0, 120.0):
        got = series.series_at_infinity(x, p, 42)
        assert got == pytest.approx(1.0 / (math.pi * (1 + x * x)), rel=1e-13)


def test_tail_series_alpha_one_skewed_rejected():
    with pytest.raises(DomainError):
        series.series_at_infinity(5.0, make_params(1.0, 0.5), 10)


def test_tail_degenerate_skew_vanishes():
    # alpha > 1, beta = -1: the sine factor makes every term vanish while
    # the true density is positive; only absolute accuracy is guaranteed.
    # In floats sin(pi*k) leaves ~1e-16 residue per term.
    p = make_params(1.5, -1.0)
    x = p.zeta + 2.0 * series.radius_at_infinity(p, 43, 1e-12)
    assert abs(series.series_at_infinity(x, p, 42)) < 1e-15
    assert series.series_bound_at_infinity(x, p, 42) < 1e-12


def test_radius_at_infinity_monotone_in_eps():
    p = make_params(0.8, 0.2)
    assert series.radius_at_infinity(p, 42, 1e-14) >= series.radius_at_infinity(p, 42, 1e-8)


def test_radius_at_infinity_frozen_value():
    p = make_params(0.5, 0.0)
    assert series.radius_at_infinity(p, 43, 1e-14) == pytest.approx(
        RADIUS_INF_A05_N43_EPS14, rel=1e-13
    )


def test_tail_bound_soundness_random():
    rng = np.random.default_rng(7)
    checked = 0
    while checked < 60:
        alpha = rng.uniform(0.5, 2.0)
        if abs(alpha - 1.0) < 1e-3:
            continue
        beta = rng.uniform(-1, 1)
        n = int(rng.integers(5, 60))
        p = make_params(alpha, beta)
        try:
            radius = series.radius_at_infinity(p, n + 1, 1e-10)
        except PlanError:
            continue
        x = p.zeta + radius * rng.uniform(1.0, 3.0)
        bound = series.series_bound_at_infinity(x, p, n)
        got = series.series_at_infinity(x, p, n)
        ref = oracle.pdf_oracle_fourier(x, p, max(1e-13, bound * 1e-3)).value
        assert abs(got - ref) <= bound + max(2e-13, 2e-3 * bound)
        checked += 1


def test_tail_alternating_signs_symmetric():
    # With beta = 0 the term sign is (-1)^k * sign(sin(pi*alpha*k/2)),
    # which alternates while k < 2/alpha; beyond that the sine factor
    # starts flipping on its own (already at k=2 for alpha=1.5).
    for alpha in (0.5, 0.75, 1.0):
        p = make_params(alpha, 0.0)
        x = 20.0
        n_check = int(2.0 / alpha)
        partials = np.array(
            [series.series_at_infinity(x, p, n) for n in range(1, n_check + 2)]
        )
        terms = np.concatenate([[partials[0]], np.diff(partials)])[:n_check]
        nonzero = terms[np.abs(terms) > 1e-300]
        assert np.all(np.sign(nonzero[1:]) != np.sign(nonzero[:-1]))


def test_tail_convergence_alpha_below_one():
    p = make_params(0.7, 0.3)
    x = p.zeta + 2.0
    deltas = [
        abs(series.series_at_infinity(x, p, n + 1) - series.series_at_infinity(x, p, n))
        for n in (10, 20, 40, 80)
    ]
    assert deltas[-1] < deltas[0]
    assert deltas[-1] < 1e-14


def test_dx_series_at_zeta_mode_zero_symmetric():
    p = make_params(1.5, 0.0)
    assert series.dx_series_at_zeta(0.0, p, 20) == pytest.approx(0.0, abs=1e-16)


def test_dx_series_at_zeta_matches_fd():
    p = make_params(1.6, 0.2)
    x = p.zeta + 0.05
    h = 1e-5
    fd = (series.series_at_zeta(x + h, p, 40) - series.series_at_zeta(x - h, p, 40)) / (2 * h)
    assert series.dx_series_at_zeta(x, p, 40) == pytest.approx(fd, abs=1e-10)


def test_dx_tail_single_term():
    alpha, x = 0.8, 30.0
    p = make_params(alpha, 0.0)
    expected = (
        -(alpha / math.pi)
        * (alpha + 1.0)
        * math.gamma(alpha)
        * math.sin(math.pi * alpha / 2)
        * x ** (-alpha - 2.0)
    )
    assert series.dx_series_at_infinity(x, p, 1) == pytest.approx(expected, rel=1e-14)


def test_dx_tail_matches_fd_of_tail():
    p = make_params(1.6, 0.2)
    x = series.radius_at_infinity(p, 43, 1e-14) + p.zeta + 2.0
    h = 1e-5
    fd = (
        series.series_at_infinity(x + h, p, 42) - series.series_at_infinity(x - h, p, 42)
    ) / (2 * h)
    assert series.dx_series_at_infinity(x, p, 42) == pytest.approx(fd, rel=1e-9, abs=1e-12)


def test_dx_tail_matches_gradient_oracle():
    p = make_params(0.8, 0.5)
    x = p.zeta + 2.0 * series.radius_at_infinity(p, 91, 1e-14)
    n, bound = series.choose_tail_terms(x, p, 1e-13, series.SeriesKind.DX_AT_INFINITY)
    got = series.dx_series_at_infinity(x, p, n)
    ref = oracle.grad_oracle(x, p, 1e-12)[0].value
    assert got == pytest.approx(ref, abs=5e-12)


def test_cdf_tail_matches_oracle():
    p = make_params(0.7, 0.4)
    x = p.zeta + 2.0 * series.radius_at_infinity(p, 91, 1e-14)
    tail = series.cdf_tail_from_series(x, p, 90)
    ref = oracle.cdf_oracle(x, p, 1e-11).value
    assert 1.0 - tail == pytest.approx(ref, abs=1e-10)


def test_plan_bundles_radius():
    p = make_params(0.8, 0.1)
    plan = series.plan_series(p, series.SeriesKind.AT_INFINITY, 42, 1e-14)
    assert plan.n_terms == 42 and plan.kind is series.SeriesKind.AT_INFINITY
    assert plan.radius == pytest.approx(series.radius_at_infinity(p, 43, 1e-14), rel=0)


def test_choose_tail_terms_meets_target():
    p = make_params(0.6, -0.7)
    x = p.zeta + 2.0 * series.radius_at_infinity(p, 91, 1e-14)
    n, bound = series.choose_tail_terms(x, p, 1e-13)
    assert bound <= 1e-13
    assert series.series_bound_at_infinity(x, p, n) == pytest.approx(bound, rel=0)


def test_fd4_polynomial():
    assert series.fd4(lambda t: t**3, 1.0, 1e-2) == pytest.approx(3.0, abs=1e-8)


def test_fd4_exponential():
    assert series.fd4(math.exp, 0.0, 1e-3) == pytest.approx(1.0, abs=1e-11)


def test_fd4_one_sided_at_edges():
    assert series.fd4(math.exp, 0.0, 1e-3, hi=0.0) == pytest.approx(1.0, abs=1e-9)
    assert series.fd4(math.exp, 0.0, 1e-3, lo=0.0) == pytest.approx(1.0, abs=1e-9)


def test_fd4_shrinks_step_once():
    # Only half the stencil fits: step is halved rather than failing.
    got = series.fd4(math.exp, 0.0, 1e-3, lo=-1.2e-3, hi=1.2e-3)
    assert got == pytest.approx(1.0, abs=1e-10)


def test_fd4_no_room_raises():
    with pytest.raises(DomainError):
        series.fd4(math.exp, 0.0, 1e-3, lo=-1e-4, hi=1e-4)
