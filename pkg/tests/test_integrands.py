import math

import numpy as np
import pytest

from stabledens import integrands, oracle
from stabledens.exceptions import DomainError
from stabledens.params import make_params


def test_phase_symmetric_is_linear():
    p = make_params(1.7, 0.0)
    t = np.array([0.3, 1.0, 5.0])
    assert integrands.phase(t, 2.5, p) == pytest.approx(list(2.5 * t), abs=0)


def test_phase_at_t_one():
    # t = 1 makes t**alpha = t, so h = x for any alpha != 1.
    p = make_params(1.3, 0.6)
    assert integrands.phase(1.0, 4.2, p) == pytest.approx(4.2, abs=1e-15)


def test_phase_alpha_one_branch():
    # h = x t + (2 beta/pi) t log t.
    p = make_params(1.0, 0.5)
    expected = 6.0 + (1.0 / math.pi) * 2.0 * math.log(2.0)
    assert integrands.phase(2.0, 3.0, p) == pytest.approx(expected, abs=1e-14)


def test_phase_continuous_across_alpha_one():
    t, x = 0.7, 1.9
    lo = integrands.pdf_integrand(t, x, make_params(1.0 - 1e-8, 0.0))
    hi = integrands.pdf_integrand(t, x, make_params(1.0 + 1e-8, 0.0))
    at = integrands.pdf_integrand(t, x, make_params(1.0, 0.0))
    assert lo == pytest.approx(at, abs=1e-7)
    assert hi == pytest.approx(at, abs=1e-7)


def test_phase_dbeta_alpha_one_limit():
    p = make_params(1.0, 0.3)
    assert integrands.phase_dbeta(math.e, 0.0, p) == pytest.approx(2.0 * math.e / math.pi, rel=1e-14)
    # Near alpha = 1 the product formula must match the limit smoothly.
    for da in (1e-10, -1e-10, 1e-6):
        q = make_params(1.0 + da, 0.3)
        got = integrands.phase_dbeta(math.e, 0.0, q)
        assert got == pytest.approx(2.0 * math.e / math.pi, rel=1e-4)


def test_phase_dalpha_matches_fd():
    x, t = 1.3, 0.9
    for alpha, beta in ((1.5, 0.4), (0.7, -0.8), (1.9, 1.0)):
        h = 1e-6
        fd = (
            integrands.phase(t, x, make_params(alpha + h, beta))
            - integrands.phase(t, x, make_params(alpha - h, beta))
        ) / (2 * h)
        got = integrands.phase_dalpha(t, x, make_params(alpha, beta))
        assert got == pytest.approx(fd, rel=1e-7, abs=1e-8)


def test_phase_eval_bundle():
    p = make_params(1.4, 0.2)
    pe = integrands.phase_eval(0.8, 1.1, p)
    assert pe.h == integrands.phase(0.8, 1.1, p)
    assert pe.dh_dbeta == integrands.phase_dbeta(0.8, 1.1, p)


def test_pdf_integrand_bounded_by_envelope():
    rng = np.random.default_rng(0)
    for _ in range(50):
        alpha = rng.uniform(0.2, 2.0)
        beta = rng.uniform(-1, 1)
        x = rng.uniform(-20, 20)
        t = rng.uniform(1e-6, 30, size=64)
        p = make_params(alpha, beta)
        vals = integrands.pdf_integrand(t, x, p)
        assert np.all(np.abs(vals) <= np.exp(-(t**alpha)) + 1e-15)


def test_pdf_integrand_at_mode_is_envelope():
    p = make_params(1.6, 0.0)
    t = np.array([0.2, 1.0, 3.0])
    assert integrands.pdf_integrand(t, 0.0, p) == pytest.approx(list(np.exp(-(t**1.6))), abs=0)


def test_cdf_integrand_zero_at_mode_symmetric():
    p = make_params(1.2, 0.0)
    assert integrands.cdf_integrand(0.5, 0.0, p) == 0.0


def test_cdf_integrand_small_t_behavior():
    # sin(h)/t -> (x - zeta) + zeta t^(alpha-1) as t -> 0.
    p = make_params(1.5, 0.5)
    x = 2.0
    t = 1e-9
    expected = (x - p.zeta) + p.zeta * t ** (p.alpha - 1.0)
    assert integrands.cdf_integrand(t, x, p) == pytest.approx(expected, rel=1e-12)


def test_grad_integrand_gx_zero_symmetric_mode():
    p = make_params(1.3, 0.0)
    gx, _, _ = integrands.grad_integrands(np.array([0.1, 1.0, 7.0]), 0.0, p)
    assert np.all(gx == 0.0)


def test_grad_integrand_gx_matches_x_derivative():
    p = make_params(1.1, 0.4)
    t = np.array([0.3, 1.7])
    h = 1e-6
    fd = (integrands.pdf_integrand(t, 2.0 + h, p) - integrands.pdf_integrand(t, 2.0 - h, p)) / (2 * h)
    gx, _, _ = integrands.grad_integrands(t, 2.0, p)
    assert gx == pytest.approx(list(fd), abs=1e-8)


def test_stationary_peak_value():
    # The damped angular integrand g e^{-g} peaks at e^{-1} where g = 1.
    p = make_params(1.5, 0.3)
    x = 2.0
    theta = np.linspace(-p.theta0 + 1e-6, math.pi / 2 - 1e-6, 20001)
    vals = integrands.angular_integrand(theta, x, p)
    assert vals.max() == pytest.approx(math.exp(-1.0), abs=1e-6)


def test_stationary_domain_error():
    p = make_params(1.5, 0.3)
    with pytest.raises(DomainError):
        integrands.stationary_g(math.pi / 2, 2.0, p)
    with pytest.raises(DomainError):
        integrands.stationary_g(0.0, p.zeta - 1.0, p)


def test_angular_matches_fourier_integral():
    p = make_params(1.5, 0.3)
    x = 2.0
    scale = p.alpha / (math.pi * abs(p.alpha - 1.0) * (x - p.zeta))
    res = oracle.adaptive_integrate(
        lambda th: integrands.angular_integrand(th, x, p),
        -p.theta0 + 1e-12,
        math.pi / 2 - 1e-12,
        abs_tol=1e-12,
    )
    ref = oracle.pdf_oracle_fourier(x, p, 1e-12).value
    assert scale * res.value == pytest.approx(ref, abs=1e-10)


def test_angular_decays_at_both_ends():
    p = make_params(0.7, 0.5)
    x = p.zeta + 1.5
    lo, hi = -p.theta0, math.pi / 2
    width = hi - lo
    assert integrands.angular_integrand(lo + 1e-9 * width, x, p) < 1e-3
    assert integrands.angular_integrand(hi - 1e-9 * width, x, p) < 1e-3


def test_theta_epsilon_defining_property():
    for alpha, beta, x_off in ((0.7, 0.5, 1.5), (1.6, -0.3, 2.0), (1.3, 0.9, 0.7)):
        p = make_params(alpha, beta)
        x = p.zeta + x_off
        eps = 1e-12
        te = integrands.theta_epsilon(x, p, eps)
        assert integrands.angular_integrand(te, x, p) <= eps * 1.0001


def test_theta_epsilon_g_target_forty():
    # For eps around double precision decay the cut sits near g = 40.
    from stabledens.integrands import _solve_g_target

    g = _solve_g_target(40.0 * math.exp(-40.0))
    assert g == pytest.approx(40.0, rel=1e-12)


def test_truncated_interval_captures_integral():
    rng = np.random.default_rng(5)
    for _ in range(25):
        alpha = rng.uniform(0.5, 2.0)
        if 0.9 < alpha < 1.1:
            # Spiked zone: g loses monotonicity for beta != 0, and the
            # angular form is rejected there anyway.
            continue
        beta = rng.uniform(-0.9, 0.9)
        p = make_params(alpha, beta)
        x = p.zeta + rng.uniform(0.3, 4.0)
        eps = 1e-11
        a, b = integrands.truncated_interval(x, p, eps)
        lo, hi = -p.theta0, math.pi / 2
        width = hi - lo
        full = oracle.adaptive_integrate(
            lambda th: integrands.angular_integrand(th, x, p),
            lo + 1e-13 * width, hi - 1e-13 * width, abs_tol=0.01 * eps,
        ).value
        part = oracle.adaptive_integrate(
            lambda th: integrands.angular_integrand(th, x, p),
            max(a, lo + 1e-13 * width), min(b, hi - 1e-13 * width), abs_tol=0.01 * eps,
        ).value
        assert abs(full - part) <= eps * (1 + width)
