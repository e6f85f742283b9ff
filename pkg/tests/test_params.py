import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stabledens.config import DispatchConfig
from stabledens.exceptions import DomainError
from stabledens.params import (
    RegionTag,
    classify_region,
    location_a_to_m,
    location_m_to_a,
    make_params,
    reflect,
)

alphas = st.floats(min_value=0.01, max_value=2.0, exclude_min=False)
betas = st.floats(min_value=-1.0, max_value=1.0)


def test_gaussian_case_trivial():
    p = make_params(2.0, 0.0)
    assert p.zeta == 0.0
    assert p.theta0 == 0.0


def test_alpha_one_skewed():
    p = make_params(1.0, 0.7)
    assert p.zeta == 0.0
    assert p.theta0 == pytest.approx(math.pi / 2, abs=0)


def test_half_alpha_full_skew():
    # tan(pi/4) = 1, so zeta = -1 and theta0 = 2*arctan(1) = pi/2.
    p = make_params(0.5, 1.0)
    assert p.zeta == pytest.approx(-1.0, abs=1e-15)
    assert p.theta0 == pytest.approx(math.pi / 2, abs=1e-15)


@pytest.mark.parametrize("alpha,beta", [(0.0, 0.0), (2.1, 0.0), (-1.0, 0.0), (1.5, 1.5), (1.5, -2.0)])
def test_out_of_range_rejected(alpha, beta):
    with pytest.raises(DomainError):
        make_params(alpha, beta)


@given(alphas.filter(lambda a: abs(a - 1.0) > 1e-9), betas)
@settings(max_examples=200, deadline=None)
def test_zeta_antisymmetric_in_beta(alpha, beta):
    p_plus = make_params(alpha, beta)
    p_minus = make_params(alpha, -beta)
    assert p_plus.zeta == pytest.approx(-p_minus.zeta, abs=1e-12, rel=1e-12)


def test_beta_zero_shortcircuits_everywhere():
    for alpha in (0.5, 0.9999999, 1.0, 1.0000001, 2.0):
        p = make_params(alpha, 0.0)
        assert p.zeta == 0.0 and p.theta0 == 0.0


def test_location_conversion_examples():
    assert location_a_to_m(0.0, make_params(2.0, 0.3)) == 0.0
    # tan(pi/4) = 1 at alpha = 0.5, beta = 1.
    assert location_a_to_m(1.0, make_params(0.5, 1.0)) == pytest.approx(2.0, abs=1e-14)
    # alpha = 1: forms coincide.
    assert location_a_to_m(1.3, make_params(1.0, 0.4)) == 1.3


@given(alphas, betas, st.floats(min_value=-100, max_value=100))
@settings(max_examples=200, deadline=None)
def test_location_roundtrip(alpha, beta, gamma):
    p = make_params(alpha, beta)
    shift = 0.0 if alpha == 1.0 else abs(beta * math.tan(math.pi * alpha / 2))
    back = location_m_to_a(location_a_to_m(gamma, p), p)
    # Round-trip error floor is one ulp of the (possibly huge) shift term.
    assert back == pytest.approx(gamma, abs=1e-13 + 4e-16 * (abs(gamma) + shift))


def test_location_roundtrip_moderate_alpha_machine_precision():
    p = make_params(0.5, 1.0)
    for gamma in (-3.0, 0.0, 1.0, 17.5):
        back = location_m_to_a(location_a_to_m(gamma, p), p)
        assert back == pytest.approx(gamma, abs=1e-15)


def test_reflect_positive_side_unchanged():
    p = make_params(1.5, 0.5)
    x, q, flipped = reflect(5.0, p)
    assert (x, q, flipped) == (5.0, p, False)


def test_reflect_symmetric_negative():
    p = make_params(1.2, 0.0)
    x, q, flipped = reflect(-3.0, p)
    assert flipped and x == 3.0 and q.beta == 0.0


@given(alphas, betas, st.floats(min_value=-50, max_value=50))
@settings(max_examples=300, deadline=None)
def test_reflect_idempotent_and_halfdomain(alpha, beta, x):
    p = make_params(alpha, beta)
    xr, pr, _ = reflect(x, p)
    assert xr - pr.zeta >= 0.0
    again = reflect(xr, pr)
    assert again == (xr, pr, False)


def test_classify_examples():
    cfg = DispatchConfig()
    assert classify_region(0.0, make_params(1.5, 0.0), cfg) is RegionTag.SYMMETRIC_CENTRAL
    p = make_params(0.6, 0.3)
    assert classify_region(p.zeta + 1e10, p, cfg) is RegionTag.ASYMMETRIC_TAIL
    assert classify_region(1.0, make_params(1.0, 0.5), cfg) is RegionTag.UNSUPPORTED_GAP
    assert (
        classify_region(0.0, make_params(0.3, 0.0), cfg)
        is RegionTag.UNSUPPORTED_SMALL_ALPHA
    )


def test_classify_boundary_goes_central():
    from stabledens.params import central_boundary

    cfg = DispatchConfig()
    p = make_params(1.5, 0.0)
    b = central_boundary(p, cfg)
    assert classify_region(b, p, cfg) is RegionTag.SYMMETRIC_CENTRAL
    assert classify_region(b * (1 + 1e-12), p, cfg) is RegionTag.SYMMETRIC_TAIL


@given(alphas, betas, st.floats(min_value=-1e6, max_value=1e6))
@settings(max_examples=300, deadline=None)
def test_classify_total(alpha, beta, x):
    p = make_params(alpha, beta)
    xr, pr, _ = reflect(x, p)
    tag = classify_region(xr, pr)
    assert isinstance(tag, RegionTag)


def test_gap_band_edges_supported():
    cfg = DispatchConfig()
    p = make_params(0.9, 0.5)
    assert classify_region(p.zeta, p, cfg) is RegionTag.ASYMMETRIC_LOW_CENTRAL
    p = make_params(1.1, -0.5)
    assert classify_region(p.zeta, p, cfg) is RegionTag.ASYMMETRIC_HIGH_CENTRAL
