import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from panharmonia.specfun import (
    DomainError,
    HalfOrder,
    bessel_i,
    coeff,
    coeff_sphere_asymptotic,
    half_gamma,
    poisson_integral_u,
    unit_ball_volume,
    unit_sphere_area,
)


# closed forms in three dimensions
def sphere3(t):
    return np.sinh(t) / t


def ball3(t):
    return 3 * (t * np.cosh(t) - np.sinh(t)) / t**3


def test_half_gamma_matches_math_gamma():
    for k in range(1, 60):
        assert half_gamma(k) == pytest.approx(math.gamma(k / 2), rel=1e-14)


def test_half_gamma_rejects_nonpositive():
    with pytest.raises(DomainError):
        half_gamma(0)


def test_half_order_validation():
    assert HalfOrder.of(1.5).nu == 1.5
    with pytest.raises(DomainError):
        HalfOrder.of(0.3)
    with pytest.raises(DomainError):
        HalfOrder.of(-0.5)


def test_unit_sphere_and_ball():
    assert unit_sphere_area(2) == pytest.approx(2 * math.pi, rel=1e-15)
    assert unit_sphere_area(3) == pytest.approx(4 * math.pi, rel=1e-15)
    assert unit_ball_volume(3) == pytest.approx(4 * math.pi / 3, rel=1e-15)
    for m in range(2, 10):
        assert unit_ball_volume(m) == pytest.approx(unit_sphere_area(m) / m, rel=1e-14)


@pytest.mark.parametrize("nu", [0.0, 0.5, 1.0, 1.5, 2.5, 4.0, 7.5])
def test_bessel_against_scipy(nu):
    z = np.linspace(0.0, 100.0, 301)
    ours = bessel_i(nu, z)
    ref = special.iv(nu, z)
    np.testing.assert_allclose(ours, ref, rtol=1e-13, atol=0)


@pytest.mark.parametrize("nu", [0.0, 0.5, 3.0])
def test_scaled_bessel_against_scipy_large_argument(nu):
    z = np.array([200.0, 500.0, 700.0, 2000.0])
    np.testing.assert_allclose(bessel_i(nu, z, scaled=True), special.ive(nu, z), rtol=5e-13)


def test_bessel_half_order_closed_form():
    assert bessel_i(0.5, 1.0) == pytest.approx(math.sqrt(2 / math.pi) * math.sinh(1.0), rel=1e-15)


def test_bessel_at_zero():
    assert bessel_i(0.0, 0.0) == 1.0
    assert bessel_i(2.5, 0.0) == 0.0


def test_bessel_rejects_negative_argument():
    with pytest.raises(DomainError):
        bessel_i(0.5, -1.0)


def test_bessel_overflow_points_to_scaled():
    with pytest.raises(OverflowError):
        bessel_i(0.0, 1000.0)


def test_coeff_three_dimensional_closed_forms():
    t = np.linspace(0.1, 10, 100)
    np.testing.assert_allclose(coeff("sphere", 3, t), sphere3(t), rtol=1e-13)
    np.testing.assert_allclose(coeff("ball", 3, t), ball3(t), rtol=1e-12)
    np.testing.assert_allclose(coeff("ratio", 3, t), ball3(t) / sphere3(t), rtol=1e-12)


def test_coeff_reference_values():
    assert coeff("sphere", 3, 1.0) == pytest.approx(1.1752011936438014, rel=1e-15)
    assert coeff("ball", 3, 1.0) == pytest.approx(3 * (math.cosh(1) - math.sinh(1)), rel=1e-14)
    assert coeff("ratio", 3, 1.0) == pytest.approx(0.93910585649799, rel=1e-12)
    assert coeff("sphere", 2, 1.0) == pytest.approx(special.i0(1.0), rel=1e-15)


@pytest.mark.parametrize("m", [2, 3, 4, 5, 8])
def test_coeff_against_scipy_bessel_quotient(m):
    t = np.linspace(0.05, 50, 200)
    nu = (m - 2) / 2
    sphere = special.gamma(m / 2) * special.iv(nu, t) / (t / 2) ** nu
    ball = special.gamma(m / 2 + 1) * special.iv(nu + 1, t) / (t / 2) ** (nu + 1)
    np.testing.assert_allclose(coeff("sphere", m, t), sphere, rtol=1e-12)
    np.testing.assert_allclose(coeff("ball", m, t), ball, rtol=1e-12)


def test_coeff_scaled_consistent():
    t = np.array([1.0, 30.0, 300.0])
    np.testing.assert_allclose(coeff("sphere", 3, t[:2], scaled=True) * np.exp(t[:2]), coeff("sphere", 3, t[:2]),
                               rtol=1e-14)
    assert coeff("sphere", 3, 300.0, scaled=True) == pytest.approx((1 - math.exp(-600)) / 600, rel=1e-13)


def test_coeff_at_zero_is_one():
    for kind in ("sphere", "ball", "ratio"):
        for m in (2, 3, 7):
            assert coeff(kind, m, 0.0) == 1.0


def test_coeff_scalar_in_scalar_out():
    assert isinstance(coeff("sphere", 3, 1.0), float)
    assert coeff("sphere", 3, np.ones((2, 3))).shape == (2, 3)


def test_coeff_errors():
    with pytest.raises(DomainError):
        coeff("sphere", 1, 1.0)
    with pytest.raises(DomainError):
        coeff("sphere", 3, -0.1)
    with pytest.raises(ValueError):
        coeff("cube", 3, 1.0)


def test_batch_independence():
    # the sum is fixed once terms drop below half an ulp, so the value at a
    # point does not depend on its batch neighbors
    t = np.array([0.3, 7.0, 45.0, 600.0])
    alone = np.array([coeff("sphere", 5, x, scaled=True) for x in t])
    together = coeff("sphere", 5, t, scaled=True)
    assert np.array_equal(alone, together)


@given(st.integers(2, 9), st.floats(0.0, 40.0))
@settings(max_examples=80, deadline=None)
def test_coeff_ordering_and_growth(m, t):
    s = coeff("sphere", m, t)
    b = coeff("ball", m, t)
    assert s >= 1.0
    assert 1.0 <= b <= s
    assert coeff("ratio", m, t) == pytest.approx(b / s, rel=1e-13)


@given(st.integers(2, 9), st.floats(0.0, 20.0), st.floats(0.0, 20.0))
@settings(max_examples=80, deadline=None)
def test_coeff_monotone(m, t1, t2):
    lo, hi = sorted((t1, t2))
    assert coeff("sphere", m, lo) <= coeff("sphere", m, hi)
    assert coeff("ball", m, lo) <= coeff("ball", m, hi)


@given(st.integers(2, 9), st.floats(1e-3, 2.0))
@settings(max_examples=60, deadline=None)
def test_coeff_small_argument_expansion(m, t):
    # a_sphere = 1 + t^2/(2m) + O(t^4), a_ball = 1 + t^2/(2(m+2)) + O(t^4)
    assert coeff("sphere", m, t) - 1 == pytest.approx(t**2 / (2 * m), rel=t**2 / 4 + 1e-10)
    assert coeff("ball", m, t) - 1 == pytest.approx(t**2 / (2 * (m + 2)), rel=t**2 / 4 + 1e-10)


def test_asymptotic_three_dimensional_constant():
    for t in (20.0, 50.0, 200.0):
        assert coeff_sphere_asymptotic(3, t) * t * math.exp(-t) == pytest.approx(0.5, rel=1e-14)


@pytest.mark.parametrize("m", [2, 3, 4, 6])
def test_asymptotic_ratio_tends_to_one(m):
    t = np.array([50.0, 200.0, 600.0])
    ratio = coeff_sphere_asymptotic(m, t) / coeff("sphere", m, t)
    # leading correction is (m-1)(m-3)/(8t)
    np.testing.assert_allclose(ratio - 1, (m - 1) * (m - 3) / (8 * t), rtol=0, atol=2 * m**2 / 50.0**2)


def test_asymptotic_rejects_zero():
    with pytest.raises(DomainError):
        coeff_sphere_asymptotic(3, 0.0)


@pytest.mark.parametrize("m", [2, 3, 5])
def test_poisson_integral_matches_series(m):
    t = np.linspace(1e-3, 10, 200)
    np.testing.assert_allclose(poisson_integral_u(m, t), coeff("sphere", m, t), rtol=1e-10)


def test_poisson_integral_at_zero():
    assert poisson_integral_u(4, 0.0) == pytest.approx(1.0, rel=1e-14)
