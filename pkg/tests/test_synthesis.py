import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose
from scipy.integrate import quad

from beamwiden.angular import hpbw
from beamwiden.special import bessel_j0
from beamwiden.synthesis import (
    EXPLICIT_SAMPLES,
    INVERSE_OF_ELEMENT,
    ArrayExcitation,
    SynthesisError,
    SynthesisTarget,
    array_factor,
    composite_pattern,
    eq4_coefficients,
    fejer_taper,
    raw_coefficients,
    reconstruction_excess,
    synthesize_coefficients,
)

THREE = ArrayExcitation(1, 0.5, [-0.15, 1.0, -0.15])


# --- array factor ---------------------------------------------------------------

def test_single_element_is_constant():
    theta = np.linspace(0, np.pi, 50)
    assert_allclose(array_factor(ArrayExcitation(0, 0.5, [1.0]), theta), 1.0)


def test_three_element_direct_values():
    f = array_factor(THREE, np.array([np.pi / 2, 0.0]))
    assert f[0] == pytest.approx(0.70, abs=1e-12)
    assert f[1] == pytest.approx(1.30, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 6), st.floats(0.1, 2.0), st.integers(0, 2**32 - 1))
def test_array_factor_linear(m_max, d, seed):
    rng = np.random.default_rng(seed)
    n = 2 * m_max + 1
    a = rng.normal(size=n) + 1j * rng.normal(size=n)
    b = rng.normal(size=n) + 1j * rng.normal(size=n)
    alpha = complex(rng.normal(), rng.normal())
    theta = np.linspace(0, np.pi, 37)
    lhs = array_factor(ArrayExcitation(m_max, d, a + alpha * b), theta)
    rhs = array_factor(ArrayExcitation(m_max, d, a), theta) + alpha * array_factor(ArrayExcitation(m_max, d, b), theta)
    assert_allclose(lhs, rhs, atol=1e-12 * (1 + np.abs(rhs).max()))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 8), st.integers(0, 2**32 - 1))
def test_real_symmetric_coefficients_give_real_array_factor(m_max, seed):
    rng = np.random.default_rng(seed)
    half = rng.normal(size=m_max + 1)
    coeffs = np.concatenate([half[:0:-1], half])
    f = array_factor(ArrayExcitation(m_max, 0.5, coeffs), np.linspace(0, np.pi, 181))
    assert np.abs(f.imag).max() <= 1e-12


def test_excitation_validation():
    with pytest.raises(SynthesisError):
        ArrayExcitation(1, 0.5, [1.0, 2.0])
    with pytest.raises(SynthesisError):
        ArrayExcitation(0, 0.0, [1.0])
    with pytest.raises(SynthesisError):
        ArrayExcitation(-1, 0.5, [])


# --- synthesis by quadrature ----------------------------------------------------

def test_sin_target_matches_bessel_closed_form():
    # int_0^pi exp(-j pi m cos t) dt = pi J0(m pi)
    raw = raw_coefficients(SynthesisTarget.sin_theta_element(), 4, 0.5)
    m = np.arange(-4, 5)
    assert_allclose(raw.real, np.pi * bessel_j0(m * np.pi), atol=1e-4)
    assert np.abs(raw.imag).max() < 1e-12


def test_bessel_identity_against_adaptive_quadrature():
    # independent oracle: scipy adaptive quadrature of the analytic integrand
    raw = raw_coefficients(SynthesisTarget.sin_theta_element(), 3, 0.5)
    for m in range(4):
        ref, _ = quad(lambda t: np.cos(np.pi * m * np.cos(t)), 0, np.pi, epsabs=1e-13)
        assert raw[3 + m].real == pytest.approx(ref, abs=1e-9)


def test_three_element_coefficients_from_quadrature():
    exc = fejer_taper(synthesize_coefficients(SynthesisTarget.sin_theta_element(), 1, 0.5))
    assert exc.coefficient(0) == 1.0
    for m in (-1, 1):
        assert abs(exc.coefficient(m).real - (-0.15)) <= 0.005
        assert abs(exc.coefficient(m).imag) < 1e-12


def test_constant_target_is_orthogonal():
    # int_{-1}^{1} exp(-j pi m u) du = 2 sinc(m) vanishes for m != 0
    target = SynthesisTarget.from_function(EXPLICIT_SAMPLES, np.ones_like)
    for m_max in (1, 3, 6):
        exc = synthesize_coefficients(target, m_max, 0.5)
        assert exc.coefficient(0) == 1.0
        others = np.delete(exc.coefficients, m_max)
        assert np.abs(others).max() < 1e-3


@pytest.mark.parametrize("func", [
    lambda t: np.sin(t) ** 2 + 0.3,
    lambda t: 1 + np.cos(t) ** 2,
    lambda t: np.exp(-((t - np.pi / 2) ** 2)),
])
def test_symmetric_real_target_gives_real_symmetric_coefficients(func):
    exc = synthesize_coefficients(SynthesisTarget.from_function(EXPLICIT_SAMPLES, func), 4, 0.5)
    c = exc.coefficients
    assert np.abs(c.imag).max() < 1e-9
    assert_allclose(c, c[::-1], atol=1e-9)


@pytest.mark.parametrize("m_max", [1, 4])
def test_quadrature_converged_under_doubling(m_max):
    target = SynthesisTarget.sin_theta_element()
    coarse = raw_coefficients(target, m_max, 0.5, 4001)
    fine = raw_coefficients(target, m_max, 0.5, 8001)
    assert np.abs(fine - coarse).max() < 1e-6


def test_reconstruction_error_non_increasing():
    target = SynthesisTarget.sin_theta_element()
    errors = [reconstruction_excess(target, m, 0.5) for m in (0, 1, 2, 4)]
    assert all(b <= a for a, b in zip(errors, errors[1:]))


def test_reconstruction_excess_matches_parseval():
    # orthogonal basis at d/lambda = 1/2: ||F - F_M||^2 - ||F||^2 = -(1/2) sum |c_m|^2
    target = SynthesisTarget.sin_theta_element()
    raw = raw_coefficients(target, 2, 0.5)
    assert reconstruction_excess(target, 2, 0.5) == pytest.approx(-0.5 * np.sum(np.abs(raw) ** 2), rel=1e-6)


def test_unusable_target():
    target = SynthesisTarget(INVERSE_OF_ELEMENT, np.linspace(0, np.pi, 11), np.zeros(11))
    with pytest.raises(SynthesisError, match="unusable target"):
        synthesize_coefficients(target, 1, 0.5)


def test_coarse_explicit_target_is_resampled():
    coarse = SynthesisTarget(EXPLICIT_SAMPLES, np.linspace(0, np.pi, 181), np.ones(181))
    fine = SynthesisTarget.from_function(EXPLICIT_SAMPLES, np.ones_like)
    assert_allclose(raw_coefficients(coarse, 2, 0.5), raw_coefficients(fine, 2, 0.5), atol=1e-12)


# --- Fejer taper and the closed form -------------------------------------------

def test_fejer_m1_halves_outer():
    exc = fejer_taper(ArrayExcitation(1, 0.5, [0.4, 1.0, 0.4]))
    assert_allclose(exc.coefficients, [0.2, 1.0, 0.2])


def test_fejer_weights_formula():
    exc = fejer_taper(ArrayExcitation(4, 0.5, np.ones(9)))
    assert exc.coefficient(2) == pytest.approx(0.6)
    assert exc.coefficient(-4) == pytest.approx(0.2)


def test_fejer_m0_identity():
    assert fejer_taper(ArrayExcitation(0, 0.5, [1.0])).coefficients[0] == 1.0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 8), st.integers(0, 2**32 - 1))
def test_fejer_preserves_symmetry_and_realness(m_max, seed):
    rng = np.random.default_rng(seed)
    half = rng.uniform(0.1, 2, size=m_max + 1)
    coeffs = np.concatenate([half[:0:-1], half])
    out = fejer_taper(ArrayExcitation(m_max, 0.5, coeffs)).coefficients
    assert np.all(out.imag == 0)
    assert_allclose(out, out[::-1], rtol=0, atol=0)


def test_closed_form_values():
    assert_allclose(eq4_coefficients(0).coefficients, [1.0])
    c = eq4_coefficients(1).coefficients.real
    assert_allclose(c, [-0.15, 1.0, -0.15], atol=0.005)
    # (1 - 1/5) J0(pi) = 0.8 * -0.30424217764 (series oracle)
    assert eq4_coefficients(4).coefficient(1).real == pytest.approx(-0.2433937421, abs=1e-9)
    assert eq4_coefficients(4).coefficient(1).real == pytest.approx(-0.2434, abs=1e-3)


@pytest.mark.parametrize("m_max", [0, 1, 2, 4])
def test_closed_form_equals_tapered_quadrature(m_max):
    exc = fejer_taper(synthesize_coefficients(SynthesisTarget.sin_theta_element(), m_max, 0.5))
    assert_allclose(exc.coefficients, eq4_coefficients(m_max).coefficients, atol=1e-9)


# --- composite pattern ----------------------------------------------------------

def test_composite_single_element_unchanged():
    theta = np.linspace(0, np.pi, 91)
    element = np.sin(theta)
    assert_allclose(composite_pattern(element, ArrayExcitation(0, 0.5, [1.0]), theta), element)


def test_composite_zero_at_axis():
    assert composite_pattern(np.array([0.0]), THREE, np.array([0.0]))[0] == 0.0


def test_composite_rejects_negative_element():
    with pytest.raises(ValueError):
        composite_pattern(np.array([-0.1, 1.0, 0.5]), THREE, np.array([0.0, 1.0, 2.0]))


def test_hpbw_ladder_non_decreasing():
    theta = np.radians(np.linspace(0, 180, 721))
    widths = [hpbw(theta, composite_pattern(np.sin(theta), eq4_coefficients(m), theta) ** 2)
              for m in (0, 1, 4)]
    assert widths[0] == pytest.approx(90.0, abs=0.01)
    assert widths[0] <= widths[1] <= widths[2]
