"""
Fourier synthesis of uniform linear arrays along the z axis.

The array factor of ``2M+1`` elements spaced ``d`` apart is

    F(theta) = sum_m c_m exp(+j 2 pi m (d/lambda) cos(theta)),

and excitations approximating a desired ``F`` follow from projecting it
onto the conjugate kernel with the ``sin(theta)`` weight. Choosing ``F`` as
the inverse of the element pattern flattens the composite pattern, which
widens the beam.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .angular import AngularGrid, PatternError
from .special import bessel_j0, trapezoid

DEFAULT_QUADRATURE_SAMPLES = 4001
DEFAULT_CLIP_FLOOR = 1e-6

INVERSE_OF_ELEMENT = "inverse-of-element"
EXPLICIT_SAMPLES = "explicit-samples"


class SynthesisError(ValueError):
    pass


@dataclass(frozen=True)
class ArrayExcitation:
    """Complex excitations ``c_{-M} .. c_M`` (ascending ``m``) and spacing ``d/lambda``."""

    m_max: int
    spacing_over_lambda: float
    coefficients: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coefficients, dtype=complex).ravel()
        if int(self.m_max) != self.m_max or self.m_max < 0:
            raise SynthesisError("m_max must be a non-negative integer")
        if coeffs.size != 2 * self.m_max + 1:
            raise SynthesisError(
                f"expected {2 * self.m_max + 1} coefficients for m_max={self.m_max}, got {coeffs.size}"
            )
        d = float(self.spacing_over_lambda)
        if not np.isfinite(d) or d <= 0:
            raise SynthesisError("spacing_over_lambda must be finite and positive")
        if not np.all(np.isfinite(coeffs)):
            raise SynthesisError("coefficients must be finite")
        object.__setattr__(self, "m_max", int(self.m_max))
        object.__setattr__(self, "spacing_over_lambda", d)
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.m_max, self.m_max + 1)

    def coefficient(self, m: int) -> complex:
        return complex(self.coefficients[m + self.m_max])

    def normalized(self) -> "ArrayExcitation":
        c0 = self.coefficient(0)
        if c0 == 0:
            raise SynthesisError("cannot normalise: c_0 is zero")
        coeffs = self.coefficients / c0
        coeffs[self.m_max] = 1.0
        return ArrayExcitation(self.m_max, self.spacing_over_lambda, coeffs)


@dataclass(frozen=True)
class SynthesisTarget:
    """Samples on ``theta`` (radians, uniform over ``[0, pi]``).

    For ``inverse-of-element`` targets ``values`` holds the element pattern
    ``C`` and the desired array factor is ``1 / max(C, clip_floor)``; for
    ``explicit-samples`` targets ``values`` is the desired array factor.
    """

    kind: str
    theta: np.ndarray
    values: np.ndarray
    clip_floor: float = DEFAULT_CLIP_FLOOR

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if self.kind not in (INVERSE_OF_ELEMENT, EXPLICIT_SAMPLES):
            raise SynthesisError(f"unknown target kind {self.kind!r}")
        if theta.ndim != 1 or theta.shape != values.shape or theta.size < 3:
            raise SynthesisError("target needs matching 1-D theta/value arrays (>= 3 samples)")
        if not (np.all(np.isfinite(values)) and np.all(np.isfinite(theta))):
            raise SynthesisError("target samples must be finite")
        if np.any(values < 0):
            raise SynthesisError("target samples must be non-negative")
        if not np.all(np.diff(theta) > 0):
            raise SynthesisError("target theta must be strictly increasing")
        if not self.clip_floor > 0:
            raise SynthesisError("clip_floor must be positive")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_function(cls, kind: str, func: Callable[[np.ndarray], np.ndarray],
                      samples: int = DEFAULT_QUADRATURE_SAMPLES,
                      clip_floor: float = DEFAULT_CLIP_FLOOR) -> "SynthesisTarget":
        theta = np.linspace(0.0, np.pi, samples)
        return cls(kind, theta, np.asarray(func(theta), dtype=float) * np.ones_like(theta), clip_floor)

    @classmethod
    def sin_theta_element(cls, samples: int = DEFAULT_QUADRATURE_SAMPLES,
                          clip_floor: float = DEFAULT_CLIP_FLOOR) -> "SynthesisTarget":
        # sin(pi) is 1.2e-16, not 0; abs() keeps the samples non-negative
        return cls.from_function(INVERSE_OF_ELEMENT, lambda t: np.abs(np.sin(t)), samples, clip_floor)

    def resampled(self, theta: np.ndarray) -> np.ndarray:
        """Target values linearly interpolated onto ``theta`` (zero outside the sampled range)."""
        if self.theta.size == theta.size and np.array_equal(self.theta, theta):
            return self.values
        return np.interp(theta, self.theta, self.values, left=0.0, right=0.0)


def array_factor(exc: ArrayExcitation, theta: np.ndarray) -> np.ndarray:
    """Complex array factor at the polar angles ``theta`` (radians)."""
    theta = theta.theta if isinstance(theta, AngularGrid) else np.asarray(theta, dtype=float)
    phase = 2j * np.pi * exc.spacing_over_lambda * np.cos(theta)
    return np.exp(np.multiply.outer(phase, exc.indices)) @ exc.coefficients


def _pole_limit(integrand: np.ndarray, bad: np.ndarray) -> np.ndarray:
    # quadratic extrapolation from the three nearest interior samples
    out = integrand.copy()
    if bad[0]:
        out[0] = 3 * out[1] - 3 * out[2] + out[3]
    if bad[-1]:
        out[-1] = 3 * out[-2] - 3 * out[-3] + out[-4]
    return out


def projection_integrand(target: SynthesisTarget, samples: int = DEFAULT_QUADRATURE_SAMPLES):
    """Return ``(theta, F(theta) * sin(theta))`` on the uniform quadrature grid.

    With an inverse-of-element target whose element vanishes at a pole
    (where ``sin(theta)`` vanishes too), the clipped inverse would zero the
    endpoint sample and cost an O(h) quadrature error. Those endpoint values
    are replaced by their limit, extrapolated from interior samples.
    """
    if samples < 5:
        raise SynthesisError("need at least 5 quadrature samples")
    theta = np.linspace(0.0, np.pi, samples)
    values = target.resampled(theta)
    jac = np.sin(theta)
    jac[-1] = 0.0
    if target.kind == EXPLICIT_SAMPLES:
        return theta, values * jac

    if np.all(values < target.clip_floor):
        raise SynthesisError("unusable target: element pattern is everywhere below clip_floor")
    clipped = values < target.clip_floor
    integrand = jac / np.maximum(values, target.clip_floor)
    pole = np.zeros(samples, dtype=bool)
    pole[0] = clipped[0] and not clipped[1:4].any()
    pole[-1] = clipped[-1] and not clipped[-4:-1].any()
    return theta, _pole_limit(integrand, pole)


def raw_coefficients(target: SynthesisTarget, m_max: int, spacing_over_lambda: float,
                     samples: int = DEFAULT_QUADRATURE_SAMPLES) -> np.ndarray:
    """Un-normalised projections ``c_m = int_0^pi F e^{-j 2 pi m d cos} sin dtheta``."""
    if m_max < 0:
        raise SynthesisError("m_max must be non-negative")
    theta, integrand = projection_integrand(target, samples)
    m = np.arange(-m_max, m_max + 1)
    kernel = np.exp(-2j * np.pi * spacing_over_lambda * np.multiply.outer(np.cos(theta), m))
    return trapezoid(integrand[:, None] * kernel, dx=theta[1] - theta[0], axis=0)


def synthesize_coefficients(target: SynthesisTarget, m_max: int, spacing_over_lambda: float,
                            samples: int = DEFAULT_QUADRATURE_SAMPLES) -> ArrayExcitation:
    """Excitations approximating ``target``, normalised to ``c_0 = 1``."""
    raw = raw_coefficients(target, m_max, spacing_over_lambda, samples)
    return ArrayExcitation(m_max, spacing_over_lambda, raw).normalized()


def fejer_weights(m_max: int) -> np.ndarray:
    m = np.arange(-m_max, m_max + 1)
    return 1.0 - np.abs(m) / (m_max + 1)


def fejer_taper(exc: ArrayExcitation) -> ArrayExcitation:
    """Triangular (Fejer) taper ``1 - |m|/(M+1)``, renormalised to ``c_0 = 1``."""
    tapered = ArrayExcitation(exc.m_max, exc.spacing_over_lambda,
                              exc.coefficients * fejer_weights(exc.m_max))
    return tapered.normalized()


def eq4_coefficients(m_max: int) -> ArrayExcitation:
    """Closed-form Fejer-tapered design for a ``sin(theta)`` element at half-wave spacing.

    ``c_m = (1 - |m|/(M+1)) J0(m pi)``, normalised to ``c_0 = 1``.
    """
    if m_max < 0:
        raise SynthesisError("m_max must be non-negative")
    m = np.arange(-m_max, m_max + 1)
    coeffs = fejer_weights(m_max) * bessel_j0(m * np.pi)
    return ArrayExcitation(m_max, 0.5, coeffs).normalized()


def composite_pattern(element: np.ndarray, exc: ArrayExcitation, theta: np.ndarray) -> np.ndarray:
    """Pattern multiplication ``|F(theta)| * C(theta)`` (field magnitude)."""
    element = np.asarray(element, dtype=float)
    if np.any(element < 0):
        raise PatternError("element pattern must be non-negative")
    return np.abs(array_factor(exc, theta)) * element


def reconstruction_excess(target: SynthesisTarget, m_max: int, spacing_over_lambda: float,
                          taper: bool = False,
                          samples: int = DEFAULT_QUADRATURE_SAMPLES) -> float:
    """Least-squares residual of the truncated series, shifted by the target norm.

    Returns ``int (|F_M|^2 - 2 Re(conj(F) F_M)) sin(theta) dtheta``, which is
    ``||F - F_M||^2 - ||F||^2`` in the ``sin(theta)``-weighted norm. The shift
    keeps the value finite for targets such as ``1/sin(theta)`` whose own norm
    diverges. ``F_M`` is the un-normalised series scaled by ``d/lambda``, the
    Fourier normalisation for a period of ``lambda/d`` in ``cos(theta)``.
    """
    theta, weighted_target = projection_integrand(target, samples)
    raw = raw_coefficients(target, m_max, spacing_over_lambda, samples)
    if taper:
        raw = raw * fejer_weights(m_max)
    exc = ArrayExcitation(m_max, spacing_over_lambda, raw * spacing_over_lambda)
    approx = array_factor(exc, theta)
    integrand = np.abs(approx) ** 2 * np.sin(theta) - 2 * np.real(weighted_target * approx)
    return float(trapezoid(integrand, dx=theta[1] - theta[0]))
