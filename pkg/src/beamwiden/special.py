"""Bessel J0 and the composite trapezoid rule used by the synthesis code."""
from __future__ import annotations

import math

import numpy as np

J0_MAX_ARG = 100.0
_SERIES_LIMIT = 12.0


def _j0_series(x: float) -> float:
    # sum_k (-1)^k (x/2)^(2k) / (k!)^2; terms peak near k = x/2 at ~e^x/(pi x),
    # so cancellation costs < 1e-12 absolute for |x| <= 12
    q = -0.25 * x * x
    term = 1.0
    total = 1.0
    k = 0
    while True:
        k += 1
        term *= q / (k * k)
        total += term
        if abs(term) < 1e-17 * max(1.0, abs(total)) and k > 0.5 * abs(x):
            return total


def _j0_hankel(x: float) -> float:
    # Hankel expansion with a_k = prod_{i<=k} (2i-1)^2 / (k! 8^k), summed
    # until the terms stop shrinking
    p = 0.0
    q = 0.0
    term = 1.0
    k = 0
    prev = math.inf
    while abs(term) < prev and k < 200:
        if k % 2 == 0:
            p += term if k % 4 == 0 else -term
        else:
            q += term if k % 4 == 3 else -term
        prev = abs(term)
        k += 1
        term *= (2 * k - 1) ** 2 / (8.0 * k * x)
    chi = x - 0.25 * math.pi
    return math.sqrt(2.0 / (math.pi * x)) * (p * math.cos(chi) - q * math.sin(chi))


def bessel_j0(x):
    """Bessel function of the first kind, order zero.

    Power series for ``|x| <= 12`` and the Hankel asymptotic expansion
    beyond; absolute error below 1e-9 on ``|x| <= 100``. Accepts scalars or
    arrays.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(np.abs(arr) > J0_MAX_ARG):
        raise ValueError(f"bessel_j0: argument out of validated range |x| <= {J0_MAX_ARG:g}")
    out = np.empty(arr.shape)
    for idx, v in np.ndenumerate(arr):
        v = abs(float(v))
        out[idx] = _j0_series(v) if v <= _SERIES_LIMIT else _j0_hankel(v)
    return float(out) if out.ndim == 0 else out


def trapezoid(y: np.ndarray, dx: float, axis: int = 0) -> np.ndarray:
    """Composite trapezoid rule on uniformly spaced samples."""
    return np.trapezoid(y, dx=dx, axis=axis)
