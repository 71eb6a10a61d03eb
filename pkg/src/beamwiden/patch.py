"""
Rectangular-patch radiation model built from equivalent magnetic currents.

Each radiating aperture edge is a uniform magnetic line current lying on an
infinite ground plane (z = 0). Image theory doubles the current; that factor
and all other constants are dropped, so every pattern here is relative.

Coordinates: radiating edges of the fundamental mode run along x and are
separated along y, so the E-plane is y-z and the H-plane is x-z.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .angular import (
    UPPER_HEMISPHERE,
    AngularGrid,
    FarFieldPattern,
    PatternCut,
    PatternError,
    cut_from_halves,
)

SPEED_OF_LIGHT = 299_792_458.0


class GeometryError(ValueError):
    pass


@dataclass(frozen=True)
class PatchGeometry:
    """Patch, parasitic and substrate dimensions in metres.

    ``l_p`` is the resonant length (along y), ``w_p`` the width (along x).
    ``l_par``, ``w_par`` and ``w_g`` describe the parasitic patches and their
    gap; they are carried for completeness and not used by the radiation
    model. ``tan_delta`` is informative only.
    """

    l_p: float
    w_p: float
    l_par: float
    w_par: float
    w_g: float
    h: float
    eps_r: float
    tan_delta: float = 0.0

    def __post_init__(self):
        for name in ("l_p", "w_p", "l_par", "w_par", "w_g", "h"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise GeometryError(f"{name} must be a positive length, got {v!r}")
        if not (math.isfinite(self.eps_r) and self.eps_r >= 1):
            raise GeometryError(f"eps_r must be >= 1, got {self.eps_r!r}")
        if not (math.isfinite(self.tan_delta) and self.tan_delta >= 0):
            raise GeometryError("tan_delta must be non-negative")
        if self.h >= self.l_p:
            raise GeometryError("substrate must be thinner than the patch length (h < l_p)")

    def scaled(self, factor: float) -> "PatchGeometry":
        return replace(self, **{n: getattr(self, n) * factor
                                for n in ("l_p", "w_p", "l_par", "w_par", "w_g", "h")})


# 36 GHz design on RO3003
REFERENCE_GEOMETRY = PatchGeometry(
    l_p=2.29e-3, w_p=4.42e-3, l_par=2.21e-3, w_par=3.29e-3, w_g=1.16e-3,
    h=0.254e-3, eps_r=3.0, tan_delta=0.004,
)


def bandwidth_ratio(a: PatchGeometry, b: PatchGeometry, f0: float,
                    f0_b: Optional[float] = None) -> float:
    """Relative impedance bandwidth ``B_a / B_b`` with ``B ~ h w_p / (eps_r lambda0 l_p)``.

    ``f0_b`` defaults to ``f0``, in which case the free-space wavelength
    cancels.
    """
    lam_a = SPEED_OF_LIGHT / f0
    lam_b = SPEED_OF_LIGHT / (f0 if f0_b is None else f0_b)

    def scale(g, lam):
        return g.h * g.w_p / (g.eps_r * lam * g.l_p)

    return scale(a, lam_a) / scale(b, lam_b)


def effective_permittivity(g: PatchGeometry) -> float:
    # Hammerstad, wide strip (w/h >= 1):
    # eps_eff = (eps_r + 1)/2 + (eps_r - 1)/2 * (1 + 12 h / w)^(-1/2)
    return 0.5 * (g.eps_r + 1) + 0.5 * (g.eps_r - 1) / math.sqrt(1 + 12 * g.h / g.w_p)


def fringing_extension(g: PatchGeometry) -> float:
    """Open-end length extension ``dL`` of each radiating edge (Hammerstad)."""
    # dL = 0.412 h (eps_eff + 0.3)(w/h + 0.264) / ((eps_eff - 0.258)(w/h + 0.8))
    e = effective_permittivity(g)
    u = g.w_p / g.h
    return 0.412 * g.h * (e + 0.3) * (u + 0.264) / ((e - 0.258) * (u + 0.8))


def estimate_resonance(g: PatchGeometry, fringing: bool = True) -> float:
    """Fundamental-mode resonance ``c / (2 (l_p + 2 dL) sqrt(eps_eff))`` in Hz.

    ``fringing=False`` drops the length extension ``dL``.
    """
    if g.w_p / g.h < 1:
        raise GeometryError("model out of validity: w_p/h < 1")
    dl = fringing_extension(g) if fringing else 0.0
    return SPEED_OF_LIGHT / (2 * (g.l_p + 2 * dl) * math.sqrt(effective_permittivity(g)))


@dataclass(frozen=True)
class MagneticCurrent:
    """Uniform magnetic line current centred at ``(x, y)`` along ``(ux, uy)``."""

    x: float
    y: float
    ux: float
    uy: float
    amplitude: complex
    length: float

    def __post_init__(self):
        if abs(math.hypot(self.ux, self.uy) - 1.0) > 1e-9:
            raise GeometryError("current orientation must be a unit vector")
        if not self.length > 0:
            raise GeometryError("current length must be positive")
        object.__setattr__(self, "amplitude", complex(self.amplitude))


@dataclass(frozen=True)
class MagneticCurrentSet:
    elements: List[MagneticCurrent] = field(default_factory=list)
    frequency: Optional[float] = None

    def merged(self, other: "MagneticCurrentSet") -> "MagneticCurrentSet":
        if self.frequency != other.frequency:
            raise GeometryError("cannot merge current sets at different frequencies")
        return MagneticCurrentSet(list(self.elements) + list(other.elements), self.frequency)


def mode1_currents(g: PatchGeometry, f: float) -> MagneticCurrentSet:
    """In-phase pair of x-directed edge currents at ``y = +-(l_p + 2 dL)/2``."""
    half = 0.5 * (g.l_p + 2 * fringing_extension(g))
    return MagneticCurrentSet(
        [MagneticCurrent(0.0, -half, 1.0, 0.0, 1.0, g.w_p),
         MagneticCurrent(0.0, half, 1.0, 0.0, 1.0, g.w_p)],
        f,
    )


def mode2_currents(g: PatchGeometry, f: float, separation: Optional[float] = None) -> MagneticCurrentSet:
    """Anti-phase pair of y-directed currents at ``x = +-separation/2``.

    ``separation`` defaults to ``w_p``, i.e. currents on the outer edges.
    """
    if separation is None:
        separation = g.w_p
    if not 0 < separation <= g.w_p:
        raise GeometryError("mode-2 separation must lie in (0, w_p]")
    s = 0.5 * separation
    return MagneticCurrentSet(
        [MagneticCurrent(-s, 0.0, 0.0, 1.0, 1.0, g.l_p),
         MagneticCurrent(s, 0.0, 0.0, 1.0, -1.0, g.l_p)],
        f,
    )


def _sinc(x: np.ndarray) -> np.ndarray:
    return np.sinc(x / np.pi)


def far_field(currents: MagneticCurrentSet, grid: AngularGrid) -> FarFieldPattern:
    """Relative far field of the current set over the upper hemisphere.

    ``E ~ sum_n a_n (r x l_n) sinc(k L_n (r . l_n) / 2) exp(+j k r . r_n)``.
    """
    if grid.domain != UPPER_HEMISPHERE:
        raise PatternError("far_field requires an upper-hemisphere grid")
    if not currents.frequency or currents.frequency <= 0:
        raise GeometryError("current set has no frequency")
    k = 2 * np.pi * currents.frequency / SPEED_OF_LIGHT

    theta, phi = grid.mesh()
    st, ct = np.sin(theta), np.cos(theta)
    sp, cp = np.sin(phi), np.cos(phi)
    rx, ry, rz = st * cp, st * sp, ct

    ex = np.zeros(grid.shape, dtype=complex)
    ey = np.zeros(grid.shape, dtype=complex)
    ez = np.zeros(grid.shape, dtype=complex)
    for el in currents.elements:
        weight = el.amplitude * _sinc(0.5 * k * el.length * (rx * el.ux + ry * el.uy)) \
            * np.exp(1j * k * (rx * el.x + ry * el.y))
        # r x l with l = (ux, uy, 0)
        ex += weight * (-rz * el.uy)
        ey += weight * (rz * el.ux)
        ez += weight * (rx * el.uy - ry * el.ux)

    e_theta = ex * ct * cp + ey * ct * sp - ez * st
    e_phi = -ex * sp + ey * cp
    return FarFieldPattern(grid, e_theta, e_phi, currents.frequency)


def superpose_modes(p1: FarFieldPattern, w1: complex, p2: FarFieldPattern, w2: complex) -> FarFieldPattern:
    """Weighted sum ``w1 p1 + w2 p2`` of two patterns on the same grid."""
    if not p1.grid.same_as(p2.grid):
        raise PatternError("cannot superpose patterns on different grids")
    return FarFieldPattern(
        p1.grid,
        w1 * p1.e_theta + w2 * p2.e_theta,
        w1 * p1.e_phi + w2 * p2.e_phi,
        p1.frequency if p1.frequency == p2.frequency else None,
    )


def combined_currents(sets: Sequence[MagneticCurrentSet], weights: Sequence[complex]) -> MagneticCurrentSet:
    """Scale each set's amplitudes by its weight and merge them.

    By linearity the far field equals :func:`superpose_modes` of the parts.
    """
    out = MagneticCurrentSet([], sets[0].frequency)
    for s, w in zip(sets, weights):
        scaled = [replace(el, amplitude=el.amplitude * w) for el in s.elements]
        out = out.merged(MagneticCurrentSet(scaled, s.frequency))
    return out


def pattern_cut(currents: MagneticCurrentSet, phi_plane: float,
                theta_step_deg: float = 0.25) -> Tuple[PatternCut, float]:
    """Signed-theta Ludwig-3 cut in the plane ``phi_plane`` (radians), -90..90 deg.

    Returns the cut and the field magnitude its 0 dB level corresponds to.
    """
    front = AngularGrid.cut(phi_plane % (2 * np.pi), theta_step_deg, UPPER_HEMISPHERE)
    back = AngularGrid.cut((phi_plane + np.pi) % (2 * np.pi), theta_step_deg, UPPER_HEMISPHERE)
    return cut_from_halves(phi_plane, far_field(currents, front), far_field(currents, back))
