"""
Angular grids, far-field containers and pattern metrics.

All angles are radians internally; degrees appear only in the metric
outputs and in :class:`PatternCut`, which mirrors the on-disk cut format.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

FULL_SPHERE = "full-sphere"
UPPER_HEMISPHERE = "upper-hemisphere"

# Ludwig-3 reference: co-polarisation along y (E-plane is y-z).
LUDWIG3_CONVENTION = "ludwig3:copol=y;L3V=Ey;L3H=Ex"

_UNIFORM_RTOL = 1e-6


class PatternError(ValueError):
    """Raised for invalid grids, patterns or degenerate metric inputs."""


def _uniform(samples: np.ndarray) -> bool:
    steps = np.diff(samples)
    return bool(np.allclose(steps, steps[0], rtol=_UNIFORM_RTOL, atol=1e-12))


@dataclass(frozen=True)
class AngularGrid:
    """Tensor grid of polar angles ``theta`` and azimuths ``phi`` (radians).

    A single ``phi`` value denotes a planar cut; for directivity it is
    read as a pattern that is rotationally symmetric about z.
    """

    theta: np.ndarray
    phi: np.ndarray = field(default_factory=lambda: np.zeros(1))
    domain: str = FULL_SPHERE

    def __post_init__(self):
        theta = np.atleast_1d(np.asarray(self.theta, dtype=float))
        phi = np.atleast_1d(np.asarray(self.phi, dtype=float))
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)

        if self.domain not in (FULL_SPHERE, UPPER_HEMISPHERE):
            raise PatternError(f"unknown domain tag {self.domain!r}")
        if theta.ndim != 1 or theta.size < 3:
            raise PatternError("need at least 3 theta samples")
        if not np.all(np.isfinite(theta)) or not np.all(np.diff(theta) > 0):
            raise PatternError("theta samples must be finite and strictly increasing")
        tol = 1e-12
        theta_max = np.pi / 2 if self.domain == UPPER_HEMISPHERE else np.pi
        if theta[0] < -tol or theta[-1] > theta_max + tol:
            raise PatternError(f"theta samples outside [0, {theta_max:.6g}] rad")
        if not _uniform(theta):
            raise PatternError("theta spacing must be uniform")
        if phi.ndim != 1 or not np.all(np.isfinite(phi)):
            raise PatternError("phi samples must be a finite 1-D array")
        if phi.size > 1 and not np.all(np.diff(phi) > 0):
            raise PatternError("phi samples must be strictly increasing")
        if phi[0] < -tol or phi[-1] >= 2 * np.pi - tol:
            raise PatternError("phi samples outside [0, 2*pi)")

    @classmethod
    def regular(
        cls,
        theta_step_deg: float = 0.25,
        phi_step_deg: Optional[float] = 1.0,
        domain: str = FULL_SPHERE,
    ) -> "AngularGrid":
        """Uniform grid covering the whole domain.

        ``phi_step_deg=None`` gives a single ``phi = 0`` cut.
        """
        theta_max = 90.0 if domain == UPPER_HEMISPHERE else 180.0
        n_theta = int(round(theta_max / theta_step_deg)) + 1
        theta = np.radians(np.linspace(0.0, theta_max, n_theta))
        if phi_step_deg is None:
            phi = np.zeros(1)
        else:
            n_phi = int(round(360.0 / phi_step_deg))
            phi = 2 * np.pi * np.arange(n_phi) / n_phi
        return cls(theta, phi, domain)

    @classmethod
    def cut(cls, phi: float, theta_step_deg: float = 0.25, domain: str = FULL_SPHERE):
        g = cls.regular(theta_step_deg, None, domain)
        return cls(g.theta, np.array([phi]), domain)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.theta.size, self.phi.size)

    @property
    def is_cut(self) -> bool:
        return self.phi.size == 1

    def mesh(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.theta, self.phi, indexing="ij")

    def same_as(self, other: "AngularGrid") -> bool:
        return (
            self.domain == other.domain
            and self.shape == other.shape
            and np.array_equal(self.theta, other.theta)
            and np.array_equal(self.phi, other.phi)
        )


@dataclass(frozen=True)
class FarFieldPattern:
    """Complex spherical field components sampled on ``grid``.

    ``e_theta`` and ``e_phi`` have shape ``grid.shape``; 1-D input of length
    ``n_theta`` is accepted for single-phi grids.
    """

    grid: AngularGrid
    e_theta: np.ndarray
    e_phi: np.ndarray
    frequency: Optional[float] = None

    def __post_init__(self):
        shape = self.grid.shape
        for name in ("e_theta", "e_phi"):
            arr = np.asarray(getattr(self, name), dtype=complex)
            if arr.ndim == 1 and self.grid.is_cut:
                arr = arr[:, None]
            if arr.shape != shape:
                raise PatternError(f"{name} has shape {arr.shape}, grid is {shape}")
            if not np.all(np.isfinite(arr)):
                raise PatternError(f"{name} contains non-finite values")
            object.__setattr__(self, name, arr)


@dataclass(frozen=True)
class PatternCut:
    """Ludwig-3 magnitudes (dB) along a planar cut.

    ``theta_deg`` is signed: negative angles lie in the half-plane
    ``phi_plane + 180 deg``.
    """

    phi_plane: float
    theta_deg: np.ndarray
    l3h_db: np.ndarray
    l3v_db: np.ndarray

    def __post_init__(self):
        cols = [np.asarray(getattr(self, n), dtype=float) for n in ("theta_deg", "l3h_db", "l3v_db")]
        if len({c.shape for c in cols}) != 1 or cols[0].ndim != 1:
            raise PatternError("cut columns must be 1-D with equal lengths")
        if cols[0].size < 2 or not np.all(np.diff(cols[0]) > 0):
            raise PatternError("cut theta_deg must be strictly increasing")
        for name, c in zip(("theta_deg", "l3h_db", "l3v_db"), cols):
            object.__setattr__(self, name, c)


@dataclass(frozen=True)
class PatternMetrics:
    hpbw_deg: float
    directivity_dbi: float
    peak_theta_deg: float
    peak_phi_deg: float

    def as_dict(self) -> dict:
        return {
            "hpbw_deg": self.hpbw_deg,
            "directivity_dbi": self.directivity_dbi,
            "peak_theta_deg": self.peak_theta_deg,
            "peak_phi_deg": self.peak_phi_deg,
            "convention": LUDWIG3_CONVENTION,
        }


def power_pattern(p: FarFieldPattern) -> np.ndarray:
    """|E_theta|^2 + |E_phi|^2 on the pattern grid."""
    return np.abs(p.e_theta) ** 2 + np.abs(p.e_phi) ** 2


def hpbw(theta: np.ndarray, power: np.ndarray) -> float:
    """Half-power beamwidth in degrees.

    Returns the total angular measure of ``{theta : P(theta) >= max(P)/2}``
    under linear interpolation between samples. For twin-lobe patterns this
    is the sum of the individual lobe widths (plus any bridge between them
    that stays above half power).

    Parameters
    ----------
    theta : ndarray
        Strictly increasing sample angles in radians.
    power : ndarray
        Non-negative power samples.
    """
    theta = np.asarray(theta, dtype=float)
    power = np.asarray(power, dtype=float)
    if theta.ndim != 1 or theta.shape != power.shape or theta.size < 3:
        raise PatternError("hpbw needs matching 1-D arrays with at least 3 samples")
    peak = power.max()
    if not peak > 0:
        raise PatternError("degenerate pattern")

    level = power - 0.5 * peak
    a, b = level[:-1], level[1:]
    width = np.diff(theta)
    above = (a >= 0) & (b >= 0)
    crossing = (a >= 0) != (b >= 0)

    total = width[above].sum()
    if np.any(crossing):
        ac, bc, wc = a[crossing], b[crossing], width[crossing]
        # fraction of the interval on the upper side of the crossing
        pos = np.where(ac >= 0, ac, bc)
        total += np.sum(wc * pos / (np.abs(ac) + np.abs(bc)))
    return float(np.degrees(total))


def _theta_weights(theta: np.ndarray) -> np.ndarray:
    """Composite trapezoid weights for a uniform theta grid."""
    w = np.full(theta.size, theta[1] - theta[0])
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


def radiated_integral(grid: AngularGrid, intensity: np.ndarray) -> float:
    """Integral of ``intensity`` over solid angle on the grid's domain.

    Trapezoid rule in theta with the ``sin(theta)`` Jacobian. Over phi the
    grid is treated as periodic (equal weights ``2*pi/N``); a single phi
    sample means rotational symmetry and contributes exactly ``2*pi``.
    """
    intensity = np.asarray(intensity, dtype=float).reshape(grid.shape)
    theta_int = (_theta_weights(grid.theta) * np.sin(grid.theta)) @ intensity
    if grid.is_cut:
        return float(2 * np.pi * theta_int[0])
    phi = grid.phi
    dphi = phi[1] - phi[0]
    if not _uniform(phi) or not np.isclose(phi.size * dphi, 2 * np.pi, rtol=1e-6):
        raise PatternError("phi samples must uniformly cover [0, 2*pi) for integration")
    return float(dphi * theta_int.sum())


def peak_direction(p: FarFieldPattern) -> Tuple[int, int]:
    """Grid indices (theta, phi) of the first maximum of the power pattern.

    Samples within a relative ``1e-9`` of the maximum count as ties, so an
    on-axis peak (where phi is degenerate) resolves to the lowest phi index
    regardless of rounding noise.
    """
    u = power_pattern(p)
    first = int(np.argmax((u >= u.max() * (1 - 1e-9)).ravel()))
    return np.unravel_index(first, p.grid.shape)


def directivity(p: FarFieldPattern) -> float:
    """Peak directivity in dBi, ``D = 4*pi*U_max / integral(U dOmega)``.

    On an upper-hemisphere grid the field below the ground plane is zero.
    """
    u = power_pattern(p)
    total = radiated_integral(p.grid, u)
    if not total > 0:
        raise PatternError("zero total radiated power")
    return float(10 * np.log10(4 * np.pi * u.max() / total))


def to_ludwig3(p: FarFieldPattern) -> Tuple[np.ndarray, np.ndarray]:
    """Ludwig-3 (L3H, L3V) components, co-polar reference along y.

    L3V = E_theta sin(phi) + E_phi cos(phi) (the y component) and
    L3H = E_theta cos(phi) - E_phi sin(phi) (the x component).
    """
    _, phi = p.grid.mesh()
    c, s = np.cos(phi), np.sin(phi)
    l3h = p.e_theta * c - p.e_phi * s
    l3v = p.e_theta * s + p.e_phi * c
    return l3h, l3v


def from_ludwig3(grid: AngularGrid, l3h: np.ndarray, l3v: np.ndarray, frequency=None) -> FarFieldPattern:
    """Inverse of :func:`to_ludwig3`."""
    _, phi = grid.mesh()
    c, s = np.cos(phi), np.sin(phi)
    l3h = np.asarray(l3h, dtype=complex).reshape(grid.shape)
    l3v = np.asarray(l3v, dtype=complex).reshape(grid.shape)
    return FarFieldPattern(grid, l3h * c + l3v * s, -l3h * s + l3v * c, frequency)


def field_to_db(values: np.ndarray, reference: Optional[float] = None, floor_db: float = -300.0):
    """20*log10(|values| / reference), clipped at ``floor_db``.

    ``reference`` defaults to the peak magnitude. Returns ``(db, reference)``.
    """
    mag = np.abs(np.asarray(values))
    if reference is None:
        reference = float(mag.max())
    if not reference > 0:
        raise PatternError("degenerate pattern")
    with np.errstate(divide="ignore"):
        db = 20 * np.log10(mag / reference)
    return np.maximum(db, floor_db), reference


def cut_from_halves(
    phi_plane: float, front: FarFieldPattern, back: FarFieldPattern
) -> Tuple[PatternCut, float]:
    """Join two half-plane cuts into a signed-theta Ludwig-3 :class:`PatternCut`.

    ``front`` is sampled at ``phi_plane`` and ``back`` at ``phi_plane + pi``,
    both on the same theta samples starting at zero. The back half maps to
    negative theta. dB values are relative to the joint peak of both
    components, which is returned alongside the cut.
    """
    if not (front.grid.is_cut and back.grid.is_cut):
        raise PatternError("half-plane patterns must be single-phi cuts")
    if not np.array_equal(front.grid.theta, back.grid.theta) or front.grid.theta[0] != 0:
        raise PatternError("half-plane cuts need identical theta samples starting at 0")
    fh, fv = (c[:, 0] for c in to_ludwig3(front))
    bh, bv = (c[:, 0] for c in to_ludwig3(back))
    theta = np.degrees(front.grid.theta)
    theta_deg = np.concatenate([-theta[:0:-1], theta])
    l3h = np.concatenate([bh[:0:-1], fh])
    l3v = np.concatenate([bv[:0:-1], fv])
    ref = float(max(np.abs(l3h).max(), np.abs(l3v).max()))
    h_db, _ = field_to_db(l3h, ref)
    v_db, _ = field_to_db(l3v, ref)
    return PatternCut(phi_plane, theta_deg, h_db, v_db), ref


def cut_power(cut: PatternCut) -> np.ndarray:
    """Total relative power along a cut (sum over both Ludwig-3 components)."""
    return 10 ** (cut.l3h_db / 10) + 10 ** (cut.l3v_db / 10)


def cut_hpbw(cut: PatternCut) -> float:
    return hpbw(np.radians(cut.theta_deg), cut_power(cut))


@dataclass(frozen=True)
class CutComparison:
    rms_db: dict
    max_db: dict
    theta_range_deg: Tuple[float, float]
    samples: dict

    def as_dict(self) -> dict:
        return {
            "rms_db": self.rms_db,
            "max_db": self.max_db,
            "theta_range_deg": list(self.theta_range_deg),
            "samples": self.samples,
        }


def compare_cuts(a: PatternCut, b: PatternCut, floor_db: float = -40.0) -> CutComparison:
    """Per-polarisation dB error statistics of ``b`` against ``a``.

    ``b`` is linearly resampled onto ``a``'s theta samples inside the
    overlapping range. Each cut is normalised to its own joint peak (over
    both components) before differencing; samples below ``floor_db`` in
    either cut are excluded.
    """
    lo = max(a.theta_deg[0], b.theta_deg[0])
    hi = min(a.theta_deg[-1], b.theta_deg[-1])
    keep = (a.theta_deg >= lo) & (a.theta_deg <= hi)
    if not lo <= hi or not np.any(keep):
        raise PatternError("cuts have no overlapping theta range")
    theta = a.theta_deg[keep]

    a_cols = {"l3h": a.l3h_db[keep], "l3v": a.l3v_db[keep]}
    b_cols = {
        "l3h": np.interp(theta, b.theta_deg, b.l3h_db),
        "l3v": np.interp(theta, b.theta_deg, b.l3v_db),
    }
    a_peak = max(c.max() for c in a_cols.values())
    b_peak = max(c.max() for c in b_cols.values())

    rms, mx, counts = {}, {}, {}
    for pol in ("l3h", "l3v"):
        da = a_cols[pol] - a_peak
        db = b_cols[pol] - b_peak
        valid = (da >= floor_db) & (db >= floor_db)
        counts[pol] = int(valid.sum())
        if counts[pol] == 0:
            rms[pol] = mx[pol] = None
            continue
        err = db[valid] - da[valid]
        rms[pol] = float(np.sqrt(np.mean(err**2)))
        mx[pol] = float(np.max(np.abs(err)))
    return CutComparison(rms, mx, (float(theta[0]), float(theta[-1])), counts)


def principal_cut_power(p: FarFieldPattern, phi_index: int) -> Tuple[np.ndarray, np.ndarray]:
    """Power along the great-circle cut through ``phi[phi_index]``.

    Returns signed theta (radians) and power. The opposite half-plane
    (``phi + pi``) is appended at negative theta when the grid contains it.
    """
    u = power_pattern(p)
    theta = p.grid.theta
    front = u[:, phi_index]
    opposite = (p.grid.phi[phi_index] + np.pi) % (2 * np.pi)
    match = np.flatnonzero(np.isclose(p.grid.phi, opposite, atol=1e-9))
    if p.grid.is_cut or match.size == 0 or theta[0] != 0:
        return theta, front
    back = u[:, match[0]]
    return np.concatenate([-theta[:0:-1], theta]), np.concatenate([back[:0:-1], front])


def pattern_metrics(p: FarFieldPattern) -> PatternMetrics:
    """Directivity, peak direction, and HPBW along the principal cut through the peak."""
    i_theta, i_phi = peak_direction(p)
    theta, cut = principal_cut_power(p, i_phi)
    return PatternMetrics(
        hpbw_deg=hpbw(theta, cut),
        directivity_dbi=directivity(p),
        peak_theta_deg=float(np.degrees(p.grid.theta[i_theta])),
        peak_phi_deg=float(np.degrees(p.grid.phi[i_phi])),
    )
