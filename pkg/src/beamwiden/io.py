"""
Readers and writers for the on-disk formats.

CSV files use 12 significant digits, ``.`` as decimal separator and ``\\n``
line endings; angles are stored in degrees. Comment lines start with ``#``.
"""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .angular import (
    FULL_SPHERE,
    LUDWIG3_CONVENTION,
    UPPER_HEMISPHERE,
    AngularGrid,
    FarFieldPattern,
    PatternCut,
    PatternError,
)
from .patch import GeometryError, MagneticCurrent, MagneticCurrentSet, PatchGeometry
from .synthesis import ArrayExcitation, SynthesisError

PATTERN_HEADER = ("theta_deg", "phi_deg", "re_etheta", "im_etheta", "re_ephi", "im_ephi")
CUT_HEADER = ("theta_deg", "l3h_db", "l3v_db")
GEOMETRY_KEYS = ("l_p", "w_p", "l_par", "w_par", "w_g", "h", "eps_r", "tan_delta")
CURRENT_KEYS = ("x", "y", "ux", "uy", "re_amp", "im_amp", "length")


class FileFormatError(ValueError):
    """Malformed input file; ``line`` is 1-based when known."""

    def __init__(self, path, message: str, line: Optional[int] = None):
        self.path = str(path)
        self.line = line
        where = f"{self.path}:{line}" if line is not None else self.path
        super().__init__(f"{where}: {message}")


def fmt(value: float) -> str:
    """12 significant digits; ``-0`` is written as ``0``."""
    text = f"{float(value):.12g}"
    return "0" if text == "-0" else text


def _write_text(path: Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(text)
    return path


def write_json(path, payload) -> Path:
    return _write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise FileFormatError(path, f"cannot read file ({exc.strerror})") from exc
    except json.JSONDecodeError as exc:
        raise FileFormatError(path, f"invalid JSON: {exc.msg}", exc.lineno) from exc


def write_table(path, header: Sequence[str], columns: Sequence[Iterable[float]],
                comments: Sequence[str] = ()) -> Path:
    """Write numeric columns as CSV with optional leading ``# comment`` lines."""
    buf = io.StringIO()
    for c in comments:
        buf.write(f"# {c}\n")
    buf.write(",".join(header) + "\n")
    for row in zip(*columns):
        buf.write(",".join(fmt(v) for v in row) + "\n")
    return _write_text(path, buf.getvalue())


def table_json(header: Sequence[str], columns: Sequence[Iterable[float]], meta: Optional[dict] = None) -> dict:
    """JSON counterpart of :func:`write_table` (column name -> list)."""
    payload = {name: [float(fmt(v)) for v in col] for name, col in zip(header, columns)}
    if meta:
        payload["meta"] = meta
    return payload


def read_table(path, header: Sequence[str]) -> Tuple[Dict[str, str], np.ndarray]:
    """Parse a CSV written by :func:`write_table`.

    Returns ``key=value`` pairs from comment lines and an ``(n, len(header))``
    float array. Errors carry the offending line number.
    """
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise FileFormatError(path, f"cannot read file ({exc.strerror})") from exc

    meta: Dict[str, str] = {}
    rows: List[List[float]] = []
    seen_header = False
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            body = stripped[1:].strip()
            if "=" in body:
                key, _, value = body.partition("=")
                meta[key.strip()] = value.strip()
            continue
        fields = next(csv.reader([stripped]))
        if not seen_header:
            if tuple(f.strip() for f in fields) != tuple(header):
                raise FileFormatError(path, f"expected header {','.join(header)!r}", lineno)
            seen_header = True
            continue
        if len(fields) != len(header):
            raise FileFormatError(path, f"expected {len(header)} fields, got {len(fields)}", lineno)
        try:
            rows.append([float(f) for f in fields])
        except ValueError as exc:
            raise FileFormatError(path, f"non-numeric value ({exc})", lineno) from exc
    if not seen_header:
        raise FileFormatError(path, "missing header line")
    if not rows:
        raise FileFormatError(path, "no data rows")
    return meta, np.array(rows, dtype=float)


# --- far-field patterns -------------------------------------------------------

def write_pattern(path, p: FarFieldPattern) -> Path:
    theta, phi = p.grid.mesh()
    comments = [f"domain={p.grid.domain}", f"convention={LUDWIG3_CONVENTION}"]
    if p.frequency:
        comments.append(f"frequency_hz={fmt(p.frequency)}")
    cols = [np.degrees(theta).ravel(), np.degrees(phi).ravel(),
            p.e_theta.real.ravel(), p.e_theta.imag.ravel(),
            p.e_phi.real.ravel(), p.e_phi.imag.ravel()]
    return write_table(path, PATTERN_HEADER, cols, comments)


def pattern_json(p: FarFieldPattern) -> dict:
    theta, phi = p.grid.mesh()
    cols = [np.degrees(theta).ravel(), np.degrees(phi).ravel(),
            p.e_theta.real.ravel(), p.e_theta.imag.ravel(),
            p.e_phi.real.ravel(), p.e_phi.imag.ravel()]
    meta = {"domain": p.grid.domain, "convention": LUDWIG3_CONVENTION, "frequency_hz": p.frequency}
    return table_json(PATTERN_HEADER, cols, meta)


def read_pattern(path) -> FarFieldPattern:
    """Read a pattern CSV laid out as a full theta x phi tensor grid (theta-major).

    Without a ``# domain=`` comment the domain is upper-hemisphere when no
    theta exceeds 90 degrees.
    """
    meta, data = read_table(path, PATTERN_HEADER)
    theta_u = np.unique(data[:, 0])
    phi_u = np.unique(data[:, 1])
    if data.shape[0] != theta_u.size * phi_u.size:
        raise FileFormatError(path, "samples do not form a complete theta x phi grid")
    order = np.lexsort((data[:, 1], data[:, 0]))
    data = data[order]
    domain = meta.get("domain") or (UPPER_HEMISPHERE if theta_u[-1] <= 90 + 1e-9 else FULL_SPHERE)
    try:
        grid = AngularGrid(np.radians(theta_u), np.radians(phi_u), domain)
        shape = grid.shape
        e_theta = (data[:, 2] + 1j * data[:, 3]).reshape(shape)
        e_phi = (data[:, 4] + 1j * data[:, 5]).reshape(shape)
        freq = float(meta["frequency_hz"]) if "frequency_hz" in meta else None
        return FarFieldPattern(grid, e_theta, e_phi, freq)
    except (PatternError, ValueError) as exc:
        raise FileFormatError(path, str(exc)) from exc


# --- Ludwig-3 cuts ------------------------------------------------------------

def write_cut(path, cut: PatternCut, reference: Optional[float] = None) -> Path:
    comments = [f"phi_deg={fmt(math.degrees(cut.phi_plane))}", f"convention={LUDWIG3_CONVENTION}"]
    if reference is not None:
        comments.append(f"db_reference_abs={fmt(reference)}")
    return write_table(path, CUT_HEADER, [cut.theta_deg, cut.l3h_db, cut.l3v_db], comments)


def read_cut(path) -> PatternCut:
    meta, data = read_table(path, CUT_HEADER)
    if "phi_deg" not in meta:
        raise FileFormatError(path, "missing '# phi_deg=<value>' comment line")
    try:
        phi = math.radians(float(meta["phi_deg"]))
    except ValueError as exc:
        raise FileFormatError(path, f"bad phi_deg value {meta['phi_deg']!r}") from exc
    try:
        return PatternCut(phi, data[:, 0], data[:, 1], data[:, 2])
    except PatternError as exc:
        raise FileFormatError(path, str(exc)) from exc


# --- excitations, geometries, current sets ------------------------------------

def excitation_to_dict(exc: ArrayExcitation) -> dict:
    return {
        "m_max": exc.m_max,
        "spacing_over_lambda": float(fmt(exc.spacing_over_lambda)),
        "coefficients": [[float(fmt(c.real)), float(fmt(c.imag))] for c in exc.coefficients],
    }


def write_excitation(path, exc: ArrayExcitation) -> Path:
    return write_json(path, excitation_to_dict(exc))


def read_excitation(path) -> ArrayExcitation:
    raw = _load_json(path)
    try:
        coeffs = [complex(float(re), float(im)) for re, im in raw["coefficients"]]
        return ArrayExcitation(int(raw["m_max"]), float(raw["spacing_over_lambda"]), coeffs)
    except (KeyError, TypeError, ValueError) as exc:
        raise FileFormatError(path, f"invalid excitation: {exc}") from exc


def geometry_to_dict(g: PatchGeometry) -> dict:
    return {k: getattr(g, k) for k in GEOMETRY_KEYS}


def write_geometry(path, g: PatchGeometry) -> Path:
    return write_json(path, geometry_to_dict(g))


def read_geometry(path) -> PatchGeometry:
    raw = _load_json(path)
    if not isinstance(raw, dict):
        raise FileFormatError(path, "geometry must be a JSON object")
    missing = [k for k in GEOMETRY_KEYS[:-1] if k not in raw]
    if missing:
        raise FileFormatError(path, f"missing keys: {', '.join(missing)}")
    try:
        return PatchGeometry(**{k: float(raw[k]) for k in GEOMETRY_KEYS if k in raw})
    except (GeometryError, TypeError, ValueError) as exc:
        raise FileFormatError(path, f"invalid geometry: {exc}") from exc


def write_currents(path, currents: MagneticCurrentSet) -> Path:
    payload = [
        {"x": e.x, "y": e.y, "ux": e.ux, "uy": e.uy,
         "re_amp": e.amplitude.real, "im_amp": e.amplitude.imag, "length": e.length}
        for e in currents.elements
    ]
    return write_json(path, payload)


def read_currents(path, frequency: Optional[float] = None) -> MagneticCurrentSet:
    raw = _load_json(path)
    if not isinstance(raw, list):
        raise FileFormatError(path, "current set must be a JSON list")
    elements = []
    for i, item in enumerate(raw):
        try:
            elements.append(MagneticCurrent(
                float(item["x"]), float(item["y"]), float(item["ux"]), float(item["uy"]),
                complex(float(item["re_amp"]), float(item["im_amp"])), float(item["length"]),
            ))
        except (KeyError, TypeError, ValueError) as exc:
            raise FileFormatError(path, f"element {i}: {exc}") from exc
    return MagneticCurrentSet(elements, frequency)
