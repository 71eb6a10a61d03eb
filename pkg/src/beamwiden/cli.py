"""
Command-line front end.

Data go to files under ``--output-dir`` only; diagnostics go to stderr.
Exit codes: 0 success, 1 usage or input error, 2 tolerance failure.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import io as fio
from .angular import (
    FULL_SPHERE,
    LUDWIG3_CONVENTION,
    UPPER_HEMISPHERE,
    AngularGrid,
    FarFieldPattern,
    PatternError,
    compare_cuts,
    cut_hpbw,
    cut_power,
    directivity,
    field_to_db,
    hpbw,
    pattern_metrics,
    power_pattern,
)
from .patch import (
    GeometryError,
    bandwidth_ratio,
    combined_currents,
    estimate_resonance,
    far_field,
    mode1_currents,
    mode2_currents,
    pattern_cut,
)
from .synthesis import (
    DEFAULT_CLIP_FLOOR,
    DEFAULT_QUADRATURE_SAMPLES,
    INVERSE_OF_ELEMENT,
    SynthesisError,
    SynthesisTarget,
    array_factor,
    composite_pattern,
    fejer_taper,
    synthesize_coefficients,
)

log = logging.getLogger("beamwiden")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_TOLERANCE = 2

NULL_PLANE_LEVEL = 1e-9


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _positive(kind=float):
    def parse(text):
        value = kind(text)
        if not value > 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return value
    return parse


def _non_negative_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return value


def _complex(text):
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from exc


def _write_tabular(cfg, stem: str, header, columns, comments=(), meta=None) -> Path:
    out = Path(cfg.output_dir)
    if cfg.format == "json":
        return fio.write_json(out / f"{stem}.json", fio.table_json(header, columns, meta))
    return fio.write_table(out / f"{stem}.csv", header, columns, comments)


# --- synthesize -----------------------------------------------------------------

def _element_target(cfg) -> SynthesisTarget:
    if cfg.element == "sin-theta":
        return SynthesisTarget.sin_theta_element(cfg.samples, cfg.clip_floor)
    # cut angle theta measured from broadside; array axis lies in the cut plane
    cut = fio.read_cut(cfg.element)
    theta_axis = np.radians(90.0 - cut.theta_deg[::-1])
    values = np.sqrt(cut_power(cut))[::-1]
    keep = (theta_axis >= 0) & (theta_axis <= np.pi)
    if keep.sum() < 3:
        raise UsageError(f"element cut {cfg.element} does not cover enough of [-90, 90] deg")
    return SynthesisTarget(INVERSE_OF_ELEMENT, theta_axis[keep], values[keep], cfg.clip_floor)


def cmd_synthesize(cfg) -> int:
    target = _element_target(cfg)
    exc = synthesize_coefficients(target, cfg.m_max, cfg.spacing, cfg.samples)
    if cfg.taper == "fejer":
        exc = fejer_taper(exc)

    grid = AngularGrid.regular(cfg.theta_step_deg, None, FULL_SPHERE)
    if cfg.element == "sin-theta":
        element = np.abs(np.sin(grid.theta))
    else:
        element = target.resampled(grid.theta)
    field = composite_pattern(element, exc, grid.theta)
    power = field**2
    db, ref = field_to_db(field)

    out = Path(cfg.output_dir)
    fio.write_excitation(out / "excitation.json", exc)
    _write_tabular(
        cfg, "composite", ("theta_deg", "power_linear", "power_db"),
        [np.degrees(grid.theta), power, db],
        comments=[f"db_reference_abs={fio.fmt(ref)}", f"m_max={exc.m_max}", f"taper={cfg.taper}"],
        meta={"db_reference_abs": ref, "m_max": exc.m_max, "taper": cfg.taper},
    )
    pattern = FarFieldPattern(grid, field.astype(complex), np.zeros_like(field, dtype=complex))
    peak = int(np.argmax(power))
    metrics = {
        "hpbw_deg": hpbw(grid.theta, power),
        "directivity_dbi": directivity(pattern),
        "peak_theta_deg": float(np.degrees(grid.theta[peak])),
        "peak_phi_deg": 0.0,
        "convention": LUDWIG3_CONVENTION,
        "symmetry": "rotational about the array (z) axis",
    }
    fio.write_json(out / "metrics.json", metrics)
    c1 = exc.coefficient(1) if exc.m_max >= 1 else None
    log.info("synthesized M=%d taper=%s%s: hpbw %.2f deg, directivity %.3f dBi",
             exc.m_max, cfg.taper, f" c1={c1.real:.5f}" if c1 is not None else "",
             metrics["hpbw_deg"], metrics["directivity_dbi"])
    return EXIT_OK


# --- array-factor ---------------------------------------------------------------

def cmd_array_factor(cfg) -> int:
    exc = fio.read_excitation(cfg.excitation)
    grid = AngularGrid.regular(cfg.theta_step_deg, None, FULL_SPHERE)
    af = array_factor(exc, grid.theta)
    db, ref = field_to_db(af)
    _write_tabular(
        cfg, "array_factor", ("theta_deg", "re_af", "im_af", "af_db"),
        [np.degrees(grid.theta), af.real, af.imag, db],
        comments=[f"db_reference_abs={fio.fmt(ref)}"], meta={"db_reference_abs": ref},
    )
    log.info("array factor for M=%d written", exc.m_max)
    return EXIT_OK


# --- patch ----------------------------------------------------------------------

def _patch_currents(cfg, geometry, frequency):
    if cfg.currents:
        return fio.read_currents(cfg.currents, frequency)
    if cfg.mode == "1":
        return mode1_currents(geometry, frequency)
    if cfg.mode == "2":
        return mode2_currents(geometry, frequency, cfg.separation)
    if not cfg.weights or len(cfg.weights) != 2:
        raise UsageError("--mode mix requires --weights W1 W2")
    return combined_currents(
        [mode1_currents(geometry, frequency), mode2_currents(geometry, frequency, cfg.separation)],
        cfg.weights,
    )


def cmd_patch(cfg) -> int:
    geometry = fio.read_geometry(cfg.geometry)
    currents = _patch_currents(cfg, geometry, cfg.frequency)
    grid = AngularGrid.regular(cfg.theta_step_deg, cfg.phi_step_deg, UPPER_HEMISPHERE)
    pattern = far_field(currents, grid)

    out = Path(cfg.output_dir)
    if cfg.format == "json":
        fio.write_json(out / "pattern.json", fio.pattern_json(pattern))
    else:
        fio.write_pattern(out / "pattern.csv", pattern)
    fio.write_currents(out / "currents.json", currents)

    metrics = pattern_metrics(pattern).as_dict()
    metrics["frequency_hz"] = cfg.frequency
    metrics["mode"] = "file" if cfg.currents else cfg.mode
    cuts = {}
    global_peak = math.sqrt(float(power_pattern(pattern).max()))
    for phi_deg in (0, 90):
        cut, ref = pattern_cut(currents, math.radians(phi_deg), cfg.theta_step_deg)
        fio.write_cut(out / f"cut_phi{phi_deg}.csv", cut, ref)
        power = cut_power(cut)
        zenith = int(np.argmin(np.abs(cut.theta_deg)))
        # a plane holding only rounding residue has no meaningful beamwidth
        null_plane = ref <= NULL_PLANE_LEVEL * global_peak
        cuts[f"phi{phi_deg}"] = {
            "hpbw_deg": None if null_plane else cut_hpbw(cut),
            "zenith_level_db": float(10 * np.log10(max(power[zenith], 1e-300) / power.max())),
            "peak_relative_db": float(20 * np.log10(max(ref, 1e-300) / global_peak)),
            "null_plane": bool(null_plane),
        }
    metrics["cuts"] = cuts
    fio.write_json(out / "metrics.json", metrics)
    log.info("patch mode %s at %.4g GHz: directivity %.3f dBi, peak theta %.2f deg",
             metrics["mode"], cfg.frequency / 1e9, metrics["directivity_dbi"], metrics["peak_theta_deg"])
    return EXIT_OK


# --- compare --------------------------------------------------------------------

def cmd_compare(cfg) -> int:
    a = fio.read_cut(cfg.reference)
    b = fio.read_cut(cfg.candidate)
    result = compare_cuts(a, b, cfg.floor_db)
    report = result.as_dict()
    report.update(floor_db=cfg.floor_db, tolerance_db=cfg.tolerance_db,
                  reference=str(cfg.reference), candidate=str(cfg.candidate))
    worst = max((v for v in result.rms_db.values() if v is not None), default=None)
    report["passed"] = worst is not None and worst <= cfg.tolerance_db
    fio.write_json(Path(cfg.output_dir) / "compare.json", report)
    if worst is None:
        log.error("no samples above the %.1f dB floor in both cuts", cfg.floor_db)
        return EXIT_TOLERANCE
    log.info("RMS error %s dB (tolerance %.3g dB)",
             ", ".join(f"{k}={v:.4f}" for k, v in result.rms_db.items() if v is not None),
             cfg.tolerance_db)
    return EXIT_OK if report["passed"] else EXIT_TOLERANCE


# --- resonance ------------------------------------------------------------------

def cmd_resonance(cfg) -> int:
    geometries = [fio.read_geometry(p) for p in cfg.geometry]
    if len(geometries) > 2:
        raise UsageError("resonance takes one or two geometry files")
    freqs = [estimate_resonance(g) for g in geometries]
    report = {"resonance_hz": freqs, "geometry": [str(p) for p in cfg.geometry]}
    for path, f in zip(cfg.geometry, freqs):
        log.info("%s: estimated resonance %.4f GHz", path, f / 1e9)
    if len(geometries) == 2:
        f0 = cfg.f0 or freqs[0]
        ratio = bandwidth_ratio(geometries[0], geometries[1], f0)
        report.update(bandwidth_ratio=ratio, f0_hz=f0)
        log.info("bandwidth ratio (first / second) = %.6g", ratio)
    fio.write_json(Path(cfg.output_dir) / "resonance.json", report)
    return EXIT_OK


# --- metrics --------------------------------------------------------------------

def cmd_metrics(cfg) -> int:
    pattern = fio.read_pattern(cfg.pattern)
    metrics = pattern_metrics(pattern).as_dict()
    fio.write_json(Path(cfg.output_dir) / "metrics.json", metrics)
    log.info("hpbw %.2f deg, directivity %.3f dBi", metrics["hpbw_deg"], metrics["directivity_dbi"])
    return EXIT_OK


# --- parser ---------------------------------------------------------------------

def _global_flags(parser, defaults: bool):
    def d(value):
        return value if defaults else argparse.SUPPRESS
    parser.add_argument("--output-dir", default=d("."), help="directory for output files")
    parser.add_argument("--format", choices=("csv", "json"), default=d("csv"),
                        help="format of tabular pattern outputs")
    parser.add_argument("--theta-step-deg", type=_positive(), default=d(0.25),
                        help="theta sampling step in degrees (default 0.25)")
    parser.add_argument("--phi-step-deg", type=_positive(), default=d(1.0),
                        help="phi sampling step in degrees (default 1)")
    parser.add_argument("-v", "--verbose", action="store_true", default=d(False))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="beamwiden", description=__doc__.strip().splitlines()[0])
    _global_flags(parser, defaults=True)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        _global_flags(p, defaults=False)
        p.set_defaults(func=func)
        return p

    p = add("synthesize", cmd_synthesize, "Fourier-synthesise a beam-widening array")
    p.add_argument("--element", default="sin-theta", help="'sin-theta' or a cut CSV file")
    p.add_argument("--m-max", type=_non_negative_int, default=1)
    p.add_argument("--spacing", type=_positive(), default=0.5, help="element spacing d/lambda")
    p.add_argument("--taper", choices=("none", "fejer"), default="fejer")
    p.add_argument("--clip-floor", type=_positive(), default=DEFAULT_CLIP_FLOOR)
    p.add_argument("--samples", type=_positive(int), default=DEFAULT_QUADRATURE_SAMPLES,
                   help="quadrature samples over [0, pi]")

    p = add("array-factor", cmd_array_factor, "evaluate an excitation file")
    p.add_argument("--excitation", required=True)

    p = add("patch", cmd_patch, "magnetic-current patch radiation model")
    p.add_argument("--geometry", required=True)
    p.add_argument("--mode", choices=("1", "2", "mix"), default="1")
    p.add_argument("--frequency", type=_positive(), default=36e9, help="Hz")
    p.add_argument("--weights", type=_complex, nargs=2, metavar=("W1", "W2"),
                   help="complex mode weights for --mode mix, e.g. 0.2 1")
    p.add_argument("--separation", type=_positive(), default=None,
                   help="mode-2 current separation in metres (default w_p)")
    p.add_argument("--currents", default=None, help="current-set JSON overriding --mode")

    p = add("compare", cmd_compare, "compare two Ludwig-3 cut files")
    p.add_argument("reference")
    p.add_argument("candidate")
    p.add_argument("--floor-db", type=float, default=-40.0)
    p.add_argument("--tolerance-db", type=_positive(), default=1.0)

    p = add("resonance", cmd_resonance, "resonance estimate and bandwidth ratio")
    p.add_argument("geometry", nargs="+")
    p.add_argument("--f0", type=_positive(), default=None, help="Hz, for the bandwidth ratio")

    p = add("metrics", cmd_metrics, "metrics of a pattern file")
    p.add_argument("--pattern", required=True)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    cfg = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if cfg.verbose else logging.INFO,
                        format="%(levelname)s: %(message)s", stream=sys.stderr, force=True)
    try:
        return cfg.func(cfg)
    except fio.FileFormatError as exc:
        log.error("%s", exc)
    except (UsageError, PatternError, SynthesisError, GeometryError) as exc:
        log.error("%s", exc)
    except OSError as exc:
        log.error("cannot write output: %s", exc)
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
