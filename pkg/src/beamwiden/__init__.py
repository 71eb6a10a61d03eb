"""Beam-widening array synthesis and patch radiation modelling."""
from .angular import (
    FULL_SPHERE,
    LUDWIG3_CONVENTION,
    UPPER_HEMISPHERE,
    AngularGrid,
    FarFieldPattern,
    PatternCut,
    PatternError,
    PatternMetrics,
    compare_cuts,
    directivity,
    from_ludwig3,
    hpbw,
    pattern_metrics,
    power_pattern,
    to_ludwig3,
)
from .patch import (
    REFERENCE_GEOMETRY,
    MagneticCurrent,
    MagneticCurrentSet,
    PatchGeometry,
    bandwidth_ratio,
    estimate_resonance,
    far_field,
    mode1_currents,
    mode2_currents,
    superpose_modes,
)
from .special import bessel_j0
from .synthesis import (
    ArrayExcitation,
    SynthesisTarget,
    array_factor,
    composite_pattern,
    eq4_coefficients,
    fejer_taper,
    synthesize_coefficients,
)

__version__ = "0.1.0"
