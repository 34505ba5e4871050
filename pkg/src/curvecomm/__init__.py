"""Matched and Euclidean decoding on Fourier-curve constellations with tangent artificial noise."""

from .bounds import SerBounds, euclidean_ser_bounds, matched_ser_lower_bound
from .channel import (
    DecoderKind,
    Observation,
    euclidean_decode,
    matched_decode,
    matched_score,
    sample_observation,
)
from .geometry import (
    AntipodalGeometry,
    Constellation,
    PairGeometry,
    antipodal_geometry,
    build_uniform_codebook,
    curve_point,
    curve_tangent_unit,
    local_spacing_approx,
    offset_spectrum,
    pair_geometry,
)
from .montecarlo import PepEstimate, compare_ser, estimate_pairwise_pep, estimate_ser
from .pairwise import (
    MatchedPepParams,
    NoiseParams,
    antipodal_pep_euclidean,
    antipodal_pep_matched,
    euclidean_pep,
    matched_pep_for_pair,
    matched_pep_params,
    matched_phantom_pep,
    q_function,
)
from .sweep import SweepConfig, SweepRow, run_sweep

__version__ = "0.1.0"
