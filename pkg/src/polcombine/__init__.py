"""Polarization-diversity combining for two-ray aeronautical telemetry channels.

Pipeline: link geometry -> receiver-feed fields -> branch channels (y', z',
RHCP, LHCP, equal-gain) -> equivalent minimum-phase discrete-time channels ->
MMSE equalization -> 16-APSK bit-error rate.
"""

from .config import SCHEMES, ScenarioConfig, load_config
from .discretize import (
    DiscreteChannel,
    FoldedAutocorrelation,
    Pulse,
    composite_h,
    fom_output,
    folded_autocorrelation,
    ml_fold,
    spectral_factorize,
    spectral_fold,
    srrc_pulse,
)
from .equalizer import EqualizerCoeffs, EqualizerConfig, equalize, gf_matrix, mmse_coefficients, xi_vector
from .errors import ConfigError, DomainError, NumericalDomainError
from .fields import (
    BranchChannel,
    FieldResponse,
    GroundParams,
    equal_gain_combine,
    receiver_field,
    reflection_coefficient,
    synthesize_lhcp,
    synthesize_rhcp,
)
from .geometry import (
    Attitude,
    GeodeticPosition,
    PathGeometry,
    body_to_ground,
    elevation_angle,
    ground_distance,
    two_ray_geometry,
)
from .harness import BerPoint, build_schemes, emit_results, run_ber
from .modem import ApskConstellation, build_16apsk, demap_hard, ebn0_to_n0, map_bits

__version__ = "0.1.0"

__all__ = [
    "ApskConstellation",
    "Attitude",
    "BerPoint",
    "BranchChannel",
    "ConfigError",
    "DiscreteChannel",
    "DomainError",
    "EqualizerCoeffs",
    "EqualizerConfig",
    "FieldResponse",
    "FoldedAutocorrelation",
    "GeodeticPosition",
    "GroundParams",
    "NumericalDomainError",
    "PathGeometry",
    "Pulse",
    "SCHEMES",
    "ScenarioConfig",
    "body_to_ground",
    "build_16apsk",
    "build_schemes",
    "composite_h",
    "demap_hard",
    "ebn0_to_n0",
    "elevation_angle",
    "emit_results",
    "equal_gain_combine",
    "equalize",
    "folded_autocorrelation",
    "fom_output",
    "gf_matrix",
    "ground_distance",
    "load_config",
    "map_bits",
    "ml_fold",
    "mmse_coefficients",
    "receiver_field",
    "reflection_coefficient",
    "run_ber",
    "spectral_factorize",
    "spectral_fold",
    "srrc_pulse",
    "synthesize_lhcp",
    "synthesize_rhcp",
    "two_ray_geometry",
    "xi_vector",
]
