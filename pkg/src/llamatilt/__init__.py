"""
LlamaTilt - exact tilt-stability invariants on Picard rank one threefolds.

LlamaTilt evaluates slopes, central charges, discriminants and the ch_3
inequality of reduced Chern characters in exact rational arithmetic, checks
the known stability criteria, enumerates numerical destabilizers and
computes wall equations, with both a Python API and a command-line interface.
"""

__version__ = "0.1.0"

from llamatilt.chern import (
    P3, ChernVector, CurveData, PolarizedGeometry, TiltParameter,
    dual, from_chern_classes, line_bundle, shift, to_chern_classes,
    twist_by_B, twist_by_line_bundle,
)
from llamatilt.tilt import (
    BmtForm, SlopeValue, bmt_check, central_charge, compute_c,
    discriminant_delta, discriminant_delta_bar, large_m_compare,
    codim3_modification_check, phase_one_indicator, positivity_check,
    slope_mu, slope_nu_hat,
)
from llamatilt.criteria import (
    ideal_sheaf_twist_report, line_bundle_thresholds, miro_roig_feasible,
    p3_family_report, points_ideal_phase_one_report,
    p3_unstable_family, two_c_stability_check,
)
from llamatilt.search import SearchBounds, case_split_2c, destabilizer_search
from llamatilt.walls import WallEquation, WallPoint, wall_equation, wall_sample
from llamatilt.utils import DomainError, LlamaTiltError, ParseError

# Define what's available when importing * from llamatilt
__all__ = [
    # Value types
    'P3',
    'ChernVector',
    'CurveData',
    'PolarizedGeometry',
    'TiltParameter',
    'SlopeValue',
    'BmtForm',
    'SearchBounds',
    'WallEquation',
    'WallPoint',

    # Chern characters
    'dual',
    'from_chern_classes',
    'line_bundle',
    'shift',
    'to_chern_classes',
    'twist_by_B',
    'twist_by_line_bundle',

    # Tilt geometry
    'bmt_check',
    'central_charge',
    'codim3_modification_check',
    'compute_c',
    'discriminant_delta',
    'discriminant_delta_bar',
    'large_m_compare',
    'phase_one_indicator',
    'positivity_check',
    'slope_mu',
    'slope_nu_hat',

    # Criteria
    'ideal_sheaf_twist_report',
    'line_bundle_thresholds',
    'miro_roig_feasible',
    'p3_family_report',
    'p3_unstable_family',
    'points_ideal_phase_one_report',
    'two_c_stability_check',

    # Search and walls
    'case_split_2c',
    'destabilizer_search',
    'wall_equation',
    'wall_sample',

    # Errors
    'DomainError',
    'LlamaTiltError',
    'ParseError',
]
