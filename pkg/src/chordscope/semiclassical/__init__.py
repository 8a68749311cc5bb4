from chordscope.semiclassical.approximations import (
    SemiclassicalValue,
    StationaryTerm,
    fit_normalization,
    near_diameter_action,
    semiclassical_chi,
    semiclassical_correlation,
    small_chord_chi,
    small_chord_correlation,
    stationary_terms,
    validity_window,
)
from chordscope.semiclassical.curves import CurveError, TorusCurve
from chordscope.semiclassical.ergodic import ergodic_chi
from chordscope.semiclassical.realizations import (
    CausticError,
    ChordRealization,
    Diameter,
    cap_areas,
    chord_action,
    chord_amplitude,
    conjugate_chord,
    diameter,
    find_chord_realizations,
    max_chord_length,
    segment_area,
    shaded_area,
)

__all__ = [
    "CausticError",
    "ChordRealization",
    "CurveError",
    "Diameter",
    "SemiclassicalValue",
    "StationaryTerm",
    "TorusCurve",
    "cap_areas",
    "chord_action",
    "chord_amplitude",
    "conjugate_chord",
    "diameter",
    "ergodic_chi",
    "find_chord_realizations",
    "fit_normalization",
    "max_chord_length",
    "near_diameter_action",
    "segment_area",
    "semiclassical_chi",
    "semiclassical_correlation",
    "shaded_area",
    "small_chord_chi",
    "small_chord_correlation",
    "stationary_terms",
    "validity_window",
]
