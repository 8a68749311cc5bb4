"""Small-chord and stationary-phase approximations to chord functions of
states quantized on a convex curve, and their squared correlations."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from chordscope.core import PhaseVector, skew_product
from chordscope.semiclassical.curves import TWO_PI, CurveError, TorusCurve
from chordscope.semiclassical.realizations import (
    CausticError,
    chord_action,
    chord_amplitude,
    diameter,
    find_chord_realizations,
    max_chord_length,
    segment_area,
)

MIN_POINTS = 256
POINTS_PER_OSCILLATION = 16


def _theta_points(curve: TorusCurve, xi, hbar: float) -> int:
    theta = np.linspace(0.0, TWO_PI, 256, endpoint=False)
    v = curve.dx(theta)
    rate = float(np.max(np.abs(v[0] * xi[1] - v[1] * xi[0]))) / hbar
    n = int(math.ceil(POINTS_PER_OSCILLATION * rate))
    return max(MIN_POINTS, n + n % 2)


def _phases(curve: TorusCurve, xi, hbar: float, n_theta: int | None) -> np.ndarray:
    n = n_theta or _theta_points(curve, xi, hbar)
    x = curve.x(np.linspace(0.0, TWO_PI, n, endpoint=False))
    return np.exp(1j * (x[0] * xi[1] - x[1] * xi[0]) / hbar)


def small_chord_chi(curve: TorusCurve, xi, hbar: float, n_theta: int | None = None) -> complex:
    """``1/(2 pi hbar) loop dtheta/(2 pi) exp(i x(theta) ^ xi / hbar)``.

    Trapezoid rule in the angle, with at least 16 points per oscillation of
    the integrand unless ``n_theta`` is given.
    """
    xi = np.asarray(xi, dtype=float)
    return complex(np.mean(_phases(curve, xi, hbar, n_theta)) / (2 * math.pi * hbar))


def small_chord_correlation(curve: TorusCurve, xi, hbar: float, n_theta: int | None = None) -> float:
    """``(2 pi)^-2 double-loop exp(i xi ^ (x(theta+) - x(theta-)) / hbar)``."""
    xi = np.asarray(xi, dtype=float)
    e = _phases(curve, xi, hbar, n_theta)
    # xi ^ (x+ - x-) = -(x+ ^ xi) + x- ^ xi
    return float(np.mean(np.outer(e.conj(), e)).real)


def validity_window(curve: TorusCurve, direction, hbar: float) -> tuple[float, float]:
    """``(hbar / |zeta|, (hbar / a)^(1/3))`` for chords along ``direction``.

    ``zeta`` is the diameter between the parallel tangents and ``a`` the
    parabolic coefficient of the curve at its tips. The window is empty when
    the first bound is not below the second.
    """
    d = diameter(curve, direction)
    if d.a < 1e-12:
        raise CurveError("curve is flat at the tangency points")
    return hbar / d.length, (hbar / d.a) ** (1 / 3)


def near_diameter_action(curve: TorusCurve, xi, max_ratio: float = 0.1) -> list[float]:
    """Parabolic estimate of the chord action for each realization of a short chord.

    Near a tip ``T`` of the diameter the realization sees a parabola
    ``delta p = a delta q^2``, giving ``S = T ^ xi - a |xi|^3 / 12`` for the
    short arc. A realization whose increasing-angle arc is the long one adds
    the enclosed area and flips the cubic term. Results follow the order of
    :func:`find_chord_realizations`.
    """
    xi_v = PhaseVector(*np.asarray(xi, dtype=float))
    d = diameter(curve, xi_v)
    if xi_v.norm > max_ratio * d.length:
        raise ValueError(f"|xi| = {xi_v.norm:.3g} exceeds {max_ratio:g} of the diameter {d.length:.3g}")
    tips = [(PhaseVector(*curve.x(d.theta_minus)), d.curvature_minus), (PhaseVector(*curve.x(d.theta_plus)), d.curvature_plus)]
    area = curve.enclosed_area()
    out = []
    for r in find_chord_realizations(curve, xi_v):
        tip, kappa = min(tips, key=lambda t: (r.centre - t[0]).norm)
        cubic = kappa / 2 * xi_v.norm**3 / 12
        lead = skew_product(tip, xi_v)
        if abs(segment_area(curve, r)) > area / 2:
            out.append(area + lead + cubic)
        else:
            out.append(lead - cubic)
    return out


@dataclass(frozen=True)
class StationaryTerm:
    amplitude: float
    action: float
    signature: int

    def phase(self, hbar: float) -> float:
        return self.action / hbar - self.signature * math.pi / 4


def stationary_terms(curve: TorusCurve, xi) -> list[StationaryTerm]:
    """Amplitude, action and signature of every realization of ``xi``."""
    terms = []
    for r in find_chord_realizations(curve, xi):
        amp, sig = chord_amplitude(curve, r)
        terms.append(StationaryTerm(amp, chord_action(curve, r), sig))
    return terms


def _raw_sum(curve: TorusCurve, xi, hbar: float) -> complex:
    return sum(t.amplitude * np.exp(1j * t.phase(hbar)) for t in stationary_terms(curve, xi))


class _NormalizationCache:
    def __init__(self):
        self._store: dict = {}

    def get(self, curve: TorusCurve, direction: np.ndarray, hbar: float) -> complex:
        key = (id(curve), round(float(math.atan2(direction[1], direction[0])), 12), float(hbar))
        if key not in self._store:
            self._store[key] = fit_normalization(curve, direction, hbar)
        return self._store[key]


_CACHE = _NormalizationCache()


def fit_normalization(curve: TorusCurve, direction, hbar: float, samples: int = 40) -> complex:
    """Global factor matching the stationary-phase sum to the small-chord
    integral over the middle decade of the validity window.

    The window is taken in logarithmic scale and the decade centred on its
    geometric midpoint, clipped to the window.
    """
    d = np.asarray(direction, dtype=float)
    d = d / math.hypot(d[0], d[1])
    lo, hi = validity_window(curve, d, hbar)
    if lo >= hi:
        raise CurveError("validity window is empty")
    mid = math.sqrt(lo * hi)
    a, b = max(lo, mid / math.sqrt(10)), min(hi, mid * math.sqrt(10))
    lengths = np.geomspace(a, b, samples)
    raw = np.array([_raw_sum(curve, s * d, hbar) for s in lengths])
    ref = np.array([small_chord_chi(curve, s * d, hbar) for s in lengths])
    return complex(np.vdot(raw, ref) / np.vdot(raw, raw))


@dataclass(frozen=True)
class SemiclassicalValue:
    value: complex
    caustic: bool


def semiclassical_chi(curve: TorusCurve, xi, hbar: float, normalization: complex | None = None) -> SemiclassicalValue:
    """Stationary-phase chord function, summed over both realizations of ``xi``.

    Zero beyond the longest chord in the direction of ``xi``. The caustic
    flag is raised at the coalescence of the two realizations, where the
    amplitude diverges and the value returned is 0.
    """
    xi = np.asarray(xi, dtype=float)
    size = math.hypot(xi[0], xi[1])
    if size == 0:
        return SemiclassicalValue(complex(1 / (2 * math.pi * hbar)), False)
    rs = find_chord_realizations(curve, xi)
    if not rs:
        return SemiclassicalValue(0j, False)
    if rs[0].caustic:
        return SemiclassicalValue(0j, True)
    N = _CACHE.get(curve, xi / size, hbar) if normalization is None else normalization
    try:
        return SemiclassicalValue(complex(N * _raw_sum(curve, xi, hbar)), False)
    except CausticError:
        return SemiclassicalValue(0j, True)


def semiclassical_correlation(curve: TorusCurve, eta, hbar: float, normalization: complex | None = None) -> float:
    """``(2 pi hbar)^2 |chi|^2`` from the stationary-phase sum.

    Written out, this is two smooth terms ``|N|^2 A_j^2`` and the
    interference term ``2 |N|^2 A_1 A_2 cos(dS/hbar - (sigma_1 - sigma_2) pi/4)``.
    """
    eta = np.asarray(eta, dtype=float)
    size = math.hypot(eta[0], eta[1])
    terms = stationary_terms(curve, eta)
    if len(terms) != 2:
        raise CausticError(f"chord {tuple(eta)} has no pair of realizations")
    N = _CACHE.get(curve, eta / size, hbar) if normalization is None else normalization
    t1, t2 = terms
    cross = 2 * t1.amplitude * t2.amplitude * math.cos(t1.phase(hbar) - t2.phase(hbar))
    value = abs(N) ** 2 * (t1.amplitude**2 + t2.amplitude**2 + cross)
    return float((2 * math.pi * hbar) ** 2 * value)
