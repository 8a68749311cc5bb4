"""Geometric realizations of a chord on a convex curve and their
stationary-phase data: action, amplitude and signature."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from chordscope.core import PhaseVector, skew_product
from chordscope.semiclassical.curves import TWO_PI, CurveError, TorusCurve

SCAN = 720
CAUSTIC_TOL = 1e-8
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(96)


class CausticError(ArithmeticError):
    """The requested quantity diverges at a caustic (coalescing realizations)."""


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    norm = math.hypot(v[0], v[1])
    if norm == 0:
        raise ValueError("direction must be nonzero")
    return v / norm


def _wedge(a, b):
    return a[0] * b[1] - a[1] * b[0]


@dataclass(frozen=True)
class ChordRealization:
    """Two curve points joined by the chord ``xi``: ``x(theta_plus) - x(theta_minus) = xi``."""

    theta_minus: float
    theta_plus: float
    x_minus: PhaseVector
    x_plus: PhaseVector
    xi: PhaseVector
    caustic: bool = False

    @property
    def centre(self) -> PhaseVector:
        return PhaseVector((self.x_minus.p + self.x_plus.p) / 2, (self.x_minus.q + self.x_plus.q) / 2)

    @property
    def residual(self) -> float:
        return (self.x_plus - self.x_minus - self.xi).norm


@dataclass(frozen=True)
class Diameter:
    """Chord joining the two points whose tangents are parallel to ``direction``."""

    theta_minus: float
    theta_plus: float
    chord: PhaseVector
    direction: PhaseVector
    curvature_minus: float
    curvature_plus: float

    @property
    def length(self) -> float:
        return self.chord.norm

    @property
    def a(self) -> float:
        """Parabolic coefficient ``delta p = a delta q^2`` at the tips (larger of the two)."""
        return max(self.curvature_minus, self.curvature_plus) / 2


def _tangent_points(curve: TorusCurve, d: np.ndarray) -> tuple[float, float]:
    theta = np.linspace(0.0, TWO_PI, SCAN + 1)
    g = _wedge(curve.dx(theta), d)
    roots = []
    for i in range(SCAN):
        if g[i] == 0.0:
            roots.append(theta[i])
        elif g[i] * g[i + 1] < 0:
            roots.append(brentq(lambda t: float(_wedge(curve.dx(t), d)), theta[i], theta[i + 1], xtol=1e-15))
    if len(roots) != 2:
        raise CurveError(f"expected two parallel tangents, found {len(roots)}; curve not convex")
    return roots[0], roots[1]


def diameter(curve: TorusCurve, direction) -> Diameter:
    """Chord between the two tips with tangent parallel to ``direction``.

    The tip where the velocity points along ``+direction`` is the end of the
    chord.
    """
    curve.require_convex()
    d = _unit(direction)
    t1, t2 = _tangent_points(curve, d)
    if float(np.dot(curve.dx(t1), d)) < 0:
        t1, t2 = t2, t1
    zeta = curve.x(t1) - curve.x(t2)
    return Diameter(
        t2, t1, PhaseVector(*zeta), PhaseVector(*d), float(curve.curvature(t2)), float(curve.curvature(t1))
    )


class _ChordSolver:
    """Finds partners along a fixed chord direction on a convex curve."""

    def __init__(self, curve: TorusCurve, direction):
        curve.require_convex()
        self.curve = curve
        self.d = _unit(direction)
        t1, t2 = _tangent_points(curve, self.d)
        # positive arc: partners lie along +d
        if self.length((t1 + t2) / 2) > 0:
            self.lo, self.hi = t1, t2
        else:
            self.lo, self.hi = t2, t1 + TWO_PI
        self._best = None

    def partner(self, tm: float) -> float | None:
        x0 = self.curve.x(tm)

        def f(u):
            return float(_wedge(self.curve.x(tm + u) - x0, self.d))

        a, b = 1e-12, TWO_PI - 1e-12
        fa, fb = f(a), f(b)
        if fa * fb > 0:
            return None
        return tm + brentq(f, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps)

    def length(self, tm: float) -> float:
        tp = self.partner(tm)
        if tp is None:
            return 0.0
        return float(np.dot(self.curve.x(tp) - self.curve.x(tm), self.d))

    def longest(self) -> tuple[float, float]:
        """``(theta_minus, length)`` of the longest chord along the direction."""
        if self._best is None:
            grid = np.linspace(self.lo, self.hi, 64)[1:-1]
            lengths = [self.length(t) for t in grid]
            k = int(np.argmax(lengths))
            a, b = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]
            res = minimize_scalar(lambda t: -self.length(t), bounds=(a, b), method="bounded", options={"xatol": 1e-12})
            self._best = (float(res.x), -float(res.fun))
        return self._best


def max_chord_length(curve: TorusCurve, direction) -> float:
    """Length of the longest chord parallel to ``direction``."""
    return _ChordSolver(curve, direction).longest()[1]


def _polish(curve: TorusCurve, tm: float, tp: float, xi: np.ndarray) -> tuple[float, float]:
    scale = max(1.0, float(np.max(np.abs(curve.x(tm)))))
    for _ in range(12):
        F = curve.x(tp) - curve.x(tm) - xi
        if math.hypot(F[0], F[1]) < 1e-15 * scale:
            break
        J = np.column_stack([-curve.dx(tm), curve.dx(tp)])
        try:
            step = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            break
        tm, tp = tm + step[0], tp + step[1]
    return tm, tp


def _realization(curve, tm, tp, xi, caustic=False) -> ChordRealization:
    return ChordRealization(
        float(np.mod(tm, TWO_PI)),
        float(np.mod(tp, TWO_PI)),
        PhaseVector(*curve.x(tm)),
        PhaseVector(*curve.x(tp)),
        PhaseVector(*xi),
        caustic,
    )


def find_chord_realizations(curve: TorusCurve, xi) -> list[ChordRealization]:
    """All pairs of curve points joined by the chord ``xi``, ordered by ``theta_minus``.

    A convex curve carries exactly two realizations of any chord shorter
    than the longest chord in its direction, none beyond it, and a single
    coalesced pair (returned twice, flagged as caustic) at that length.
    """
    xi = np.asarray(xi, dtype=float)
    size = math.hypot(xi[0], xi[1])
    scale = float(np.max(np.abs(curve.x(np.linspace(0, TWO_PI, 64)))))
    if size < 1e-12 * scale:
        return []
    solver = _ChordSolver(curve, xi)
    t_star, longest = solver.longest()
    if size > longest * (1 + 1e-12):
        return []
    if size >= longest * (1 - CAUSTIC_TOL):
        tp = solver.partner(t_star)
        r = _realization(curve, t_star, tp, curve.x(tp) - curve.x(t_star), caustic=True)
        return [r, r]
    out = []
    for a, b in ((solver.lo + 1e-9, t_star), (t_star, solver.hi - 1e-9)):
        tm = brentq(lambda t: solver.length(t) - size, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps)
        tp = solver.partner(tm)
        tm, tp = _polish(curve, tm, tp, xi)
        out.append(_realization(curve, tm, tp, xi))
    out.sort(key=lambda r: r.theta_minus)
    return out


def _arc_area(curve: TorusCurve, t0: float, t1: float) -> float:
    """``(1/2) Int x ^ x' dtheta`` from ``t0`` to ``t1``."""
    half = (t1 - t0) / 2
    t = t0 + half * (_GL_NODES + 1)
    x, v = curve.x(t), curve.dx(t)
    return float(0.5 * half * np.sum(_GL_WEIGHTS * (x[0] * v[1] - x[1] * v[0])))


def _forward_span(r: ChordRealization) -> float:
    return float(np.mod(r.theta_plus - r.theta_minus, TWO_PI))


def segment_area(curve: TorusCurve, r: ChordRealization) -> float:
    """Signed area bounded by the increasing-theta arc from ``x_minus`` to
    ``x_plus`` and the chord back."""
    arc = _arc_area(curve, r.theta_minus, r.theta_minus + _forward_span(r))
    return arc + 0.5 * skew_product(r.x_plus, r.x_minus)


def chord_action(curve: TorusCurve, r: ChordRealization, xi=None) -> float:
    """Chord generating function ``S(xi) = S(X) + X ^ xi`` for one realization.

    ``S(X)`` is the segment area of :func:`segment_area`. With the skew
    product ``a ^ b = a_p b_q - a_q b_p`` this is the phase whose gradient is
    ``(-Q, P)``, as required by the chord function's stationary phase.
    """
    xi = r.xi if xi is None else PhaseVector(*xi)
    return segment_area(curve, r) + skew_product(r.centre, xi)


def chord_amplitude(curve: TorusCurve, r: ChordRealization) -> tuple[float, int]:
    """Amplitude ``|x'_+ ^ x'_-|^(-1/2)`` and signature of one realization.

    The signature is the sign of the slope difference between the two tips
    in a canonical frame whose position axis runs along the chord.
    """
    vp, vm = curve.dx(r.theta_plus), curve.dx(r.theta_minus)
    bracket = float(_wedge(vp, vm))
    if r.caustic or abs(bracket) < 1e-10:
        raise CausticError("amplitude diverges at a caustic")
    e = _unit(r.xi)
    f = np.array([e[1], -e[0]])

    def slope(v):
        return float(np.dot(v, f) / np.dot(v, e))

    sigma = 1 if slope(vp) - slope(vm) > 0 else -1
    return abs(bracket) ** -0.5, sigma


def conjugate_chord(curve: TorusCurve, xi) -> PhaseVector:
    """The chord ``eta`` joining the two realizations of ``xi``.

    The four tips of the two realizations form a parallelogram with sides
    ``xi`` and ``eta``.
    """
    rs = find_chord_realizations(curve, xi)
    if not rs:
        raise CausticError(f"chord {tuple(xi)} has no realization")
    if rs[0].caustic:
        raise CausticError(f"chord {tuple(xi)} sits on a caustic")
    return rs[1].x_minus - rs[0].x_minus


def _inside_arc(theta: float, start: float, span: float) -> bool:
    return float(np.mod(theta - start, TWO_PI)) < span


def cap_areas(curve: TorusCurve, xi) -> tuple[float, float]:
    """Areas of the two caps cut off by the realizations of ``xi``.

    Each cap lies on the side of its chord away from the other realization,
    so the curve's area splits into both caps of ``xi``, both caps of its
    conjugate ``eta`` and the inscribed parallelogram ``|xi ^ eta|``.
    """
    rs = find_chord_realizations(curve, xi)
    if len(rs) != 2 or rs[0].caustic:
        raise CausticError(f"chord {tuple(xi)} has no distinct realizations")
    total = curve.enclosed_area()
    caps = []
    for r, other in ((rs[0], rs[1]), (rs[1], rs[0])):
        area = abs(segment_area(curve, r))
        if _inside_arc(other.theta_minus, r.theta_minus, _forward_span(r)):
            area = total - area
        caps.append(area)
    return caps[0], caps[1]


def shaded_area(curve: TorusCurve, xi) -> float:
    return sum(cap_areas(curve, xi))
