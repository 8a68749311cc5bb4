"""Closed curves in the phase plane parametrized by an angle variable."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline

TWO_PI = 2 * math.pi
SCAN_POINTS = 1024


class CurveError(ValueError):
    """The curve is open, non-convex where convexity is required, or degenerate."""


Param = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class TorusCurve:
    """A closed phase-space curve ``x(theta) = (p, q)``, ``theta`` in ``[0, 2 pi)``.

    The parameter is treated as the angle variable conjugate to the action,
    so ``dx/dtheta`` is the Hamiltonian velocity of the action function.
    Curves are oriented so that ``Int p dq > 0``, which makes the enclosed
    area ``2 pi * action`` positive.

    Parameters
    ----------
    position, velocity, acceleration : callable
        Vectorized maps ``theta -> array (2, ...)`` for ``x`` and its first
        two derivatives.
    label : str
        Description used in reports.
    """

    position: Param
    velocity: Param
    acceleration: Param
    label: str = "curve"
    action: float = field(init=False)
    convex: bool = field(init=False)

    def __post_init__(self):
        theta = np.linspace(0.0, TWO_PI, SCAN_POINTS, endpoint=False)
        start, end = self.x(0.0), self.x(TWO_PI)
        scale = float(np.max(np.abs(self.x(theta))))
        if not np.allclose(start, end, atol=1e-9 * scale) or not np.allclose(
            self.dx(0.0), self.dx(TWO_PI), atol=1e-7 * scale
        ):
            raise CurveError("curve is not closed")
        area = self.enclosed_area()
        if area <= 0:
            raise CurveError("curve must be oriented with positive enclosed area")
        object.__setattr__(self, "action", area / TWO_PI)
        turn = self.turning(theta)
        object.__setattr__(self, "convex", bool(np.all(turn > 0) or np.all(turn < 0)))

    def x(self, theta) -> np.ndarray:
        return np.asarray(self.position(np.asarray(theta, dtype=float)), dtype=float)

    def dx(self, theta) -> np.ndarray:
        return np.asarray(self.velocity(np.asarray(theta, dtype=float)), dtype=float)

    def ddx(self, theta) -> np.ndarray:
        return np.asarray(self.acceleration(np.asarray(theta, dtype=float)), dtype=float)

    def turning(self, theta) -> np.ndarray:
        """``x' ^ x''``; one-signed on a convex curve."""
        v, a = self.dx(theta), self.ddx(theta)
        return v[0] * a[1] - v[1] * a[0]

    def curvature(self, theta) -> np.ndarray:
        v = self.dx(theta)
        return np.abs(self.turning(theta)) / np.hypot(v[0], v[1]) ** 3

    def enclosed_area(self, n: int = 4096) -> float:
        """``(1/2) loop x ^ dx`` by the trapezoid rule, spectrally accurate here."""
        theta = np.linspace(0.0, TWO_PI, n, endpoint=False)
        x, v = self.x(theta), self.dx(theta)
        return float(0.5 * np.mean(x[0] * v[1] - x[1] * v[0]) * TWO_PI)

    def require_convex(self) -> None:
        if not self.convex:
            raise CurveError(f"{self.label} is not convex")

    @classmethod
    def circle(cls, action: float, centre=(0.0, 0.0)) -> "TorusCurve":
        """Level set ``(p^2 + q^2)/2 = action`` of the unit oscillator."""
        if not action > 0:
            raise CurveError("action must be positive")
        R = math.sqrt(2 * action)
        cp, cq = centre
        return cls(
            lambda t: np.array([cp - R * np.sin(t), cq + R * np.cos(t)]),
            lambda t: np.array([-R * np.cos(t), -R * np.sin(t)]),
            lambda t: np.array([R * np.sin(t), -R * np.cos(t)]),
            label=f"circle(I={action:g})",
        )

    @classmethod
    def ellipse(cls, a: float, b: float) -> "TorusCurve":
        """Ellipse with semi-axis ``a`` along ``p`` and ``b`` along ``q``."""
        if not (a > 0 and b > 0):
            raise CurveError("semi-axes must be positive")
        return cls(
            lambda t: np.array([-a * np.sin(t), b * np.cos(t)]),
            lambda t: np.array([-a * np.cos(t), -b * np.sin(t)]),
            lambda t: np.array([a * np.sin(t), -b * np.cos(t)]),
            label=f"ellipse(a={a:g}, b={b:g})",
        )

    @classmethod
    def from_samples(cls, theta, p, q) -> "TorusCurve":
        """Periodic cubic spline through samples at angles ``theta``.

        The closing point may be given or omitted; the orientation of the
        samples is kept as supplied.
        """
        theta = np.asarray(theta, dtype=float)
        p, q = np.asarray(p, dtype=float), np.asarray(q, dtype=float)
        if not (theta.shape == p.shape == q.shape) or theta.size < 8:
            raise CurveError("need at least 8 matching samples of theta, p and q")
        if np.any(np.diff(theta) <= 0) or theta[-1] - theta[0] > TWO_PI + 1e-12:
            raise CurveError("theta must increase within one period")
        if not math.isclose(theta[-1] - theta[0], TWO_PI, abs_tol=1e-12):
            theta = np.append(theta, theta[0] + TWO_PI)
            p, q = np.append(p, p[0]), np.append(q, q[0])
        elif not (math.isclose(p[0], p[-1], abs_tol=1e-12) and math.isclose(q[0], q[-1], abs_tol=1e-12)):
            raise CurveError("samples at 0 and 2 pi disagree")
        spline = CubicSpline(theta, np.vstack([p, q]), axis=1, bc_type="periodic")
        t0 = theta[0]

        def wrap(t):
            return t0 + np.mod(np.asarray(t) - t0, TWO_PI)

        return cls(
            lambda t: spline(wrap(t)),
            lambda t: spline(wrap(t), 1),
            lambda t: spline(wrap(t), 2),
            label="spline",
        )
