"""Closed-form Wigner and chord functions and the special functions they use."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from chordscope.core import PhaseVector, skew_product

LAGUERRE_MAX_ORDER = 500


def laguerre(n: int, x):
    """Laguerre polynomial ``L_n(x)`` by upward three-term recurrence.

    Accurate in double precision for ``n <= 500`` over the arguments used
    here; for large ``x`` prefer :func:`damped_laguerre`, which cannot
    overflow.
    """
    _check_order(n)
    x = np.asarray(x, dtype=float)
    prev, cur = np.ones_like(x), 1.0 - x
    if n == 0:
        return _scalar(prev)
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 - x) * cur - k * prev) / (k + 1)
    return _scalar(cur)


def damped_laguerre(n: int, x):
    """``exp(-x/2) L_n(x)``, with the damping folded into a running scale."""
    _check_order(n)
    x = np.asarray(x, dtype=float)
    log_scale = -x / 2
    prev, cur = np.ones_like(x), 1.0 - x
    if n == 0:
        return _scalar(np.exp(log_scale))
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 - x) * cur - k * prev) / (k + 1)
        big = np.abs(cur) > 1e100
        if np.any(big):
            s = np.where(big, np.abs(cur), 1.0)
            cur, prev = cur / s, prev / s
            log_scale = log_scale + np.log(s)
    return _scalar(cur * np.exp(log_scale))


def _check_order(n):
    if n < 0 or int(n) != n:
        raise ValueError("order must be a nonnegative integer")
    if n > LAGUERRE_MAX_ORDER:
        raise ValueError(f"order {n} exceeds the recurrence bound {LAGUERRE_MAX_ORDER}")


def _scalar(a):
    return float(a) if np.ndim(a) == 0 else a


def _j0_miller(x: float) -> float:
    ax = abs(x)
    if ax < 1e-8:
        return 1.0 - ax * ax / 4
    # backward recurrence from well above the turning point, normalized by
    # J0 + 2 (J2 + J4 + ...) = 1
    m = 2 * ((int(ax) + 30 + int(math.sqrt(60 * ax))) // 2)
    j_next, j_cur = 0.0, 1e-30
    total, j0 = 0.0, 0.0
    for k in range(m, 0, -1):
        j_prev = 2 * k / ax * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        if abs(j_cur) > 1e250:
            j_next *= 1e-250
            j_cur *= 1e-250
            total *= 1e-250
        if (k - 1) % 2 == 0 and k - 1 > 0:
            total += j_cur
    j0 = j_cur
    return j0 / (j0 + 2 * total)


def bessel_j0(x):
    """Bessel function ``J_0`` by Miller's backward recurrence."""
    if np.ndim(x) == 0:
        return _j0_miller(float(x))
    arr = np.asarray(x, dtype=float)
    return np.array([_j0_miller(v) for v in arr.ravel()]).reshape(arr.shape)


def j0_asymptotic(y):
    """Leading large-argument form ``sqrt(2/(pi y)) cos(y - pi/4)``."""
    y = np.asarray(y, dtype=float)
    return _scalar(np.sqrt(2 / (np.pi * y)) * np.cos(y - np.pi / 4))


Family = Literal["coherent", "cat", "fock"]


@dataclass(frozen=True)
class FamilySpec:
    family: Family
    eta: PhaseVector = PhaseVector(0.0, 0.0)
    sign: int = 1
    n_level: int = 0
    omega: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if self.family not in ("coherent", "cat", "fock"):
            raise ValueError(f"unknown family {self.family!r}")
        object.__setattr__(self, "eta", PhaseVector(*self.eta))
        if self.hbar <= 0 or self.omega <= 0:
            raise ValueError("hbar and omega must be positive")
        if self.family == "cat":
            if self.sign not in (1, -1):
                raise ValueError("cat sign must be +1 or -1")
            if self.sign == -1 and self.eta.norm == 0:
                raise ValueError("odd cat with eta = 0 is not normalizable")
        if self.family != "coherent" and self.omega != 1.0:
            raise ValueError("cat and Fock families are defined for omega = 1")
        if self.family == "fock" and (self.n_level < 0 or int(self.n_level) != self.n_level):
            raise ValueError("n_level must be a nonnegative integer")


def exact_wigner(spec: FamilySpec, X):
    """Closed-form Wigner function at ``X = (P, Q)`` (arrays broadcast)."""
    P, Q = np.asarray(X[0], dtype=float), np.asarray(X[1], dtype=float)
    h = spec.hbar
    if spec.family == "coherent":
        e, w = spec.eta, spec.omega
        return _scalar(np.exp(-w * (Q - e.q) ** 2 / h - (P - e.p) ** 2 / (h * w)) / (np.pi * h))
    if spec.family == "cat":
        e, s = spec.eta, spec.sign
        eta2 = e.p**2 + e.q**2
        pref = 1 / (2 * np.pi * h * (1 + s * np.exp(-eta2 / h)))
        bracket = (
            np.exp(-((P - e.p) ** 2 + (Q - e.q) ** 2) / h)
            + np.exp(-((P + e.p) ** 2 + (Q + e.q) ** 2) / h)
            + s * 2 * np.exp(-(P**2 + Q**2) / h) * np.cos(2 * skew_product((P, Q), e) / h)
        )
        return _scalar(pref * bracket)
    n = spec.n_level
    x = 2 * (P**2 + Q**2) / h
    return _scalar((-1) ** n / (np.pi * h) * damped_laguerre(n, x))


def exact_chord(spec: FamilySpec, xi):
    """Closed-form chord function at ``xi = (xi_p, xi_q)``."""
    xp, xq = np.asarray(xi[0], dtype=float), np.asarray(xi[1], dtype=float)
    h = spec.hbar
    if spec.family == "coherent":
        e, w = spec.eta, spec.omega
        phase = np.exp(1j * skew_product(e, (xp, xq)) / h)
        env = np.exp(-w * (xq / 2) ** 2 / h - (xp / 2) ** 2 / (h * w))
        return phase * env / (2 * np.pi * h)
    if spec.family == "cat":
        e, s = spec.eta, spec.sign
        eta2 = e.p**2 + e.q**2
        pref = 1 / (4 * np.pi * h * (1 + s * np.exp(-eta2 / h)))
        # the diagonal terms give the central Gaussian, the cross terms sit at +-2 eta
        bracket = (
            2 * np.exp(-(xp**2 + xq**2) / (4 * h)) * np.cos(skew_product((xp, xq), e) / h)
            + s * np.exp(-((xp / 2 - e.p) ** 2 + (xq / 2 - e.q) ** 2) / h)
            + s * np.exp(-((xp / 2 + e.p) ** 2 + (xq / 2 + e.q) ** 2) / h)
        )
        return (pref * bracket).astype(complex)
    x = (xp**2 + xq**2) / (2 * h)
    return (np.asarray(damped_laguerre(spec.n_level, x)) / (2 * np.pi * h)).astype(complex)


def fock_small_chord_approx(I_action: float, xi, hbar: float = 1.0):
    """Bessel-law chord function of a quantized circle of action ``I_action``."""
    if not I_action > 0:
        raise ValueError("action must be positive")
    r = np.hypot(np.asarray(xi[0], dtype=float), np.asarray(xi[1], dtype=float))
    return _scalar(np.asarray(bessel_j0(np.sqrt(2 * I_action) * r / hbar)) / (2 * np.pi * hbar))
