"""Chord function averaged over an energy shell."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from chordscope.semiclassical.curves import CurveError

Hamiltonian = Callable[[np.ndarray, np.ndarray], np.ndarray]


def _radial_shell(H: Hamiltonian, E: float, centre, n_angles: int, r_max: float):
    """Points of a star-shaped shell ``H = E`` and their co-area weights."""
    phi = np.linspace(0.0, 2 * math.pi, n_angles, endpoint=False)
    c, s = np.cos(phi), np.sin(phi)
    cp, cq = centre

    def h(r):
        return H(cp + r * c, cq + r * s) - E

    if np.any(h(np.zeros_like(phi)) >= 0):
        raise CurveError("the centre must lie strictly inside the energy shell")
    hi = np.full_like(phi, r_max)
    for _ in range(60):
        if np.all(h(hi) > 0):
            break
        hi = np.where(h(hi) > 0, hi, 2 * hi)
    else:
        raise CurveError("energy shell is not bounded")
    lo = np.zeros_like(phi)
    for _ in range(80):
        mid = (lo + hi) / 2
        inside = h(mid) < 0
        lo, hi = np.where(inside, mid, lo), np.where(inside, hi, mid)
    r = (lo + hi) / 2
    step = 1e-5 * r
    dHdr = (h(r + step) - h(r - step)) / (2 * step)
    if np.any(dHdr <= 0):
        raise CurveError("energy shell is not star-shaped about the centre")
    return cp + r * c, cq + r * s, r / dHdr


def _marching_shell(H: Hamiltonian, E: float, bounds, resolution: int):
    from skimage.measure import find_contours

    (p0, p1), (q0, q1) = bounds
    p = np.linspace(p0, p1, resolution)
    q = np.linspace(q0, q1, resolution)
    P, Q = np.meshgrid(p, q, indexing="ij")
    contours = [c for c in find_contours(H(P, Q), E) if np.allclose(c[0], c[-1])]
    if not contours:
        raise CurveError("no closed energy contour inside the sampled box")
    pts = max(contours, key=len)
    cp = p0 + pts[:, 0] * (p[1] - p[0])
    cq = q0 + pts[:, 1] * (q[1] - q[0])
    mp, mq = (cp[1:] + cp[:-1]) / 2, (cq[1:] + cq[:-1]) / 2
    length = np.hypot(np.diff(cp), np.diff(cq))
    h = 1e-6 * max(p1 - p0, q1 - q0)
    gp = (H(mp + h, mq) - H(mp - h, mq)) / (2 * h)
    gq = (H(mp, mq + h) - H(mp, mq - h)) / (2 * h)
    return mp, mq, length / np.hypot(gp, gq)


def ergodic_chi(
    H: Hamiltonian,
    E: float,
    xi,
    hbar: float,
    *,
    method: str = "radial",
    centre=(0.0, 0.0),
    n_angles: int = 4096,
    bounds=None,
    resolution: int = 1024,
) -> complex:
    """Energy-shell average ``1/(2 pi hbar) <exp(i x ^ xi / hbar)>`` over ``H = E``.

    The shell carries the measure ``delta(H - E) dx``. ``method="radial"``
    parametrizes a shell that is star-shaped about ``centre``;
    ``method="marching"`` extracts the contour from ``H`` sampled on a
    ``resolution``-square grid over ``bounds = ((p0, p1), (q0, q1))``.

    Parameters
    ----------
    H : callable
        Vectorized Hamiltonian ``H(p, q)``.
    xi : array_like
        Chord ``(xi_p, xi_q)``; may also be an array of shape ``(m, 2)``.
    """
    if method == "radial":
        p, q, w = _radial_shell(H, E, centre, n_angles, 1.0)
    elif method == "marching":
        if bounds is None:
            raise ValueError("marching squares needs sampling bounds")
        p, q, w = _marching_shell(H, E, bounds, resolution)
    else:
        raise ValueError(f"unknown method {method!r}")
    xi = np.atleast_2d(np.asarray(xi, dtype=float))
    phase = np.exp(1j * (np.outer(xi[:, 1], p) - np.outer(xi[:, 0], q)) / hbar)
    out = phase @ w / w.sum() / (2 * math.pi * hbar)
    return complex(out[0]) if out.size == 1 else out
