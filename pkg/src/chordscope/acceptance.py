"""Acceptance suite shared by ``chordscope validate`` and the test-suite.

Each criterion returns a :class:`CriterionResult`; a criterion that raises
counts as failed.
"""

from __future__ import annotations

import contextlib
import math
import time
import traceback
from dataclasses import dataclass
from typing import Callable

import numpy as np

from chordscope import transforms
from chordscope.analytic import FamilySpec, bessel_j0, damped_laguerre, exact_chord, exact_wigner, fock_small_chord_approx
from chordscope.core import PhaseVector, make_dual_grids, skew_product
from chordscope.correlations import (
    correlation_routes,
    fourier_invariance_residual,
    generator_expansion,
    purity_convolution_residual,
)
from chordscope.parity import parity_project, parity_rescaling_check, projected_chord
from chordscope.semiclassical import (
    TorusCurve,
    cap_areas,
    chord_action,
    conjugate_chord,
    diameter,
    ergodic_chi,
    find_chord_realizations,
    near_diameter_action,
    semiclassical_chi,
    semiclassical_correlation,
    small_chord_chi,
    validity_window,
)
from chordscope.states import make_cat, make_coherent, make_fock, mix, position_operator, superpose_coherent
from chordscope.transforms import chord_of, chord_values, symplectic_fourier, wigner_of

# Energy-shell chord function of p^2/2 + q^4/4 at E = 1, hbar = 0.1, |xi| = 1,
# from an independent adaptive quadrature over q with p = +-sqrt(2(E - q^4/4)).
QUARTIC_CHI_ALONG_P = 0.20640627968853015
QUARTIC_CHI_ALONG_Q = 0.2591884856267246


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number:2d} {self.name:<34s} {self.seconds:6.1f}s  {self.detail}"


@dataclass(frozen=True)
class Criterion:
    number: int
    name: str
    suite: str
    check: Callable[[], tuple[bool, str]]
    budget: float | None = None

    def run(self) -> CriterionResult:
        start = time.perf_counter()
        try:
            ok, detail = self.check()
        except Exception as exc:  # a crash is a failure, reported with its cause
            ok, detail = False, f"{type(exc).__name__}: {exc} @ {traceback.extract_tb(exc.__traceback__)[-1].name}"
        elapsed = time.perf_counter() - start
        if ok and self.budget is not None and elapsed > self.budget:
            ok, detail = False, f"{detail}; over the {self.budget:g}s budget"
        return CriterionResult(self.number, self.name, bool(ok), detail, elapsed)


def _builtins(grids):
    h = grids.hbar
    states = {
        "coherent(0,0)": make_coherent((0.0, 0.0), 1.0, h, grids),
        "coherent(0.5,1)": make_coherent((0.5, 1.0), 1.0, h, grids),
        "cat+(0,2)": make_cat((0.0, 2.0), 1, h, grids),
        "cat-(0,2)": make_cat((0.0, 2.0), -1, h, grids),
    }
    for n in (0, 1, 2, 3, 5, 10):
        states[f"fock{n}"] = make_fock(n, h, grids)
    states["fock0+1 mixture"] = mix([0.5, 0.5], [states["fock0"], states["fock1"]])
    return states


def _normalization():
    worst_chi = worst_w = 0.0
    for hbar in (1.0, 0.5):
        g = make_dual_grids(512, 8.0, hbar)
        for state in _builtins(g).values():
            chi0 = chord_values(state, [0.0], [0.0])[0, 0]
            worst_chi = max(worst_chi, abs(2 * math.pi * hbar * chi0 - 1))
            worst_w = max(worst_w, abs(wigner_of(state, g).integral() - 1))
    return worst_chi < 1e-8 and worst_w < 1e-8, f"chi0 {worst_chi:.1e}, int W {worst_w:.1e}"


def _closed_form_error(cases, g):
    P, Q = g.mesh("centre")
    xp, xq = g.mesh("chord")
    worst = 0.0
    for state, spec in cases:
        W = wigner_of(state, g)
        C = chord_of(state, g)
        ew = exact_wigner(spec, (P, Q))
        worst = max(
            worst,
            float(np.max(np.abs(W.values - ew))),
            float(np.max(np.abs(C.values - exact_chord(spec, (xp, xq))))),
            float(np.max(np.abs(symplectic_fourier(C).values - ew))),
        )
    return worst


def _coherent_forms():
    g = make_dual_grids(512, 8.0, 1.0)
    cases = []
    for centre, omega in (((0.0, 0.0), 1.0), ((0.5, 1.0), 1.0), ((0.0, 2.0), 1.0), ((-1.0, 0.5), 1.7)):
        cases.append((make_coherent(centre, omega, 1.0, g), FamilySpec("coherent", centre, omega=omega)))
    err = _closed_form_error(cases, g)
    return err < 1e-7, f"max abs error {err:.1e}"


def _cat_fock_forms():
    g = make_dual_grids(512, 8.0, 1.0)
    cases = [(make_cat((0.0, 2.0), s, 1.0, g), FamilySpec("cat", (0.0, 2.0), s)) for s in (1, -1)]
    cases += [(make_fock(n, 1.0, g), FamilySpec("fock", n_level=n)) for n in (0, 1, 2, 3, 5, 10)]
    err = _closed_form_error(cases, g)
    return err < 1e-7, f"max abs error {err:.1e}"


def _parity():
    g = make_dual_grids(512, 8.0, 1.0)
    worst = 0.0
    symmetric = [(make_fock(n, 1.0, g), (0.0, 0.0)) for n in range(6)]
    symmetric += [(make_cat((0.0, 2.0), s, 1.0, g), (0.0, 0.0)) for s in (1, -1)]
    symmetric.append((make_coherent((0.0, 2.0), 1.0, 1.0, g), (0.0, 2.0)))
    for state, centre in symmetric:
        worst = max(worst, parity_rescaling_check(state, centre))
    rng = np.random.default_rng(20260101)
    route = 0.0
    for _ in range(10):
        k = int(rng.integers(2, 4))
        terms = [
            (complex(*rng.normal(size=2)), tuple(rng.uniform(-2.0, 2.0, size=2)))
            for _ in range(k)
        ]
        state = superpose_coherent(terms, 1.0, g)
        chi, W = chord_of(state, g), wigner_of(state, g)
        for sign in (1, -1):
            projected, _ = parity_project(state, (0.0, 0.0), sign)
            route = max(route, float(np.max(np.abs(chord_of(projected, g).values - projected_chord(chi, W, sign).values))))
    return worst < 1e-7 and route < 1e-7, f"rescaling {worst:.1e}, projected-chord routes {route:.1e}"


def _fourier_invariance():
    g = make_dual_grids(512, 8.0, 1.0)
    pure = {
        "ground": make_fock(0, 1.0, g),
        "cat": make_cat((0.0, 2.0), 1, 1.0, g),
        "fock3": make_fock(3, 1.0, g),
    }
    res = {k: fourier_invariance_residual(chord_of(s, g)) for k, s in pure.items()}
    mixed = fourier_invariance_residual(chord_of(mix([0.5, 0.5], [make_fock(0, 1.0, g), make_fock(1, 1.0, g)]), g))
    ok = max(res.values()) < 1e-6 and mixed > 0.1
    return ok, f"pure max {max(res.values()):.1e}, mixture {mixed:.3f}"


def _purity_convolution():
    g = make_dual_grids(512, 8.0, 1.0)
    chords = [(0.0, 0.0), (1.0, 1.0), (-0.7, 0.4), (2.0, -1.5), (0.3, 2.5)]
    res = [purity_convolution_residual(chord_of(s, g), chords) for s in (make_fock(2, 1.0, g), make_cat((0.0, 2.0), 1, 1.0, g))]
    ground = purity_convolution_residual(chord_of(make_fock(0, 1.0, g), g), [(0.0, 0.0)])
    return max(res) < 1e-5 and ground < 1e-6, f"pure states {max(res):.1e}, trace identity {ground:.1e}"


def _route_agreement():
    g = make_dual_grids(512, 8.0, 1.0)
    rng = np.random.default_rng(7)
    chords = [tuple(v) for v in rng.uniform(-6.0, 6.0, size=(64, 2))]
    worst = 0.0
    for state in (make_cat((0.0, 2.0), 1, 1.0, g), make_fock(3, 1.0, g)):
        worst = max(worst, correlation_routes(state, chords).max_delta)
    return worst < 1e-6, f"max pairwise deviation {worst:.1e}"


def _generator():
    g = make_dual_grids(512, 8.0, 1.0)
    K = position_operator(g.position_grid())
    alphas = [0.02, 0.05, 0.08, 0.11, 0.14]
    coh = generator_expansion(make_coherent((0.0, 0.0), 1.0, 1.0, g), K, alphas)
    f1 = generator_expansion(make_fock(1, 1.0, g), K, alphas)
    mixed = generator_expansion(mix([0.3, 0.7], [make_fock(0, 1.0, g), make_fock(2, 1.0, g)]), K, alphas)
    ok = abs(coh.c2 - 0.5) < 0.01 and abs(f1.c2 - 1.5) < 0.03
    return ok, f"coherent c2 {coh.c2:.5f}, fock1 c2 {f1.c2:.5f}, mixture c2 {mixed.c2:.4f} vs {mixed.c2_commutator:.4f}"


def _bessel_law():
    c = TorusCurve.circle(50.5)
    spec = FamilySpec("fock", n_level=50)
    chi0 = 1 / (2 * math.pi)
    worst = 0.0
    for ang in np.linspace(0.0, math.pi, 7):
        d = np.array([math.cos(ang), math.sin(ang)])
        for s in np.linspace(0.0, 0.3, 61):
            xi = s * d
            worst = max(worst, abs(small_chord_chi(c, xi, 1.0) - exact_chord(spec, tuple(xi))) / chi0)
    z, n = 2.0, 400
    limit = abs(damped_laguerre(n, z * z / (2 * n)) - bessel_j0(math.sqrt(2) * z))
    return worst < 0.01 and limit < 1e-2, f"max error/chi(0) {worst:.2e}, Laguerre limit {limit:.1e}"


def _chi_profile(curve, d, hbar, lengths):
    return np.array([semiclassical_chi(curve, s * d, hbar).value for s in lengths])


def _stationary_phase():
    d = np.array([0.6, 0.8])
    c1 = TorusCurve.circle(50.5)
    lo, hi = validity_window(c1, d, 1.0)
    lengths = np.linspace(lo, hi, 160)
    sc = _chi_profile(c1, d, 1.0, lengths)
    ex = np.array([complex(exact_chord(FamilySpec("fock", n_level=50), tuple(s * d))) for s in lengths])
    scale = np.max(np.abs(ex))
    inner = lengths >= 2 * lo
    err = float(np.max(np.abs(sc - ex)[inner]) / scale)
    edge = float(np.max(np.abs(sc - ex)) / scale)
    branch = []
    # the window itself is geometric: compare its width on one curve
    ratios = [np.divide(*validity_window(c1, d, hbar)[::-1]) for hbar in (1.0, 0.25)]
    for hbar, action in ((1.0, 50.5), (0.25, 50.375)):
        c = c1 if hbar == 1.0 else TorusCurve.circle(action)
        lo_h, hi_h = validity_window(c, d, hbar)
        ls = np.linspace(2 * lo_h, hi_h, 120)
        small = np.array([small_chord_chi(c, s * d, hbar) for s in ls])
        branch.append(float(np.max(np.abs(_chi_profile(c, d, hbar, ls) - small)) / np.max(np.abs(small))))
    widening = ratios[1] / ratios[0] / 4 ** (2 / 3)
    ok = err < 0.05 and max(branch) < 0.05 and abs(widening - 1) < 1e-9
    return ok, (
        f"vs exact {err:.3f} (from the literal lower edge {edge:.3f}), "
        f"branches {branch[0]:.3f}/{branch[1]:.3f}, window ratio scaling {widening:.6f}"
    )


def _near_diameter():
    c = TorusCurve.circle(50.5)
    worst_total = worst_cubic = 0.0
    for ang in np.linspace(0.0, math.pi, 5, endpoint=False):
        d = np.array([math.cos(ang), math.sin(ang)])
        zeta = diameter(c, d)
        xi = 0.01 * zeta.length * d
        estimate = near_diameter_action(c, xi)
        area = c.enclosed_area()
        for r, est in zip(find_chord_realizations(c, xi), estimate):
            exact = chord_action(c, r)
            tip = min((PhaseVector(*c.x(zeta.theta_minus)), PhaseVector(*c.x(zeta.theta_plus))), key=lambda t: (r.centre - t).norm)
            lead = skew_product(tip, PhaseVector(*xi))
            offset = area if abs(exact - lead) > area / 2 else 0.0
            worst_total = max(worst_total, abs(est - exact) / abs(exact))
            worst_cubic = max(worst_cubic, abs((est - lead - offset) - (exact - lead - offset)) / abs(exact - lead - offset))
    return worst_total < 0.01 and worst_cubic < 0.01, f"action {worst_total:.1e}, cubic term {worst_cubic:.1e}"


def _labelled_phase(curve, eta, xi_hat):
    rs = find_chord_realizations(curve, eta)
    rs.sort(key=lambda r: -float(np.dot(r.centre, xi_hat)))
    return chord_action(curve, rs[0]) - chord_action(curve, rs[1])


def _conjugate_geometry():
    closure = involution = area = stationary = 0.0
    cells = []
    for curve, xi in ((TorusCurve.circle(50.5), np.array([3.0, 5.0])), (TorusCurve.ellipse(3.0, 1.5), np.array([0.7, -0.9]))):
        rs = find_chord_realizations(curve, xi)
        closure = max(closure, ((rs[1].x_plus - rs[0].x_plus) - (rs[1].x_minus - rs[0].x_minus)).norm)
        eta = conjugate_chord(curve, xi)
        back = np.asarray(conjugate_chord(curve, eta))
        involution = max(involution, min(np.linalg.norm(back - xi), np.linalg.norm(back + xi)))
        total = curve.enclosed_area()
        books = sum(cap_areas(curve, xi)) + sum(cap_areas(curve, eta)) + abs(skew_product(xi, eta))
        area = max(area, abs(books - total) / total)
        # stationary point of dS(eta) + eta ^ xi on a local eta grid
        h = np.linalg.norm(eta) / 200
        offsets = np.arange(-6, 7) * h
        xi_hat = xi / np.linalg.norm(xi)
        phi = np.array(
            [
                [_labelled_phase(curve, (eta[0] + a, eta[1] + b), xi_hat) + skew_product((eta[0] + a, eta[1] + b), xi) for b in offsets]
                for a in offsets
            ]
        )
        gp, gq = np.gradient(phi, h)
        i, j = np.unravel_index(np.argmin(np.hypot(gp, gq)), phi.shape)
        cells.append(max(abs(i - 6), abs(j - 6)))
    ok = closure < 1e-10 and involution < 1e-8 and area < 1e-8 and max(cells) <= 2
    return ok, f"closure {closure:.1e}, involution {involution:.1e}, area {area:.1e}, stationary offset {max(cells)} cells"


def _local_maxima(y):
    return np.flatnonzero((y[1:-1] > y[:-2]) & (y[1:-1] >= y[2:])) + 1


def _semiclassical_correlation():
    c = TorusCurve.circle(50.5)
    d = np.array([0.0, 1.0])
    lo, hi = validity_window(c, d, 1.0)
    lengths = np.linspace(lo, hi, 600)
    sc = np.array([semiclassical_correlation(c, s * d, 1.0) for s in lengths])
    ex = np.array([(2 * math.pi) ** 2 * abs(exact_chord(FamilySpec("fock", n_level=50), tuple(s * d))) ** 2 for s in lengths])
    ms, me = _local_maxima(sc), _local_maxima(ex)
    count_ok = abs(len(ms) - len(me)) <= 1
    # envelope: peak heights of the exact correlation against the semiclassical peaks
    inner = me[lengths[me] >= 2 * lo]
    env = max(abs(sc[ms[np.argmin(np.abs(ms - k))]] - ex[k]) / ex[k] for k in inner)
    return count_ok and env < 0.1, f"maxima {len(ms)} vs {len(me)}, envelope {env:.3f}"


def _ergodic():
    H = lambda p, q: (p**2 + q**2) / 2
    worst = 0.0
    for xi in ((0.1, 0.0), (0.3, 0.4), (-1.0, 2.0), (0.0, 3.0)):
        worst = max(worst, abs(ergodic_chi(H, 50.5, xi, 1.0) - fock_small_chord_approx(50.5, xi, 1.0)))
    quartic = lambda p, q: p**2 / 2 + q**4 / 4
    a = abs(ergodic_chi(quartic, 1.0, (1.0, 0.0), 0.1))
    b = abs(ergodic_chi(quartic, 1.0, (0.0, 1.0), 0.1))
    aniso = abs(a - b) / max(a, b)
    pinned = max(abs(a - QUARTIC_CHI_ALONG_P), abs(b - QUARTIC_CHI_ALONG_Q))
    return worst < 1e-6 and aniso > 0.05 and pinned < 1e-6, f"harmonic {worst:.1e}, anisotropy {aniso:.3f}, oracle {pinned:.1e}"


def _mutation():
    from chordscope.cli import main

    code = main(["validate", "--filter", "transforms", "--perturb-fourier", "1.01", "--quiet"])
    return code == 1, f"perturbed validate exit code {code}"


CRITERIA = [
    Criterion(1, "normalization", "transforms", _normalization, 5.0),
    Criterion(2, "coherent closed forms", "transforms", _coherent_forms, 10.0),
    Criterion(3, "cat and Fock closed forms", "transforms", _cat_fock_forms, 30.0),
    Criterion(4, "parity rescaling", "parity", _parity),
    Criterion(5, "Fourier invariance", "correlations", _fourier_invariance, 20.0),
    Criterion(6, "purity convolution", "correlations", _purity_convolution),
    Criterion(7, "three-route correlation", "correlations", _route_agreement),
    Criterion(8, "generator expansion", "correlations", _generator),
    Criterion(9, "small-chord Bessel law", "semiclassical", _bessel_law),
    Criterion(10, "stationary-phase regime", "semiclassical", _stationary_phase, 60.0),
    Criterion(11, "near-diameter action", "semiclassical", _near_diameter),
    Criterion(12, "conjugate-chord geometry", "semiclassical", _conjugate_geometry),
    Criterion(13, "semiclassical correlation", "semiclassical", _semiclassical_correlation),
    Criterion(14, "ergodic formula", "semiclassical", _ergodic),
    Criterion(15, "mutation sanity", "mutation", _mutation),
]

SUITES = sorted({c.suite for c in CRITERIA})


def select(filter_: str | None = None) -> list[Criterion]:
    if filter_ is None:
        return list(CRITERIA)
    if filter_.isdigit():
        chosen = [c for c in CRITERIA if c.number == int(filter_)]
    else:
        chosen = [c for c in CRITERIA if c.suite == filter_]
    if not chosen:
        raise KeyError(f"no criterion or suite named {filter_!r}; suites: {', '.join(SUITES)}")
    return chosen


def run(filter_: str | None = None, report: Callable[[str], None] | None = print) -> list[CriterionResult]:
    results = []
    for criterion in select(filter_):
        result = criterion.run()
        if report:
            report(result.line())
        results.append(result)
    return results


@contextlib.contextmanager
def perturbed_fourier(factor: float):
    """Temporarily scale the symplectic Fourier kernel by ``factor``."""
    saved = transforms._FOURIER_SCALE
    transforms._FOURIER_SCALE = saved * factor
    try:
        yield
    finally:
        transforms._FOURIER_SCALE = saved
