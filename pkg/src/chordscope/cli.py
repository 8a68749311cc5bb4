"""Command-line interface.

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from contextlib import nullcontext

import numpy as np

from chordscope.core import GridError
from chordscope.specs import CurveSpec, RunConfig, SpecError, StateSpec, parse_pair

EXIT_OK, EXIT_VALIDATION, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

# (flag, dest, kind) of each subcommand's own options, in canonical order
_EXTRA = {
    "correlate": [("--check", "check", None), ("--report", "report", None)],
    "semiclassical": [
        ("--chord", "chord", None),
        ("--sweep-dir", "sweep_dir", None),
        ("--points", "points", 101),
        ("--compare", "compare", None),
        ("--window", "window", False),
    ],
    "parity": [("--centre", "centre", "0,0")],
    "validate": [("--filter", "filter", None), ("--perturb-fourier", "perturb_fourier", None), ("--quiet", "quiet", False)],
}


class UsageError(Exception):
    pass


def _common(p: argparse.ArgumentParser, spec_flag: str | None) -> None:
    if spec_flag == "--state":
        p.add_argument("--state", required=True, help="coherent:p=,q=[,omega=] | fock:n= | cat:p=,q=,sign=+|- | superpose:<json>")
    elif spec_flag == "--curve":
        p.add_argument("--curve", required=True, help="circle:I= | ellipse:a=,b= | quartic:E= | <samples.json>")
    p.add_argument("--n", type=int, default=512, help="grid points per axis (even)")
    p.add_argument("--extent", type=float, default=8.0, help="half-width of the centre grid")
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("-o", "--output", default=None, help="output path (default: stdout)")
    p.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chordscope", description="Wigner and chord functions of quantum states.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (("wigner", "Wigner function on the centre grid"), ("chord", "chord function on the chord grid")):
        _common(sub.add_parser(name, help=text), "--state")
    p = sub.add_parser("correlate", help="translation correlations and purity diagnostics")
    _common(p, "--state")
    p.add_argument("--check", choices=("fourier-invariance", "routes", "purity"), default=None)
    p.add_argument("--report", default=None, help="path for the JSON report (default: stdout)")
    p = sub.add_parser("semiclassical", help="semiclassical chord functions on a quantized curve")
    _common(p, "--curve")
    p.add_argument("--chord", default=None, help="single chord p,q")
    p.add_argument("--sweep-dir", default=None, help="direction p,q of a radial sweep over the validity window")
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--compare", choices=("exact",), default=None, help="add the exact Fock chord function")
    p.add_argument("--window", action="store_true", help="print the validity window and exit")
    p = sub.add_parser("parity", help="parity weights and reality defect about a centre")
    _common(p, "--state")
    p.add_argument("--centre", default="0,0", help="reflection centre p,q")
    p = sub.add_parser("validate", help="run the acceptance suite")
    _common(p, None)
    p.add_argument("--filter", default=None, help="suite name or criterion number")
    p.add_argument("--perturb-fourier", type=float, default=None, help=argparse.SUPPRESS)
    p.add_argument("--quiet", action="store_true")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    spec = getattr(args, "state", None) or getattr(args, "curve", None)
    extra = []
    for flag, dest, default in _EXTRA.get(args.command, []):
        value = getattr(args, dest)
        if value == default:
            continue
        extra.append((flag, None) if value is True else (flag, str(value)))
    return RunConfig(args.command, spec, args.n, args.extent, args.hbar, args.output, args.fmt, tuple(extra))


def _open_out(path):
    return open(path, "w", encoding="utf-8", newline="\n") if path else nullcontext(sys.stdout)


def _emit_json(obj, path, stream=None) -> None:
    with _open_out(path) if stream is None else nullcontext(stream) as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _emit_field(field, args) -> None:
    from chordscope.transforms import write_field_csv

    if args.fmt == "json":
        _emit_json(
            {
                "space": field.space,
                "hbar": field.hbar,
                "n": field.grids.n,
                "extent": field.grids.extent(field.space),
                "axis": field.axis.tolist(),
                "re": field.values.real.tolist(),
                "im": field.values.imag.tolist(),
            },
            args.output,
        )
        return
    write_field_csv(field, args.output or sys.stdout)


def _state(args):
    return StateSpec.parse(args.state).build(RunConfig(args.command, n=args.n, extent=args.extent, hbar=args.hbar).grids())


def cmd_wigner(args) -> int:
    from chordscope.transforms import wigner_of

    state = _state(args)
    _emit_field(wigner_of(state, RunConfig("wigner", n=args.n, extent=args.extent, hbar=args.hbar).grids()), args)
    return EXIT_OK


def cmd_chord(args) -> int:
    from chordscope.transforms import chord_of

    state = _state(args)
    _emit_field(chord_of(state, RunConfig("chord", n=args.n, extent=args.extent, hbar=args.hbar).grids()), args)
    return EXIT_OK


def cmd_correlate(args) -> int:
    from chordscope.core import ComplexField
    from chordscope.correlations import correlation_field, correlation_routes, fourier_invariance_residual, purity_convolution_residual
    from chordscope.transforms import chord_of

    grids = RunConfig("correlate", n=args.n, extent=args.extent, hbar=args.hbar).grids()
    state = _state(args)
    chi = chord_of(state, grids)
    field = correlation_field(state, grids)
    report = {"purity": field.purity}
    if args.check in (None, "fourier-invariance"):
        report["fourier_invariance_residual"] = fourier_invariance_residual(chi)
    if args.check in (None, "routes"):
        rng = np.random.default_rng(0)
        reach = min(grids.chord_extent, 2 * grids.centre_extent) / 2
        report["route_agreement_max_delta"] = correlation_routes(state, rng.uniform(-reach, reach, size=(16, 2))).max_delta
    if args.check == "purity":
        report["purity_convolution_residual"] = purity_convolution_residual(chi, [(0.0, 0.0)])
    if args.check is None:
        # the field goes to --output (or stdout); the report to --report, else the other stream
        _emit_field(ComplexField(grids, "chord", field.values.astype(complex)), args)
        if args.report:
            _emit_json(report, args.report)
        else:
            _emit_json(report, None, sys.stdout if args.output else sys.stderr)
    else:
        _emit_json(report, args.report or args.output)
    return EXIT_OK


def _exact_level(curve_spec: CurveSpec, hbar: float) -> int:
    if curve_spec.kind != "circle":
        raise UsageError("--compare exact needs a circle curve")
    level = dict(curve_spec.params)["I"] / hbar - 0.5
    if abs(level - round(level)) > 1e-9 or level < 0:
        raise UsageError("--compare exact needs I = hbar (n + 1/2)")
    return int(round(level))


def cmd_semiclassical(args) -> int:
    from chordscope.analytic import FamilySpec, exact_chord
    from chordscope.semiclassical import ergodic_chi, semiclassical_chi, small_chord_chi, validity_window

    spec = CurveSpec.parse(args.curve)
    hbar = args.hbar
    if not spec.is_curve:
        H, E = spec.hamiltonian()
        if args.chord is None:
            raise UsageError("energy shells need --chord")
        z = ergodic_chi(H, E, parse_pair(args.chord), hbar)
        _emit_json({"curve": spec.format(), "hbar": hbar, "chord": list(parse_pair(args.chord)), "ergodic_chi": [z.real, z.imag]}, args.output)
        return EXIT_OK
    curve = spec.build()
    direction = np.array(parse_pair(args.sweep_dir or args.chord or "0,1"))
    if not np.any(direction):
        raise UsageError("direction must be nonzero")
    lo, hi = validity_window(curve, direction, hbar)
    if args.window:
        _emit_json({"curve": spec.format(), "hbar": hbar, "direction": direction.tolist(), "xi_min": lo, "xi_max": hi}, args.output)
        return EXIT_OK
    level = _exact_level(spec, hbar) if args.compare else None
    if args.chord is not None and args.sweep_dir is None:
        points = [np.array(parse_pair(args.chord))]
    else:
        d = direction / np.linalg.norm(direction)
        points = [s * d for s in np.linspace(lo, hi, args.points)]
    rows = []
    for xi in points:
        small = small_chord_chi(curve, xi, hbar)
        sp = semiclassical_chi(curve, xi, hbar)
        row = {"length": float(np.linalg.norm(xi)), "small_chord": small, "stationary_phase": sp.value, "caustic": sp.caustic}
        if level is not None:
            row["exact"] = complex(exact_chord(FamilySpec("fock", n_level=level, hbar=hbar), tuple(xi)))
        rows.append(row)
    if args.fmt == "json":
        _emit_json(
            [{k: ([v.real, v.imag] if isinstance(v, complex) else v) for k, v in r.items()} for r in rows], args.output
        )
        return EXIT_OK
    cols = ["length"] + (["exact"] if level is not None else []) + ["small_chord", "stationary_phase"]
    header = ",".join(c if c == "length" else f"{c}_re,{c}_im" for c in cols) + ",caustic"
    lines = [f"# curve={spec.format()}", f"# hbar={hbar!r}", header]
    for r in rows:
        vals = [f"{r['length']:.17g}"] + [f"{r[c].real:.17g},{r[c].imag:.17g}" for c in cols[1:]]
        lines.append(",".join(vals) + f",{int(r['caustic'])}")
    with _open_out(args.output) as fh:
        fh.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_parity(args) -> int:
    from chordscope.parity import parity_report

    _emit_json(parity_report(_state(args), parse_pair(args.centre)).as_dict(), args.output)
    return EXIT_OK


def cmd_validate(args) -> int:
    from chordscope import acceptance

    try:
        acceptance.select(args.filter)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    factor = args.perturb_fourier if args.perturb_fourier is not None else 1.0
    report = None if args.quiet else print
    with acceptance.perturbed_fourier(factor):
        results = acceptance.run(args.filter, report=report)
    failed = [r for r in results if not r.passed]
    if not args.quiet:
        print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return EXIT_VALIDATION if failed else EXIT_OK


COMMANDS = {
    "wigner": cmd_wigner,
    "chord": cmd_chord,
    "correlate": cmd_correlate,
    "semiclassical": cmd_semiclassical,
    "parity": cmd_parity,
    "validate": cmd_validate,
}


def _thread_limit():
    raw = os.environ.get("CHORDSCOPE_THREADS")
    if raw is None:
        return nullcontext()
    try:
        count = int(raw)
    except ValueError:
        count = 0
    if count < 1:
        raise UsageError("CHORDSCOPE_THREADS must be an integer >= 1")
    from threadpoolctl import threadpool_limits

    return threadpool_limits(limits=count)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        with _thread_limit():
            return COMMANDS[args.command](args)
    except (UsageError, SpecError) as exc:
        print(f"chordscope: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GridError, ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
        print(f"chordscope: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
