"""Text specifications of states and curves, and the run configuration
shared by the command line."""

from __future__ import annotations

import json
import math
import shlex
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from chordscope.core import DualGridPair
from chordscope.semiclassical.curves import TorusCurve
from chordscope.states import make_cat, make_coherent, make_fock, superpose_coherent


class SpecError(ValueError):
    """A state or curve specification could not be parsed."""


def _split(text: str) -> tuple[str, str]:
    kind, sep, rest = text.partition(":")
    if not sep or not kind:
        raise SpecError(f"expected '<kind>:<params>', got {text!r}")
    return kind.strip(), rest.strip()


def _params(rest: str, required: set, optional: set = frozenset()) -> dict[str, str]:
    out = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, sep, val = item.partition("=")
        if not sep:
            raise SpecError(f"parameter {item!r} is not of the form key=value")
        if key in out:
            raise SpecError(f"parameter {key!r} given twice")
        out[key] = val
    unknown = set(out) - required - set(optional)
    missing = required - set(out)
    if unknown or missing:
        raise SpecError(f"unknown {sorted(unknown)} / missing {sorted(missing)} parameters")
    return out


def _float(params, key, default=None) -> float:
    try:
        return float(params[key]) if key in params else float(default)
    except (TypeError, ValueError):
        raise SpecError(f"{key} must be a number") from None


@dataclass(frozen=True)
class StateSpec:
    """``coherent:p=,q=[,omega=]``, ``fock:n=``, ``cat:p=,q=,sign=+|-`` or ``superpose:<path>``."""

    kind: str
    params: tuple = ()

    @classmethod
    def parse(cls, text: str) -> "StateSpec":
        kind, rest = _split(text)
        if kind == "coherent":
            p = _params(rest, {"p", "q"}, {"omega"})
            vals = {k: _float(p, k) for k in p}
            if "omega" in vals and not vals["omega"] > 0:
                raise SpecError("omega must be positive")
        elif kind == "fock":
            p = _params(rest, {"n"})
            try:
                n = int(p["n"])
            except ValueError:
                raise SpecError("n must be an integer") from None
            if n < 0:
                raise SpecError("n must be nonnegative")
            vals = {"n": n}
        elif kind == "cat":
            p = _params(rest, {"p", "q", "sign"})
            if p["sign"] not in ("+", "-"):
                raise SpecError("sign must be + or -")
            vals = {"p": _float(p, "p"), "q": _float(p, "q"), "sign": p["sign"]}
        elif kind == "superpose":
            if not rest:
                raise SpecError("superpose needs a JSON path")
            vals = {"path": rest}
        else:
            raise SpecError(f"unknown state kind {kind!r}")
        return cls(kind, tuple(vals.items()))

    def format(self) -> str:
        d = dict(self.params)
        if self.kind == "superpose":
            return f"superpose:{d['path']}"
        return f"{self.kind}:" + ",".join(f"{k}={v!r}" if isinstance(v, float) else f"{k}={v}" for k, v in d.items())

    def build(self, grids: DualGridPair):
        d = dict(self.params)
        hbar = grids.hbar
        if self.kind == "coherent":
            return make_coherent((d["p"], d["q"]), d.get("omega", 1.0), hbar, grids)
        if self.kind == "fock":
            return make_fock(d["n"], hbar, grids)
        if self.kind == "cat":
            return make_cat((d["p"], d["q"]), 1 if d["sign"] == "+" else -1, hbar, grids)
        try:
            terms = json.loads(Path(d["path"]).read_text(encoding="utf-8"))
            pairs = [(complex(t["re"], t["im"]), (float(t["p"]), float(t["q"]))) for t in terms]
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise SpecError(f"cannot read superposition from {d['path']}: {exc}") from None
        return superpose_coherent(pairs, hbar, grids)


@dataclass(frozen=True)
class CurveSpec:
    """``circle:I=``, ``ellipse:a=,b=``, ``quartic:E=`` or a JSON file of samples."""

    kind: str
    params: tuple = ()

    @classmethod
    def parse(cls, text: str) -> "CurveSpec":
        if text.endswith(".json") and ":" not in text:
            return cls("samples", (("path", text),))
        kind, rest = _split(text)
        keys = {"circle": {"I"}, "ellipse": {"a", "b"}, "quartic": {"E"}}
        if kind not in keys:
            raise SpecError(f"unknown curve kind {kind!r}")
        p = _params(rest, keys[kind])
        vals = {k: _float(p, k) for k in p}
        if any(not v > 0 for v in vals.values()):
            raise SpecError("curve parameters must be positive")
        return cls(kind, tuple(vals.items()))

    def format(self) -> str:
        d = dict(self.params)
        if self.kind == "samples":
            return d["path"]
        return f"{self.kind}:" + ",".join(f"{k}={v!r}" for k, v in d.items())

    @property
    def is_curve(self) -> bool:
        return self.kind != "quartic"

    def build(self) -> TorusCurve:
        d = dict(self.params)
        if self.kind == "circle":
            return TorusCurve.circle(d["I"])
        if self.kind == "ellipse":
            return TorusCurve.ellipse(d["a"], d["b"])
        if self.kind == "samples":
            try:
                raw = json.loads(Path(d["path"]).read_text(encoding="utf-8"))
                return TorusCurve.from_samples(raw["theta"], raw["p"], raw["q"])
            except (OSError, ValueError, KeyError, TypeError) as exc:
                raise SpecError(f"cannot read curve from {d['path']}: {exc}") from None
        raise SpecError("quartic describes an energy shell, not a parametrized curve")

    def hamiltonian(self):
        if self.kind == "quartic":
            return (lambda p, q: p**2 / 2 + q**4 / 4), dict(self.params)["E"]
        if self.kind == "circle":
            return (lambda p, q: (p**2 + q**2) / 2), dict(self.params)["I"]
        raise SpecError(f"{self.kind} curves carry no Hamiltonian")


def parse_pair(text: str) -> tuple[float, float]:
    try:
        a, b = (float(s) for s in text.split(","))
    except ValueError:
        raise SpecError(f"expected 'p,q', got {text!r}") from None
    if not (math.isfinite(a) and math.isfinite(b)):
        raise SpecError("coordinates must be finite")
    return a, b


@dataclass(frozen=True)
class RunConfig:
    """One command-line invocation in structured form."""

    command: str
    spec: str | None = None
    n: int = 512
    extent: float = 8.0
    hbar: float = 1.0
    output: str | None = None
    fmt: str = "csv"
    extra: tuple = field(default=())

    def format(self) -> str:
        parts = [self.command]
        if self.spec is not None:
            parts += ["--curve" if self.command == "semiclassical" else "--state", self.spec]
        parts += ["--n", str(self.n), "--extent", repr(self.extent), "--hbar", repr(self.hbar), "--format", self.fmt]
        if self.output is not None:
            parts += ["-o", self.output]
        for key, val in self.extra:
            parts += [key] if val is None else [key, val]
        return shlex.join(parts)

    @classmethod
    def parse(cls, text: str) -> "RunConfig":
        from chordscope.cli import build_parser, config_from_args

        return config_from_args(build_parser().parse_args(shlex.split(text)))

    def grids(self) -> DualGridPair:
        return DualGridPair(self.n, self.extent, self.hbar)
