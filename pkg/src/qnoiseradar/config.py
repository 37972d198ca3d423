"""Strict JSON run configuration.

Example::

    {
      "schema_version": 1,
      "scenario": {
        "source": {"kind": "TMSV", "N_S": 0.5, "xi": 1e-3},
        "eta": 1e-2, "N_B": 1000
      },
      "sweep": {"variable": "N_S", "grid": {"start": 0.01, "stop": 100, "points": 41},
                "xi_series": [1e-3, 0.5]},
      "outputs": ["kappa", "advantage"],
      "detection": {"M": 1000, "p_fa_grid": {"start": 0.05, "stop": 0.95, "points": 19},
                    "trials": 10000, "seed": 1},
      "stein": {"epsilon": 1e-3, "M_grid": {"start": 1e4, "stop": 1e10, "points": 25}},
      "output_path": "out"
    }

Unknown keys anywhere are rejected. Log-spaced grids are written as
``{"start", "stop", "points"}``; p_fa grids in that form are linearly spaced.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np

from .channel import RadarScenario
from .detection import DetectionConfig
from .sources import SourceSpec

SCHEMA_VERSION = 1
SWEEP_VARIABLES = ("N_S", "xi", "eta", "M", "G_I")
OUTPUTS = ("kappa", "advantage", "roc", "stein")

_TOP = {"schema_version", "scenario", "sweep", "outputs", "detection", "stein", "output_path"}
_SCENARIO = {"source", "eta", "N_B", "theta", "G_S", "G_R", "G_I", "N_GS", "N_GR", "N_GI"}
_SOURCE = {"kind", "N_S", "xi", "N_1", "phi"}
_SWEEP = {"variable", "grid", "xi_series"}
_DETECTION = {"M", "p_fa_grid", "trials", "seed", "chunk_trials"}
_STEIN = {"epsilon", "M_grid"}
_GRID = {"start", "stop", "points"}


class ConfigError(ValueError):
    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass
class SweepSpec:
    variable: str
    grid: list
    xi_series: list


@dataclass
class SteinSpec:
    epsilon: float = 1e-3
    M_grid: list = field(default_factory=lambda: [10**k for k in range(4, 11)])


@dataclass
class RunConfig:
    scenario: RadarScenario
    sweep: Optional[SweepSpec]
    outputs: list
    detection: Optional[DetectionConfig]
    stein: SteinSpec
    output_path: str

    def to_dict(self) -> dict:
        d = {
            "schema_version": SCHEMA_VERSION,
            "scenario": asdict(self.scenario),
            "sweep": None if self.sweep is None else asdict(self.sweep),
            "outputs": list(self.outputs),
            "detection": None if self.detection is None else asdict(self.detection),
            "stein": asdict(self.stein),
            "output_path": self.output_path,
        }
        if d["detection"] is not None:
            d["detection"]["p_fa_grid"] = list(d["detection"]["p_fa_grid"])
        return d


class _Checker:
    def __init__(self):
        self.errors = []

    def fail(self, path, msg):
        self.errors.append(f"{path}: {msg}")

    def obj(self, value, path, allowed, required=()):
        if not isinstance(value, dict):
            self.fail(path, "expected an object")
            return {}
        for k in value:
            if k not in allowed:
                self.fail(f"{path}.{k}", "unknown field")
        for k in required:
            if k not in value:
                self.fail(f"{path}.{k}", "required field missing")
        return value

    def num(self, d, key, path, default=None, lo=None, hi=None, lo_open=False):
        if key not in d:
            return default
        v = d[key]
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not np.isfinite(v):
            self.fail(f"{path}.{key}", f"expected a finite number, got {v!r}")
            return default
        v = float(v)
        if lo is not None and (v < lo or (lo_open and v == lo)):
            self.fail(f"{path}.{key}", f"must be {'>' if lo_open else '>='} {lo}, got {v!r}")
        if hi is not None and v > hi:
            self.fail(f"{path}.{key}", f"must be <= {hi}, got {v!r}")
        return v

    def integer(self, d, key, path, default=None, lo=None):
        if key not in d:
            return default
        v = d[key]
        if isinstance(v, bool) or not isinstance(v, int):
            self.fail(f"{path}.{key}", f"expected an integer, got {v!r}")
            return default
        if lo is not None and v < lo:
            self.fail(f"{path}.{key}", f"must be >= {lo}, got {v!r}")
        return v

    def grid(self, value, path, log=True, integer=False):
        if isinstance(value, dict):
            self.obj(value, path, _GRID, _GRID)
            try:
                start, stop, points = float(value["start"]), float(value["stop"]), int(value["points"])
            except (KeyError, TypeError, ValueError):
                return []
            if points < 1:
                self.fail(f"{path}.points", "must be >= 1")
                return []
            if log:
                if start <= 0 or stop <= 0:
                    self.fail(path, "log-spaced grid needs positive start and stop")
                    return []
                g = np.geomspace(start, stop, points)
            else:
                g = np.linspace(start, stop, points)
            values = g.tolist()
        elif isinstance(value, list):
            values = value
        else:
            self.fail(path, "expected a list or a {start, stop, points} object")
            return []
        if not values:
            self.fail(path, "grid must not be empty")
            return []
        out = []
        for i, v in enumerate(values):
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not np.isfinite(v):
                self.fail(f"{path}[{i}]", f"expected a finite number, got {v!r}")
                return []
            out.append(int(round(v)) if integer else float(v))
        diffs = np.diff(out)
        if len(out) > 1 and not (np.all(diffs > 0) or np.all(diffs < 0)):
            self.fail(path, "grid must be strictly monotone")
        return out


def _source(c: _Checker, raw, path):
    d = c.obj(raw, path, _SOURCE, ("kind", "N_S"))
    kind = d.get("kind")
    if kind not in ("TMSV", "CCN"):
        c.fail(f"{path}.kind", f"must be 'TMSV' or 'CCN', got {kind!r}")
    N_S = c.num(d, "N_S", path, lo=0.0)
    xi = c.num(d, "xi", path, lo=0.0, hi=1.0)
    if xi is not None and xi in (0.0, 1.0):
        c.fail(f"{path}.xi", "must lie strictly inside (0, 1)")
    N_1 = c.num(d, "N_1", path, 0.0, lo=0.0)
    phi = c.num(d, "phi", path, 0.0)
    return dict(kind=kind, N_S=N_S, xi=xi, N_1=N_1, phi=phi)


def _physical(c: _Checker, src, path, xi_override=None):
    """Equal-power feasibility of the classical comparator."""
    xi = xi_override if xi_override is not None else src["xi"]
    if src["N_S"] is None or xi is None or not 0.0 < xi < 1.0:
        return
    N_0 = (src["N_S"] - (1.0 - xi) * src["N_1"]) / xi
    if not N_0 > src["N_1"]:
        c.fail(
            path,
            f"infeasible equal-power constraint N_S = xi*N_0 + (1-xi)*N_1 with N_0 > N_1: "
            f"N_S={src['N_S']!r}, xi={xi!r}, N_1={src['N_1']!r} gives N_0={N_0!r}",
        )


def resolve_config(raw: Any) -> RunConfig:
    """Validate a parsed JSON document and fill in defaults."""
    c = _Checker()
    top = c.obj(raw, "config", _TOP, ("schema_version", "scenario"))
    if "schema_version" in top and top["schema_version"] != SCHEMA_VERSION:
        c.fail("config.schema_version", f"unsupported version {top['schema_version']!r}, expected {SCHEMA_VERSION}")

    sc = c.obj(top.get("scenario", {}), "scenario", _SCENARIO, ("source", "eta", "N_B"))
    src = _source(c, sc.get("source", {}), "scenario.source")
    eta = c.num(sc, "eta", "scenario", lo=0.0, hi=1.0)
    N_B = c.num(sc, "N_B", "scenario", lo=0.0)
    extras = {"theta": c.num(sc, "theta", "scenario", 0.0)}
    for g in ("G_S", "G_R", "G_I"):
        extras[g] = c.num(sc, g, "scenario", 1.0, lo=1.0)
    for g in ("N_GS", "N_GR", "N_GI"):
        extras[g] = c.num(sc, g, "scenario", 0.0, lo=0.0)

    sweep = None
    if "sweep" in top:
        sw = c.obj(top["sweep"], "sweep", _SWEEP, ("variable", "grid"))
        var = sw.get("variable")
        if var not in SWEEP_VARIABLES:
            c.fail("sweep.variable", f"must be one of {', '.join(SWEEP_VARIABLES)}, got {var!r}")
        grid = c.grid(sw.get("grid", []), "sweep.grid", integer=(var == "M"))
        if var == "M" and grid and min(grid) < 1:
            c.fail("sweep.grid", "M values must be >= 1")
        xi_series = []
        if "xi_series" in sw:
            xi_series = c.grid(sw["xi_series"], "sweep.xi_series")
            for i, x in enumerate(xi_series):
                if not 0.0 < x < 1.0:
                    c.fail(f"sweep.xi_series[{i}]", "must lie strictly inside (0, 1)")
        if var == "xi" and xi_series:
            c.fail("sweep.xi_series", "cannot be combined with a sweep over xi")
        sweep = SweepSpec(var, grid, xi_series)

    outputs = top.get("outputs", [])
    if not isinstance(outputs, list) or not all(isinstance(o, str) for o in outputs):
        c.fail("outputs", "expected a list of strings")
        outputs = []
    for i, o in enumerate(outputs):
        if o not in OUTPUTS:
            c.fail(f"outputs[{i}]", f"must be one of {', '.join(OUTPUTS)}, got {o!r}")
    if len(set(outputs)) != len(outputs):
        c.fail("outputs", "duplicate entries")

    detection = None
    if "detection" in top:
        dd = c.obj(top["detection"], "detection", _DETECTION, ("M", "p_fa_grid"))
        M = c.integer(dd, "M", "detection", lo=1)
        grid = c.grid(dd.get("p_fa_grid", []), "detection.p_fa_grid", log=False)
        if grid and (min(grid) <= 0 or max(grid) >= 1 or np.any(np.diff(grid) <= 0)):
            c.fail("detection.p_fa_grid", "must be strictly increasing inside (0, 1)")
        trials = c.integer(dd, "trials", "detection", 10_000, lo=1)
        seed = c.integer(dd, "seed", "detection", 0, lo=0)
        if seed is not None and seed >= 2**64:
            c.fail("detection.seed", "must fit in 64 bits")
        chunk = c.integer(dd, "chunk_trials", "detection", 250, lo=1)
        if not c.errors:
            detection = DetectionConfig(M, grid, trials, seed, chunk)
    if "roc" in outputs and "detection" not in top:
        c.fail("detection", "required when 'roc' is requested")

    stein = SteinSpec()
    if "stein" in top:
        st = c.obj(top["stein"], "stein", _STEIN)
        eps = c.num(st, "epsilon", "stein", 1e-3, lo=0.0, hi=1.0, lo_open=True)
        if eps is not None and eps >= 1.0:
            c.fail("stein.epsilon", "must lie strictly inside (0, 1)")
        M_grid = stein.M_grid
        if "M_grid" in st:
            M_grid = c.grid(st["M_grid"], "stein.M_grid", integer=True)
            if M_grid and min(M_grid) < 1:
                c.fail("stein.M_grid", "M values must be >= 1")
        stein = SteinSpec(eps, M_grid)

    output_path = top.get("output_path", "out")
    if not isinstance(output_path, str) or not output_path:
        c.fail("output_path", "expected a nonempty string")

    # physics: the base scenario's classical comparator must be feasible
    comparator_xis = (sweep.xi_series if sweep and sweep.xi_series else [src["xi"]])
    if src["kind"] == "CCN" and src["xi"] is None:
        c.fail("scenario.source.xi", "required for a CCN source")
    elif comparator_xis == [None]:
        c.fail("scenario.source.xi", "required for the classical comparator (or give sweep.xi_series)")
    else:
        for x in comparator_xis:
            _physical(c, src, "scenario.source", x)
    if sweep and sweep.variable == "M" and not set(outputs) & {"roc", "stein"}:
        c.fail("sweep.variable", "an M sweep needs 'roc' or 'stein' among the outputs")

    if c.errors:
        raise ConfigError(c.errors)
    try:
        scenario = RadarScenario(SourceSpec(**src), eta, N_B, **extras)
    except ValueError as exc:
        raise ConfigError([f"scenario: {exc}"]) from None
    return RunConfig(scenario, sweep, outputs, detection, stein, output_path)


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError([f"{path}: cannot read ({exc.strerror})"]) from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([f"{path}: JSON parse error at line {exc.lineno} column {exc.colno}: {exc.msg}"]) from None
    return resolve_config(raw)


validate_config = load_config
