"""Command-line batch runner.

Verbs::

    qnoiseradar validate --config run.json
    qnoiseradar sweep    --config run.json [--out DIR] [--seed N] [--threads N]
    qnoiseradar roc      --config run.json [--out DIR] [--seed N] [--threads N]
    qnoiseradar stein    --config run.json [--out DIR]

``sweep`` evaluates every requested output over the sweep grid, ``roc`` and
``stein`` evaluate one output at the base scenario. Each run writes its CSV
files and a ``manifest.json`` into the output directory. Rows are ordered by
grid index, floats are written as shortest round-trip decimals, and a point
that cannot be evaluated yields a row whose ``error`` column says why.

CSV columns (fixed order):

* ``kappa.csv``: N_S, xi, kappa_tmsv, kappa_ccn, q_a, eta, N_B, G_I,
  kappa_tmsv_rescaled, kappa_ccn_rescaled, error. The rescaled columns are
  ``kappa / sqrt(eta)``.
* ``advantage.csv``: N_S, xi, G_I, N_GI, q_a, q_a_pipeline,
  q_a_idler_strong_gain, error.
* ``roc.csv``: p_fa, p_d, stderr, source_kind, method, p_fa_observed,
  sweep_value, xi, M, kappa_het, seed, error.
* ``stein.csv``: M, exponent_tmsv, exponent_ccn, D, V, D_ccn, V_ccn,
  epsilon, sweep_value, xi, error. ``D`` and ``V`` belong to the TMSV source.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .asymptotics import hypothesis_states, relative_entropy_gaussian, relative_entropy_variance_gaussian, stein_exponent
from .channel import RadarScenario
from .config import ConfigError, RunConfig, load_config
from .correlations import pipeline_advantage, pipeline_report, quantum_advantage, quantum_advantage_idler_amplified
from .detection import DetectionConfig, kappa_het, roc_analytic, roc_empirical

COLUMNS = {
    "kappa": ["N_S", "xi", "kappa_tmsv", "kappa_ccn", "q_a", "eta", "N_B", "G_I",
              "kappa_tmsv_rescaled", "kappa_ccn_rescaled", "error"],
    "advantage": ["N_S", "xi", "G_I", "N_GI", "q_a", "q_a_pipeline", "q_a_idler_strong_gain", "error"],
    "roc": ["p_fa", "p_d", "stderr", "source_kind", "method", "p_fa_observed",
            "sweep_value", "xi", "M", "kappa_het", "seed", "error"],
    "stein": ["M", "exponent_tmsv", "exponent_ccn", "D", "V", "D_ccn", "V_ccn",
              "epsilon", "sweep_value", "xi", "error"],
}


@dataclass(frozen=True)
class Point:
    index: int
    series: int
    value: Optional[float]
    xi: float


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(path: Path, columns, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_cell(row.get(c)) for c in columns])


def derive_seed(seed: int, *index: int) -> int:
    """64-bit seed for one (point, series, source) cell of a sweep."""
    return int(np.random.SeedSequence((int(seed), *map(int, index))).generate_state(1, np.uint64)[0])


def _scenario_at(cfg: RunConfig, p: Point):
    """(scenario, M) at a sweep point; the source kind is kept, the comparator uses ``p.xi``."""
    sc = cfg.scenario
    var = cfg.sweep.variable if cfg.sweep is not None and p.value is not None else None
    M = cfg.detection.M if cfg.detection is not None else None
    src = sc.source
    if var == "N_S":
        src = replace(src, N_S=float(p.value))
    if src.kind == "CCN" or src.xi is not None or var == "xi":
        src = replace(src, xi=p.xi)
    sc = replace(sc, source=src)
    if var == "eta":
        sc = replace(sc, eta=float(p.value))
    elif var == "G_I":
        sc = replace(sc, G_I=float(p.value))
    elif var == "M":
        M = int(p.value)
    return sc, M


def _both(sc: RadarScenario, xi: float):
    return sc.with_source(sc.source.as_tmsv()), sc.with_source(sc.source.as_ccn(xi))


def kappa_rows(cfg, p):
    row = {"xi": p.xi}
    try:
        sc, _ = _scenario_at(cfg, p)
        row.update(N_S=sc.source.N_S, eta=sc.eta, N_B=sc.N_B, G_I=sc.G_I)
        tm, cc = _both(sc, p.xi)
        kt, kc = pipeline_report(tm).kappa, pipeline_report(cc).kappa
        row.update(kappa_tmsv=kt, kappa_ccn=kc, q_a=kt**2 / kc**2 if kc > 0 else None)
        if sc.eta > 0:
            s = np.sqrt(sc.eta)
            row.update(kappa_tmsv_rescaled=kt / s, kappa_ccn_rescaled=kc / s)
    except ValueError as exc:
        row["error"] = str(exc)
    return [row]


def advantage_rows(cfg, p):
    row = {"xi": p.xi}
    try:
        sc, _ = _scenario_at(cfg, p)
        row.update(N_S=sc.source.N_S, G_I=sc.G_I, N_GI=sc.N_GI)
        if sc.source.N_1 == 0:
            row["q_a"] = quantum_advantage(sc.source.N_S, p.xi)
            row["q_a_idler_strong_gain"] = quantum_advantage_idler_amplified(sc.source.N_S, p.xi, sc.N_GI)
        row["q_a_pipeline"] = pipeline_advantage(sc.with_source(sc.source.as_ccn(p.xi)), p.xi)
    except ValueError as exc:
        row["error"] = str(exc)
    return [row]


def roc_rows(cfg, p, seed, threads=1):
    det = cfg.detection
    rows = []
    try:
        sc, M = _scenario_at(cfg, p)
        sources = _both(sc, p.xi)
    except ValueError as exc:
        return [{"sweep_value": p.value, "xi": p.xi, "error": str(exc)}]
    for k, s in enumerate(sources):
        kind = s.source.kind
        base = {"source_kind": kind, "sweep_value": p.value, "xi": p.xi, "M": M}
        try:
            kh = kappa_het(s)
            curve = roc_analytic(kh, M, det.p_fa_grid)
            for pf, pd, _ in curve.rows():
                rows.append(dict(base, p_fa=pf, p_d=pd, method="analytic", kappa_het=kh))
            cell_seed = derive_seed(seed, p.index, p.series, k)
            emp = roc_empirical(s, DetectionConfig(M, det.p_fa_grid, det.trials, cell_seed, det.chunk_trials), threads)
            for (pf, pd, se), po in zip(emp.rows(), emp.p_fa_observed):
                rows.append(dict(base, p_fa=pf, p_d=pd, stderr=se, method="empirical",
                                 p_fa_observed=float(po), kappa_het=kh, seed=cell_seed))
        except ValueError as exc:
            rows.append(dict(base, error=str(exc)))
    return rows


def stein_rows(cfg, p):
    eps = cfg.stein.epsilon
    base = {"sweep_value": p.value, "xi": p.xi, "epsilon": eps}
    try:
        sc, M = _scenario_at(cfg, p)
        Ms = [M] if cfg.sweep is not None and cfg.sweep.variable == "M" and p.value is not None else cfg.stein.M_grid
        tm, cc = _both(sc, p.xi)
        DV = []
        for s in (tm, cc):
            rho1, rho0 = hypothesis_states(s)
            DV.append((relative_entropy_gaussian(rho1, rho0), relative_entropy_variance_gaussian(rho1, rho0)))
    except ValueError as exc:
        return [dict(base, error=str(exc))]
    (D, V), (Dc, Vc) = DV
    rows = []
    for m in Ms:
        rows.append(dict(
            base, M=m, D=D, V=V, D_ccn=Dc, V_ccn=Vc,
            exponent_tmsv=stein_exponent(D, V, m, eps).exponent,
            exponent_ccn=stein_exponent(Dc, Vc, m, eps).exponent,
        ))
    return rows


def _points(cfg: RunConfig, sweep: bool):
    src = cfg.scenario.source
    if not sweep:
        return [Point(0, 0, None, src.xi)]
    var = cfg.sweep.variable
    xis = cfg.sweep.xi_series or [src.xi]
    if var == "xi":
        return [Point(i, 0, v, v) for i, v in enumerate(cfg.sweep.grid)]
    return [Point(i, j, v, x) for j, x in enumerate(xis) for i, v in enumerate(cfg.sweep.grid)]


def _evaluate(cfg, outputs, point, seed, mc_threads):
    out = {}
    for name in outputs:
        if name == "kappa":
            out[name] = kappa_rows(cfg, point)
        elif name == "advantage":
            out[name] = advantage_rows(cfg, point)
        elif name == "roc":
            out[name] = roc_rows(cfg, point, seed, mc_threads)
        elif name == "stein":
            out[name] = stein_rows(cfg, point)
    return out


def run(cfg: RunConfig, verb: str, out_dir: Path, seed: Optional[int] = None, threads: int = 1) -> list:
    """Evaluate ``verb`` and write CSVs plus manifest; returns the written file names."""
    if seed is None:
        seed = cfg.detection.seed if cfg.detection is not None else 0
    if verb == "sweep":
        if cfg.sweep is None or not cfg.outputs:
            raise ConfigError(["sweep: the sweep verb needs a 'sweep' section and a nonempty 'outputs' list"])
        outputs = list(cfg.outputs)
    elif verb == "roc":
        if cfg.detection is None:
            raise ConfigError(["detection: required by the roc verb"])
        outputs = ["roc"]
    else:
        outputs = ["stein"]
    points = _points(cfg, verb == "sweep")
    threads = max(1, int(threads))
    if len(points) > 1 and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda p: _evaluate(cfg, outputs, p, seed, 1), points))
    else:
        results = [_evaluate(cfg, outputs, p, seed, threads) for p in points]

    out_dir.mkdir(parents=True, exist_ok=True)
    files = []
    for name in outputs:
        rows = [r for res in results for r in res[name]]
        write_csv(out_dir / f"{name}.csv", COLUMNS[name], rows)
        files.append(f"{name}.csv")
    resolved = cfg.to_dict()
    if resolved["detection"] is not None:
        resolved["detection"]["seed"] = seed
    manifest = {
        "package": "qnoiseradar",
        "version": __version__,
        "command": verb,
        "seed": seed,
        "config": resolved,
        "files": files,
    }
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return files + ["manifest.json"]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qnoiseradar", description="Quantum vs classical noise radar analysis")
    sub = ap.add_subparsers(dest="verb", required=True)
    for verb, text in [
        ("validate", "check a config and print the resolved version"),
        ("sweep", "evaluate the requested outputs over the sweep grid"),
        ("roc", "analytic and Monte Carlo ROC curves at the base scenario"),
        ("stein", "finite-M Stein exponents at the base scenario"),
    ]:
        p = sub.add_parser(verb, help=text)
        p.add_argument("--config", required=True, help="JSON config file")
        if verb != "validate":
            p.add_argument("--out", help="output directory (overrides output_path)")
            p.add_argument("--seed", type=int, help="unsigned 64-bit seed (overrides detection.seed)")
            p.add_argument("--threads", type=int, default=1, help="worker threads; results do not depend on it")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.verb == "validate":
            print(json.dumps(cfg.to_dict(), indent=2, sort_keys=True))
            return 0
        if args.seed is not None and not 0 <= args.seed < 2**64:
            raise ConfigError([f"--seed: must be an unsigned 64-bit integer, got {args.seed}"])
        if args.threads < 1:
            raise ConfigError([f"--threads: must be >= 1, got {args.threads}"])
        out = Path(args.out or cfg.output_path)
        files = run(cfg, args.verb, out, args.seed, args.threads)
    except ConfigError as exc:
        for e in exc.errors:
            print(f"error: {e}", file=sys.stderr)
        return 2
    for f in files:
        print(out / f)
    return 0


if __name__ == "__main__":
    sys.exit(main())
