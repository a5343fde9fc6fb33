"""Command-line front end.

Subcommands:
    run <config.json>           integrate a scenario, emit CSV + summary
    reproduce <figure-id>       rerun one reference figure or table
    sweep <config.json>         evaluate stability or fidelity over a grid
    list-figures                show the available figure ids

POLSIM_THREADS caps the number of worker processes used for sweep rows
(default 1, serial). Exit codes: 0 success (a diverging trajectory is data,
not an error), 2 usage or config error, 3 internal numerical failure.
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import figures, gate, scenario, stability
from .csvio import write_csv
from .integrate import StepUnderflowError
from .model import ModelParams, SingularStateError
from .scenario import ScenarioError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


def _worker_count() -> int:
    raw = os.environ.get("POLSIM_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ScenarioError("POLSIM_THREADS", f"expected an integer, got {raw!r}")
    return max(1, n)


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

_SWEEP_STABILITY_COLUMNS = ["gamma", "u_s", "u_c",
                            "re_l1", "re_l2", "re_l3", "re_l4",
                            "im_l1", "im_l2", "im_l3", "im_l4", "class"]
_SWEEP_FIDELITY_COLUMNS = ["u_s", "u_c", "gamma", "t_J", "F"]


def _stability_row(args):
    g, u_s, u_c, J = args
    lam = stability.stability_eigenvalues_analytic(J, g * J, u_s, u_c)
    return ([g, u_s, u_c] + [v.real for v in lam] + [v.imag for v in lam]
            + [stability.classify(lam)])


def _fidelity_row(args):
    g, u_s, u_c, t_J, J, target = args
    mp = ModelParams.pt_balanced(u_s=u_s, u_c=u_c, gamma=g * J, J=J)
    report = gate.score_swap_gate(mp, t=t_J / J, target=target)
    return [u_s, u_c, g, t_J, report.F]


def _load_sweep_config(path) -> dict:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except FileNotFoundError:
        raise ScenarioError("config", f"no such file: {path}")
    except json.JSONDecodeError as exc:
        raise ScenarioError("config", f"invalid JSON: {exc}")
    scenario._require_keys(cfg, {"schema_version", "kind", "params", "grid", "target"},
                           "config")
    if cfg.get("schema_version") != scenario.SCHEMA_VERSION:
        raise ScenarioError("config.schema_version",
                            f"expected {scenario.SCHEMA_VERSION}, got {cfg.get('schema_version')!r}")
    kind = cfg.get("kind")
    if kind not in ("stability", "fidelity"):
        raise ScenarioError("config.kind", f"expected 'stability' or 'fidelity', got {kind!r}")
    return cfg


def run_sweep(cfg: dict, outdir: Path) -> Path:
    kind = cfg["kind"]
    params = cfg.get("params", {})
    scenario._require_keys(params, {"J", "u_s", "u_c"}, "params")
    J = scenario._number(params, "J", "params", default=1.0)
    u_s0 = scenario._number(params, "u_s", "params", default=0.0)
    u_c0 = scenario._number(params, "u_c", "params", default=0.0)

    grid_spec = cfg.get("grid", {})
    allowed = {"gamma_over_J", "u_s", "u_c"} | ({"t_J"} if kind == "fidelity" else set())
    scenario._require_keys(grid_spec, allowed, "grid")

    def axis(key, default):
        if key in grid_spec:
            return scenario._parse_grid(grid_spec[key], f"grid.{key}")
        return [default]

    gammas = axis("gamma_over_J", 0.0)
    u_ss = axis("u_s", u_s0)
    u_cs = axis("u_c", u_c0)

    outdir.mkdir(parents=True, exist_ok=True)
    out_path = outdir / "sweep.csv"

    if kind == "stability":
        rows_args = [(g, u_s, u_c, J)
                     for g, u_s, u_c in itertools.product(gammas, u_ss, u_cs)]
        rows = _evaluate(_stability_row, rows_args)
        write_csv(out_path, _SWEEP_STABILITY_COLUMNS, rows)
    else:
        target = cfg.get("target", "swap")
        if target not in ("swap", "iswap"):
            raise ScenarioError("config.target", f"unknown target {target!r}")
        t_Js = axis("t_J", math.pi / 2)
        rows_args = [(g, u_s, u_c, t_J, J, target)
                     for g, u_s, u_c, t_J in itertools.product(gammas, u_ss, u_cs, t_Js)]
        rows = _evaluate(_fidelity_row, rows_args)
        write_csv(out_path, _SWEEP_FIDELITY_COLUMNS, rows)
    return out_path


def _evaluate(fn, rows_args):
    workers = _worker_count()
    if workers == 1 or len(rows_args) <= 1:
        return [fn(a) for a in rows_args]
    with ProcessPoolExecutor(max_workers=min(workers, len(rows_args))) as pool:
        return list(pool.map(fn, rows_args))


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polsim",
        description="Simulate a two-species gain/loss polariton double well.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="integrate a scenario config")
    p_run.add_argument("config", help="scenario JSON file")
    p_run.add_argument("--out", default=".", help="output directory (default: cwd)")

    p_rep = sub.add_parser("reproduce", help="rerun a reference figure or table")
    p_rep.add_argument("figure_id", help="figure id (see list-figures)")
    p_rep.add_argument("--out", default=".", help="output directory (default: cwd)")

    p_sweep = sub.add_parser("sweep", help="evaluate a parameter grid")
    p_sweep.add_argument("config", help="sweep JSON file")
    p_sweep.add_argument("--out", default=".", help="output directory (default: cwd)")

    sub.add_parser("list-figures", help="list available figure ids")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0

    try:
        if args.command == "run":
            sc = scenario.load(args.config)
            summary = scenario.run_scenario(sc, Path(args.out))
            if summary["diverged_at"] is not None:
                print(f"trajectory diverged at tau={summary['diverged_at']:.6g} "
                      "(recorded in run_summary.json)")
            print(f"wrote {', '.join(sorted(summary['files']))} to {args.out}")
            return EXIT_OK

        if args.command == "reproduce":
            if args.figure_id not in figures.FIGURES:
                print(f"unknown figure id {args.figure_id!r}; available:",
                      file=sys.stderr)
                for fid, (_, desc) in figures.FIGURES.items():
                    print(f"  {fid:15s} {desc}", file=sys.stderr)
                return EXIT_USAGE
            summary = figures.reproduce(args.figure_id, Path(args.out))
            print(json.dumps(summary, indent=2, sort_keys=True))
            return EXIT_OK

        if args.command == "sweep":
            cfg = _load_sweep_config(args.config)
            path = run_sweep(cfg, Path(args.out))
            print(f"wrote {path}")
            return EXIT_OK

        if args.command == "list-figures":
            for fid, (_, desc) in figures.FIGURES.items():
                print(f"{fid:15s} {desc}")
            return EXIT_OK
    except ScenarioError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (StepUnderflowError, SingularStateError, gate.BrokenPhaseError,
            FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    parser.error(f"unhandled command {args.command!r}")
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
