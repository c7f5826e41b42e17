"""Command-line interface: run, validate, batch, list-builtins, bench.

Exit codes: 0 when every run completed with no violation flags, 1 when any
run raised a flag or halted on a funnel breach, 2 on validation or I/O
errors.  Edges and agents are printed 1-based, matching the file format.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _core, bench
from .controller import VARIANTS
from .errors import ContainmentViolation, ScenarioError
from .scenario import Scenario, builtin, builtin_names, load_scenario
from .simulation import classify_shape, run

EXIT_CLEAN = 0
EXIT_VIOLATION = 1
EXIT_ERROR = 2


def _load(ref: str) -> Scenario:
    """Resolve a scenario reference: a JSON path or a builtin name."""
    if Path(ref).exists():
        return load_scenario(ref)
    if ref in builtin_names():
        return builtin(ref)
    raise ScenarioError(f"{ref}: not a readable file and not a builtin "
                        f"(available builtins: {', '.join(builtin_names())})")


def _apply_overrides(sc: Scenario, args) -> Scenario:
    return sc.with_overrides(
        dt=args.dt, duration=args.duration, variant=args.variant,
        disturbance_scale=args.disturbance_scale, seed=args.seed)


@dataclass
class RunOutcome:
    name: str
    status: str                  # ok | halted | error
    message: str = ""
    csv: str | None = None
    final_error_norm: float | None = None
    max_funnel_ratio: float | None = None
    ppb_violation: bool | None = None
    collision: bool | None = None
    disconnection: bool | None = None
    classification: str | None = None
    max_centroid_tracking_error: float | None = None
    wall_time_s: float | None = None

    def clean(self) -> bool:
        return (self.status == "ok" and not self.ppb_violation
                and not self.collision and not self.disconnection)

    def row(self) -> dict:
        return {k: v for k, v in self.__dict__.items()}


def _execute(name: str, sc: Scenario, out_dir: Path) -> RunOutcome:
    try:
        prepared = sc.prepare()
    except ScenarioError as exc:
        return RunOutcome(name=name, status="error", message=str(exc))
    t0 = time.perf_counter()
    try:
        trace = run(prepared)
    except ContainmentViolation as exc:
        if exc.edge is not None:
            i, j = exc.edge
            where = f"edge ({i + 1},{j + 1})"  # file/diagram numbering
        else:
            where = "unknown edge"
        outcome = RunOutcome(
            name=name, status="halted",
            message=(f"funnel breach on {where} at t={exc.time:.6f}: modulated error "
                     f"{exc.value:.6g} outside ({exc.lower:.6g}, {exc.upper:.6g}); "
                     "reduce dt"),
            wall_time_s=time.perf_counter() - t0)
        trace = getattr(exc, "trace", None)
        if trace is not None and trace.n_logged:
            outcome.final_error_norm = trace.final_error_norm()
            outcome.max_funnel_ratio = trace.max_funnel_ratio
        return outcome
    wall = time.perf_counter() - t0
    outcome = RunOutcome(
        name=name, status="ok",
        final_error_norm=trace.final_error_norm(),
        max_funnel_ratio=trace.max_funnel_ratio,
        ppb_violation=bool(trace.ppb_violation[-1]),
        collision=bool(trace.collision[-1]),
        disconnection=bool(trace.disconnection[-1]),
        wall_time_s=wall,
    )
    if prepared.desired_framework is not None:
        outcome.classification = classify_shape(trace.final_framework(),
                                                prepared.desired_framework)
    vd = prepared.scenario.centroid_velocity
    if vd is not None:
        reference = trace.centroids[0][None, :] + vd.integral(trace.times)
        outcome.max_centroid_tracking_error = float(
            np.abs(trace.centroids - reference).max())
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        csv_path = out_dir / f"{name}.csv"
        trace.write_csv(csv_path)
        outcome.csv = str(csv_path)
    except OSError as exc:
        outcome.status = "error"
        outcome.message = f"failed to write trace: {exc}"
    return outcome


def _print_outcome_table(outcomes) -> None:
    cols = ("name", "status", "final_error_norm", "max_funnel_ratio",
            "flags", "classification", "wall_time_s")
    rows = []
    for o in outcomes:
        flags = "-"
        if o.status == "ok":
            raised = [n for n, v in (("ppb", o.ppb_violation), ("collision", o.collision),
                                     ("disconnect", o.disconnection)) if v]
            flags = ",".join(raised) if raised else "none"
        rows.append((
            o.name, o.status,
            "-" if o.final_error_norm is None else f"{o.final_error_norm:.3e}",
            "-" if o.max_funnel_ratio is None else f"{o.max_funnel_ratio:.3f}",
            flags,
            o.classification or "-",
            "-" if o.wall_time_s is None else f"{o.wall_time_s:.2f}",
        ))
    widths = [max(len(str(c)), *(len(r[i]) for r in rows)) for i, c in enumerate(cols)]
    print("  ".join(c.ljust(w) for c, w in zip(cols, widths)))
    for r in rows:
        print("  ".join(v.ljust(w) for v, w in zip(r, widths)))
    for o in outcomes:
        if o.message:
            print(f"{o.name}: {o.message}")


def run_batch(named_scenarios, out_dir) -> tuple[list[RunOutcome], int]:
    """Run several scenarios, write one CSV each plus a summary report.

    I/O and validation failures are recorded per scenario without aborting
    the batch.  Returns the outcomes and the aggregate exit code.
    """
    out_dir = Path(out_dir)
    outcomes = [_execute(name, sc, out_dir) for name, sc in named_scenarios]
    code = EXIT_CLEAN
    if any(o.status == "error" for o in outcomes):
        code = EXIT_ERROR
    elif not all(o.clean() for o in outcomes):
        code = EXIT_VIOLATION
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        summary = {"backend": _core.BACKEND, "outcomes": [o.row() for o in outcomes]}
        (out_dir / "summary.json").write_text(json.dumps(summary, indent=2) + "\n",
                                              encoding="utf-8")
    except OSError as exc:
        print(f"failed to write summary: {exc}", file=sys.stderr)
        code = EXIT_ERROR
    return outcomes, code


def _cmd_run(args) -> int:
    sc = _apply_overrides(_load(args.scenario), args)
    name = sc.name
    outcomes, code = run_batch([(name, sc)], Path(args.out))
    _print_outcome_table(outcomes)
    return code


def _cmd_validate(args) -> int:
    sc = _load(args.scenario)
    prepared = sc.prepare()
    rep = prepared.report
    print(f"{sc.name}: valid")
    if rep.desired_minimally_rigid is not None:
        print("  desired framework: minimally and infinitesimally rigid")
    else:
        print("  desired framework: distances only (edge count checked, rank test skipped)")
    print("  initial framework: infinitesimally rigid")
    within = "within" if rep.aggregate_bound_within else "EXCEEDS"
    print(f"  aggregate initial bound: {rep.aggregate_bound_total:.6g} "
          f"({within} budget {rep.aggregate_bound_budget:.6g})")
    for row in rep.edge_table:
        i, j = row["edge"]
        print(f"  edge ({i},{j}): d={row['d']:.4f} e0={row['e0']:+.4f} "
              f"bounds=(-{row['e0_underbar']:.4f}, {row['e0_bar']:.4f}) "
              f"widths=({row['b_underbar']:.4f}, {row['b_bar']:.4f})")
    return EXIT_CLEAN


def _cmd_list_builtins(_args) -> int:
    for name in builtin_names():
        sc = builtin(name)
        print(f"{name}: {sc.n_agents} agents in {sc.dimension}-D, variant={sc.variant}, "
              f"dt={sc.sim.dt:g}, duration={sc.sim.duration:g}")
    return EXIT_CLEAN


def _cmd_batch(args) -> int:
    refs = list(args.scenarios)
    if args.all_builtins:
        refs.extend(builtin_names())
    if not refs:
        raise ScenarioError("batch: no scenarios given (pass paths/names or --all-builtins)")
    named = []
    for ref in refs:
        sc = _apply_overrides(_load(ref), args)
        named.append((sc.name, sc))
    outcomes, code = run_batch(named, Path(args.out))
    _print_outcome_table(outcomes)
    return code


def _cmd_bench(args) -> int:
    rows = bench.benchmark(names=tuple(args.scenarios) or ("tetra_acquisition",),
                           repeat=args.repeat, duration=args.duration)
    print(bench.format_table(rows))
    return EXIT_CLEAN


def _add_override_args(p) -> None:
    p.add_argument("--out", default="runs", help="output directory (default: runs)")
    p.add_argument("--dt", type=float, help="override integration step")
    p.add_argument("--duration", type=float, help="override horizon")
    p.add_argument("--variant", choices=VARIANTS, help="override controller variant")
    p.add_argument("--disturbance-scale", type=float, help="override disturbance scale")
    p.add_argument("--seed", type=int, help="override seed for generated initial positions")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rigidform",
        description="Formation control simulation on rigid graphs with "
                    "prescribed performance funnels.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one scenario and write its trace CSV")
    p.add_argument("scenario", help="scenario JSON path or builtin name")
    _add_override_args(p)
    p.set_defaults(fn=_cmd_run)

    p = sub.add_parser("validate", help="validate a scenario and print the bound table")
    p.add_argument("scenario", help="scenario JSON path or builtin name")
    p.set_defaults(fn=_cmd_validate)

    p = sub.add_parser("list-builtins", help="list built-in scenarios")
    p.set_defaults(fn=_cmd_list_builtins)

    p = sub.add_parser("batch", help="run several scenarios and write a summary report")
    p.add_argument("scenarios", nargs="*", help="scenario JSON paths or builtin names")
    p.add_argument("--all-builtins", action="store_true", help="include every builtin")
    _add_override_args(p)
    p.set_defaults(fn=_cmd_batch)

    p = sub.add_parser("bench", help="benchmark the integration backends")
    p.add_argument("scenarios", nargs="*", help="builtin names (default: tetra_acquisition)")
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--duration", type=float, help="override horizon for timing")
    p.set_defaults(fn=_cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
