"""Backend benchmark: same plan, compiled core vs pure-numpy loop."""

from __future__ import annotations

import time

import numpy as np

from . import _core
from .scenario import builtin


def benchmark(names=("tetra_acquisition",), repeat: int = 3, duration: float | None = None) -> list[dict]:
    """Time each available backend on the named builtin scenarios.

    Returns one row per scenario with per-backend best wall times, the
    speedup of the compiled core over the fallback when both are present, and
    the maximum absolute position difference between their traces.
    """
    rows = []
    for name in names:
        sc = builtin(name)
        if duration is not None:
            sc = sc.with_overrides(duration=duration)
        plan_template = sc.prepare().build_plan()
        row = {"scenario": name, "n_steps": plan_template.n_steps, "backends": {}}
        results = {}
        for backend in _core.available_backends():
            best = float("inf")
            for _ in range(repeat):
                t0 = time.perf_counter()
                raw = _core.simulate(sc.prepare().build_plan(), backend=backend)
                best = min(best, time.perf_counter() - t0)
            results[backend] = raw
            row["backends"][backend] = {"best_s": best, "status": raw.status}
        if "c" in results and "python" in results:
            nl = min(results["c"].n_logged, results["python"].n_logged)
            row["max_position_diff"] = float(
                np.abs(results["c"].q[:nl] - results["python"].q[:nl]).max())
            row["speedup"] = row["backends"]["python"]["best_s"] / row["backends"]["c"]["best_s"]
        rows.append(row)
    return rows


def format_table(rows) -> str:
    lines = [f"active backend: {_core.BACKEND}"]
    for row in rows:
        lines.append(f"{row['scenario']} ({row['n_steps']} steps):")
        for backend, info in row["backends"].items():
            lines.append(f"  {backend:>6}: {info['best_s'] * 1e3:10.2f} ms")
        if "speedup" in row:
            lines.append(f"  speedup: {row['speedup']:.1f}x, "
                         f"max position diff: {row['max_position_diff']:.3g}")
    return "\n".join(lines)
