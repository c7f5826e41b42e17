"""Backend selection for the integration core.

The compiled extension (``_kernel``) is preferred when importable; otherwise
the pure-numpy fallback runs the identical algorithm.  Selection happens once
at import and can be forced with the ``RIGIDFORM_BACKEND`` environment
variable (``auto``, ``c`` or ``python``); per-call override is available via
the ``backend`` argument of :func:`simulate` for benchmarking.
"""

from __future__ import annotations

import os

from . import fallback
from .plan import RawResult, SimPlan  # noqa: F401  (re-exported)

_compiled = None
_requested = os.environ.get("RIGIDFORM_BACKEND", "auto").lower()
if _requested not in ("auto", "c", "python"):
    raise ValueError(f"RIGIDFORM_BACKEND must be auto, c or python, got {_requested!r}")
if _requested in ("auto", "c"):
    try:
        from . import compiled as _compiled  # noqa: F401
    except ImportError:
        _compiled = None
        if _requested == "c":
            raise ImportError(
                "RIGIDFORM_BACKEND=c requested but the compiled core is not "
                "available; build it with `pip install -e .` or `python setup.py "
                "build_ext --inplace`"
            )

#: Name of the backend selected at import time.
BACKEND = "c" if _compiled is not None else "python"


def available_backends() -> tuple[str, ...]:
    return ("c", "python") if _compiled is not None else ("python",)


def simulate(plan: SimPlan, backend: str | None = None) -> RawResult:
    """Run one closed-loop simulation plan on the selected backend."""
    name = backend or BACKEND
    if name == "python":
        return fallback.simulate(plan)
    if name == "c":
        if _compiled is None:
            raise ValueError("compiled backend is not available in this installation")
        return _compiled.simulate(plan)
    raise ValueError(f"unknown backend {name!r}")
