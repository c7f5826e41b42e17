"""Distance-based formation control with prescribed performance funnels.

Simulation library and CLI for single-integrator agent formations on
minimally and infinitesimally rigid graphs: rigid-graph primitives, funnel
machinery, funnel-based and conventional control laws, a fixed-step
closed-loop simulator with constraint monitoring, and scenario/batch tooling.

The integration hot loop runs on a compiled core when available and on a
pure-numpy fallback otherwise; see :func:`backend_name`.
"""

from ._core import BACKEND as _BACKEND
from ._core import available_backends
from .controller import (
    ControllerConfig,
    VelocityCommand,
    agent_control,
    conventional_control,
    maneuver_control,
    ppc_control,
    robust_conventional_control,
)
from .disturbance import DisturbanceSignal, SinusoidSignal, SinusoidTerm
from .errors import ContainmentViolation, FrameworkMismatch, RigidformError, ScenarioError
from .performance import (
    EdgeSpec,
    PerformanceFunction,
    bounds_to_b,
    e_bounds_at,
    modulated_error,
    omega_I_check,
    select_initial_bounds,
    transform,
    transform_inverse,
    xi,
)
from .rigidity import (
    Framework,
    RigidGraph,
    edge_function,
    grammian_min_eigenvalue,
    incidence_matrix,
    is_infinitesimally_rigid,
    is_minimally_rigid,
    rigidity_matrix,
    shape_discrepancy,
)
from .scenario import (
    Scenario,
    SimConfig,
    builtin,
    builtin_names,
    load_scenario,
    save_scenario,
)
from .simulation import (
    SimulationTrace,
    centroid,
    classify_shape,
    distance_errors,
    run,
    step,
)

__version__ = "0.1.0"


def backend_name() -> str:
    """Integration backend selected at import: ``"c"`` or ``"python"``."""
    return _BACKEND


__all__ = [
    "ContainmentViolation",
    "ControllerConfig",
    "DisturbanceSignal",
    "EdgeSpec",
    "Framework",
    "FrameworkMismatch",
    "PerformanceFunction",
    "RigidGraph",
    "RigidformError",
    "Scenario",
    "ScenarioError",
    "SimConfig",
    "SimulationTrace",
    "SinusoidSignal",
    "SinusoidTerm",
    "VelocityCommand",
    "agent_control",
    "available_backends",
    "backend_name",
    "bounds_to_b",
    "builtin",
    "builtin_names",
    "centroid",
    "classify_shape",
    "conventional_control",
    "distance_errors",
    "e_bounds_at",
    "edge_function",
    "grammian_min_eigenvalue",
    "incidence_matrix",
    "is_infinitesimally_rigid",
    "is_minimally_rigid",
    "load_scenario",
    "maneuver_control",
    "modulated_error",
    "omega_I_check",
    "ppc_control",
    "rigidity_matrix",
    "robust_conventional_control",
    "run",
    "save_scenario",
    "select_initial_bounds",
    "shape_discrepancy",
    "step",
    "transform",
    "transform_inverse",
    "xi",
]
