"""Exception types shared across the package."""


class RigidformError(Exception):
    """Base class for package-specific errors."""


class FrameworkMismatch(RigidformError, ValueError):
    """Two frameworks that were expected to share a graph do not."""


class ScenarioError(RigidformError, ValueError):
    """A scenario file or object failed validation; the message names the field."""


class ContainmentViolation(RigidformError):
    """A modulated squared distance error reached its funnel boundary.

    Raised by the error transformation when the modulated error is on or
    outside the open interval (-b_under, b_bar), and by the simulation loop
    when any integrator stage evaluates outside the funnel (the observable
    failure mode of a too-coarse step).  Carries the offending value, the
    interval, and, when known, the edge and time.
    """

    def __init__(self, value, lower, upper, edge=None, time=None):
        self.value = float(value)
        self.lower = float(lower)
        self.upper = float(upper)
        self.edge = edge
        self.time = time
        where = f" on edge {edge}" if edge is not None else ""
        when = f" at t={time:.6f}" if time is not None else ""
        super().__init__(
            f"modulated error {self.value:.6g}{where}{when} outside open "
            f"interval ({self.lower:.6g}, {self.upper:.6g})"
        )
