"""Exception types shared across the package."""


class TrailerPlanError(Exception):
    """Base class for library-specific errors."""


class JackknifeAbort(TrailerPlanError):
    """Hitch angle exceeded the safety cap during integration.

    ``trajectory`` carries the partial motion history up to and including
    the offending sample when the abort happened inside a simulation run.
    """

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class SingularConfiguration(TrailerPlanError):
    """A steering or speed mapping denominator vanished."""


class EmptySteerRange(TrailerPlanError):
    """The steering-limit intersection is empty; the node cannot expand."""


class InvalidStart(TrailerPlanError):
    """Planner start pose collides or violates the hitch-angle cap."""


class ScenarioError(TrailerPlanError):
    """Scenario file failed validation; the message carries the field path."""
