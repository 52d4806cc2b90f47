"""Exception types shared across the package."""


class DdrsimError(Exception):
    """Base class for all ddrsim errors."""


class ConfigError(DdrsimError):
    """Invalid parameter, config key, or geometry constraint violation."""


class OutOfFieldError(DdrsimError):
    """A queried point lies outside the deployment field."""


class InvalidPopulationError(DdrsimError):
    """An analytic predictor was evaluated with a non-physical population."""


class ConfigMismatchError(DdrsimError):
    """Predictions and simulated accounting come from different configurations."""


class PlanStateMismatchError(DdrsimError):
    """A round plan references nodes that are dead or unknown, or relays cyclically."""


class EmptyTraceError(DdrsimError):
    """Summary statistics were requested for an empty trace."""
