"""Custom exception hierarchy for the simulator and experiment harness."""


class SimulationError(Exception):
    """Base exception for simulation errors."""
    pass


class ConfigurationError(SimulationError):
    """Invalid parameters, configuration files or initial configurations."""
    pass


class ScenarioError(ConfigurationError):
    """A scenario that cannot be built at the requested population size."""
    pass


class ContractViolation(SimulationError):
    """A caller broke an operation's precondition."""
    pass


class ExperimentIOError(SimulationError):
    """Writing experiment output failed for a specific trial."""

    def __init__(self, message: str, trial_index: int = -1):
        super().__init__(message)
        self.trial_index = trial_index
