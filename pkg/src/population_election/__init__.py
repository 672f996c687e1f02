"""
Population Protocol Leader Election Simulator

A self-stabilizing leader election for anonymous population protocols with a
tunable state-space / time trade-off, plus the experiment harness that
measures it.
"""

__version__ = "1.0.0"
__license__ = "MIT"

# Import classes only when needed to keep the CLI import light
__all__ = [
    "Params",
    "Simulator",
    "Configuration",
    "AgentState",
    "Scenario",
    "ExperimentRecord",
    "__version__",
]


def __getattr__(name):
    """Lazy import for package components."""
    if name == "Params":
        from .config import Params

        return Params
    elif name == "Simulator":
        from .engine import Simulator

        return Simulator
    elif name == "Configuration":
        from .engine import Configuration

        return Configuration
    elif name == "AgentState":
        from .agent import AgentState

        return AgentState
    elif name == "Scenario":
        from .scenarios import Scenario

        return Scenario
    elif name == "ExperimentRecord":
        from .harness import ExperimentRecord

        return ExperimentRecord
    else:
        raise AttributeError(f"module '{__name__}' has no attribute '{name}'")
