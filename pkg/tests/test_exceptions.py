"""Tests for custom exception hierarchy."""
import pytest
from population_election.exceptions import (
    ConfigurationError,
    ContractViolation,
    ExperimentIOError,
    ScenarioError,
    SimulationError,
)


class TestExceptionHierarchy:
    def test_simulation_error_is_exception(self):
        assert issubclass(SimulationError, Exception)

    def test_configuration_error_inherits_simulation_error(self):
        assert issubclass(ConfigurationError, SimulationError)

    def test_scenario_error_is_a_configuration_error(self):
        assert issubclass(ScenarioError, ConfigurationError)

    def test_contract_violation_inherits_simulation_error(self):
        assert issubclass(ContractViolation, SimulationError)

    def test_exception_messages(self):
        with pytest.raises(ConfigurationError, match="r must satisfy"):
            raise ConfigurationError("r must satisfy 1 <= r <= n/2")

        with pytest.raises(ScenarioError, match="duplicate-ranks"):
            raise ScenarioError("duplicate-ranks:9 needs 2 <= k <= n")

    def test_experiment_io_error_carries_trial_index(self):
        err = ExperimentIOError("disk full", trial_index=3)
        assert err.trial_index == 3
        assert str(err) == "disk full"
        assert ExperimentIOError("x").trial_index == -1
