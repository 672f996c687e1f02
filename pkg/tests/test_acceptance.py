"""Statistical acceptance runs. Deselected by default; run with ``pytest -m slow``.

Time limits are multiples of ``time_unit(n, r)`` read from ``CALIBRATED``
(see docs/technical/parameters.md); never hard-code them here.
"""
import math
import os

import numpy as np
import pytest

from population_election.agent import Role
from population_election.collision import init_dc
from population_election.config import CALIBRATED, Params
from population_election.engine import Simulator
from population_election.harness import default_confirm_window, measure_stabilization, resolve_r, run_experiment
from population_election.oracle import TraceRecorder, closure_violation
from population_election.orchestrator import leader_of
from population_election.randomness import derive_trial_seed, spawn_generators
from population_election.reset import is_fully_dormant
from population_election.scenarios import build_scenario, make_scenario
from population_election.verify import GENERATIONS, VerifyState

pytestmark = pytest.mark.slow

WORKERS = max(1, min(4, os.cpu_count() or 1))

GRID = sorted({(n, resolve_r(token, n)) for n in (8, 16, 32) for token in ("2", "4", "n/2")})

ADVERSARIAL = ["duplicate-ranks:2", "corrupted-messages:3", "mixed-generations:2", "uniform-random"]


def _success_rate(outcomes):
    outcomes = list(outcomes)
    return sum(outcomes) / len(outcomes)


def _seeded_trial(scenario, trial):
    """Simulator and initial configuration exactly as the harness builds trial ``trial``."""
    trial_seed = derive_trial_seed(scenario.seed, trial)
    _, _, scenario_rng = spawn_generators(trial_seed)
    sim = Simulator(scenario.params, seed=trial_seed)
    return sim, build_scenario(scenario, scenario_rng, sim.ctx.partition)


def _recorder(scenario):
    return TraceRecorder(initially_descended=[True] * scenario.params.n if scenario.clean_dc else None)


def _is_rank_permutation(agents):
    if any(a.role is not Role.VERIFYING for a in agents):
        return False
    return sorted(a.rank for a in agents) == list(range(1, len(agents) + 1))


@pytest.mark.parametrize("n", [8, 16, 32])
def test_single_trigger_reaches_full_dormancy(n):
    params = Params.create(n=n, r=2)
    # the triggered agent alone takes part in r_max counted interactions
    budget = 4 * params.r_max * n
    scenario = make_scenario("clean-triggered", params)

    def reached(seed):
        config = build_scenario(scenario, np.random.default_rng(seed))
        result = Simulator(params, seed=seed).run(
            config, horizon=budget, stop=lambda c: is_fully_dormant(c.agents)
        )
        return is_fully_dormant(config.agents) and result.total_interactions <= budget

    assert _success_rate(reached(seed) for seed in range(100)) >= 0.95


@pytest.mark.parametrize("n", [8, 16, 32])
def test_soft_reset_spreads_through_the_population(n):
    params = Params.create(n=n, r=2)
    budget = math.ceil(10 * n * math.log(n))
    scenario = make_scenario("correct-ranked-verifiers", params)

    def spread(seed):
        sim = Simulator(params, seed=seed)
        config = build_scenario(scenario, np.random.default_rng(seed), sim.ctx.partition)
        leader = config.agents[0]
        leader.verify = VerifyState(1, params.p_max, init_dc(leader.rank, sim.ctx.rules))

        def done(c):
            if any(a.role is not Role.VERIFYING for a in c.agents):
                return True
            return all(a.verify.generation == 1 % GENERATIONS for a in c.agents)

        sim.run(config, horizon=budget, stop=done)
        return done(config)

    assert _success_rate(spread(seed) for seed in range(100)) >= 0.95


@pytest.mark.parametrize("n,r", GRID)
def test_clean_trigger_stabilizes_with_a_correct_ranking(n, r):
    params = Params.create(n=n, r=r)
    scenario = make_scenario("clean-triggered", params, seed=11)
    bound = CALIBRATED.interactions(CALIBRATED.stabilize, n, r)
    window = default_confirm_window(n, r)

    def within_bound(trial):
        sim, config = _seeded_trial(scenario, trial)
        recorder = _recorder(scenario)
        sim.run(
            config,
            horizon=bound + window,
            stop=lambda _config: recorder.stable_length() >= window,
            observers=[recorder],
        )
        assert not closure_violation(recorder.trace)
        at = measure_stabilization(recorder.trace, window)
        if at is None:
            return False
        assert _is_rank_permutation(config.agents), f"trial {trial} stabilized without a rank permutation"
        assert leader_of(config.agents) == recorder.trace.leaders[-1]
        assert config.agents[recorder.trace.leaders[-1]].rank == 1
        return at <= bound

    assert _success_rate(within_bound(trial) for trial in range(50)) >= 0.95


@pytest.mark.parametrize("text", ADVERSARIAL)
@pytest.mark.parametrize("n,r", GRID)
def test_recovery_from_adversarial_starts(n, r, text):
    params = Params.create(n=n, r=r)
    bound = CALIBRATED.interactions(CALIBRATED.recovery_factor * CALIBRATED.stabilize, n, r)
    window = default_confirm_window(n, r)
    scenario = make_scenario(text, params, seed=5, trials=50, horizon=bound + window)
    record = run_experiment(scenario, confirm_window=window, workers=WORKERS, progress=False)
    rate = _success_rate(row.stabilization_at is not None and row.stabilization_at <= bound for row in record.rows)
    assert rate >= 0.95
    assert record.summary["closure_violations"] == 0


@pytest.mark.parametrize("n", [8, 16, 32])
def test_planted_duplicate_is_detected_in_time(n):
    params = Params.create(n=n, r=2)
    scenario = make_scenario("duplicate-ranks:2", params, seed=9)
    bound = CALIBRATED.interactions(CALIBRATED.detect, n, params.r)

    def detected(trial):
        sim, config = _seeded_trial(scenario, trial)
        recorder = _recorder(scenario)
        sim.run(
            config,
            horizon=bound,
            stop=lambda _config: recorder.trace.first_top_at is not None,
            observers=[recorder],
        )
        at = recorder.trace.first_top_at
        return at is not None and at <= bound

    assert _success_rate(detected(trial) for trial in range(100)) >= 0.95


@pytest.mark.parametrize("n", [8, 16])
def test_correct_ranking_is_closed(n):
    params = Params.create(n=n, r=2)
    scenario = make_scenario("correct-ranked-verifiers", params, seed=2, trials=20, horizon=10 ** 6)
    record = run_experiment(
        scenario,
        monitors=["populationSize", "rankFrozen", "leaderUnique"],
        early_stop=False,
        workers=WORKERS,
        progress=False,
    )
    summary = record.summary
    assert all(row.first_top_at is None for row in record.rows)
    assert summary["full_resets"] == summary["soft_resets"] == 0
    assert summary["stabilized"] == 20
    assert summary["closure_violations"] == 0
    assert all(count == 0 for count in summary["monitor_violations"].values())
