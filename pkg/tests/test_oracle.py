"""Tests for the recovery hierarchy, trace recording, monitors and the soundness search."""
import numpy as np
import pytest

from population_election.agent import AgentState
from population_election.collision import init_dc
from population_election.config import Params
from population_election.context import EventKind
from population_election.engine import Configuration, Interaction
from population_election.exceptions import ConfigurationError
from population_election.oracle import (
    HierarchyLevel,
    LeaderUniqueMonitor,
    OwnerCopyMonitor,
    RankFrozenMonitor,
    ScriptedDraws,
    Trace,
    TraceRecorder,
    build_monitors,
    classify,
    closure_violation,
    explore_soundness,
    stable_suffix_start,
    surrogate_holds,
)
from population_election.ranking import initial_ranking_state
from population_election.reset import ResetState
from population_election.scenarios import build_scenario, make_scenario
from population_election.verify import VerifyState


@pytest.fixture
def ctx(small_params, make_ctx):
    return make_ctx(small_params)


def _verifiers(ctx, ranks, generations=None, timers=None):
    generations = generations or [0] * len(ranks)
    timers = timers or [0] * len(ranks)
    return [
        AgentState.verifier(rank, VerifyState(g, t, init_dc(rank, ctx.rules)))
        for rank, g, t in zip(ranks, generations, timers)
    ]


RANKS = [3, 1, 2, 5, 4, 8, 6, 7]


class TestClassify:
    def test_resetter_means_c0(self, ctx, small_params):
        agents = _verifiers(ctx, RANKS)
        agents[0] = AgentState.resetting(ResetState(0, 1))
        assert classify(agents) is HierarchyLevel.C0

    def test_ranker_means_c1(self, ctx, small_params):
        agents = _verifiers(ctx, RANKS)
        agents[4] = AgentState.ranker(initial_ranking_state(small_params), 3)
        assert classify(agents) is HierarchyLevel.C1

    def test_levels_by_generation_timer_and_ranking(self, ctx):
        assert classify(_verifiers(ctx, RANKS, generations=[0] * 7 + [1])) is HierarchyLevel.C2
        assert classify(_verifiers(ctx, RANKS, timers=[0] * 7 + [3])) is HierarchyLevel.C3
        assert classify(_verifiers(ctx, [1, 1, 2, 3, 4, 5, 6, 7])) is HierarchyLevel.C4
        assert classify(_verifiers(ctx, RANKS)) is HierarchyLevel.C5


class TestSurrogate:
    def test_correct_and_settled(self, ctx):
        assert surrogate_holds(_verifiers(ctx, RANKS), [False] * 8)

    def test_single_generation_on_probation_needs_descent(self, ctx):
        agents = _verifiers(ctx, RANKS, timers=[5] * 8)
        assert not surrogate_holds(agents, [True] * 7 + [False])
        assert surrogate_holds(agents, [True] * 8)

    def test_two_consecutive_generations(self, ctx):
        agents = _verifiers(ctx, RANKS, generations=[5] * 4 + [0] * 4, timers=[0] * 4 + [9] * 4)
        assert surrogate_holds(agents, [False] * 4 + [True] * 4)
        assert not surrogate_holds(agents, [False] * 8)

    def test_older_generation_on_probation_fails(self, ctx):
        agents = _verifiers(ctx, RANKS, generations=[1] * 4 + [2] * 4, timers=[3] * 8)
        assert not surrogate_holds(agents, [True] * 8)

    def test_generations_two_apart_fail(self, ctx):
        agents = _verifiers(ctx, RANKS, generations=[1] * 4 + [3] * 4)
        assert not surrogate_holds(agents, [True] * 8)

    def test_wrong_ranking_fails(self, ctx):
        assert not surrogate_holds(_verifiers(ctx, [1] * 8), [True] * 8)


class TestTraceAnalysis:
    def test_stable_suffix(self):
        trace = Trace(leaders=[None, 0, 0, 1, 1, 1])
        assert stable_suffix_start(trace) == 3

    def test_no_leader_at_end(self):
        assert stable_suffix_start(Trace(leaders=[0, 0, None])) is None

    def test_full_reset_cuts_the_suffix(self):
        trace = Trace(leaders=[1, 1, 1, 1, 1], full_reset_steps=[2])
        assert stable_suffix_start(trace) == 3

    def test_closure_violation(self):
        assert not closure_violation(Trace(leaders=[None, 2, 2, 2], surrogate_at=1))
        assert closure_violation(Trace(leaders=[None, 2, 2, 4], surrogate_at=1))
        assert closure_violation(Trace(leaders=[2, 2, 2], full_reset_steps=[2], surrogate_at=1))
        assert not closure_violation(Trace(leaders=[None, 3]))


class TestTraceRecorder:
    def test_records_leaders_events_and_descent(self, ctx):
        config = Configuration(agents=_verifiers(ctx, RANKS, timers=[4] * 8))
        recorder = TraceRecorder(keep_events=True)
        recorder.start(config)
        assert recorder.trace.leaders == [1]
        assert recorder.trace.surrogate_at is None

        for index in range(8):
            recorder.observe(config, Interaction(index + 1, index, 0, ((EventKind.DC_INIT, index),)))
        assert recorder.trace.surrogate_at == 8
        assert recorder.stable_length() == 8
        assert len(recorder.trace.events) == 8

        config.agents[1] = AgentState.resetting(ResetState(5, ctx.params.d_max))
        recorder.observe(config, Interaction(9, 1, 2, ((EventKind.TOP, 1), (EventKind.FULL_RESET, 1))))
        assert recorder.trace.first_top_at == 9
        assert recorder.trace.full_reset_steps == [9]
        assert recorder.stable_length() == -1
        assert recorder.descended[1] is False

    def test_initially_descended_only_counts_verifiers(self, ctx, small_params):
        agents = _verifiers(ctx, RANKS)
        agents[0] = AgentState.ranker(initial_ranking_state(small_params), 3)
        recorder = TraceRecorder(initially_descended=[True] * 8)
        recorder.start(Configuration(agents=agents))
        assert recorder.descended == [False] + [True] * 7


class TestMonitors:
    def test_rank_frozen(self, ctx):
        config = Configuration(agents=_verifiers(ctx, RANKS))
        monitor = RankFrozenMonitor()
        monitor.start(config, ctx)
        assert monitor.check(config, ctx)
        config.agents[0].rank = 4
        assert not monitor.check(config, ctx)

    def test_rank_frozen_allows_new_verifier(self, ctx, small_params):
        agents = _verifiers(ctx, RANKS)
        agents[0] = AgentState.ranker(initial_ranking_state(small_params), 3)
        config = Configuration(agents=agents)
        monitor = RankFrozenMonitor()
        monitor.start(config, ctx)
        config.agents[0] = _verifiers(ctx, [6])[0]
        assert monitor.check(config, ctx)

    def test_leader_unique(self, ctx):
        monitor = LeaderUniqueMonitor()
        assert monitor.check(Configuration(agents=_verifiers(ctx, RANKS)), ctx)
        assert not monitor.check(Configuration(agents=_verifiers(ctx, [1, 1] + RANKS[2:])), ctx)

    def test_owner_copy(self, ctx):
        config = Configuration(agents=_verifiers(ctx, RANKS))
        monitor = OwnerCopyMonitor()
        assert monitor.check(config, ctx)
        dc = config.agents[1].verify.dc
        j = next(iter(dc.msgs[1]))
        dc.msgs[1][j] = 2
        assert not monitor.check(config, ctx)

    def test_build_monitors(self):
        assert [m.name for m in build_monitors(["populationSize", "ownerCopy"])] == ["populationSize", "ownerCopy"]
        with pytest.raises(ConfigurationError, match="Unknown monitor"):
            build_monitors(["nope"])

    def test_monitors_hold_over_an_adversarial_run(self, small_params):
        from population_election.engine import Simulator

        config = build_scenario(make_scenario("uniform-random", small_params), np.random.default_rng(4))
        monitors = build_monitors(["populationSize", "typeInvariants", "rankFrozen", "ownerCopy"])
        result = Simulator(small_params, seed=4).run(config, horizon=5000, monitors=monitors)
        assert result.monitor_violations == []


class TestScriptedDraws:
    def test_replays_then_asks(self):
        draws = ScriptedDraws([2, 1])
        assert draws(3) == 2 and draws(3) == 1
        assert draws(1) == 1
        with pytest.raises(Exception):
            draws(2)


SHRUNK = dict(n=4, r=2, ids_per_rank=2, sig_space=2, sig_refresh=2)


class TestSoundnessSearch:
    def test_correct_ranking_never_reaches_top(self):
        report = explore_soundness(Params.create(**SHRUNK))
        assert report.exhausted
        assert not report.top_reachable
        assert not report.overflow
        assert report.ranks == (1, 2)
        assert report.states_visited > 1

    def test_duplicate_rank_reaches_top(self):
        report = explore_soundness(Params.create(**SHRUNK), ranks=[1, 1])
        assert report.top_reachable
        assert not report.exhausted

    def test_single_agent_group(self):
        report = explore_soundness(Params.create(n=2, r=1))
        assert report.exhausted
        assert report.states_visited == 1
        assert not report.top_reachable

    def test_state_budget_overflow(self):
        report = explore_soundness(Params.create(**SHRUNK), max_states=1)
        assert report.overflow
        assert not report.exhausted

    def test_rank_outside_first_group(self):
        with pytest.raises(ConfigurationError, match="first group"):
            explore_soundness(Params.create(**SHRUNK), ranks=[1, 3])

    def test_progress_callback(self):
        seen = []
        explore_soundness(Params.create(**SHRUNK), progress=seen.append)
        assert seen == sorted(seen)
