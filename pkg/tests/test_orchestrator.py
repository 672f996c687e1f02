"""Tests for the top-level transition function and configuration checks."""
import numpy as np

from population_election.agent import AgentState, Role
from population_election.collision import init_dc
from population_election.config import Params
from population_election.context import EventKind
from population_election.engine import Simulator
from population_election.oracle import ranks_form_permutation
from population_election.orchestrator import (
    check_coins,
    elect_leader_step,
    leader_of,
    validate_configuration,
)
from population_election.randomness import CoinState
from population_election.ranking import Ranked, RankingState, Recipient
from population_election.reset import ResetState
from population_election.scenarios import build_scenario, make_scenario
from population_election.verify import VerifyState


def _ranker(params, countdown=None, rank=1):
    state = RankingState(phase=Ranked(), channel=[0] * params.r, rank=rank)
    return AgentState.ranker(state, params.c_max if countdown is None else countdown)


def _verifier(ctx, rank, generation=0, timer=0):
    return AgentState.verifier(rank, VerifyState(generation, timer, init_dc(rank, ctx.rules)))


class TestElectLeaderStep:
    def test_rankers_count_down(self, small_params, make_ctx):
        ctx = make_ctx(small_params)
        u, v = _ranker(small_params, 10), _ranker(small_params, 10)
        elect_leader_step(u, v, ctx)
        assert (u.countdown, v.countdown) == (9, 9)

    def test_expired_countdown_hands_off_to_verifier(self, small_params, make_ctx):
        ctx = make_ctx(small_params)
        u, v = _ranker(small_params, 1, rank=6), _ranker(small_params, 20, rank=2)
        elect_leader_step(u, v, ctx)
        assert u.role is Role.VERIFYING and u.rank == 6
        assert u.verify.generation == 0
        assert u.verify.probation_timer == small_params.p_max - 1
        assert u.ranking is None and u.countdown is None
        # the hand-off spreads to the partner within the same interaction
        assert v.role is Role.VERIFYING and v.rank == 2
        assert ctx.events == [
            (EventKind.BECAME_VERIFIER, u),
            (EventKind.DC_INIT, u),
            (EventKind.BECAME_VERIFIER, v),
            (EventKind.DC_INIT, v),
        ]

    def test_ranker_meeting_verifier_becomes_verifier_and_verifies(self, small_params, make_ctx):
        ctx = make_ctx(small_params)
        u = _ranker(small_params, rank=3)
        v = _verifier(ctx, 5, timer=4)
        elect_leader_step(u, v, ctx)
        assert u.role is Role.VERIFYING and u.rank == 3
        # both verifying in the same interaction, so timers have already ticked
        assert u.verify.probation_timer == small_params.p_max - 1
        assert v.verify.probation_timer == 3

    def test_triggered_initiator_recruits_verifier(self, small_params, make_ctx):
        ctx = make_ctx(small_params)
        u = AgentState.resetting(ResetState(small_params.r_max, small_params.d_max))
        v = _verifier(ctx, 2)
        elect_leader_step(u, v, ctx)
        assert v.role is Role.RESETTING
        assert v.reset.reset_count == small_params.r_max - 1

    def test_resetting_responder_is_passive(self, small_params, make_ctx):
        ctx = make_ctx(small_params)
        u = _ranker(small_params, 30)
        v = AgentState.resetting(ResetState(5, small_params.d_max))
        elect_leader_step(u, v, ctx)
        assert u.role is Role.RANKING and u.countdown == 30
        assert v.reset == ResetState(5, small_params.d_max)

    def test_awakened_agent_restarts_ranking(self, small_params, make_ctx):
        ctx = make_ctx(small_params)
        u = AgentState.resetting(ResetState(0, 1))
        v = _ranker(small_params, 30)
        elect_leader_step(u, v, ctx)
        assert u.role is Role.RANKING
        # re-initialized into the election, then demoted by the non-electing partner
        assert u.ranking.phase == Recipient()
        assert u.ranking.channel == [0] * small_params.r
        # both rankers now, so the election step ran and ticked the countdowns
        assert u.countdown == small_params.c_max - 1
        assert v.countdown == 29


class TestLeaderOf:
    def test_unique_rank_one_verifier(self, small_params, make_ctx):
        ctx = make_ctx(small_params)
        agents = [_verifier(ctx, 2), _verifier(ctx, 1), _ranker(small_params)]
        assert leader_of(agents) == 1

    def test_no_leader(self, small_params, make_ctx):
        ctx = make_ctx(small_params)
        assert leader_of([_verifier(ctx, 2), _ranker(small_params, rank=1)]) is None

    def test_duplicate_rank_one(self, small_params, make_ctx):
        ctx = make_ctx(small_params)
        assert leader_of([_verifier(ctx, 1), _verifier(ctx, 1)]) is None


class TestValidateConfiguration:
    def test_clean_configuration_is_valid(self, small_params, make_ctx):
        ctx = make_ctx(small_params)
        config = build_scenario(make_scenario("clean-triggered", small_params), np.random.default_rng(0))
        assert validate_configuration(config.agents, ctx) == []

    def test_wrong_population_size(self, small_params, make_ctx):
        ctx = make_ctx(small_params)
        errors = validate_configuration([_ranker(small_params)], ctx)
        assert any("expected 8" in e for e in errors)

    def test_errors_are_prefixed_by_agent_index(self, small_params, make_ctx):
        ctx = make_ctx(small_params)
        config = build_scenario(make_scenario("correct-ranked-verifiers", small_params), np.random.default_rng(0))
        config.agents[2].verify.probation_timer = small_params.p_max + 1
        errors = validate_configuration(config.agents, ctx)
        assert any(e.startswith("agent 2: probationTimer") for e in errors)
        assert len(errors) == 1

    def test_stale_fields_are_reported(self, small_params, make_ctx):
        ctx = make_ctx(small_params)
        agent = _ranker(small_params)
        agent.reset = ResetState(0, 1)
        errors = validate_configuration([agent] + [_ranker(small_params) for _ in range(7)], ctx)
        assert errors == ["agent 0: inactive fields still populated: reset"]

    def test_coin_width_is_checked(self, make_ctx):
        params = Params.create(n=6, r=3, rng_mode="synthetic-coins")
        ctx = make_ctx(params)
        assert check_coins(CoinState.zeros(params.coin_width), ctx) == []
        assert check_coins(CoinState.zeros(params.coin_width + 1), ctx)
        assert check_coins(None, ctx) == []


class TestEndToEnd:
    def test_clean_trigger_converges_to_a_correct_ranking(self, small_params):
        config = build_scenario(make_scenario("clean-triggered", small_params), np.random.default_rng(1))

        def ranked(c):
            return all(a.role is Role.VERIFYING for a in c.agents) and ranks_form_permutation(c.agents)

        result = Simulator(small_params, seed=1).run(config, horizon=200000, stop=ranked)
        assert ranked(config)
        assert leader_of(config.agents) is not None
        assert result.total_interactions < 200000
