"""Tests for stable verification: generations, probation and soft resets."""
import pytest

from population_election.agent import AgentState, Role
from population_election.collision import TOP, init_dc
from population_election.context import EventKind
from population_election.verify import (
    GENERATIONS,
    VerifyState,
    check_verify_state,
    fresh_verify_state,
    stable_verify_step,
)


@pytest.fixture
def ctx(small_params, make_ctx):
    return make_ctx(small_params)


def _verifier(ctx, rank, generation=0, timer=0, dc=None):
    dc = init_dc(rank, ctx.rules) if dc is None else dc
    return AgentState.verifier(rank, VerifyState(generation, timer, dc))


def _kinds(ctx):
    return [kind for kind, _ in ctx.events]


class TestFreshState:
    def test_fresh_state_is_on_probation(self, ctx):
        state = fresh_verify_state(3, GENERATIONS + 2, ctx)
        assert state.generation == 2
        assert state.probation_timer == ctx.params.p_max
        assert state.dc == init_dc(3, ctx.rules)


class TestSameGeneration:
    def test_clean_interaction_only_ticks_timers(self, ctx):
        u, v = _verifier(ctx, 1, timer=5), _verifier(ctx, 2, timer=0)
        stable_verify_step(u, v, ctx)
        assert (u.verify.probation_timer, v.verify.probation_timer) == (4, 0)
        assert ctx.events == []

    def test_collision_off_probation_is_a_soft_reset(self, ctx):
        u, v = _verifier(ctx, 1, generation=4), _verifier(ctx, 1, generation=4)
        stable_verify_step(u, v, ctx)
        for agent in (u, v):
            assert agent.role is Role.VERIFYING
            assert agent.verify.generation == 5
            assert agent.verify.probation_timer == ctx.params.p_max
            assert agent.verify.dc == init_dc(1, ctx.rules)
        assert _kinds(ctx) == [
            EventKind.TOP,
            EventKind.SOFT_RESET,
            EventKind.DC_INIT,
            EventKind.TOP,
            EventKind.SOFT_RESET,
            EventKind.DC_INIT,
        ]

    def test_generation_wraps(self, ctx):
        u, v = _verifier(ctx, 2, generation=5), _verifier(ctx, 2, generation=5)
        stable_verify_step(u, v, ctx)
        assert u.verify.generation == v.verify.generation == 0

    def test_collision_on_probation_is_a_full_reset(self, ctx):
        u, v = _verifier(ctx, 1, timer=9), _verifier(ctx, 1, timer=9)
        stable_verify_step(u, v, ctx)
        assert u.role is v.role is Role.RESETTING
        assert _kinds(ctx).count(EventKind.FULL_RESET) == 2

    def test_pending_top_resolves_without_new_top_event(self, ctx):
        u, v = _verifier(ctx, 1, dc=TOP), _verifier(ctx, 2, timer=3)
        stable_verify_step(u, v, ctx)
        assert u.verify.generation == 1
        assert v.verify.probation_timer == 2
        assert _kinds(ctx) == [EventKind.SOFT_RESET, EventKind.DC_INIT]

    def test_different_groups_never_collide(self, ctx):
        u, v = _verifier(ctx, 1), _verifier(ctx, 3)
        stable_verify_step(u, v, ctx)
        assert ctx.events == []


class TestGenerationMismatch:
    def test_agent_one_behind_adopts(self, ctx):
        u, v = _verifier(ctx, 1, generation=2), _verifier(ctx, 2, generation=3, timer=7)
        stable_verify_step(u, v, ctx)
        assert u.verify.generation == 3
        assert u.verify.probation_timer == ctx.params.p_max
        assert v.verify.probation_timer == 6
        assert ctx.events == [(EventKind.GENERATION_ADOPTED, u), (EventKind.DC_INIT, u)]

    def test_responder_behind_adopts(self, ctx):
        u, v = _verifier(ctx, 1, generation=0), _verifier(ctx, 2, generation=5)
        stable_verify_step(u, v, ctx)
        assert v.verify.generation == 0
        assert u.role is Role.VERIFYING

    def test_timer_reaching_zero_counts_as_off_probation(self, ctx):
        u, v = _verifier(ctx, 1, generation=2, timer=1), _verifier(ctx, 2, generation=3, timer=1)
        stable_verify_step(u, v, ctx)
        assert u.verify.generation == 3

    def test_behind_on_probation_triggers_reset(self, ctx):
        u, v = _verifier(ctx, 1, generation=2, timer=4), _verifier(ctx, 2, generation=3)
        stable_verify_step(u, v, ctx)
        assert u.role is Role.RESETTING
        assert v.role is Role.VERIFYING

    def test_two_generations_apart_resets_initiator(self, ctx):
        u, v = _verifier(ctx, 1, generation=1), _verifier(ctx, 2, generation=3)
        stable_verify_step(u, v, ctx)
        assert u.role is Role.RESETTING
        assert v.role is Role.VERIFYING
        assert ctx.events == [(EventKind.FULL_RESET, u)]


class TestCheckVerifyState:
    def test_valid(self, ctx):
        assert check_verify_state(2, fresh_verify_state(2, 0, ctx), ctx.params, ctx.rules) == []

    def test_out_of_range_fields(self, ctx):
        bad = VerifyState(GENERATIONS, ctx.params.p_max + 1, init_dc(2, ctx.rules))
        errors = check_verify_state(2, bad, ctx.params, ctx.rules)
        assert len(errors) == 2

    def test_top_is_valid(self, ctx):
        assert check_verify_state(2, VerifyState(0, 0, TOP), ctx.params, ctx.rules) == []
