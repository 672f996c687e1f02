"""Stable verification: collision detection wrapped in generations and probation.

Generations live in Z_6. A detected collision becomes a soft reset (new
generation, fresh collision-detection state) when the agent is off probation,
and a full reset otherwise. Off-probation agents exactly one generation behind
catch up by epidemic.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, List

from .collision import DCValue, check_dc_state, detect_collision_step, init_dc, is_top
from .context import EventKind, ProtocolContext
from .reset import trigger_reset

if TYPE_CHECKING:
    from .agent import AgentState
    from .collision import CollisionRules
    from .config import Params

GENERATIONS = 6


@dataclass
class VerifyState:
    generation: int
    probation_timer: int
    dc: DCValue


def fresh_verify_state(rank: int, generation: int, ctx: ProtocolContext) -> VerifyState:
    return VerifyState(
        generation=generation % GENERATIONS,
        probation_timer=ctx.params.p_max,
        dc=init_dc(rank, ctx.rules),
    )


def _restart(agent: AgentState, generation: int, ctx: ProtocolContext, kind: EventKind) -> None:
    agent.verify = fresh_verify_state(agent.rank, generation, ctx)
    ctx.emit(kind, agent)
    ctx.emit(EventKind.DC_INIT, agent)


def stable_verify_step(u: AgentState, v: AgentState, ctx: ProtocolContext) -> None:
    """One verification interaction between two verifiers (mutates both)."""
    for agent in (u, v):
        agent.verify.probation_timer = max(0, agent.verify.probation_timer - 1)

    if u.verify.generation == v.verify.generation:
        was_top = {id(a): is_top(a.verify.dc) for a in (u, v)}
        u.verify.dc, v.verify.dc = detect_collision_step(
            u.rank,
            u.verify.dc,
            v.rank,
            v.verify.dc,
            ctx.rules,
            ctx.drawer(u),
            ctx.drawer(v),
        )
        for agent in (u, v):
            if not is_top(agent.verify.dc):
                continue
            if not was_top[id(agent)]:
                ctx.emit(EventKind.TOP, agent)
            if agent.verify.probation_timer == 0:
                _restart(agent, agent.verify.generation + 1, ctx, EventKind.SOFT_RESET)
            else:
                trigger_reset(agent, ctx)
        return

    for i, j in ((u, v), (v, u)):
        behind = (j.verify.generation - 1) % GENERATIONS
        if i.verify.probation_timer == 0 and i.verify.generation == behind:
            _restart(i, j.verify.generation, ctx, EventKind.GENERATION_ADOPTED)
            return
    trigger_reset(u, ctx)


def check_verify_state(rank: int, state: VerifyState, params: Params, rules: CollisionRules) -> List[str]:
    """Violated verifier sub-invariants (empty = valid)."""
    errors = []
    if not 0 <= state.generation < GENERATIONS:
        errors.append(f"generation {state.generation} outside Z_{GENERATIONS}")
    if not 0 <= state.probation_timer <= params.p_max:
        errors.append(f"probationTimer {state.probation_timer} outside [0, {params.p_max}]")
    errors.extend(check_dc_state(rank, state.dc, rules))
    return errors
