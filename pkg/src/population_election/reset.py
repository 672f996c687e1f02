"""Full-reset broadcast: triggering, propagation, dormancy and awakening."""
from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, List, Sequence

from .agent import AgentState, Role
from .context import EventKind, ProtocolContext

if TYPE_CHECKING:
    from .config import Params


@dataclass
class ResetState:
    reset_count: int
    delay_timer: int


def trigger_reset(agent: AgentState, ctx: ProtocolContext) -> None:
    """Turn any agent into a freshly triggered resetter, discarding its role fields."""
    agent.become_resetting(ResetState(ctx.params.r_max, ctx.params.d_max))
    ctx.emit(EventKind.FULL_RESET, agent)


def propagate_reset(
    u: AgentState,
    v: AgentState,
    ctx: ProtocolContext,
    reinitialize: Callable[[AgentState], None],
) -> None:
    """One PropagateReset interaction with resetter ``u`` as initiator.

    ``reinitialize`` is the re-init routine run by an agent that wakes up.
    """
    params = ctx.params
    if u.reset.reset_count > 0 and v.role is not Role.RESETTING:
        v.become_resetting(ResetState(0, params.d_max))

    previous = {id(u): u.reset.reset_count}
    if v.role is Role.RESETTING:
        previous[id(v)] = v.reset.reset_count
        count = max(u.reset.reset_count - 1, v.reset.reset_count - 1, 0)
        for agent in (u, v):
            agent.reset.reset_count = count
            # a dormant agent pulled back into propagation restarts its delay
            if count > 0:
                agent.reset.delay_timer = params.d_max

    for i, j in ((u, v), (v, u)):
        if i.role is not Role.RESETTING or i.reset.reset_count != 0:
            continue
        # "just became 0" is only observable inside this interaction
        if previous.get(id(i), 0) > 0:
            i.reset.delay_timer = params.d_max
        else:
            i.reset.delay_timer = max(0, i.reset.delay_timer - 1)
        if i.reset.delay_timer == 0 or j.role is not Role.RESETTING:
            reinitialize(i)
            ctx.emit(EventKind.AWAKENED, i)


def is_dormant(agent: AgentState) -> bool:
    return agent.role is Role.RESETTING and agent.reset.reset_count == 0


def is_fully_dormant(agents: Sequence[AgentState]) -> bool:
    return all(is_dormant(a) for a in agents)


def is_triggered(agents: Sequence[AgentState]) -> bool:
    return any(a.role is Role.RESETTING and a.reset.reset_count > 0 for a in agents)


def check_reset_state(state: ResetState, params: Params) -> List[str]:
    """Violated resetter sub-invariants (empty = valid)."""
    errors = []
    if not 0 <= state.reset_count <= params.r_max:
        errors.append(f"resetCount {state.reset_count} outside [0, {params.r_max}]")
    if not 0 <= state.delay_timer <= params.d_max:
        errors.append(f"delayTimer {state.delay_timer} outside [0, {params.d_max}]")
    if state.reset_count > 0 and state.delay_timer != params.d_max:
        errors.append("delayTimer must equal dMax while resetCount > 0")
    return errors
