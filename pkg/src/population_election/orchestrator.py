"""Top-level transition function: role dispatch and the ranker -> verifier hand-off."""
import logging
from typing import List, Optional, Sequence

from .agent import AgentState, Role
from .context import EventKind, ProtocolContext
from .randomness import CoinState
from .ranking import assign_ranks_step, check_ranking_state, initial_ranking_state
from .reset import check_reset_state, propagate_reset
from .verify import check_verify_state, fresh_verify_state, stable_verify_step

logger = logging.getLogger(__name__)


def reset_agent(agent: AgentState, ctx: ProtocolContext) -> None:
    """Re-initialize an awakening resetter as a fresh ranker."""
    agent.become_ranking(initial_ranking_state(ctx.params), ctx.params.c_max)


def become_verifier(agent: AgentState, ctx: ProtocolContext) -> None:
    rank = agent.ranking.rank
    agent.become_verifying(rank, fresh_verify_state(rank, 0, ctx))
    ctx.emit(EventKind.BECAME_VERIFIER, agent)
    ctx.emit(EventKind.DC_INIT, agent)


def elect_leader_step(u: AgentState, v: AgentState, ctx: ProtocolContext) -> None:
    """One interaction with ``u`` as initiator and ``v`` as responder (mutates both)."""
    if u.role is Role.RESETTING:
        propagate_reset(u, v, ctx, lambda agent: reset_agent(agent, ctx))

    if u.role is Role.RANKING and v.role is Role.RANKING:
        assign_ranks_step(u.ranking, v.ranking, ctx.params, ctx.drawer(u), ctx.drawer(v))
        u.countdown = max(0, u.countdown - 1)
        v.countdown = max(0, v.countdown - 1)

    for i, j in ((u, v), (v, u)):
        if i.role is Role.RANKING and (i.countdown == 0 or j.role is Role.VERIFYING):
            become_verifier(i, ctx)

    if u.role is Role.VERIFYING and v.role is Role.VERIFYING:
        stable_verify_step(u, v, ctx)


def leader_of(agents: Sequence[AgentState]) -> Optional[int]:
    """Index of the unique verifier of rank 1, or None."""
    leader = None
    for index, agent in enumerate(agents):
        if agent.role is Role.VERIFYING and agent.rank == 1:
            if leader is not None:
                return None
            leader = index
    return leader


def check_agent(agent: AgentState, ctx: ProtocolContext) -> List[str]:
    """Violated role sub-invariants of one agent (empty = valid)."""
    params = ctx.params
    populated = {
        Role.RESETTING: agent.reset is not None,
        Role.RANKING: agent.ranking is not None and agent.countdown is not None,
        Role.VERIFYING: agent.verify is not None and agent.rank is not None,
    }
    if not populated.get(agent.role, False):
        return [f"role {agent.role} is missing its fields"]
    stale = [
        name
        for name, role in (("reset", Role.RESETTING), ("ranking", Role.RANKING), ("verify", Role.VERIFYING))
        if role is not agent.role and getattr(agent, name) is not None
    ]
    if stale:
        return [f"inactive fields still populated: {', '.join(stale)}"]

    if agent.role is Role.RESETTING:
        return check_reset_state(agent.reset, params)
    if agent.role is Role.RANKING:
        errors = check_ranking_state(agent.ranking, params)
        if not 0 <= agent.countdown <= params.c_max:
            errors.append(f"countdown {agent.countdown} outside [0, {params.c_max}]")
        return errors
    if not 1 <= agent.rank <= params.n:
        return [f"rank {agent.rank} outside [1, {params.n}]"]
    return check_verify_state(agent.rank, agent.verify, params, ctx.rules)


def check_coins(coins: Optional[CoinState], ctx: ProtocolContext) -> List[str]:
    if coins is None:
        return []
    errors = []
    if coins.width != ctx.params.coin_width:
        errors.append(f"coin array has {coins.width} bits, expected {ctx.params.coin_width}")
    if not 0 <= coins.coin_count < max(1, coins.width):
        errors.append(f"coinCount {coins.coin_count} outside [0, {coins.width})")
    if not 0 <= coins.fresh <= coins.width:
        errors.append(f"fresh bit count {coins.fresh} outside [0, {coins.width}]")
    return errors


def validate_configuration(agents: Sequence[AgentState], ctx: ProtocolContext) -> List[str]:
    """Aggregate every agent's violated sub-invariants, prefixed by agent index."""
    errors = []
    if len(agents) != ctx.params.n:
        errors.append(f"configuration holds {len(agents)} agents, expected {ctx.params.n}")
    for index, agent in enumerate(agents):
        for problem in check_agent(agent, ctx) + check_coins(agent.coins, ctx):
            errors.append(f"agent {index}: {problem}")
    if errors:
        logger.debug(f"[CHECK] {len(errors)} invariant violations")
    return errors
