"""Fast (non-self-stabilizing) sheriff election by minimum-identifier epidemic.

Agents draw an identifier from [n^3] on their first activation, spread the
minimum by a two-way epidemic and decide once their local timer expires.
"""
from dataclasses import dataclass
from typing import Callable, List, Optional

from .config import Params


@dataclass
class BootState:
    identifier: Optional[int] = None
    min_identifier: Optional[int] = None
    le_count: int = 0
    leader_done: int = 0
    leader_bit: int = 0

    @property
    def initialized(self) -> bool:
        return self.identifier is not None


def boot_init(draw: Callable[[int], int], params: Params) -> BootState:
    """Fresh election state with an identifier drawn uniformly from [n^3]."""
    identifier = draw(params.id_space)
    return BootState(
        identifier=identifier,
        min_identifier=identifier,
        le_count=params.le_count,
        leader_done=0,
        leader_bit=0,
    )


def ensure_initialized(state: BootState, draw: Callable[[int], int], params: Params) -> BootState:
    """Lazy activation: the identifier is drawn at the agent's first interaction."""
    if state.initialized:
        return state
    return boot_init(draw, params)


def boot_step(u: BootState, v: BootState) -> None:
    """Min-merge identifiers and advance both election timers."""
    shared_min = min(u.min_identifier, v.min_identifier)
    for state in (u, v):
        state.min_identifier = shared_min
        state.le_count = max(0, state.le_count - 1)
        if state.le_count == 0 and not state.leader_done:
            state.leader_done = 1
            state.leader_bit = int(state.identifier == state.min_identifier)


def is_elected(state: BootState) -> bool:
    return bool(state.leader_done and state.leader_bit)


def check_boot_state(state: BootState, params: Params) -> List[str]:
    errors = []
    if not state.initialized:
        return errors
    if not 1 <= state.identifier <= params.id_space:
        errors.append(f"identifier {state.identifier} outside [1, {params.id_space}]")
    if state.min_identifier is None or not 1 <= state.min_identifier <= state.identifier:
        errors.append("minIdentifier must lie in [1, identifier]")
    if not 0 <= state.le_count <= params.le_count:
        errors.append(f"leCount {state.le_count} outside [0, {params.le_count}]")
    if state.leader_done and state.le_count != 0:
        errors.append("leaderDone set while leCount > 0")
    if state.leader_bit and not state.leader_done:
        errors.append("leaderBit set before leaderDone")
    return errors
