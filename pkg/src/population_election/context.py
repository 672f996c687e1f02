"""Shared per-run context handed to every transition sub-step."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Callable, List, Optional, Tuple

from .collision import CollisionRules, GroupPartition
from .config import Params
from .randomness import Randomness, consume

if TYPE_CHECKING:
    from .agent import AgentState


class EventKind(str, Enum):
    FULL_RESET = "full_reset"
    SOFT_RESET = "soft_reset"
    GENERATION_ADOPTED = "generation_adopted"
    BECAME_VERIFIER = "became_verifier"
    DC_INIT = "dc_init"
    TOP = "top"
    AWAKENED = "awakened"


@dataclass
class ProtocolContext:
    """Params, collision rules and randomness for one run, plus the event buffer.

    Sub-steps append ``(kind, agent)`` pairs to ``events``; the engine drains
    the buffer after every interaction and maps agents to indices.
    """

    params: Params
    rules: CollisionRules
    randomness: Randomness
    events: List[Tuple[EventKind, "AgentState"]] = field(default_factory=list)

    @classmethod
    def build(
        cls,
        params: Params,
        randomness: Randomness,
        partition: Optional[GroupPartition] = None,
    ) -> "ProtocolContext":
        if partition is None:
            partition = GroupPartition.build(params.n, params.r)
        return cls(params=params, rules=CollisionRules(partition, params), randomness=randomness)

    @property
    def partition(self) -> GroupPartition:
        return self.rules.partition

    def emit(self, kind: EventKind, agent: AgentState) -> None:
        self.events.append((kind, agent))

    def drawer(self, agent: AgentState) -> Callable[[int], int]:
        randomness = self.randomness

        def draw(n_values: int) -> int:
            value = randomness.draw_uniform(n_values, agent.coins)
            if n_values > 1:
                agent.coins = consume(agent.coins)
            return value

        return draw
