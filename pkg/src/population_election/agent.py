"""Agent state: a tagged variant over the three roles.

Only the active role's fields are populated; every role change clears the
fields of the role being left. Synthetic-coin state survives role changes.
"""
from __future__ import annotations

import copy
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:
    from .randomness import CoinState
    from .ranking import RankingState
    from .reset import ResetState
    from .verify import VerifyState


class Role(str, Enum):
    RESETTING = "resetting"
    RANKING = "ranking"
    VERIFYING = "verifying"


@dataclass
class AgentState:
    role: Role
    reset: Optional[ResetState] = None
    ranking: Optional[RankingState] = None
    countdown: Optional[int] = None
    rank: Optional[int] = None
    verify: Optional[VerifyState] = None
    coins: Optional[CoinState] = None

    @classmethod
    def resetting(cls, reset: ResetState, coins: Optional[CoinState] = None) -> "AgentState":
        return cls(role=Role.RESETTING, reset=reset, coins=coins)

    @classmethod
    def ranker(cls, ranking: RankingState, countdown: int, coins: Optional[CoinState] = None) -> "AgentState":
        return cls(role=Role.RANKING, ranking=ranking, countdown=countdown, coins=coins)

    @classmethod
    def verifier(cls, rank: int, verify: VerifyState, coins: Optional[CoinState] = None) -> "AgentState":
        return cls(role=Role.VERIFYING, rank=rank, verify=verify, coins=coins)

    # ------------------------------------------------------------------
    # Role changes (the only writers of ``role``)
    # ------------------------------------------------------------------

    def become_resetting(self, reset: ResetState) -> None:
        self.role = Role.RESETTING
        self.reset = reset
        self.ranking = None
        self.countdown = None
        self.rank = None
        self.verify = None

    def become_ranking(self, ranking: RankingState, countdown: int) -> None:
        self.role = Role.RANKING
        self.ranking = ranking
        self.countdown = countdown
        self.reset = None
        self.rank = None
        self.verify = None

    def become_verifying(self, rank: int, verify: VerifyState) -> None:
        self.role = Role.VERIFYING
        self.rank = rank
        self.verify = verify
        self.reset = None
        self.ranking = None
        self.countdown = None

    def clone(self) -> "AgentState":
        return copy.deepcopy(self)
