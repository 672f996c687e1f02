"""Randomness backends: seeded numpy streams and synthetic coins.

Seeds are split hierarchically with ``numpy.random.SeedSequence``: a master
seed yields one 64-bit seed per trial (``spawn_key=(trial_index,)``), and each
trial seed spawns independent child streams for the scheduler, protocol draws
and scenario construction. Reordering trials never changes any trial's streams.
"""
from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from .config import RngMode
from .exceptions import ContractViolation

SCHEDULER_STREAM = 0
PROTOCOL_STREAM = 1
SCENARIO_STREAM = 2


@dataclass(frozen=True)
class CoinState:
    """Per-agent synthetic coin: current coin bit plus harvested partner bits.

    ``fresh`` counts the bits harvested since the agent last drew, saturating
    at ``width``; a draw with ``fresh < width`` reuses bits of the previous one.
    """

    coin: int
    coins: Tuple[int, ...]
    coin_count: int
    fresh: int = 0

    @classmethod
    def zeros(cls, width: int) -> "CoinState":
        return cls(coin=0, coins=(0,) * width, coin_count=0)

    @property
    def width(self) -> int:
        return len(self.coins)

    def value(self) -> int:
        """The harvested bits read as a binary number, coins[0] most significant."""
        result = 0
        for bit in self.coins:
            result = (result << 1) | bit
        return result


def tick_coin(state: CoinState, partner_bit: int) -> CoinState:
    """Flip the coin and store the partner's pre-interaction bit at the cursor."""
    coins = list(state.coins)
    coins[state.coin_count] = partner_bit
    return CoinState(
        coin=1 - state.coin,
        coins=tuple(coins),
        coin_count=(state.coin_count + 1) % state.width,
        fresh=min(state.width, state.fresh + 1),
    )


def derive_trial_seed(master_seed: int, trial_index: int) -> int:
    """Documented splitting rule: SeedSequence(master, spawn_key=(trial,)) -> uint64."""
    seq = np.random.SeedSequence(master_seed, spawn_key=(trial_index,))
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def spawn_generators(seed: int) -> Tuple[np.random.Generator, np.random.Generator, np.random.Generator]:
    """Scheduler, protocol and scenario generators for one run."""
    children = np.random.SeedSequence(seed).spawn(3)
    return (
        np.random.default_rng(children[SCHEDULER_STREAM]),
        np.random.default_rng(children[PROTOCOL_STREAM]),
        np.random.default_rng(children[SCENARIO_STREAM]),
    )


class Randomness:
    """Uniform draws on [N] in either randomness mode.

    ``stale_draws`` counts synthetic draws made before the agent harvested a
    full word of new bits since its previous draw. Such a draw is correlated
    with the previous one; it is counted and tolerated, not refused.
    """

    def __init__(self, mode: RngMode, generator: Optional[np.random.Generator] = None):
        self.mode = mode
        self.generator = generator if generator is not None else np.random.default_rng()
        self.stale_draws = 0

    def draw_uniform(self, n_values: int, coins: Optional[CoinState] = None) -> int:
        """Return a value in 1..n_values.

        SyntheticCoins reduces the harvested bits modulo n_values. The caller
        resets ``coins.fresh`` after a draw (see ``consume``).
        """
        if n_values <= 1:
            return 1
        if self.mode is RngMode.TRUE_RANDOM:
            return int(self.generator.integers(1, n_values + 1))
        if coins is None:
            raise ContractViolation("synthetic-coin draw requires the agent's coin state")
        if coins.fresh < coins.width:
            self.stale_draws += 1
        return coins.value() % n_values + 1


def consume(coins: Optional[CoinState]) -> Optional[CoinState]:
    """Mark the harvested bits as used by a draw."""
    if coins is None or coins.fresh == 0:
        return coins
    return replace(coins, fresh=0)
