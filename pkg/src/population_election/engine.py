"""Uniform-random-scheduler population simulator.

The scheduler draws ordered pairs (initiator, responder) of distinct agents
uniformly at random, in vectorised batches from a dedicated numpy stream. Each
step applies the top-level transition function to the chosen pair, ticks the
synthetic coins when that mode is active, and drains the transition events.
"""
import copy
import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .agent import AgentState
from .collision import GroupPartition
from .config import Params, RngMode
from .context import EventKind, ProtocolContext
from .exceptions import ConfigurationError
from .orchestrator import elect_leader_step
from .randomness import CoinState, Randomness, spawn_generators, tick_coin

__all__ = [
    "Configuration",
    "Interaction",
    "Monitor",
    "PairScheduler",
    "Params",
    "RunResult",
    "Simulator",
    "sample_pair",
    "sample_pairs",
]


DEFAULT_BATCH = 4096


def sample_pairs(rng: np.random.Generator, n: int, size: int) -> Tuple[np.ndarray, np.ndarray]:
    """``size`` ordered pairs of distinct 0-based agent indices, each pair w.p. 1/(n(n-1))."""
    if n < 2:
        raise ConfigurationError(f"Sampling a pair needs at least 2 agents (got n={n})")
    initiators = rng.integers(0, n, size=size)
    responders = rng.integers(0, n - 1, size=size)
    responders += responders >= initiators
    return initiators, responders


def sample_pair(rng: np.random.Generator, n: int) -> Tuple[int, int]:
    initiators, responders = sample_pairs(rng, n, 1)
    return int(initiators[0]), int(responders[0])


class PairScheduler:
    """Buffered stream of ordered pairs."""

    def __init__(self, rng: np.random.Generator, n: int, batch: int = DEFAULT_BATCH):
        if n < 2:
            raise ConfigurationError(f"Sampling a pair needs at least 2 agents (got n={n})")
        self.rng = rng
        self.n = n
        self.batch = batch
        self._pairs: List[Tuple[int, int]] = []
        self._cursor = 0

    def next_pair(self) -> Tuple[int, int]:
        if self._cursor >= len(self._pairs):
            initiators, responders = sample_pairs(self.rng, self.n, self.batch)
            self._pairs = list(zip(initiators.tolist(), responders.tolist()))
            self._cursor = 0
        pair = self._pairs[self._cursor]
        self._cursor += 1
        return pair


@dataclass
class Configuration:
    agents: List[AgentState]
    interaction_count: int = 0

    def __len__(self) -> int:
        return len(self.agents)

    def copy(self) -> "Configuration":
        return copy.deepcopy(self)


class Interaction(NamedTuple):
    index: int
    initiator: int
    responder: int
    events: Tuple[Tuple[EventKind, int], ...]


@dataclass
class RunResult:
    n: int
    total_interactions: int = 0
    full_resets: int = 0
    soft_resets: int = 0
    stale_draws: int = 0
    stabilization_at: Optional[int] = None
    monitor_violations: List[Tuple[int, str]] = field(default_factory=list)

    @property
    def parallel_time(self) -> float:
        return self.total_interactions / self.n

    def first_violation(self, monitor: str) -> Optional[int]:
        for index, name in self.monitor_violations:
            if name == monitor:
                return index
        return None


class Monitor:
    """Read-only named predicate evaluated after every step.

    ``check`` returns True while the property holds. ``start`` is called once
    per run before the first step.
    """

    name = "monitor"

    def start(self, config: Configuration, ctx: ProtocolContext) -> None:
        pass

    def check(self, config: Configuration, ctx: ProtocolContext) -> bool:
        raise NotImplementedError


class Observer:
    """Anything with ``start(config)`` and ``observe(config, interaction)``."""

    def start(self, config: Configuration) -> None:
        pass

    def observe(self, config: Configuration, interaction: Interaction) -> None:
        pass


StopPredicate = Callable[[Configuration], bool]

SOFT_RESET_EVENTS = (EventKind.SOFT_RESET, EventKind.GENERATION_ADOPTED)


class Simulator:
    """Drives a configuration under the uniform random scheduler.

    Scheduler and protocol randomness come from independent child streams of
    ``seed``; two simulators built from the same (params, seed, partition) and
    run on equal configurations evolve identically.
    """

    def __init__(
        self,
        params: Params,
        seed: Optional[int] = None,
        partition: Optional[GroupPartition] = None,
        logger: Optional[logging.Logger] = None,
    ):
        self.params = params
        self.logger = logger or logging.getLogger(__name__)
        scheduler_rng, protocol_rng, _ = spawn_generators(seed if seed is not None else _fresh_seed())
        self.ctx = ProtocolContext.build(params, Randomness(params.rng_mode, protocol_rng), partition)
        self.scheduler = PairScheduler(scheduler_rng, params.n)
        self.synthetic = params.rng_mode is RngMode.SYNTHETIC_COINS
        self.last_interaction: Optional[Interaction] = None

    def prepare(self, config: Configuration) -> None:
        """Give every agent a zeroed coin array when synthetic coins are active."""
        if not self.synthetic:
            return
        width = self.params.coin_width
        for agent in config.agents:
            if agent.coins is None:
                agent.coins = CoinState.zeros(width)

    def step(self, config: Configuration) -> Configuration:
        """Apply one interaction in place; the record is kept in ``last_interaction``."""
        i, j = self.scheduler.next_pair()
        u, v = config.agents[i], config.agents[j]
        if self.synthetic:
            if u.coins is None or v.coins is None:
                self.prepare(config)
            u_bit, v_bit = u.coins.coin, v.coins.coin

        elect_leader_step(u, v, self.ctx)

        if self.synthetic:
            u.coins = tick_coin(u.coins, v_bit)
            v.coins = tick_coin(v.coins, u_bit)

        config.interaction_count += 1
        events = tuple((kind, i if agent is u else j) for kind, agent in self.ctx.events)
        self.ctx.events.clear()
        self.last_interaction = Interaction(config.interaction_count, i, j, events)
        if events and self.logger.isEnabledFor(logging.DEBUG):
            self.logger.debug(
                f"[STEP] #{config.interaction_count} ({i}, {j}): "
                + ", ".join(f"{kind.value}@{idx}" for kind, idx in events)
            )
        return config

    def run(
        self,
        config: Configuration,
        horizon: int,
        stop: Optional[StopPredicate] = None,
        monitors: Sequence[Monitor] = (),
        observers: Iterable[Observer] = (),
    ) -> RunResult:
        """Step until ``stop`` holds (checked before every step) or ``horizon`` steps ran."""
        if horizon < 1:
            raise ConfigurationError(f"horizon must be >= 1 (got {horizon})")
        observers = list(observers)
        self.prepare(config)
        for monitor in monitors:
            monitor.start(config, self.ctx)
        for observer in observers:
            observer.start(config)

        result = RunResult(n=self.params.n)
        stale_before = self.ctx.randomness.stale_draws
        violated = set()
        start = config.interaction_count
        while config.interaction_count - start < horizon:
            if stop is not None and stop(config):
                break
            self.step(config)
            interaction = self.last_interaction
            for kind, index in interaction.events:
                if kind is EventKind.FULL_RESET:
                    result.full_resets += 1
                elif kind in SOFT_RESET_EVENTS:
                    result.soft_resets += 1
            for monitor in monitors:
                if monitor.name not in violated and not monitor.check(config, self.ctx):
                    violated.add(monitor.name)
                    result.monitor_violations.append((interaction.index - start, monitor.name))
                    self.logger.warning(f"[MONITOR] {monitor.name} violated at interaction {interaction.index - start}")
            for observer in observers:
                observer.observe(config, interaction)

        result.total_interactions = config.interaction_count - start
        result.stale_draws = self.ctx.randomness.stale_draws - stale_before
        if result.stale_draws:
            self.logger.debug(f"[COINS] {result.stale_draws} draws reused bits of an earlier draw")
        return result


def _fresh_seed() -> int:
    return int(np.random.SeedSequence().generate_state(1, dtype=np.uint64)[0])
