"""Initial configurations: clean starts and adversarial corruptions.

Scenario strings use the CLI form ``kind[:arg]``, e.g. ``duplicate-ranks:2``,
``corrupted-messages:3``, ``mixed-generations:2`` or ``custom:start.yaml``.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .agent import AgentState
from .bootstrap_election import BootState
from .collision import TOP, CollisionRules, DCState, GroupPartition, init_dc
from .config import Params, RngMode
from .engine import Configuration
from .exceptions import ScenarioError
from .randomness import CoinState
from .ranking import (
    Deputy,
    InElection,
    Ranked,
    RankingState,
    Recipient,
    Sheriff,
    Sleeper,
    initial_ranking_state,
)
from .reset import ResetState
from .snapshot import load_configuration
from .verify import GENERATIONS, VerifyState

logger = logging.getLogger(__name__)

CLEAN_TRIGGERED = "clean-triggered"
FULLY_DORMANT = "fully-dormant"
CORRECT_RANKED = "correct-ranked-verifiers"
DUPLICATE_RANKS = "duplicate-ranks"
CORRUPTED_MESSAGES = "corrupted-messages"
MIXED_GENERATIONS = "mixed-generations"
UNIFORM_RANDOM = "uniform-random"
CUSTOM = "custom"

SCENARIO_KINDS = (
    CLEAN_TRIGGERED,
    FULLY_DORMANT,
    CORRECT_RANKED,
    DUPLICATE_RANKS,
    CORRUPTED_MESSAGES,
    MIXED_GENERATIONS,
    UNIFORM_RANDOM,
    CUSTOM,
)

# Default argument of kinds that take one; custom requires its file.
DEFAULT_ARGS = {DUPLICATE_RANKS: "2", CORRUPTED_MESSAGES: "3", MIXED_GENERATIONS: "2"}

# Kinds whose verifiers start from clean collision-detection state.
CLEAN_DC_KINDS = (CORRECT_RANKED, DUPLICATE_RANKS, MIXED_GENERATIONS)


@dataclass(frozen=True)
class Scenario:
    kind: str
    params: Params
    seed: int = 0
    trials: int = 1
    horizon: Optional[int] = None
    arg: Optional[str] = None

    @property
    def label(self) -> str:
        return f"{self.kind}:{self.arg}" if self.arg is not None else self.kind

    @property
    def clean_dc(self) -> bool:
        return self.kind in CLEAN_DC_KINDS

    @property
    def count(self) -> int:
        return int(self.arg) if self.arg is not None else 0


def parse_scenario(text: str) -> Tuple[str, Optional[str]]:
    """Split ``kind[:arg]`` and validate it; returns (kind, arg)."""
    kind, _, arg = text.strip().partition(":")
    kind = kind.strip().lower().replace("_", "-")
    arg = arg.strip() or None
    if kind not in SCENARIO_KINDS:
        raise ScenarioError(f"Unknown scenario '{text}' (expected one of: {', '.join(SCENARIO_KINDS)})")
    if kind == CUSTOM:
        if not arg:
            raise ScenarioError("Scenario 'custom' needs a snapshot file: custom:FILE")
        return kind, arg
    if kind in DEFAULT_ARGS:
        arg = arg or DEFAULT_ARGS[kind]
        if not arg.isdigit() or int(arg) < 1:
            raise ScenarioError(f"Scenario '{kind}' takes a positive integer argument (got '{arg}')")
        return kind, arg
    if arg is not None:
        raise ScenarioError(f"Scenario '{kind}' takes no argument")
    return kind, None


def make_scenario(
    text: str,
    params: Params,
    seed: int = 0,
    trials: int = 1,
    horizon: Optional[int] = None,
) -> Scenario:
    kind, arg = parse_scenario(text)
    return Scenario(kind=kind, params=params, seed=seed, trials=trials, horizon=horizon, arg=arg)


# ----------------------------------------------------------------------
# Builders
# ----------------------------------------------------------------------


def _uniform(rng: np.random.Generator, low: int, high: int) -> int:
    """Uniform integer on [low, high]."""
    return int(rng.integers(low, high + 1))


def _verifier(rank: int, rules: CollisionRules, generation: int = 0, timer: int = 0) -> AgentState:
    return AgentState.verifier(rank, VerifyState(generation, timer, init_dc(rank, rules)))


def _clean_triggered(params: Params) -> List[AgentState]:
    agents = [AgentState.resetting(ResetState(params.r_max, params.d_max))]
    agents += [AgentState.ranker(initial_ranking_state(params), params.c_max) for _ in range(params.n - 1)]
    return agents


def _fully_dormant(params: Params) -> List[AgentState]:
    return [AgentState.resetting(ResetState(0, params.d_max)) for _ in range(params.n)]


def _correct_ranked(params: Params, rules: CollisionRules, rng: np.random.Generator) -> List[AgentState]:
    ranks = rng.permutation(params.n) + 1
    return [_verifier(int(rank), rules) for rank in ranks]


def _duplicate_ranks(params: Params, rules: CollisionRules, rng: np.random.Generator, k: int) -> List[AgentState]:
    if not 2 <= k <= params.n:
        raise ScenarioError(f"duplicate-ranks:{k} needs 2 <= k <= n (n={params.n})")
    distinct = params.n - k + 1
    shared = _uniform(rng, 1, distinct)
    ranks = [rank for rank in range(1, distinct + 1) if rank != shared] + [shared] * k
    order = rng.permutation(params.n)
    return [_verifier(ranks[int(i)], rules) for i in order]


def _corrupted_messages(params: Params, rules: CollisionRules, rng: np.random.Generator, k: int) -> List[AgentState]:
    agents = _correct_ranked(params, rules, rng)
    cells = [
        (index, i, j)
        for index, agent in enumerate(agents)
        for i, j, _ in sorted(agent.verify.dc.held())
        if i != agent.rank
    ]
    if k > len(cells):
        raise ScenarioError(
            f"corrupted-messages:{k} exceeds the {len(cells)} non-owner message cells at n={params.n}, r={params.r}"
        )
    for pick in rng.choice(len(cells), size=k, replace=False):
        index, i, j = cells[int(pick)]
        dc = agents[index].verify.dc
        sig = rules.sig_space(i)
        old = dc.msgs[i][j]
        new = _uniform(rng, 1, sig - 1)
        dc.msgs[i][j] = new + 1 if new >= old else new
    return agents


def _mixed_generations(
    params: Params, rules: CollisionRules, rng: np.random.Generator, spread: int
) -> List[AgentState]:
    if not 1 <= spread <= GENERATIONS:
        raise ScenarioError(f"mixed-generations:{spread} needs 1 <= spread <= {GENERATIONS}")
    base = _uniform(rng, 0, GENERATIONS - 1)
    ranks = rng.permutation(params.n) + 1
    return [
        _verifier(
            int(rank),
            rules,
            generation=(base + _uniform(rng, 0, spread - 1)) % GENERATIONS,
            timer=_uniform(rng, 0, params.p_max),
        )
        for rank in ranks
    ]


def _random_label(params: Params, rng: np.random.Generator):
    if rng.random() < 0.5:
        return None
    return (_uniform(rng, 1, params.r), _uniform(rng, 1, params.label_pool))


def _random_boot(params: Params, rng: np.random.Generator) -> BootState:
    if rng.random() < 0.5:
        return BootState()
    identifier = _uniform(rng, 1, params.id_space)
    le_count = _uniform(rng, 0, params.le_count)
    done = int(le_count == 0 and rng.random() < 0.5)
    return BootState(
        identifier=identifier,
        min_identifier=_uniform(rng, 1, identifier),
        le_count=le_count,
        leader_done=done,
        leader_bit=int(done and rng.random() < 0.5),
    )


def _random_ranking(params: Params, rng: np.random.Generator) -> RankingState:
    channel = [_uniform(rng, 0, params.label_pool) for _ in range(params.r)]
    choice = _uniform(rng, 0, 5)
    if choice == 0:
        phase = InElection(boot=_random_boot(params, rng))
    elif choice == 1:
        low, high = sorted((_uniform(rng, 1, params.r), _uniform(rng, 1, params.r)))
        phase = Sheriff(low_badge=low, high_badge=high)
    elif choice == 2:
        deputy_id = _uniform(rng, 1, params.r)
        phase = Deputy(deputy_id=deputy_id, counter=_uniform(rng, 1, params.label_pool))
        channel[deputy_id - 1] = max(1, channel[deputy_id - 1])
    elif choice == 3:
        phase = Recipient(label=_random_label(params, rng))
    elif choice == 4:
        phase = Sleeper(sleep_timer=_uniform(rng, 1, params.sleep_max), label=_random_label(params, rng))
    else:
        phase = Ranked()
    return RankingState(phase=phase, channel=channel, rank=_uniform(rng, 1, params.n))


def _random_dc(rank: int, rules: CollisionRules, rng: np.random.Generator):
    if rng.random() < 0.5:
        return TOP
    sig = rules.sig_space(rank)
    ids = rules.ids_per_rank(rank)
    observations = [_uniform(rng, 1, sig) for _ in range(ids)]
    msgs = {}
    for i in rules.partition.group_of(rank):
        held = rng.random(ids) < 0.5
        cells = {}
        for j in range(1, ids + 1):
            if held[j - 1]:
                cells[j] = observations[j - 1] if i == rank else _uniform(rng, 1, sig)
        if cells:
            msgs[i] = cells
    return DCState(
        signature=_uniform(rng, 1, sig),
        counter=_uniform(rng, 1, rules.sig_refresh(rank)),
        msgs=msgs,
        observations=observations,
    )


def _random_agent(params: Params, rules: CollisionRules, rng: np.random.Generator) -> AgentState:
    role = _uniform(rng, 0, 2)
    if role == 0:
        count = _uniform(rng, 0, params.r_max)
        delay = params.d_max if count > 0 else _uniform(rng, 0, params.d_max)
        return AgentState.resetting(ResetState(count, delay))
    if role == 1:
        return AgentState.ranker(_random_ranking(params, rng), _uniform(rng, 0, params.c_max))
    rank = _uniform(rng, 1, params.n)
    verify = VerifyState(
        generation=_uniform(rng, 0, GENERATIONS - 1),
        probation_timer=_uniform(rng, 0, params.p_max),
        dc=_random_dc(rank, rules, rng),
    )
    return AgentState.verifier(rank, verify)


def _random_coins(params: Params, rng: np.random.Generator) -> CoinState:
    width = params.coin_width
    return CoinState(
        coin=_uniform(rng, 0, 1),
        coins=tuple(int(b) for b in rng.integers(0, 2, size=width)),
        coin_count=_uniform(rng, 0, width - 1),
        fresh=_uniform(rng, 0, width),
    )


def build_scenario(
    scenario: Scenario,
    rng: np.random.Generator,
    partition: Optional[GroupPartition] = None,
) -> Configuration:
    """Build the scenario's initial configuration from the scenario stream ``rng``."""
    params = scenario.params
    rules = CollisionRules(partition or GroupPartition.build(params.n, params.r), params)
    kind = scenario.kind

    if kind == CUSTOM:
        config = load_configuration(scenario.arg, params)
        logger.debug(f"[TRIAL] loaded {len(config)} agents from {scenario.arg}")
        return config
    if kind == CLEAN_TRIGGERED:
        agents = _clean_triggered(params)
    elif kind == FULLY_DORMANT:
        agents = _fully_dormant(params)
    elif kind == CORRECT_RANKED:
        agents = _correct_ranked(params, rules, rng)
    elif kind == DUPLICATE_RANKS:
        agents = _duplicate_ranks(params, rules, rng, scenario.count)
    elif kind == CORRUPTED_MESSAGES:
        agents = _corrupted_messages(params, rules, rng, scenario.count)
    elif kind == MIXED_GENERATIONS:
        agents = _mixed_generations(params, rules, rng, scenario.count)
    elif kind == UNIFORM_RANDOM:
        agents = [_random_agent(params, rules, rng) for _ in range(params.n)]
        if params.rng_mode is RngMode.SYNTHETIC_COINS:
            for agent in agents:
                agent.coins = _random_coins(params, rng)
    else:
        raise ScenarioError(f"Unknown scenario kind '{kind}'")
    return Configuration(agents=agents)
