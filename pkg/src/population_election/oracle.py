"""Configuration classifiers, trace recording, run monitors and exhaustive soundness search.

* ``classify`` places a configuration in the recovery hierarchy C0 > ... > C5.
* ``TraceRecorder`` observes a run and keeps what stabilization and closure
  measurements need: the leader after every step, full-reset steps and the
  first step at which the safe-set surrogate holds.
* Monitors are read-only predicates the engine evaluates after every step.
* ``explore_soundness`` enumerates every collision-detection configuration of
  one group reachable from clean initialization under every interaction order
  and every signature draw.
"""
import logging
from collections import deque
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Callable, Deque, Dict, List, Optional, Sequence, Set, Tuple, Type

from .agent import AgentState, Role
from .collision import TOP, CollisionRules, DCValue, GroupPartition, detect_collision_step, init_dc, is_top
from .config import Params
from .context import EventKind, ProtocolContext
from .engine import Configuration, Interaction, Monitor, Observer
from .exceptions import ConfigurationError
from .orchestrator import leader_of, validate_configuration
from .verify import GENERATIONS

logger = logging.getLogger(__name__)


# ----------------------------------------------------------------------
# Recovery hierarchy
# ----------------------------------------------------------------------


class HierarchyLevel(IntEnum):
    C0 = 0
    C1 = 1
    C2 = 2
    C3 = 3
    C4 = 4
    C5 = 5


def ranks_form_permutation(agents: Sequence[AgentState]) -> bool:
    ranks = sorted(a.rank for a in agents if a.role is Role.VERIFYING)
    return len(ranks) == len(agents) and ranks == list(range(1, len(agents) + 1))


def classify(agents: Sequence[AgentState]) -> HierarchyLevel:
    """Deepest hierarchy level whose definition holds."""
    if any(a.role is Role.RESETTING for a in agents):
        return HierarchyLevel.C0
    if any(a.role is not Role.VERIFYING for a in agents):
        return HierarchyLevel.C1
    if len({a.verify.generation for a in agents}) > 1:
        return HierarchyLevel.C2
    if any(a.verify.probation_timer != 0 for a in agents):
        return HierarchyLevel.C3
    if not ranks_form_permutation(agents):
        return HierarchyLevel.C4
    return HierarchyLevel.C5


def surrogate_holds(agents: Sequence[AgentState], descended: Sequence[bool]) -> bool:
    """Checkable sufficient condition for membership in the safe set.

    All agents verify with a correct ranking and occupy at most two consecutive
    generations i, i+1. Generation-i agents are off probation and generation-(i+1)
    agents hold collision-detection states descended from clean initialization
    since their last generation change. With a single generation, either every
    agent is off probation or every agent is descended.
    """
    if any(a.role is not Role.VERIFYING for a in agents):
        return False
    if not ranks_form_permutation(agents):
        return False
    generations = {a.verify.generation for a in agents}
    if len(generations) == 1:
        return all(a.verify.probation_timer == 0 for a in agents) or all(descended)
    if len(generations) != 2:
        return False
    a_gen, b_gen = sorted(generations)
    if (a_gen + 1) % GENERATIONS == b_gen:
        older, newer = a_gen, b_gen
    elif (b_gen + 1) % GENERATIONS == a_gen:
        older, newer = b_gen, a_gen
    else:
        return False
    for agent, is_descended in zip(agents, descended):
        if agent.verify.generation == older and agent.verify.probation_timer != 0:
            return False
        if agent.verify.generation == newer and not is_descended:
            return False
    return True


# ----------------------------------------------------------------------
# Trace recording
# ----------------------------------------------------------------------


@dataclass
class Trace:
    """Per-step observations of one run; index t is the state after t interactions."""

    leaders: List[Optional[int]] = field(default_factory=list)
    full_reset_steps: List[int] = field(default_factory=list)
    events: List[Tuple[int, EventKind, int]] = field(default_factory=list)
    surrogate_at: Optional[int] = None
    first_top_at: Optional[int] = None

    @property
    def length(self) -> int:
        return len(self.leaders) - 1


class TraceRecorder(Observer):
    """Observer building a ``Trace`` and tracking the current stable suffix.

    ``descended[k]`` is True once agent k's collision-detection state was set
    to the clean initial state and the agent has not left Verifying since.
    """

    def __init__(
        self,
        initially_descended: Optional[Sequence[bool]] = None,
        keep_events: bool = False,
        track_surrogate: bool = True,
    ):
        self.trace = Trace()
        self.initially_descended = initially_descended
        self.keep_events = keep_events
        self.track_surrogate = track_surrogate
        self.descended: List[bool] = []
        self.stable_since: Optional[int] = None
        self._last_reset = -1

    def start(self, config: Configuration) -> None:
        agents = config.agents
        if self.initially_descended is not None:
            self.descended = [
                bool(d) and a.role is Role.VERIFYING for d, a in zip(self.initially_descended, agents)
            ]
        else:
            self.descended = [False] * len(agents)
        leader = leader_of(agents)
        self.trace.leaders.append(leader)
        self.stable_since = 0 if leader is not None else None
        self._check_surrogate(config, 0)

    def observe(self, config: Configuration, interaction: Interaction) -> None:
        t = len(self.trace.leaders)
        reset_here = False
        for kind, index in interaction.events:
            if kind is EventKind.DC_INIT:
                self.descended[index] = True
            elif kind is EventKind.FULL_RESET:
                self.descended[index] = False
                reset_here = True
            elif kind is EventKind.TOP and self.trace.first_top_at is None:
                self.trace.first_top_at = t
            if self.keep_events:
                self.trace.events.append((t, kind, index))
        if reset_here:
            self.trace.full_reset_steps.append(t)

        leader = leader_of(config.agents)
        previous = self.trace.leaders[-1]
        self.trace.leaders.append(leader)
        if reset_here or leader is None:
            self.stable_since = None
        elif self.stable_since is None or leader != previous:
            self.stable_since = t
        self._check_surrogate(config, t)

    def stable_length(self) -> int:
        if self.stable_since is None:
            return -1
        return self.trace.length - self.stable_since

    def _check_surrogate(self, config: Configuration, t: int) -> None:
        if not self.track_surrogate or self.trace.surrogate_at is not None:
            return
        if surrogate_holds(config.agents, self.descended):
            self.trace.surrogate_at = t
            logger.debug(f"[STABLE] surrogate holds at interaction {t}")


def safe_surrogate(trace: Trace) -> Optional[int]:
    return trace.surrogate_at


def stable_suffix_start(trace: Trace) -> Optional[int]:
    """Earliest t with a constant non-None leader and no full reset on [t, end]."""
    if not trace.leaders:
        return None
    end = len(trace.leaders) - 1
    final = trace.leaders[end]
    if final is None:
        return None
    resets = set(trace.full_reset_steps)
    t = end
    while t > 0 and trace.leaders[t - 1] == final and (t - 1) not in resets:
        t -= 1
    if t in resets:
        return None
    return t


def closure_violation(trace: Trace) -> bool:
    """True if, after the surrogate first held, the leader changed or a full reset fired."""
    start = trace.surrogate_at
    if start is None:
        return False
    if any(step > start for step in trace.full_reset_steps):
        return True
    leader = trace.leaders[start]
    return any(x != leader for x in trace.leaders[start:])


# ----------------------------------------------------------------------
# Monitors
# ----------------------------------------------------------------------


class PopulationSizeMonitor(Monitor):
    name = "populationSize"

    def check(self, config: Configuration, ctx: ProtocolContext) -> bool:
        return len(config.agents) == ctx.params.n


class TypeInvariantsMonitor(Monitor):
    name = "typeInvariants"

    def check(self, config: Configuration, ctx: ProtocolContext) -> bool:
        return not validate_configuration(config.agents, ctx)


class RankFrozenMonitor(Monitor):
    """A verifier's rank never changes while it stays Verifying."""

    name = "rankFrozen"

    def __init__(self):
        self._ranks: Dict[int, int] = {}

    def start(self, config: Configuration, ctx: ProtocolContext) -> None:
        self._ranks = {i: a.rank for i, a in enumerate(config.agents) if a.role is Role.VERIFYING}

    def check(self, config: Configuration, ctx: ProtocolContext) -> bool:
        ok = True
        current = {}
        for i, agent in enumerate(config.agents):
            if agent.role is not Role.VERIFYING:
                continue
            current[i] = agent.rank
            if i in self._ranks and self._ranks[i] != agent.rank:
                ok = False
        self._ranks = current
        return ok


class LeaderUniqueMonitor(Monitor):
    name = "leaderUnique"

    def check(self, config: Configuration, ctx: ProtocolContext) -> bool:
        return sum(1 for a in config.agents if a.role is Role.VERIFYING and a.rank == 1) <= 1


class OwnerCopyMonitor(Monitor):
    name = "ownerCopy"

    def check(self, config: Configuration, ctx: ProtocolContext) -> bool:
        for agent in config.agents:
            if agent.role is not Role.VERIFYING or is_top(agent.verify.dc):
                continue
            dc = agent.verify.dc
            own = dc.msgs.get(agent.rank, {})
            if any(dc.observations[j - 1] != content for j, content in own.items()):
                return False
        return True


MONITORS: Dict[str, Type[Monitor]] = {
    cls.name: cls
    for cls in (
        PopulationSizeMonitor,
        TypeInvariantsMonitor,
        RankFrozenMonitor,
        LeaderUniqueMonitor,
        OwnerCopyMonitor,
    )
}

DEFAULT_MONITORS = ("populationSize", "rankFrozen")


def build_monitors(names: Sequence[str]) -> List[Monitor]:
    unknown = [name for name in names if name not in MONITORS]
    if unknown:
        raise ConfigurationError(
            f"Unknown monitor(s): {', '.join(unknown)} (available: {', '.join(MONITORS)})"
        )
    return [MONITORS[name]() for name in names]


# ----------------------------------------------------------------------
# Exhaustive soundness search
# ----------------------------------------------------------------------


class _NeedDraw(Exception):
    def __init__(self, n_values: int):
        super().__init__(n_values)
        self.n_values = n_values


class ScriptedDraws:
    """Draw source replaying a fixed prefix; asks for a branch once it runs out."""

    def __init__(self, script: Sequence[int]):
        self.script = list(script)
        self.position = 0

    def __call__(self, n_values: int) -> int:
        if n_values <= 1:
            return 1
        if self.position >= len(self.script):
            raise _NeedDraw(n_values)
        value = self.script[self.position]
        self.position += 1
        return value


@dataclass
class SoundnessReport:
    top_reachable: bool
    states_visited: int
    exhausted: bool
    overflow: bool
    ranks: Tuple[int, ...] = ()


GroupState = Tuple[Tuple[int, DCValue], ...]


def _state_key(state: GroupState) -> Tuple:
    return tuple((rank, "TOP" if is_top(dc) else dc.key()) for rank, dc in state)


def _canonical(state: GroupState) -> GroupState:
    return tuple(sorted(state, key=lambda item: (item[0], _state_key((item,)))))


def _successors(
    state: GroupState,
    a: int,
    b: int,
    rules: CollisionRules,
) -> List[GroupState]:
    """Every successor of ``state`` when agent ``a`` initiates with ``b``, one per draw sequence."""
    results = []
    scripts: List[List[int]] = [[]]
    while scripts:
        script = scripts.pop()
        draws = ScriptedDraws(script)
        agents = [(rank, dc if is_top(dc) else dc.copy()) for rank, dc in state]
        (u_rank, u_dc), (v_rank, v_dc) = agents[a], agents[b]
        try:
            u_dc, v_dc = detect_collision_step(u_rank, u_dc, v_rank, v_dc, rules, draws, draws)
        except _NeedDraw as need:
            scripts.extend(script + [value] for value in range(1, need.n_values + 1))
            continue
        agents[a] = (u_rank, u_dc)
        agents[b] = (v_rank, v_dc)
        results.append(tuple(agents))
    return results


def explore_soundness(
    params: Params,
    ranks: Optional[Sequence[int]] = None,
    max_states: int = 10 ** 7,
    log: Optional[logging.Logger] = None,
    progress: Optional[Callable[[int], None]] = None,
) -> SoundnessReport:
    """Breadth-first search over the collision-detection states of the first group.

    ``ranks`` defaults to the group's correct ranking; pass e.g. ``[1, 1]`` to
    plant a duplicate. Stops early once a TOP state is reached, or with
    ``overflow`` once more than ``max_states`` canonical states were seen.
    """
    log = log or logger
    partition = GroupPartition.build(params.n, params.r)
    rules = CollisionRules(partition, params)
    group = partition.blocks[0]
    ranks = tuple(ranks) if ranks is not None else group
    for rank in ranks:
        if rank not in group:
            raise ConfigurationError(f"rank {rank} is not in the first group {list(group)}")

    initial = _canonical(tuple((rank, init_dc(rank, rules)) for rank in ranks))
    visited: Set[Tuple] = {_state_key(initial)}
    frontier: Deque[GroupState] = deque([initial])
    pairs = [(a, b) for a in range(len(ranks)) for b in range(len(ranks)) if a != b]
    log.info(f"[BFS] exploring group {list(group)} with ranks {list(ranks)} ({len(pairs)} ordered pairs)")

    while frontier:
        state = frontier.popleft()
        for a, b in pairs:
            for successor in _successors(state, a, b, rules):
                if any(dc is TOP for _, dc in successor):
                    log.info(f"[BFS] TOP reached after {len(visited)} states")
                    return SoundnessReport(True, len(visited), False, False, ranks)
                successor = _canonical(successor)
                key = _state_key(successor)
                if key in visited:
                    continue
                visited.add(key)
                if len(visited) > max_states:
                    log.warning(f"[BFS] state budget of {max_states} exceeded")
                    return SoundnessReport(False, len(visited), False, True, ranks)
                frontier.append(successor)
                if progress is not None:
                    progress(len(visited))

    log.info(f"[BFS] frontier exhausted after {len(visited)} states; TOP unreachable")
    return SoundnessReport(False, len(visited), True, False, ranks)
