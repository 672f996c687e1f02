"""Silent ranking: sheriff -> r deputies -> labels -> channel broadcast -> sleep -> rank.

A ranker is in one of six phases. All phases share ``channel`` (the largest
known label count of each deputy, merged by pairwise maximum) and ``rank``
(1 until the agent becomes Ranked). Ranks are lexicographic positions of
labels among the channel-certified label set.
"""
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple, Union

from .bootstrap_election import BootState, boot_step, check_boot_state, ensure_initialized, is_elected
from .config import Params
from .exceptions import ContractViolation

Label = Tuple[int, int]


@dataclass
class InElection:
    boot: BootState = field(default_factory=BootState)


@dataclass
class Sheriff:
    low_badge: int
    high_badge: int


@dataclass
class Deputy:
    deputy_id: int
    counter: int


@dataclass
class Recipient:
    label: Optional[Label] = None


@dataclass
class Sleeper:
    sleep_timer: int
    label: Optional[Label] = None


@dataclass
class Ranked:
    pass


Phase = Union[InElection, Sheriff, Deputy, Recipient, Sleeper, Ranked]


@dataclass
class RankingState:
    phase: Phase
    channel: List[int]
    rank: int = 1


def initial_ranking_state(params: Params) -> RankingState:
    """q0 of the ranking sub-protocol: about to enter leader election, channels zero."""
    return RankingState(phase=InElection(), channel=[0] * params.r, rank=1)


def own_label(state: RankingState) -> Optional[Label]:
    phase = state.phase
    if isinstance(phase, Deputy):
        return (phase.deputy_id, 1)
    if isinstance(phase, (Recipient, Sleeper)):
        return phase.label
    return None


def rank_from_label(label: Label, channel: Sequence[int]) -> int:
    """Lexicographic position of ``label`` among {(i, j) : j <= channel[i]}."""
    deputy_id, index = label
    if not 1 <= deputy_id <= len(channel) or not 1 <= index <= channel[deputy_id - 1]:
        raise ContractViolation(f"label {label} is not certified by channel {list(channel)}")
    return sum(channel[: deputy_id - 1]) + index


def _certified_rank(state: RankingState, channel: Sequence[int], n: int) -> int:
    label = own_label(state)
    if label is None or sum(channel) != n:
        return state.rank
    deputy_id, index = label
    if not 1 <= deputy_id <= len(channel) or not 1 <= index <= channel[deputy_id - 1]:
        return state.rank
    return rank_from_label(label, channel)


# ----------------------------------------------------------------------
# Sub-protocols
# ----------------------------------------------------------------------


def _promote_single_badge(state: RankingState) -> None:
    phase = state.phase
    if isinstance(phase, Sheriff) and phase.low_badge == phase.high_badge:
        state.phase = Deputy(deputy_id=phase.low_badge, counter=1)
        state.channel[phase.low_badge - 1] = 1


def elect_sheriff(
    u: RankingState,
    v: RankingState,
    params: Params,
    draw_u: Callable[[int], int],
    draw_v: Callable[[int], int],
) -> None:
    u_in = isinstance(u.phase, InElection)
    v_in = isinstance(v.phase, InElection)
    if u_in and v_in:
        u.phase.boot = ensure_initialized(u.phase.boot, draw_u, params)
        v.phase.boot = ensure_initialized(v.phase.boot, draw_v, params)
        boot_step(u.phase.boot, v.phase.boot)
        for state in (u, v):
            if is_elected(state.phase.boot):
                state.phase = Sheriff(low_badge=1, high_badge=params.r)
                _promote_single_badge(state)
    elif u_in:
        u.phase = Recipient()
    elif v_in:
        v.phase = Recipient()


def deputize(w: RankingState, x: RankingState) -> None:
    """Sheriff ``w`` hands the upper half of its badges to recipient ``x``."""
    sheriff = w.phase
    if sheriff.low_badge == sheriff.high_badge:
        _promote_single_badge(w)
        return
    x_high = sheriff.high_badge
    sheriff.high_badge = (sheriff.high_badge + sheriff.low_badge) // 2
    x.phase = Sheriff(low_badge=sheriff.high_badge + 1, high_badge=x_high)
    for z in (x, w):
        _promote_single_badge(z)


def labeling(w: RankingState, x: RankingState, params: Params) -> None:
    """Deputy ``w`` issues its next label to unlabeled recipient ``x``."""
    if sum(w.channel) < params.r:
        return
    deputy = w.phase
    if deputy.counter < params.label_pool:
        deputy.counter += 1
        w.channel[deputy.deputy_id - 1] = deputy.counter
        x.phase.label = (deputy.deputy_id, deputy.counter)


def _fall_asleep(state: RankingState) -> None:
    if isinstance(state.phase, (Sleeper, Ranked, InElection)):
        return
    state.phase = Sleeper(sleep_timer=1, label=own_label(state))


def _wake_ranked(state: RankingState, channel: Sequence[int], n: int) -> None:
    state.rank = _certified_rank(state, channel, n)
    state.phase = Ranked()


def sleep(u: RankingState, v: RankingState, params: Params, merged_channel: Sequence[int]) -> None:
    """Sleeper handling; ranks are computed against the merged channel of the pair."""
    sleepers = [s for s in (u, v) if isinstance(s.phase, Sleeper)]
    for s in sleepers:
        s.phase.sleep_timer = min(params.sleep_max, s.phase.sleep_timer + 1)
    x = sleepers[0]
    w = v if x is u else u
    if isinstance(w.phase, Ranked):
        _wake_ranked(x, merged_channel, params.n)
    elif any(s.phase.sleep_timer >= params.sleep_max for s in sleepers):
        _wake_ranked(x, merged_channel, params.n)
        _wake_ranked(w, merged_channel, params.n)
    else:
        _fall_asleep(w)


def _is_unlabeled_recipient(state: RankingState) -> bool:
    return isinstance(state.phase, Recipient) and state.phase.label is None


def assign_ranks_step(
    u: RankingState,
    v: RankingState,
    params: Params,
    draw_u: Callable[[int], int],
    draw_v: Callable[[int], int],
) -> None:
    """One AssignRanks interaction between two rankers (mutates both)."""
    if isinstance(u.phase, InElection) or isinstance(v.phase, InElection):
        elect_sheriff(u, v, params, draw_u, draw_v)
        return

    merged = [max(a, b) for a, b in zip(u.channel, v.channel)]
    if isinstance(u.phase, Sleeper) or isinstance(v.phase, Sleeper):
        sleep(u, v, params, merged)
    elif isinstance(u.phase, Sheriff) and isinstance(v.phase, Recipient):
        deputize(u, v)
    elif isinstance(v.phase, Sheriff) and isinstance(u.phase, Recipient):
        deputize(v, u)
    elif isinstance(u.phase, Deputy) and _is_unlabeled_recipient(v):
        labeling(u, v, params)
    elif isinstance(v.phase, Deputy) and _is_unlabeled_recipient(u):
        labeling(v, u, params)

    merged = [max(a, b) for a, b in zip(u.channel, v.channel)]
    u.channel[:] = merged
    v.channel[:] = merged
    if sum(merged) == params.n:
        _fall_asleep(u)
        _fall_asleep(v)


def check_ranking_state(state: RankingState, params: Params) -> List[str]:
    """Violated ranker sub-invariants (empty = valid)."""
    errors = []
    r, pool = params.r, params.label_pool
    if len(state.channel) != r:
        errors.append(f"channel has {len(state.channel)} entries, expected {r}")
    elif any(not 0 <= c <= pool for c in state.channel):
        errors.append(f"channel entries must lie in [0, {pool}]")
    if not 1 <= state.rank <= params.n:
        errors.append(f"rank {state.rank} outside [1, {params.n}]")
    phase = state.phase
    if isinstance(phase, InElection):
        errors.extend(check_boot_state(phase.boot, params))
    elif isinstance(phase, Sheriff):
        if not 1 <= phase.low_badge <= phase.high_badge <= r:
            errors.append(f"sheriff badges ({phase.low_badge}, {phase.high_badge}) not a subinterval of [1, {r}]")
    elif isinstance(phase, Deputy):
        if not 1 <= phase.deputy_id <= r:
            errors.append(f"deputy id {phase.deputy_id} outside [1, {r}]")
        elif len(state.channel) == r and state.channel[phase.deputy_id - 1] < 1:
            errors.append("deputy's own channel entry must be >= 1")
        if not 1 <= phase.counter <= pool:
            errors.append(f"deputy counter {phase.counter} outside [1, {pool}]")
    elif isinstance(phase, (Recipient, Sleeper)):
        if phase.label is not None:
            deputy_id, index = phase.label
            if not (1 <= deputy_id <= r and 1 <= index <= pool):
                errors.append(f"label {phase.label} outside [1, {r}] x [1, {pool}]")
        if isinstance(phase, Sleeper) and not 1 <= phase.sleep_timer <= params.sleep_max:
            errors.append(f"sleep timer {phase.sleep_timer} outside [1, {params.sleep_max}]")
    return errors
