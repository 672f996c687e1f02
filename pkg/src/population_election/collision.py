"""Group-partitioned collision detection with circulating messages.

The rank space [n] is split into consecutive blocks ("groups"). Agents whose
ranks share a group exchange circulating messages ``(governing rank, id) ->
content``. An agent stamps its current signature onto every message it
governs and records the stamp in ``observations``; a message with a stale
stamp, two copies of one message, or two agents of equal rank reveal a rank
collision and turn both states into ``TOP``.
"""
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List, Sequence, Tuple, Union

from .config import Params


class _Top:
    """Error state of collision detection."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "TOP"

    def __reduce__(self):
        return (_Top, ())


TOP = _Top()

Messages = Dict[int, Dict[int, int]]


@dataclass
class DCState:
    """Non-error collision-detection state.

    ``msgs`` maps governing rank -> {message id -> content}; absent ids are
    empty cells. ``observations[j - 1]`` is the last content this agent stamped
    onto its own message ``j``.
    """

    signature: int
    counter: int
    msgs: Messages
    observations: List[int]

    def copy(self) -> "DCState":
        return DCState(
            signature=self.signature,
            counter=self.counter,
            msgs={i: dict(cells) for i, cells in self.msgs.items()},
            observations=list(self.observations),
        )

    def held(self) -> Iterator[Tuple[int, int, int]]:
        """Yield (governing rank, id, content) for every non-empty cell."""
        for i, cells in self.msgs.items():
            for j, content in cells.items():
                yield i, j, content

    def held_count(self) -> int:
        return sum(len(cells) for cells in self.msgs.values())

    def key(self) -> Tuple:
        return (
            self.signature,
            self.counter,
            tuple(sorted(self.held())),
            tuple(self.observations),
        )


DCValue = Union[DCState, _Top]


def is_top(value: DCValue) -> bool:
    return value is TOP


@dataclass(frozen=True)
class GroupPartition:
    """Partition of ranks 1..n into consecutive blocks of sizes in [floor(r/2), r]."""

    blocks: Tuple[Tuple[int, ...], ...]

    @classmethod
    def build(cls, n: int, r: int) -> "GroupPartition":
        blocks: List[List[int]] = []
        start = 1
        while start <= n:
            end = min(start + r - 1, n)
            blocks.append(list(range(start, end + 1)))
            start = end + 1
        if len(blocks) >= 2 and len(blocks[-1]) < r // 2:
            merged = blocks[-2] + blocks[-1]
            half = (len(merged) + 1) // 2
            blocks[-2:] = [merged[:half], merged[half:]]
        return cls(tuple(tuple(b) for b in blocks))

    @classmethod
    def from_blocks(cls, blocks: Sequence[Sequence[int]]) -> "GroupPartition":
        return cls(tuple(tuple(sorted(b)) for b in blocks))

    def __post_init__(self):
        index = {}
        for block_index, block in enumerate(self.blocks):
            for rank in block:
                index[rank] = block_index
        object.__setattr__(self, "_index", index)

    def group_index(self, rank: int) -> int:
        return self._index[rank]

    def group_of(self, rank: int) -> Tuple[int, ...]:
        return self.blocks[self._index[rank]]

    def rank_within_group(self, rank: int) -> int:
        return self.group_of(rank).index(rank) + 1

    def group_size(self, rank: int) -> int:
        return len(self.group_of(rank))


class CollisionRules:
    """Per-group sizes (signature range, message ids, refresh period) for one run."""

    def __init__(self, partition: GroupPartition, params: Params):
        self.partition = partition
        self.params = params
        sizes = [len(block) for block in partition.blocks]
        self._ids = [params.ids_per_rank_for(g) for g in sizes]
        self._sig = [params.sig_space_for(g) for g in sizes]
        self._refresh = [params.sig_refresh_for(g) for g in sizes]

    def ids_per_rank(self, rank: int) -> int:
        return self._ids[self.partition.group_index(rank)]

    def sig_space(self, rank: int) -> int:
        return self._sig[self.partition.group_index(rank)]

    def sig_refresh(self, rank: int) -> int:
        return self._refresh[self.partition.group_index(rank)]

    def same_group(self, a: int, b: int) -> bool:
        return self.partition.group_index(a) == self.partition.group_index(b)


def id_block(position: int, group_size: int, ids_per_rank: int) -> range:
    """Contiguous ids held initially by the agent at 1-based ``position`` in its group."""
    low = (position - 1) * ids_per_rank // group_size + 1
    high = position * ids_per_rank // group_size
    return range(low, high + 1)


def init_dc(rank: int, rules: CollisionRules) -> DCState:
    """The clean collision-detection state for an agent of ``rank``."""
    group = rules.partition.group_of(rank)
    ids = id_block(rules.partition.rank_within_group(rank), len(group), rules.ids_per_rank(rank))
    return DCState(
        signature=1,
        counter=1,
        msgs={i: {j: 1 for j in ids} for i in group},
        observations=[1] * rules.ids_per_rank(rank),
    )


# ----------------------------------------------------------------------
# Sub-protocols
# ----------------------------------------------------------------------


def shares_message(u: DCState, v: DCState) -> bool:
    for i, cells in u.msgs.items():
        other = v.msgs.get(i)
        if other and not cells.keys().isdisjoint(other.keys()):
            return True
    return False


def check_message_consistency(u_rank: int, u: DCState, v: DCState) -> bool:
    """False when ``v`` holds a message governed by ``u`` with a stale stamp."""
    cells = v.msgs.get(u_rank)
    if not cells:
        return True
    observations = u.observations
    return all(content == observations[j - 1] for j, content in cells.items())


def update_messages(
    u_rank: int,
    u: DCState,
    v: DCState,
    rules: CollisionRules,
    draw: Callable[[int], int],
) -> None:
    u.counter += 1
    if u.counter >= rules.sig_refresh(u_rank):
        u.signature = draw(rules.sig_space(u_rank))
        u.counter = 1
        own = u.msgs.get(u_rank)
        if own:
            for j in own:
                own[j] = u.signature
                u.observations[j - 1] = u.signature
    cells = v.msgs.get(u_rank)
    if cells:
        for j in cells:
            cells[j] = u.signature
            u.observations[j - 1] = u.signature


def balance_load(u: DCState, v: DCState) -> None:
    """Split every (governing rank, content) class of messages evenly by id order."""
    u_new: Messages = {}
    v_new: Messages = {}
    u_cells = 0
    v_cells = 0
    for i in sorted(set(u.msgs) | set(v.msgs)):
        by_content: Dict[int, List[int]] = {}
        for source in (u.msgs.get(i, {}), v.msgs.get(i, {})):
            for j, content in source.items():
                by_content.setdefault(content, []).append(j)
        u_row = u_new.setdefault(i, {})
        v_row = v_new.setdefault(i, {})
        for content in sorted(by_content):
            ids = sorted(by_content[content])
            half = len(ids) // 2
            floor_ids, ceil_ids = ids[:half], ids[half:]
            if u_cells > v_cells:
                u_ids, v_ids = floor_ids, ceil_ids
            else:
                u_ids, v_ids = ceil_ids, floor_ids
            for j in u_ids:
                u_row[j] = content
            for j in v_ids:
                v_row[j] = content
            u_cells += len(u_ids)
            v_cells += len(v_ids)
    # drop empty rows
    u.msgs = {i: row for i, row in u_new.items() if row}
    v.msgs = {i: row for i, row in v_new.items() if row}


def detect_collision_step(
    u_rank: int,
    u: DCValue,
    v_rank: int,
    v: DCValue,
    rules: CollisionRules,
    draw_u: Callable[[int], int],
    draw_v: Callable[[int], int],
) -> Tuple[DCValue, DCValue]:
    """One collision-detection interaction; returns the (possibly TOP) new states.

    Non-TOP states are updated in place. A pending TOP is left for the caller
    to resolve.
    """
    if is_top(u) or is_top(v):
        return u, v
    if not rules.same_group(u_rank, v_rank):
        return u, v
    if u_rank == v_rank or shares_message(u, v):
        return TOP, TOP
    if not check_message_consistency(u_rank, u, v) or not check_message_consistency(v_rank, v, u):
        return TOP, TOP
    update_messages(u_rank, u, v, rules, draw_u)
    update_messages(v_rank, v, u, rules, draw_v)
    balance_load(u, v)
    return u, v


def check_dc_state(rank: int, dc: DCValue, rules: CollisionRules) -> List[str]:
    """Violated collision-detection sub-invariants (empty = valid)."""
    if is_top(dc):
        return []
    errors = []
    sig = rules.sig_space(rank)
    ids = rules.ids_per_rank(rank)
    group = set(rules.partition.group_of(rank))
    if not 1 <= dc.signature <= sig:
        errors.append(f"signature {dc.signature} outside [1, {sig}]")
    if not 1 <= dc.counter <= rules.sig_refresh(rank):
        errors.append(f"counter {dc.counter} outside [1, {rules.sig_refresh(rank)}]")
    if len(dc.observations) != ids:
        errors.append(f"observations has {len(dc.observations)} entries, expected {ids}")
        return errors
    if any(not 1 <= c <= sig for c in dc.observations):
        errors.append("observation contents outside signature range")
    for i, j, content in dc.held():
        if i not in group:
            errors.append(f"message ({i}, {j}) governed outside the agent's group")
        elif not 1 <= j <= ids:
            errors.append(f"message id {j} outside [1, {ids}]")
        elif not 1 <= content <= sig:
            errors.append(f"message ({i}, {j}) content {content} outside [1, {sig}]")
        elif i == rank and content != dc.observations[j - 1]:
            errors.append(f"own message ({i}, {j}) disagrees with observations")
    return errors
