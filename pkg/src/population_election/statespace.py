"""State-space accounting: log2 of the number of local states per role.

The count of a role is the product of its active fields' ranges; the agent's
state space is the disjoint union of its roles. Synthetic coins multiply every
state by the coin bit, the harvested bits and the cursor.
"""
import argparse
import math
from dataclasses import dataclass
from typing import Iterable, List

from .collision import CollisionRules, GroupPartition
from .config import Params, RngMode, params_from_mapping
from .exceptions import ConfigurationError
from .utils import setup_logging
from .verify import GENERATIONS


def log2_sum(values: Iterable[float]) -> float:
    """log2 of a sum of terms given by their log2."""
    values = list(values)
    top = max(values)
    return top + math.log2(sum(2.0 ** (v - top) for v in values))


@dataclass
class StateSpaceReport:
    n: int
    r: int
    rng_mode: str
    resetting_bits: float
    election_bits: float
    ranking_bits: float
    collision_bits: float
    verifying_bits: float
    coin_bits: float
    total_bits: float

    @property
    def interaction_bound(self) -> float:
        """(n^2 / r) * ln n, the order of the stabilization time."""
        return self.n * self.n / self.r * math.log(self.n)


def _election_bits(params: Params) -> float:
    ids = math.log2(params.id_space)
    initialized = 2 * ids + math.log2(params.le_count + 1) + 2
    return log2_sum([0.0, initialized])


def _ranking_bits(params: Params, election_bits: float) -> float:
    r, pool = params.r, params.label_pool
    label = log2_sum([0.0, math.log2(r * pool)])
    phases = [
        election_bits,
        math.log2(r * (r + 1) / 2),
        math.log2(r * pool),
        label,
        math.log2(params.sleep_max) + label,
        0.0,
    ]
    channel = r * math.log2(pool + 1)
    return math.log2(params.c_max + 1) + channel + math.log2(params.n) + log2_sum(phases)


def _collision_bits(group_size: int, rules: CollisionRules, rank: int) -> float:
    sig = rules.sig_space(rank)
    ids = rules.ids_per_rank(rank)
    tables = group_size * ids * math.log2(sig + 1) + ids * math.log2(sig)
    live = math.log2(sig) + math.log2(rules.sig_refresh(rank)) + tables
    return log2_sum([0.0, live])


def state_space_report(params: Params) -> StateSpaceReport:
    rules = CollisionRules(GroupPartition.build(params.n, params.r), params)
    resetting = math.log2(params.r_max + 1) + math.log2(params.d_max + 1)
    election = _election_bits(params)
    ranking = _ranking_bits(params, election)

    per_rank = []
    collision = 0.0
    for block in rules.partition.blocks:
        dc = _collision_bits(len(block), rules, block[0])
        collision = max(collision, dc)
        per_rank.extend([dc] * len(block))
    verifying = math.log2(GENERATIONS) + math.log2(params.p_max + 1) + log2_sum(per_rank)

    coins = 0.0
    if params.rng_mode is RngMode.SYNTHETIC_COINS:
        width = params.coin_width
        coins = 1 + width + math.log2(width)

    total = log2_sum([resetting, ranking, verifying]) + coins
    return StateSpaceReport(
        n=params.n,
        r=params.r,
        rng_mode=params.rng_mode.value,
        resetting_bits=resetting,
        election_bits=election,
        ranking_bits=ranking,
        collision_bits=collision,
        verifying_bits=verifying,
        coin_bits=coins,
        total_bits=total,
    )


def format_state_space_table(reports: List[StateSpaceReport]) -> str:
    header = (
        f"{'n':>6} {'r':>5} {'reset':>8} {'ranking':>10} {'dc/group':>12} "
        f"{'verify':>12} {'coins':>7} {'total':>12} {'(n^2/r)ln n':>14}"
    )
    lines = ["log2(#states) per role", header, "-" * len(header)]
    for rep in reports:
        lines.append(
            f"{rep.n:>6} {rep.r:>5} {rep.resetting_bits:>8.1f} {rep.ranking_bits:>10.1f} "
            f"{rep.collision_bits:>12.1f} {rep.verifying_bits:>12.1f} {rep.coin_bits:>7.1f} "
            f"{rep.total_bits:>12.1f} {rep.interaction_bound:>14.0f}"
        )
    return "\n".join(lines)


def main(args=None) -> int:
    from .harness import resolve_r

    parser = argparse.ArgumentParser(description="Tabulate the state-space / time trade-off over r")
    parser.add_argument("--n", required=True, help="Population sizes (comma-separated)")
    parser.add_argument("--r", default="1,sqrt,log2,n/2", help="r values or tokens n/2, sqrt, log2")
    parser.add_argument("--rng-mode", choices=[m.value for m in RngMode], default=RngMode.TRUE_RANDOM.value)
    parser.add_argument("--debug", action="store_true", help="Enable debug logging")
    parsed = parser.parse_args(args)
    logger = setup_logging({"logging": {"level": "WARNING"}}, debug=parsed.debug)

    try:
        reports = []
        for n in [int(v) for v in parsed.n.split(",") if v.strip()]:
            for r in sorted({resolve_r(token, n) for token in parsed.r.split(",") if token.strip()}):
                params = params_from_mapping({"n": n, "r": r, "rng_mode": parsed.rng_mode})
                reports.append(state_space_report(params))
                logger.debug(f"[SPACE] n={n} r={r}: {reports[-1].total_bits:.1f} bits")
    except (ConfigurationError, ValueError) as e:
        print(f"Error: {e}")
        return 1
    print(format_state_space_table(reports))
    return 0
