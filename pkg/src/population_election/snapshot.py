"""Configuration snapshots in JSON or YAML.

A snapshot holds the parameters it was produced with, the interaction count and
one record per agent. It is the file format of the ``custom:FILE`` scenario and
of ``run --save-final``.
"""
import json
import os
import time
from dataclasses import asdict
from typing import Any, Dict, Optional

import yaml

from .agent import AgentState, Role
from .bootstrap_election import BootState
from .collision import TOP, DCState, DCValue, is_top
from .config import Params
from .engine import Configuration
from .exceptions import ScenarioError
from .randomness import CoinState
from .ranking import Deputy, InElection, Ranked, RankingState, Recipient, Sheriff, Sleeper
from .reset import ResetState
from .verify import VerifyState

FORMAT = "population-election configuration v1"

_PHASES = {
    "in_election": InElection,
    "sheriff": Sheriff,
    "deputy": Deputy,
    "recipient": Recipient,
    "sleeper": Sleeper,
    "ranked": Ranked,
}
_PHASE_NAMES = {cls: name for name, cls in _PHASES.items()}


# ----------------------------------------------------------------------
# Encoding
# ----------------------------------------------------------------------


def _encode_dc(dc: DCValue) -> Any:
    if is_top(dc):
        return "TOP"
    return {
        "signature": dc.signature,
        "counter": dc.counter,
        "msgs": [list(cell) for cell in sorted(dc.held())],
        "observations": list(dc.observations),
    }


def _encode_ranking(state: RankingState) -> Dict[str, Any]:
    phase = state.phase
    record: Dict[str, Any] = {"phase": _PHASE_NAMES[type(phase)]}
    if isinstance(phase, InElection):
        record["boot"] = asdict(phase.boot)
    else:
        for key, value in asdict(phase).items():
            record[key] = list(value) if isinstance(value, tuple) else value
    record["channel"] = list(state.channel)
    record["rank"] = state.rank
    return record


def encode_agent(agent: AgentState) -> Dict[str, Any]:
    record: Dict[str, Any] = {"role": agent.role.value}
    if agent.role is Role.RESETTING:
        record["reset"] = asdict(agent.reset)
    elif agent.role is Role.RANKING:
        record["countdown"] = agent.countdown
        record["ranking"] = _encode_ranking(agent.ranking)
    else:
        record["rank"] = agent.rank
        record["verify"] = {
            "generation": agent.verify.generation,
            "probation_timer": agent.verify.probation_timer,
            "dc": _encode_dc(agent.verify.dc),
        }
    if agent.coins is not None:
        record["coins"] = {
            "coin": agent.coins.coin,
            "coins": list(agent.coins.coins),
            "coin_count": agent.coins.coin_count,
            "fresh": agent.coins.fresh,
        }
    return record


def configuration_to_dict(config: Configuration, params: Params) -> Dict[str, Any]:
    return {
        "format": FORMAT,
        "params": params.to_dict(),
        "interaction_count": config.interaction_count,
        "agents": [encode_agent(agent) for agent in config.agents],
    }


# ----------------------------------------------------------------------
# Decoding
# ----------------------------------------------------------------------


def _decode_dc(record: Any) -> DCValue:
    if record == "TOP":
        return TOP
    msgs: Dict[int, Dict[int, int]] = {}
    for i, j, content in record["msgs"]:
        msgs.setdefault(int(i), {})[int(j)] = int(content)
    return DCState(
        signature=int(record["signature"]),
        counter=int(record["counter"]),
        msgs=msgs,
        observations=[int(c) for c in record["observations"]],
    )


def _decode_ranking(record: Dict[str, Any]) -> RankingState:
    fields = dict(record)
    name = fields.pop("phase")
    channel = [int(c) for c in fields.pop("channel")]
    rank = int(fields.pop("rank", 1))
    if name not in _PHASES:
        raise ScenarioError(f"Unknown ranking phase '{name}'")
    if name == "in_election":
        phase = InElection(boot=BootState(**fields.get("boot", {})))
    else:
        if fields.get("label") is not None:
            fields["label"] = tuple(fields["label"])
        phase = _PHASES[name](**fields)
    return RankingState(phase=phase, channel=channel, rank=rank)


def decode_agent(record: Dict[str, Any]) -> AgentState:
    role = Role(record["role"])
    coins = None
    if record.get("coins") is not None:
        c = record["coins"]
        coins = CoinState(
            coin=int(c["coin"]),
            coins=tuple(int(b) for b in c["coins"]),
            coin_count=int(c["coin_count"]),
            fresh=int(c.get("fresh", 0)),
        )
    if role is Role.RESETTING:
        return AgentState.resetting(ResetState(**record["reset"]), coins=coins)
    if role is Role.RANKING:
        return AgentState.ranker(_decode_ranking(record["ranking"]), int(record["countdown"]), coins=coins)
    verify = record["verify"]
    return AgentState.verifier(
        int(record["rank"]),
        VerifyState(
            generation=int(verify["generation"]),
            probation_timer=int(verify["probation_timer"]),
            dc=_decode_dc(verify["dc"]),
        ),
        coins=coins,
    )


def configuration_from_dict(data: Dict[str, Any], params: Optional[Params] = None) -> Configuration:
    if not isinstance(data, dict) or "agents" not in data:
        raise ScenarioError("Snapshot must be a mapping with an 'agents' list")
    try:
        agents = [decode_agent(record) for record in data["agents"]]
    except (KeyError, TypeError, ValueError) as e:
        raise ScenarioError(f"Malformed agent record in snapshot: {e}")
    if params is not None and len(agents) != params.n:
        raise ScenarioError(f"Snapshot holds {len(agents)} agents but n={params.n}")
    return Configuration(agents=agents, interaction_count=int(data.get("interaction_count", 0)))


# ----------------------------------------------------------------------
# Files
# ----------------------------------------------------------------------


def _is_json(path: str) -> bool:
    return path.lower().endswith(".json")


def save_configuration(config: Configuration, params: Params, path: str) -> None:
    """Atomically write a snapshot (write-to-tmp + rename)."""
    data = configuration_to_dict(config, params)
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as f:
        if _is_json(path):
            json.dump(data, f, indent=2)
        else:
            yaml.safe_dump(data, f, sort_keys=False)
    for attempt in range(5):
        try:
            os.replace(tmp, path)
            return
        except PermissionError:
            if attempt == 4:
                raise
            time.sleep(0.01 * (attempt + 1))


def read_snapshot(path: str) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f) if _is_json(path) else yaml.safe_load(f)
    except FileNotFoundError:
        raise FileNotFoundError(f"Snapshot file '{path}' not found")
    except (json.JSONDecodeError, yaml.YAMLError) as e:
        raise ScenarioError(f"Invalid snapshot file format: {e}")
    if not isinstance(data, dict):
        raise ScenarioError("Invalid snapshot file format: top level must be a mapping")
    return data


def load_configuration(path: str, params: Optional[Params] = None) -> Configuration:
    """Load a snapshot; with ``params`` given, the agent count must equal ``params.n``."""
    return configuration_from_dict(read_snapshot(path), params)
