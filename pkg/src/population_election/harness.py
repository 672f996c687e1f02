"""Experiment runner: seeded trials, stabilization measurement and CSV output.

Every trial derives its own 64-bit seed from the master seed with
``SeedSequence(master, spawn_key=(trial,))``; the trial seed in turn spawns
the scheduler, protocol and scenario streams. Trials are therefore independent
of execution order and of the worker count.
"""
import argparse
import csv
import json
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import IO, Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from tqdm import tqdm

from .config import (
    CALIBRATED,
    CONFIG_KEYS,
    RngMode,
    load_config,
    merge_cli_overrides,
    params_from_mapping,
)
from .engine import Simulator
from .exceptions import ConfigurationError, ExperimentIOError, ScenarioError, SimulationError
from .oracle import (
    DEFAULT_MONITORS,
    MONITORS,
    Trace,
    TraceRecorder,
    build_monitors,
    closure_violation,
    explore_soundness,
    stable_suffix_start,
)
from .orchestrator import validate_configuration
from .randomness import derive_trial_seed, spawn_generators
from .scenarios import SCENARIO_KINDS, Scenario, build_scenario, make_scenario
from .snapshot import save_configuration
from .utils import log_experiment_summary, setup_logging

logger = logging.getLogger(__name__)

CSV_VERSION_LINE = "# population-election csv v1"

BASE_COLUMNS = [
    "kind",
    "scenario",
    "n",
    "r",
    "rng_mode",
    "seed",
    "trial",
    "trial_seed",
    "total_interactions",
    "parallel_time",
    "stabilization_at",
    "full_resets",
    "soft_resets",
    "surrogate_at",
    "closure_violation",
    "first_top_at",
    "median_stabilization",
    "p95_stabilization",
    "stabilized_fraction",
]

DEFAULT_WINDOW_FACTOR = CALIBRATED.confirm_window
DEFAULT_HORIZON_FACTOR = CALIBRATED.stabilize


def default_confirm_window(n: int, r: int) -> int:
    """20 * (n^2 / r) * ln n, rounded up."""
    return CALIBRATED.interactions(DEFAULT_WINDOW_FACTOR, n, r)


def default_horizon(n: int, r: int) -> int:
    return CALIBRATED.interactions(DEFAULT_HORIZON_FACTOR, n, r)


def measure_stabilization(trace: Trace, confirm_window: int) -> Optional[int]:
    """Earliest step from which the leader is fixed and no full reset fires, for >= confirm_window steps."""
    if trace.length < confirm_window:
        return None
    start = stable_suffix_start(trace)
    if start is None or trace.length - start < confirm_window:
        return None
    return start


# ----------------------------------------------------------------------
# Trials
# ----------------------------------------------------------------------


@dataclass
class TrialRow:
    trial: int
    trial_seed: int
    total_interactions: int
    parallel_time: float
    stabilization_at: Optional[int]
    full_resets: int
    soft_resets: int
    surrogate_at: Optional[int]
    closure_violation: bool
    first_top_at: Optional[int]
    violations: Dict[str, Optional[int]] = field(default_factory=dict)


@dataclass(frozen=True)
class TrialSettings:
    confirm_window: int
    horizon: int
    monitors: Tuple[str, ...] = DEFAULT_MONITORS
    early_stop: bool = True
    trace_path: Optional[str] = None
    save_final: Optional[str] = None


def _write_trace(path: str, trace: Trace, trial_index: int) -> None:
    try:
        with open(path, "w", encoding="utf-8") as f:
            for index, kind, agent in trace.events:
                f.write(json.dumps({"interaction": index, "event": kind.value, "agents": [agent]}) + "\n")
    except OSError as e:
        raise ExperimentIOError(f"Could not write event trace '{path}': {e}", trial_index=trial_index)


def run_trial(scenario: Scenario, trial_index: int, settings: TrialSettings) -> TrialRow:
    """Run one seeded trial; the trace file and final snapshot are written for trial 0 only."""
    params = scenario.params
    trial_seed = derive_trial_seed(scenario.seed, trial_index)
    _, _, scenario_rng = spawn_generators(trial_seed)
    simulator = Simulator(params, seed=trial_seed)
    config = build_scenario(scenario, scenario_rng, simulator.ctx.partition)

    errors = validate_configuration(config.agents, simulator.ctx)
    if errors:
        raise ScenarioError(
            f"Scenario {scenario.label} produced an invalid configuration: " + "; ".join(errors[:5])
        )

    first = trial_index == 0
    recorder = TraceRecorder(
        initially_descended=[True] * params.n if scenario.clean_dc else None,
        keep_events=first and settings.trace_path is not None,
    )
    stop = None
    if settings.early_stop:
        window = settings.confirm_window

        def stop(_config):
            return recorder.stable_length() >= window

    result = simulator.run(
        config,
        horizon=settings.horizon,
        stop=stop,
        monitors=build_monitors(settings.monitors),
        observers=[recorder],
    )
    trace = recorder.trace
    result.stabilization_at = measure_stabilization(trace, settings.confirm_window)
    logger.debug(
        f"[TRIAL] {scenario.label} n={params.n} r={params.r} trial={trial_index}: "
        f"{result.total_interactions} interactions, stabilization_at={result.stabilization_at}"
    )

    if first and settings.trace_path:
        _write_trace(settings.trace_path, trace, trial_index)
    if first and settings.save_final:
        try:
            save_configuration(config, params, settings.save_final)
        except OSError as e:
            raise ExperimentIOError(
                f"Could not save final configuration '{settings.save_final}': {e}", trial_index=trial_index
            )

    return TrialRow(
        trial=trial_index,
        trial_seed=trial_seed,
        total_interactions=result.total_interactions,
        parallel_time=result.parallel_time,
        stabilization_at=result.stabilization_at,
        full_resets=result.full_resets,
        soft_resets=result.soft_resets,
        surrogate_at=trace.surrogate_at,
        closure_violation=closure_violation(trace),
        first_top_at=trace.first_top_at,
        violations={name: result.first_violation(name) for name in settings.monitors},
    )


# ----------------------------------------------------------------------
# Experiments
# ----------------------------------------------------------------------


@dataclass
class ExperimentRecord:
    scenario: Scenario
    settings: TrialSettings
    rows: List[TrialRow] = field(default_factory=list)

    @property
    def summary(self) -> Dict[str, Any]:
        return summarize(self.scenario, self.rows, self.settings.monitors)


def summarize(scenario: Scenario, rows: Sequence[TrialRow], monitors: Sequence[str]) -> Dict[str, Any]:
    """Summary statistics recomputable from the per-trial rows."""
    times = [row.stabilization_at for row in rows if row.stabilization_at is not None]
    return {
        "scenario": scenario.label,
        "n": scenario.params.n,
        "r": scenario.params.r,
        "trials": len(rows),
        "stabilized": len(times),
        "stabilized_fraction": len(times) / len(rows) if rows else 0.0,
        "median_stabilization": float(np.median(times)) if times else None,
        "p95_stabilization": float(np.percentile(times, 95)) if times else None,
        "full_resets": sum(row.full_resets for row in rows),
        "soft_resets": sum(row.soft_resets for row in rows),
        "closure_violations": sum(1 for row in rows if row.closure_violation),
        "monitor_violations": {
            name: sum(1 for row in rows if row.violations.get(name) is not None) for name in monitors
        },
    }


def run_experiment(
    scenario: Scenario,
    out: Union[str, IO[str], None] = None,
    confirm_window: Optional[int] = None,
    monitors: Sequence[str] = DEFAULT_MONITORS,
    early_stop: bool = True,
    workers: int = 1,
    trace_path: Optional[str] = None,
    save_final: Optional[str] = None,
    progress: bool = True,
) -> ExperimentRecord:
    """Execute ``scenario.trials`` seeded trials and optionally write the CSV to ``out``."""
    params = scenario.params
    build_monitors(monitors)
    settings = TrialSettings(
        confirm_window=confirm_window or default_confirm_window(params.n, params.r),
        horizon=scenario.horizon or default_horizon(params.n, params.r),
        monitors=tuple(monitors),
        early_stop=early_stop,
        trace_path=trace_path,
        save_final=save_final,
    )
    record = ExperimentRecord(scenario=scenario, settings=settings)
    logger.info(
        f"[TRIAL] {scenario.label} n={params.n} r={params.r}: {scenario.trials} trials, "
        f"horizon={settings.horizon}, window={settings.confirm_window}, workers={workers}"
    )

    rows: Dict[int, TrialRow] = {}
    bar = tqdm(
        total=scenario.trials,
        desc=f"{scenario.label} n={params.n} r={params.r}",
        unit="trial",
        disable=not progress,
    )
    with bar:
        if workers <= 1:
            for trial in range(scenario.trials):
                rows[trial] = _annotated(run_trial, scenario, trial, settings)
                bar.update(1)
        else:
            with ProcessPoolExecutor(max_workers=workers) as executor:
                futures = {
                    executor.submit(run_trial, scenario, trial, settings): trial
                    for trial in range(scenario.trials)
                }
                for future in as_completed(futures):
                    trial = futures[future]
                    try:
                        rows[trial] = future.result()
                    except ExperimentIOError:
                        raise
                    except SimulationError as e:
                        raise type(e)(f"trial {trial}: {e}") from e
                    bar.update(1)

    record.rows = [rows[trial] for trial in sorted(rows)]
    if out is not None:
        write_csv([record], out)
    return record


def _annotated(func, scenario: Scenario, trial: int, settings: TrialSettings) -> TrialRow:
    try:
        return func(scenario, trial, settings)
    except ExperimentIOError:
        raise
    except SimulationError as e:
        raise type(e)(f"trial {trial}: {e}") from e


# ----------------------------------------------------------------------
# CSV
# ----------------------------------------------------------------------


def csv_columns(monitors: Iterable[str]) -> List[str]:
    return BASE_COLUMNS + [f"violation_{name}" for name in monitors]


def _cell(value: Any) -> Any:
    if value is None:
        return ""
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, float):
        return f"{value:.6g}" if not value.is_integer() else f"{value:.1f}"
    return value


def _scenario_cells(record: ExperimentRecord) -> Dict[str, Any]:
    scenario = record.scenario
    return {
        "scenario": scenario.label,
        "n": scenario.params.n,
        "r": scenario.params.r,
        "rng_mode": scenario.params.rng_mode.value,
        "seed": scenario.seed,
    }


def _trial_cells(record: ExperimentRecord, row: TrialRow) -> Dict[str, Any]:
    cells = {"kind": "trial", **_scenario_cells(record)}
    cells.update(
        trial=row.trial,
        trial_seed=row.trial_seed,
        total_interactions=row.total_interactions,
        parallel_time=row.parallel_time,
        stabilization_at=row.stabilization_at,
        full_resets=row.full_resets,
        soft_resets=row.soft_resets,
        surrogate_at=row.surrogate_at,
        closure_violation=row.closure_violation,
        first_top_at=row.first_top_at,
    )
    for name, index in row.violations.items():
        cells[f"violation_{name}"] = index
    return cells


def _summary_cells(record: ExperimentRecord) -> Dict[str, Any]:
    summary = record.summary
    cells = {"kind": "summary", **_scenario_cells(record)}
    cells.update(
        total_interactions=sum(row.total_interactions for row in record.rows),
        full_resets=summary["full_resets"],
        soft_resets=summary["soft_resets"],
        closure_violation=summary["closure_violations"],
        median_stabilization=summary["median_stabilization"],
        p95_stabilization=summary["p95_stabilization"],
        stabilized_fraction=summary["stabilized_fraction"],
    )
    for name, count in summary["monitor_violations"].items():
        cells[f"violation_{name}"] = count
    return cells


def _write_rows(records: Sequence[ExperimentRecord], f: IO[str]) -> None:
    monitors: List[str] = []
    for record in records:
        for name in record.settings.monitors:
            if name not in monitors:
                monitors.append(name)
    columns = csv_columns(monitors)
    f.write(CSV_VERSION_LINE + "\n")
    writer = csv.DictWriter(f, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for record in records:
        for row in record.rows:
            try:
                writer.writerow({k: _cell(v) for k, v in _trial_cells(record, row).items()})
            except OSError as e:
                raise ExperimentIOError(f"Could not write CSV row: {e}", trial_index=row.trial)
        if record.rows:
            writer.writerow({k: _cell(v) for k, v in _summary_cells(record).items()})


def write_csv(records: Sequence[ExperimentRecord], out: Union[str, IO[str]]) -> None:
    """Version line, header, one row per trial and a summary row per experiment."""
    if not isinstance(out, str):
        _write_rows(records, out)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="") as f:
            _write_rows(records, f)
    except ExperimentIOError:
        raise
    except OSError as e:
        raise ExperimentIOError(f"Could not write CSV '{out}': {e}")


def format_experiment_summary(record: ExperimentRecord) -> str:
    """Human-readable report for one experiment."""
    s = record.summary
    n = record.scenario.params.n

    def interactions(value: Optional[float]) -> str:
        if value is None:
            return "-"
        return f"{value:,.0f} interactions ({value / n:,.1f} parallel time)"

    lines = [
        f"Scenario: {s['scenario']} | n={s['n']} r={s['r']} | seed={record.scenario.seed}",
        "=" * 60,
        f"Trials:        {s['trials']}",
        f"Stabilized:    {s['stabilized']:>4}  ({s['stabilized_fraction']:.1%})",
        f"Median:        {interactions(s['median_stabilization'])}",
        f"p95:           {interactions(s['p95_stabilization'])}",
        f"Full resets:   {s['full_resets']:>4}",
        f"Soft resets:   {s['soft_resets']:>4}",
        f"Closure fails: {s['closure_violations']:>4}",
    ]
    violated = {name: count for name, count in s["monitor_violations"].items() if count}
    if violated:
        lines.append("")
        lines.append("Monitor violations:")
        for name, count in violated.items():
            lines.append(f"  {name}: {count} trial(s)")
    return "\n".join(lines)


# ----------------------------------------------------------------------
# Argument handling shared by run / sweep / check
# ----------------------------------------------------------------------


def resolve_r(token: Union[str, int], n: int) -> int:
    """Integer r or one of the tokens ``n/2``, ``sqrt``, ``log2`` (ln(n)^2 rounded), clamped to [1, n/2]."""
    text = str(token).strip().lower()
    if text == "n/2":
        value = n // 2
    elif text == "sqrt":
        value = round(math.sqrt(n))
    elif text == "log2":
        value = round(math.log(n) ** 2)
    elif text.isdigit():
        return int(text)
    else:
        raise ConfigurationError(f"Invalid r value '{token}' (expected an integer, n/2, sqrt or log2)")
    return max(1, min(value, n // 2))


def _as_list(value: Any) -> List[Any]:
    if value is None:
        return []
    if isinstance(value, (list, tuple)):
        return list(value)
    return [v.strip() for v in str(value).split(",") if v.strip()]


def _common_parser(description: str, sweep: bool = False) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description=description)
    parser.add_argument("--config", help="YAML or JSON configuration file (flags override its values)")
    list_hint = " (comma-separated list)" if sweep else ""
    parser.add_argument("--n", help=f"Population size{list_hint}")
    parser.add_argument("--r", help=f"Trade-off parameter; integer or n/2, sqrt, log2{list_hint}")
    parser.add_argument("--scenario", help="Scenario kind[:arg]: " + ", ".join(SCENARIO_KINDS))
    parser.add_argument("--trials", type=int, help="Number of trials (default 1)")
    parser.add_argument("--seed", type=int, help="Master seed (default 0)")
    parser.add_argument("--horizon", type=int, help="Maximum interactions per trial")
    parser.add_argument("--confirm-window", type=int, help="Stable-suffix length that confirms stabilization")
    parser.add_argument("--rng-mode", choices=[m.value for m in RngMode], help="Randomness mode")
    parser.add_argument("--out", help="CSV output path")
    parser.add_argument("--workers", type=int, help="Parallel worker processes (default 1)")
    parser.add_argument("--monitors", help="Comma-separated monitors: " + ", ".join(MONITORS))
    parser.add_argument(
        "--no-early-stop",
        dest="early_stop",
        action="store_false",
        default=None,
        help="Run every trial to its horizon",
    )
    parser.add_argument("--quiet", action="store_true", help="Disable progress bars")
    parser.add_argument("--debug", action="store_true", help="Enable debug logging")
    return parser


def _settings_from(parsed: argparse.Namespace) -> Dict[str, Any]:
    file_config: Dict[str, Any] = load_config(parsed.config) if parsed.config else {}
    cli = {key: getattr(parsed, key, None) for key in CONFIG_KEYS if key not in ("params", "logging")}
    merged = merge_cli_overrides(file_config, cli)
    setup_logging(merged, debug=parsed.debug)
    return merged


def _params_for(settings: Dict[str, Any], n: int, r: int):
    mapping = dict(settings.get("params") or {})
    mapping.update(n=n, r=r)
    if settings.get("rng_mode") is not None:
        mapping["rng_mode"] = settings["rng_mode"]
    return params_from_mapping(mapping)


def _single(values: List[Any], name: str, default: Any = None) -> Any:
    if not values:
        if default is None:
            raise ConfigurationError(f"'{name}' is required")
        return default
    if len(values) > 1:
        raise ConfigurationError(f"'{name}' takes a single value for 'run'; use 'sweep' for lists")
    return values[0]


def _experiment_kwargs(settings: Dict[str, Any]) -> Dict[str, Any]:
    monitors = _as_list(settings.get("monitors")) or list(DEFAULT_MONITORS)
    return {
        "confirm_window": settings.get("confirm_window"),
        "monitors": monitors,
        "early_stop": settings.get("early_stop", True) is not False,
        "workers": int(settings.get("workers") or 1),
    }


# ----------------------------------------------------------------------
# Entry points
# ----------------------------------------------------------------------


def main_run(args=None) -> int:
    parser = _common_parser("Run seeded stabilization trials for one (n, r, scenario)")
    parser.add_argument("--trace", help="Write trial 0's event trace as JSON lines")
    parser.add_argument("--save-final", help="Write trial 0's final configuration (JSON or YAML)")
    parsed = parser.parse_args(args)

    try:
        settings = _settings_from(parsed)
        n = int(_single(_as_list(settings.get("n")), "n"))
        r = resolve_r(_single(_as_list(settings.get("r")), "r", default="n/2"), n)
        params = _params_for(settings, n, r)
        scenario = make_scenario(
            settings.get("scenario") or "clean-triggered",
            params,
            seed=int(settings.get("seed") or 0),
            trials=int(settings.get("trials", 1)),
            horizon=settings.get("horizon"),
        )
        record = run_experiment(
            scenario,
            out=settings.get("out"),
            trace_path=settings.get("trace"),
            save_final=settings.get("save_final"),
            progress=not parsed.quiet,
            **_experiment_kwargs(settings),
        )
    except (ConfigurationError, FileNotFoundError, SimulationError) as e:
        print(f"Error: {e}")
        return 1

    print(format_experiment_summary(record))
    log_experiment_summary(record.summary, logger)
    if settings.get("out"):
        print(f"\nCSV written to {settings['out']}")
    return 0


def main_sweep(args=None) -> int:
    parser = _common_parser("Sweep the cartesian product of n and r values", sweep=True)
    parsed = parser.parse_args(args)

    try:
        settings = _settings_from(parsed)
        ns = [int(v) for v in _as_list(settings.get("n"))]
        if not ns:
            raise ConfigurationError("'n' is required")
        r_tokens = _as_list(settings.get("r")) or ["n/2"]
        kwargs = _experiment_kwargs(settings)
        records = []
        for n in ns:
            for r in sorted({resolve_r(token, n) for token in r_tokens}):
                scenario = make_scenario(
                    settings.get("scenario") or "clean-triggered",
                    _params_for(settings, n, r),
                    seed=int(settings.get("seed") or 0),
                    trials=int(settings.get("trials", 1)),
                    horizon=settings.get("horizon"),
                )
                record = run_experiment(scenario, progress=not parsed.quiet, **kwargs)
                print(format_experiment_summary(record))
                print()
                records.append(record)
        if settings.get("out"):
            write_csv(records, settings["out"])
            print(f"CSV written to {settings['out']}")
    except (ConfigurationError, FileNotFoundError, SimulationError) as e:
        print(f"Error: {e}")
        return 1
    return 0


CHECK_SCENARIOS = (
    "clean-triggered",
    "fully-dormant",
    "correct-ranked-verifiers",
    "duplicate-ranks:2",
    "corrupted-messages:3",
    "mixed-generations:2",
    "uniform-random",
)

# Hold from every start; leaderUnique is only an invariant from a correct ranking.
CHECK_MONITORS = ("populationSize", "typeInvariants", "rankFrozen", "ownerCopy")


def _check_monitors(scenario: Scenario) -> List[str]:
    if scenario.kind == "correct-ranked-verifiers":
        return list(CHECK_MONITORS) + ["leaderUnique"]
    return list(CHECK_MONITORS)


def main_check(args=None) -> int:
    """Run every monitor over a matrix of scenarios; exit status 1 on any violation."""
    parser = argparse.ArgumentParser(description="Invariant suite: all monitors over a scenario matrix")
    parser.add_argument("--n", default="8,16", help="Population sizes (comma-separated)")
    parser.add_argument("--r", default="2,n/2", help="r values (comma-separated)")
    parser.add_argument("--scenarios", default=",".join(CHECK_SCENARIOS), help="Scenario list")
    parser.add_argument("--trials", type=int, default=3, help="Trials per cell")
    parser.add_argument("--horizon", type=int, default=20000, help="Interactions per trial")
    parser.add_argument("--seed", type=int, default=0, help="Master seed")
    parser.add_argument("--rng-mode", choices=[m.value for m in RngMode], default=RngMode.TRUE_RANDOM.value)
    parser.add_argument("--debug", action="store_true", help="Enable debug logging")
    parsed = parser.parse_args(args)
    setup_logging({"logging": {"level": "WARNING"}}, debug=parsed.debug)

    failures = 0
    try:
        for n in [int(v) for v in _as_list(parsed.n)]:
            for r in sorted({resolve_r(t, n) for t in _as_list(parsed.r)}):
                params = params_from_mapping({"n": n, "r": r, "rng_mode": parsed.rng_mode})
                for text in _as_list(parsed.scenarios):
                    scenario = make_scenario(
                        text, params, seed=parsed.seed, trials=parsed.trials, horizon=parsed.horizon
                    )
                    record = run_experiment(
                        scenario, monitors=_check_monitors(scenario), early_stop=False, progress=False
                    )
                    summary = record.summary
                    bad = {k: v for k, v in summary["monitor_violations"].items() if v}
                    status = "OK" if not bad else "FAIL " + ", ".join(f"{k}={v}" for k, v in bad.items())
                    failures += bool(bad)
                    print(f"n={n:<4} r={r:<3} {scenario.label:<28} {status}")
    except (ConfigurationError, FileNotFoundError, SimulationError) as e:
        print(f"Error: {e}")
        return 1

    print(f"\n{failures} failing cell(s)" if failures else "\nAll invariant monitors held")
    return 1 if failures else 0


def main_soundness(args=None) -> int:
    """Exhaustive collision-detection search on the first rank group at shrunk sizes."""
    parser = argparse.ArgumentParser(description="Breadth-first soundness search for collision detection")
    parser.add_argument("--n", type=int, default=4, help="Population size (default 4)")
    parser.add_argument("--r", type=int, default=2, help="Group size parameter (default 2)")
    parser.add_argument("--ids-per-rank", type=int, default=2, help="Message ids per rank (default 2)")
    parser.add_argument("--sig-space", type=int, default=2, help="Signature range (default 2)")
    parser.add_argument("--sig-refresh", type=int, default=2, help="Signature refresh period (default 2)")
    parser.add_argument("--ranks", help="Comma-separated ranks of the group's agents (default: correct ranking)")
    parser.add_argument("--max-states", type=int, default=10 ** 7, help="State budget before overflow")
    parser.add_argument("--debug", action="store_true", help="Enable debug logging")
    parsed = parser.parse_args(args)
    setup_logging(None, debug=parsed.debug)

    try:
        params = params_from_mapping(
            {
                "n": parsed.n,
                "r": parsed.r,
                "ids_per_rank": parsed.ids_per_rank,
                "sig_space": parsed.sig_space,
                "sig_refresh": parsed.sig_refresh,
            }
        )
        ranks = [int(v) for v in _as_list(parsed.ranks)] or None
        report = explore_soundness(params, ranks=ranks, max_states=parsed.max_states)
    except (ConfigurationError, ValueError) as e:
        print(f"Error: {e}")
        return 1

    print(f"Ranks:          {list(report.ranks)}")
    print(f"States visited: {report.states_visited:,}")
    print(f"Exhausted:      {'yes' if report.exhausted else 'no'}")
    if report.overflow:
        print(f"Overflow:       state budget of {parsed.max_states:,} exceeded")
        return 1
    print(f"TOP reachable:  {'yes' if report.top_reachable else 'no'}")
    return 0


if __name__ == "__main__":
    sys.exit(main_run())
