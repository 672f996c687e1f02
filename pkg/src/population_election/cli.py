#!/usr/bin/env python3
"""
Command Line Interface for the population-protocol leader-election simulator
"""

import sys
from typing import List, Optional


def print_help():
    """Print help information for the CLI tool."""
    print(
        """
Population Protocol Leader Election Simulator - CLI

Usage:
  population-election <command> [options]

Commands:
    run             Run seeded trials for one (n, r, scenario) and write CSV
    sweep           Run the cartesian product of n and r lists
    soundness-bfs   Exhaustive collision-detection search at shrunk sizes
    check           Run every invariant monitor over a scenario matrix
    space           Tabulate log2(#states) per role against (n^2/r) ln n
    help            Show this help message
    version         Show version information

Scenarios (--scenario):
    clean-triggered, fully-dormant, correct-ranked-verifiers,
    duplicate-ranks:K, corrupted-messages:K, mixed-generations:S,
    uniform-random, custom:FILE

Examples:
    # 50 trials from a clean trigger at n=16, r=4
    population-election run --n 16 --r 4 --trials 50 --seed 7 --out clean.csv

    # Recovery from a planted duplicate rank, event trace of trial 0
    population-election run --n 16 --r 4 --scenario duplicate-ranks:2 --trace events.jsonl

    # Sweep r over the sub-linear-time regime
    population-election sweep --n 8,16,32 --r 2,log2,n/2 --trials 20 --out sweep.csv

    # Model-checking-scale soundness, then with a planted duplicate
    population-election soundness-bfs
    population-election soundness-bfs --ranks 1,1

    # Settings from a file (flags override file values)
    population-election run --config config/config.template.yaml

For detailed help on a specific command:
  population-election <command> --help
"""
    )


def main(args: Optional[List[str]] = None):
    """Main CLI entry point."""
    if args is None:
        args = sys.argv[1:]

    if not args or args[0] in ["-h", "--help", "help"]:
        print_help()
        return 0

    if args[0] in ["-v", "--version", "version"]:
        from . import __version__

        print(f"Population Protocol Leader Election Simulator v{__version__}")
        return 0

    # Global flag passthrough (collect before subcommand dispatch)
    global_debug = False
    if "--debug" in args:
        global_debug = True
        args = [a for a in args if a != "--debug"]

    command = args[0]
    rest = args[1:]

    try:
        if command == "run":
            from .harness import main_run as cmd
        elif command == "sweep":
            from .harness import main_sweep as cmd
        elif command == "soundness-bfs":
            from .harness import main_soundness as cmd
        elif command == "check":
            from .harness import main_check as cmd
        elif command == "space":
            from .statespace import main as cmd
        else:
            print(f"Unknown command: {command}")
            print("Run 'population-election help' for usage information")
            return 1
    except ImportError as e:
        print(f"Error importing command module: {e}")
        return 1

    if global_debug:
        rest = ["--debug"] + rest
    return cmd(rest)


if __name__ == "__main__":
    sys.exit(main())
