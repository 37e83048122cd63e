#!/usr/bin/env python3
"""
Interference Alignment Experiment Command Line Interface

This module runs Monte-Carlo experiments, checks system properness and
compares the subproblem solver with the brute-force grid oracle.

Usage examples:
    python -m rcrm_ia run --config experiments/mimo_4x8_d1.toml
    python -m rcrm_ia run --config experiments/mimo_6x6_d1.toml --trials 5 --workers 4
    python -m rcrm_ia validate --config experiments/cellular_3x2.toml
    python -m rcrm_ia oracle --seed 7 --grid 60
"""
import argparse
import logging
import sys
from typing import List, Optional

import numpy as np

from rcrm_ia.algorithms.rcrm import init_zeroforcers
from rcrm_ia.cvxsolve.oracle import grid_oracle_precoders, grid_oracle_zeroforcers
from rcrm_ia.cvxsolve.subproblems import solve_precoders, solve_zeroforcers
from rcrm_ia.errors import InvalidConfig, RcrmError
from rcrm_ia.harness.experiment import load_experiment, with_overrides
from rcrm_ia.harness.results import emit_results
from rcrm_ia.harness.runner import run_experiment
from rcrm_ia.model.channels import gen_iid_channels, is_proper, proper_slack
from rcrm_ia.model.serialization import dump_channels, load_channels
from rcrm_ia.schemas.system import SystemConfig
from rcrm_ia.utils.logging_utils import log_error, set_verbosity
from rcrm_ia.utils.seeding import make_rng

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2


class UsageError(Exception):
    """Raised instead of argparse's own exit on bad command lines."""
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="rcrm_ia",
        description="Interference alignment by alternating nuclear-norm minimization",
        epilog="Example: python -m rcrm_ia run --config experiments/mimo_4x8_d1.toml",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="Run a Monte-Carlo experiment")
    run.add_argument("--config", required=True, help="TOML experiment file")
    run.add_argument("--seed", type=int, help="Override master_seed")
    run.add_argument("--out", help="Override output_path")
    run.add_argument("--format", choices=["csv", "json"], help="Override the result format")
    run.add_argument("--trials", type=int, help="Override the number of trials")
    run.add_argument("--workers", type=int, help="Worker processes for trials")
    run.add_argument("--dump-channels", help="Write every trial's channels to this JSON file")
    run.add_argument("--load-channels", help="Use channels from a dump instead of drawing them")
    run.add_argument("--verbose", action="store_true", help="Enable debug logging")

    validate = sub.add_parser("validate", help="Validate an experiment and report properness")
    validate.add_argument("--config", required=True, help="TOML experiment file")
    validate.add_argument("--verbose", action="store_true", help="Enable debug logging")

    oracle = sub.add_parser("oracle", help="Compare the subproblem solver with the grid oracle")
    oracle.add_argument("--config", help="Experiment file; only its eps and solver section are used")
    oracle.add_argument("--seed", type=int, default=0, help="Channel seed")
    oracle.add_argument("--grid", type=int, default=100, help="Grid points per angle")
    oracle.add_argument("--verbose", action="store_true", help="Enable debug logging")
    return parser


def cmd_run(args) -> int:
    spec = with_overrides(load_experiment(args.config), master_seed=args.seed, output_path=args.out,
                          format=args.format, trials=args.trials, workers=args.workers)
    channels = load_channels(args.load_channels) if args.load_channels else None
    rows, channel_sets = run_experiment(spec, channels=channels)
    emit_results(rows, spec.format, spec.output_path)
    if args.dump_channels:
        dump_channels(args.dump_channels, channel_sets)
    print(f"wrote {len(rows)} rows to {spec.output_path}")
    return EXIT_OK


def cmd_validate(args) -> int:
    spec = load_experiment(args.config)
    print(f"proper={'true' if is_proper(spec.system) else 'false'}")
    print(f"slack={proper_slack(spec.system)}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    if args.grid < 2:
        raise InvalidConfig(f"--grid must be at least 2, got {args.grid}")
    eps, options = 0.1, None
    if args.config:
        spec = load_experiment(args.config)
        eps, options = spec.system.eps, spec.solver
    cfg = SystemConfig(K=2, M_t=2, M_r=2, d=1, eps=eps, seed=args.seed)
    rng = make_rng(args.seed)
    ch = gen_iid_channels(cfg, rng)
    U = init_zeroforcers(cfg, rng)
    V, report_v = solve_precoders(ch, U, cfg, options=options)
    if V is None:
        print(f"precoders: solver status={report_v.status.value}")
        return EXIT_RUNTIME
    print(f"precoders: solver={report_v.objective:.6g} oracle={grid_oracle_precoders(ch, U, eps, args.grid):.6g} "
          f"status={report_v.status.value}")
    U2, report_u = solve_zeroforcers(ch, V, cfg, options=options)
    if U2 is None:
        print(f"zeroforcers: solver status={report_u.status.value}")
        return EXIT_RUNTIME
    print(f"zeroforcers: solver={report_u.objective:.6g} "
          f"oracle={grid_oracle_zeroforcers(ch, V, eps, args.grid):.6g} status={report_u.status.value}")
    return EXIT_OK


COMMANDS = {"run": cmd_run, "validate": cmd_validate, "oracle": cmd_oracle}


def cli_main(argv: Optional[List[str]] = None) -> int:
    """Entry point; returns 0 on success, 1 on configuration errors, 2 on runtime failures."""
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    set_verbosity(args.verbose)
    try:
        return COMMANDS[args.command](args)
    except (InvalidConfig, FileNotFoundError) as e:
        log_error("configuration problem", e, {"command": args.command})
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (RcrmError, OSError, np.linalg.LinAlgError) as e:
        log_error("run failed", e, {"command": args.command})
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(cli_main())
