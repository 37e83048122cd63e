"""Experiment files, the Monte-Carlo runner, result tables and the CLI."""

from rcrm_ia.harness.experiment import load_experiment, parse_experiment, with_overrides
from rcrm_ia.harness.runner import run_experiment, run_trial, aggregate
from rcrm_ia.harness.results import emit_results, parse_results, render_results

__all__ = [
    "load_experiment",
    "parse_experiment",
    "with_overrides",
    "run_experiment",
    "run_trial",
    "aggregate",
    "emit_results",
    "parse_results",
    "render_results",
]
