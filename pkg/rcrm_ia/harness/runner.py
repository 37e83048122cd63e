"""Monte-Carlo runner: every algorithm variant on every trial at every power."""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from rcrm_ia.algorithms.registry import get_registry
from rcrm_ia.config import get_settings
from rcrm_ia.core.metrics import rate_at_power, user_dims
from rcrm_ia.errors import InvalidConfig, RcrmError
from rcrm_ia.model.channels import ChannelSet, generate_channels
from rcrm_ia.schemas.experiment import AlgorithmVariant, ExperimentSpec, ResultRow
from rcrm_ia.utils.logging_utils import log_run_health, log_run_lifecycle, log_trial
from rcrm_ia.utils.seeding import derive_trial_seed, make_rng

logger = logging.getLogger(__name__)

# (variant label, P_db) -> (sum rate, mean dimensions per user), None when the run failed
TrialMetrics = Dict[Tuple[str, float], Optional[Tuple[float, float]]]


def _evaluate(ch: ChannelSet, spec: ExperimentSpec, f, P_db: float) -> Tuple[float, float]:
    cfg = spec.system
    rate = rate_at_power(ch, f, P_db, cfg.d, cfg.noise_var)
    dims = user_dims(ch, f, P_db, cfg.d, cfg.dim_threshold, cfg.noise_var)
    return rate, float(np.mean(dims))


def _run_variant(ch: ChannelSet, spec: ExperimentSpec, variant: AlgorithmVariant,
                 seed: int, trial: int) -> TrialMetrics:
    cfg = spec.system
    registry = get_registry()
    entry = registry.resolve(variant.tag)
    power_dependent = registry.spec(variant.tag).power_dependent
    out: TrialMetrics = {}
    start = time.perf_counter()
    try:
        if power_dependent:
            for P_db in cfg.power_grid_db:
                trace = entry(ch, cfg, variant.budget, make_rng(seed), P_db=P_db, options=spec.solver)
                out[(variant.label, P_db)] = _evaluate(ch, spec, trace.filters, P_db)
        else:
            trace = entry(ch, cfg, variant.budget, make_rng(seed), options=spec.solver)
            for P_db in cfg.power_grid_db:
                out[(variant.label, P_db)] = _evaluate(ch, spec, trace.filters, P_db)
        log_trial(trial, variant.label, True, time.perf_counter() - start)
    except RcrmError as exc:
        log_trial(trial, variant.label, False, time.perf_counter() - start, {"error": str(exc)})
        out = {(variant.label, P_db): None for P_db in cfg.power_grid_db}
    return out


def run_trial(spec: ExperimentSpec, trial: int,
              channels: Optional[ChannelSet] = None) -> Tuple[int, TrialMetrics, ChannelSet]:
    """One channel realization through every variant; picklable for worker processes.

    Every variant starts from the same initialization seed, so the baselines
    share their random filters and the budgets of one algorithm share their
    starting point.
    """
    seed = derive_trial_seed(spec.master_seed, trial)
    ch = channels if channels is not None else generate_channels(spec.system, make_rng(seed))
    init_seed = derive_trial_seed(seed, 1)
    metrics: TrialMetrics = {}
    for variant in spec.variants():
        metrics.update(_run_variant(ch, spec, variant, init_seed, trial))
    return trial, metrics, ch


def _check_spec(spec: ExperimentSpec) -> None:
    registry = get_registry()
    for tag in spec.algorithms:
        algo = registry.spec(tag)
        if not algo.supports(spec.system.channel_kind):
            raise InvalidConfig(f"algorithm {tag} does not support {spec.system.channel_kind.value} channels")


def aggregate(spec: ExperimentSpec, per_trial: Sequence[TrialMetrics]) -> List[ResultRow]:
    """Reduce per-trial metrics, in trial order, to one row per (variant, power)."""
    rows = []
    for variant in spec.variants():
        for P_db in spec.system.power_grid_db:
            values = [m[(variant.label, P_db)] for m in per_trial]
            ok = np.array([v for v in values if v is not None], dtype=float).reshape(-1, 2)
            failures = len(values) - ok.shape[0]
            if ok.shape[0]:
                mean, std, dims = float(np.mean(ok[:, 0])), float(np.std(ok[:, 0])), float(np.mean(ok[:, 1]))
            else:
                mean = std = dims = float("nan")
            rows.append(ResultRow(algorithm=variant.label, P_db=P_db, mean_sum_rate=mean,
                                  std_sum_rate=std, mean_user_dims=dims,
                                  trials=ok.shape[0], failures=failures))
    return rows


def run_experiment(spec: ExperimentSpec, channels: Optional[Sequence[ChannelSet]] = None,
                   workers: Optional[int] = None) -> Tuple[List[ResultRow], List[ChannelSet]]:
    """Run every trial of an experiment.

    Args:
        spec: The validated experiment.
        channels: Optional pre-drawn channels, one per trial (e.g. from a
            channel dump); the first ``spec.trials`` are used.
        workers: Worker processes; defaults to ``spec.workers`` then the
            ``RCRM_WORKERS`` setting. Results do not depend on it.

    Returns:
        The result rows and the channels of every trial, in trial order.
    """
    _check_spec(spec)
    if channels is not None:
        if len(channels) < spec.trials:
            raise InvalidConfig(f"{len(channels)} channel realizations for {spec.trials} trials")
        for ch in channels[:spec.trials]:
            ch.check_matches(spec.system)
    given = list(channels[:spec.trials]) if channels is not None else [None] * spec.trials
    n_workers = workers or spec.workers or get_settings().WORKERS

    log_run_lifecycle("start", {"name": spec.name, "trials": spec.trials, "workers": n_workers,
                                "variants": [v.label for v in spec.variants()]})
    results: Dict[int, Tuple[TrialMetrics, ChannelSet]] = {}
    if n_workers > 1:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            futures = [pool.submit(run_trial, spec, t, given[t]) for t in range(spec.trials)]
            for fut in futures:
                t, metrics, ch = fut.result()
                results[t] = (metrics, ch)
    else:
        for t in range(spec.trials):
            _, metrics, ch = run_trial(spec, t, given[t])
            results[t] = (metrics, ch)

    ordered = [results[t] for t in range(spec.trials)]
    rows = aggregate(spec, [m for m, _ in ordered])
    log_run_lifecycle("end", {"name": spec.name, "rows": len(rows),
                              "failures": sum(r.failures for r in rows)})
    log_run_health()
    return rows, [ch for _, ch in ordered]
