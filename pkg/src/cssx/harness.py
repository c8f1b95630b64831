"""Seeded Monte Carlo experiments over the probabilistic guarantees.

Trial ``t`` always uses seed ``base_seed + t``, so per-trial records do
not depend on the number of worker threads.
"""

import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .cssp import Prepared, spectral_tail_bound
from .exceptions import BudgetExceededError, CsspError
from .oracle import DEFAULT_BUDGET, exhaustive_best

log = logging.getLogger(__name__)

CHECKS = ("lemma1", "tail_energy", "lemma4", "bounds", "oracle")
THREADS_ENV = "CSSX_THREADS"


def thread_count(default=1):
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return default
    try:
        return max(1, int(raw))
    except ValueError:
        log.warning("ignoring non-integer %s=%r", THREADS_ENV, raw)
        return default


def _trial(prepared, checks, base_seed, t):
    seed = base_seed + t
    k = prepared.config.k
    sample = prepared.sample(seed)
    omega = prepared.top[:, sample.indices] * sample.scales
    sigma_k = float(np.linalg.svd(omega, compute_uv=False)[k - 1])
    tail_fro, tail_spec = prepared.tail_norms(sample)

    record = {
        "trial": t,
        "seed": seed,
        "sigma_k_sampled": sigma_k,
        "lemma1_holds": sigma_k >= 0.5,
        "tail_fro": tail_fro,
        "tail_spec": tail_spec,
        "tail_energy_ratio": None,
        "lemma4_holds": tail_spec <= spectral_tail_bound(
            prepared.c, prepared.baseline_spec, prepared.baseline_fro
        ),
        "result": None,
        "error": None,
    }
    if prepared.baseline_fro > 0.0:
        record["tail_energy_ratio"] = tail_fro**2 / prepared.baseline_fro**2

    if "bounds" in checks or "oracle" in checks:
        try:
            result = prepared.run(seed)
        except CsspError as exc:
            record["error"] = f"{type(exc).__name__}: {exc}"
        else:
            record["result"] = result.to_dict()
            record["frobenius_bound_holds"] = result.frobenius_bound_holds()
            record["spectral_bound_holds"] = result.spectral_bound_holds()
            record["lemma2_holds"] = result.lemma2_holds()
            record["lemma3_holds"] = result.lemma3_holds()
    return record


def _fraction(records, key):
    return sum(bool(r.get(key)) for r in records) / len(records)


def _oracle_section(a, k, records, budget):
    try:
        best = exhaustive_best(a, k, "frobenius", budget=budget)
    except BudgetExceededError as exc:
        return {"error": str(exc), "selected": None, "residual_fro": None,
                "evaluated": None, "best_trial_residual_fro": None, "ratio": None}
    residuals = [r["result"]["residual_fro"] for r in records if r["result"] is not None]
    best_trial = min(residuals) if residuals else None
    ratio = None
    if best_trial is not None and best.residual > 0.0:
        ratio = best_trial / best.residual
    return {
        "error": None,
        "selected": [i + 1 for i in best.selected],
        "residual_fro": best.residual,
        "evaluated": best.evaluated,
        "best_trial_residual_fro": best_trial,
        "ratio": ratio,
    }


def run_experiment(a, config, trials, checks=CHECKS, descriptor=None, threads=None,
                   budget=DEFAULT_BUDGET):
    """Run ``trials`` seeded trials and aggregate the requested checks.

    Every aggregate key is present; checks that were not requested are
    ``None``.
    """
    unknown = set(checks) - set(CHECKS)
    if unknown:
        raise ValueError(f"unknown checks: {sorted(unknown)}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    threads = thread_count() if threads is None else max(1, threads)

    start = time.perf_counter()
    prepared = Prepared(a, config)
    log.info("bench: %d trials, c=%d, %d thread(s)", trials, prepared.c, threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        records = list(pool.map(lambda t: _trial(prepared, checks, config.seed, t), range(trials)))

    ran_full = "bounds" in checks or "oracle" in checks
    succeeded = [r for r in records if r["result"] is not None]
    ratios = [r["tail_energy_ratio"] for r in records if r["tail_energy_ratio"] is not None]
    report = {
        "matrix": descriptor,
        "shape": list(prepared.a.shape),
        "rank": prepared.factors.rank,
        "k": config.k,
        "c": prepared.c,
        "prob_kind": prepared.probs.kind,
        "base_seed": config.seed,
        "trials": trials,
        "checks": list(checks),
        "baseline_fro": prepared.baseline_fro,
        "baseline_spec": prepared.baseline_spec,
        "bound_hold_fraction_fro": _fraction(records, "frobenius_bound_holds") if ran_full else None,
        "bound_hold_fraction_spec": _fraction(records, "spectral_bound_holds") if ran_full else None,
        "lemma1_hold_fraction": _fraction(records, "lemma1_holds") if "lemma1" in checks else None,
        "lemma4_hold_fraction": _fraction(records, "lemma4_holds") if "lemma4" in checks else None,
        "mean_tail_energy_ratio": (
            float(np.mean(ratios)) if "tail_energy" in checks and ratios else None
        ),
        "failed_trials": sum(r["error"] is not None for r in records) if ran_full else None,
        "lemma2_violations": (
            sum(not r["lemma2_holds"] for r in succeeded) if ran_full else None
        ),
        "lemma3_violations": (
            sum(not r["lemma3_holds"] for r in succeeded) if ran_full else None
        ),
        "oracle": (
            _oracle_section(prepared.a, config.k, records, budget) if "oracle" in checks else None
        ),
        "records": records,
        "timings": {"total_seconds": time.perf_counter() - start, "threads": threads},
    }
    return report
