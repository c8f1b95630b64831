"""Exit criteria. Each test prints one PASS/FAIL line in the terminal summary."""

import json
import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from cssx.cli import main
from cssx.cssp import CsspConfig, boost, frobenius_bound_factor
from cssx.generators import gaussian
from cssx.harness import run_experiment
from cssx.io import write_matrix_market
from cssx.linalg import best_rank_k_residual, pseudoinverse, svd
from cssx.oracle import exhaustive_best
from cssx.rrqr import strong_rrqr_select
from cssx.sampling import CMode, choose_c, gram_approximation_error, leverage_probabilities

SQRT2 = math.sqrt(2.0)


def record(number, name, ok, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {name}: {detail}")
    assert ok, detail


@pytest.fixture(scope="module")
def suites():
    """Successful CsspResults from every suite that runs the full pipeline."""
    return {}


def _successes(report):
    return [r for r in report["records"] if r["result"] is not None]


def test_01_frobenius_bound(suites):
    a = gaussian(30, 20, seed=1)
    cfg = CsspConfig(k=3, c_mode=CMode.practical(4.0), seed=0)
    start = time.perf_counter()
    rep = run_experiment(a, cfg, 200, checks=["bounds"], threads=1)
    elapsed = time.perf_counter() - start
    suites["frobenius"] = rep
    assert rep["c"] == 20
    factor = 1 + 8 * math.sqrt(2 * 3 * 17 + 1)
    holds = sum(
        r["result"] is not None and r["result"]["residual_fro"] <= factor * rep["baseline_fro"]
        for r in rep["records"]
    ) / 200
    ok = holds >= 0.80 and elapsed < 10.0
    record(1, "Frobenius bound w.p. >= 0.8", ok, f"fraction={holds:.3f} (c=20), {elapsed:.2f}s")


def test_02_sample_rank_preservation():
    a = gaussian(10, 8, seed=2)
    cfg = CsspConfig(k=1, c_mode=CMode.theoretical(1.0), seed=0)
    start = time.perf_counter()
    rep = run_experiment(a, cfg, 500, checks=["lemma1"], threads=1)
    elapsed = time.perf_counter() - start
    frac = rep["lemma1_hold_fraction"]
    ok = rep["c"] == choose_c(1, CMode.theoretical(1.0)) == 10696 and frac >= 0.90 and elapsed < 30.0
    record(2, "sample rank: sigma_k >= 1/2 w.p. >= 0.9", ok,
           f"fraction={frac:.3f} (c={rep['c']}), {elapsed:.2f}s")


def test_03_04_deterministic_lemmas(suites):
    if "frobenius" not in suites:
        suites["frobenius"] = run_experiment(
            gaussian(30, 20, seed=1), CsspConfig(k=3, seed=0), 200, checks=["bounds"]
        )
    results = [r["result"] for r in _successes(suites["frobenius"])]
    # extra suite: both probability kinds, spiky and low-rank spectra, several k
    rng = np.random.default_rng(77)
    for trial in range(150):
        m, n = int(rng.integers(6, 25)), int(rng.integers(6, 25))
        a = rng.standard_normal((m, n)) * np.exp(rng.standard_normal(n))
        if trial % 3 == 0:
            a = rng.standard_normal((m, 4)) @ rng.standard_normal((4, n)) + 1e-3 * a
        k = int(rng.integers(1, min(4, m, n) + 1))
        cfg = CsspConfig(k=k, seed=trial, prob_kind=("hybrid", "leverage_only")[trial % 2],
                         c_mode=CMode.practical(float(rng.uniform(1, 6))))
        rep = run_experiment(a, cfg, 3, checks=["bounds"])
        results += [r["result"] for r in _successes(rep)]
    results += suites.get("oracle", [])

    slack = 1e-8
    lemma2_bad = lemma3_bad = 0
    for r in results:
        inv = 1.0 / r["sigma_k_selected"]
        if not (r["residual_fro"] <= r["baseline_fro"] + inv * r["tail_fro"] + slack
                and r["residual_spec"] <= r["baseline_spec"] + inv * r["tail_spec"] + slack):
            lemma2_bad += 1
        k = len(r["selected"])
        if r["sigma_k_selected"] < r["sigma_k_sampled"] / math.sqrt(2 * k * (r["c_used"] - k) + 1):
            lemma3_bad += 1
    ok3 = lemma2_bad == 0 and len(results) > 500
    ACCEPTANCE_LINES.append(
        f"[{'PASS' if ok3 else 'FAIL'}]  3. per-run residual bound: "
        f"{lemma2_bad} violations in {len(results)} runs"
    )
    record(4, "RRQR sigma_k chain", lemma3_bad == 0 and ok3,
           f"{lemma3_bad} violations in {len(results)} runs")


def test_05_sampled_spectral_tail():
    a = gaussian(12, 10, seed=5)
    rep = run_experiment(a, CsspConfig(k=2, c_mode=CMode.explicit(32), seed=0), 300,
                         checks=["lemma4"], threads=1)
    frac = rep["lemma4_hold_fraction"]
    bound = rep["baseline_spec"] + 4 / 32**0.25 * rep["baseline_fro"]
    recount = sum(r["tail_spec"] <= bound for r in rep["records"]) / 300
    ok = frac >= 0.90 and frac == recount
    record(5, "sampled spectral tail w.p. >= 0.9", ok, f"fraction={frac:.3f} (c=32)")


def test_06_unbiased_tail_energy():
    a = gaussian(10, 8, seed=6)
    trials = 10_000
    rep = run_experiment(a, CsspConfig(k=2, c_mode=CMode.explicit(20), seed=0), trials,
                         checks=["tail_energy"], threads=4)
    mean = rep["mean_tail_energy_ratio"]
    ok = abs(mean - 1.0) <= 3 / math.sqrt(trials)
    record(6, "unbiased tail energy: E||tail S1 D1||_F^2 = ||A-A_k||_F^2", ok,
           f"mean ratio={mean:.4f}, tolerance 0.03")


def test_07_oracle_sandwich(suites):
    lower_ok = upper_ok = True
    within = 0
    results = []
    for i in range(50):
        a = gaussian(8, 8, seed=700 + i)
        base = best_rank_k_residual(svd(a), 2, "frobenius")
        best = exhaustive_best(a, 2)
        assert best.evaluated == 28
        alg = boost(a, CsspConfig(k=2, seed=i, boost_trials=20))
        results.append(alg.to_dict())
        lower_ok &= best.residual >= base - 1e-12
        upper_ok &= alg.residual_fro >= best.residual - 1e-12
        within += alg.residual_fro <= frobenius_bound_factor(2, alg.c_used) * base
    suites["oracle"] = results
    ok = lower_ok and upper_ok and within / 50 >= 0.80
    record(7, "oracle sandwich on 50 8x8 matrices", ok,
           f"exhaustive>=baseline: {lower_ok}, algorithm>=exhaustive: {upper_ok}, "
           f"within bound: {within}/50")


def test_08_rrqr_contract():
    rng = np.random.default_rng(8)
    holds = 0
    for _ in range(100):
        k = int(rng.integers(1, 5))
        c = int(rng.integers(k, 41))
        m = rng.standard_normal((k, c)) * np.exp(rng.standard_normal(c))
        sel = strong_rrqr_select(m, SQRT2)
        sk = np.linalg.svd(m[:, list(sel.selected)], compute_uv=False)[-1]
        holds += sk >= np.linalg.svd(m, compute_uv=False)[k - 1] / math.sqrt(1 + 2 * k * (c - k))
    record(8, "strong RRQR sigma_k quotient bound", holds == 100, f"{holds}/100 instances")


def test_09_appendix_trend():
    k = 2
    f = svd(gaussian(40, 30, seed=9))
    a = f.top_right(k)
    assert np.linalg.norm(a, 2) <= 1 + 1e-12
    probs = leverage_probabilities(f, k)
    means = []
    for c in (8, 32, 128):
        means.append(np.mean([gram_approximation_error(a, probs, c, seed) for seed in range(200)]))
    ok = means[0] > means[1] > means[2] and means[2] <= 0.6 * means[0]
    record(9, "i.i.d. sampling: mean ||AA^T - CC^T||_2 decreasing in c", ok,
           "means at c=8,32,128: " + ", ".join(f"{m:.4f}" for m in means))


def test_10_numerical_core():
    rng = np.random.default_rng(10)
    worst_svd = worst_pinv = 0.0
    for i in range(1000):
        m, n = int(rng.integers(1, 51)), int(rng.integers(1, 41))
        a = rng.standard_normal((m, n))
        if i % 5 == 0 and min(m, n) > 1:
            r = int(rng.integers(1, min(m, n)))
            a = rng.standard_normal((m, r)) @ rng.standard_normal((r, n))
        fac = svd(a)
        rho = fac.rank
        norm_a = np.linalg.norm(a)
        errs = [
            np.linalg.norm(fac.u.T @ fac.u - np.eye(rho)) / rho,
            np.linalg.norm(fac.v.T @ fac.v - np.eye(rho)) / rho,
            np.linalg.norm(a - (fac.u * fac.sigma) @ fac.v.T) / norm_a,
        ]
        assert np.all(np.diff(fac.sigma) <= 0)
        assert np.all(fac.sigma > max(m, n) * np.finfo(float).eps * fac.sigma[0])
        worst_svd = max(worst_svd, *errs)

        p = pseudoinverse(a)
        worst_pinv = max(
            worst_pinv,
            np.linalg.norm(a @ p @ a - a) / norm_a,
            np.linalg.norm(p @ a @ p - p) / np.linalg.norm(p),
        )
    ok = worst_svd <= 1e-10 and worst_pinv <= 1e-8
    record(10, "SVD invariants (1e-10) and Moore-Penrose identities (1e-8)", ok,
           f"worst SVD error {worst_svd:.2e}, worst pinv error {worst_pinv:.2e}")


def test_11_determinism(capsys, tmp_path, monkeypatch):
    path = tmp_path / "a.mtx"
    write_matrix_market(path, gaussian(18, 14, seed=11))
    argv = ["select", "--input", str(path), "--k", "3", "--seed", "9", "--boost", "5"]
    outs = []
    for _ in range(2):
        assert main(argv) == 0
        obj = json.loads(capsys.readouterr().out)
        obj.pop("timings")
        outs.append(json.dumps(obj))
    select_ok = outs[0] == outs[1]

    bench = ["bench", "--gen", "gaussian:20x15", "--gen-seed", "3", "--k", "2", "--trials", "60",
             "--checks", "lemma1,tail_energy,lemma4,bounds,oracle"]
    records = []
    for threads in ("1", "8"):
        monkeypatch.setenv("CSSX_THREADS", threads)
        assert main(bench) == 0
        rep = json.loads(capsys.readouterr().out)
        assert rep["timings"]["threads"] == int(threads)
        records.append(json.dumps(rep["records"]))
    bench_ok = records[0] == records[1]
    record(11, "determinism", select_ok and bench_ok,
           f"select byte-identical: {select_ok}, bench 1 vs 8 threads identical: {bench_ok}")
