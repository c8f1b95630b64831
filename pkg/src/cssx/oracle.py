"""Reference selectors for checking the two-stage algorithm at small scale."""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_matrix, check_norm, check_positive_int
from .exceptions import BudgetExceededError, RankDeficientError
from .linalg import projection_residual, svd
from .rrqr import pivoted_qr_order

DEFAULT_BUDGET = 2_000_000


@dataclass(frozen=True)
class OracleResult:
    selected: tuple
    residual: float
    evaluated: int

    def to_dict(self):
        return {
            "selected": [i + 1 for i in self.selected],
            "residual": self.residual,
            "evaluated": self.evaluated,
        }


def exhaustive_best(a, k, norm="frobenius", budget=DEFAULT_BUDGET):
    """Minimize the projection residual over all ``C(n, k)`` column subsets.

    Subsets are visited in lexicographic order and only a strictly smaller
    residual replaces the incumbent, so ties go to the first tuple.
    """
    a = check_matrix(a)
    norm = check_norm(norm)
    n = a.shape[1]
    k = check_positive_int(k, "k")
    if k > n:
        raise ValueError(f"k={k} exceeds column count {n}")
    total = math.comb(n, k)
    if total > budget:
        raise BudgetExceededError(f"C({n},{k}) = {total} subsets exceeds budget {budget}")

    best, best_res = None, math.inf
    for subset in itertools.combinations(range(n), k):
        res = projection_residual(a, subset, norm)
        if res < best_res:
            best, best_res = subset, res
    return OracleResult(selected=best, residual=best_res, evaluated=total)


def uniform_baseline(a, k, trials, seed, norm="frobenius"):
    """Best of ``trials`` uniformly drawn ``k``-subsets.

    Subsets already tried are redrawn while unseen ones remain, so
    ``trials >= C(n, k)`` covers every subset.
    """
    a = check_matrix(a)
    norm = check_norm(norm)
    n = a.shape[1]
    k = check_positive_int(k, "k")
    trials = check_positive_int(trials, "trials")
    if k > n:
        raise ValueError(f"k={k} exceeds column count {n}")
    rng = np.random.default_rng(seed)
    total = math.comb(n, k)
    seen = set()
    best, best_res = None, math.inf
    for _ in range(trials):
        while True:
            subset = tuple(sorted(int(i) for i in rng.choice(n, size=k, replace=False)))
            if subset not in seen or len(seen) >= total:
                break
        seen.add(subset)
        res = projection_residual(a, subset, norm)
        if res < best_res:
            best, best_res = subset, res
    return OracleResult(selected=best, residual=best_res, evaluated=trials)


def pivoted_qr_baseline(a, k, norm="frobenius"):
    """First ``k`` pivots of column-pivoted QR applied to ``a`` itself."""
    a = check_matrix(a)
    k = check_positive_int(k, "k")
    if k > svd(a).rank:
        raise RankDeficientError(f"k={k} exceeds numerical rank")
    selected = tuple(sorted(pivoted_qr_order(a, k)))
    return OracleResult(
        selected=selected, residual=projection_residual(a, selected, norm), evaluated=1
    )
