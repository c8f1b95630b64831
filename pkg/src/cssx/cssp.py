"""Two-stage column subset selection and its per-run bound terms."""

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from ._validation import check_matrix, check_norm, check_positive_int
from .exceptions import (
    AllTrialsFailedError,
    CsspError,
    RankDeficientError,
    SampleRankLossError,
)
from .linalg import (
    EPS,
    best_rank_k_residual,
    default_rank_tol,
    projection_residual,
    svd,
)
from .rrqr import DEFAULT_F, strong_rrqr_select
from .sampling import (
    DEFAULT_RESIDUAL_TOL,
    HYBRID,
    LEVERAGE_ONLY,
    CMode,
    apply_sample,
    choose_c,
    hybrid_probabilities,
    leverage_probabilities,
    sample_exactly_c,
)

LEMMA2_SLACK = 1e-8


@dataclass(frozen=True)
class CsspConfig:
    k: int
    c_mode: CMode = field(default_factory=CMode)
    f: float = DEFAULT_F
    seed: int = 0
    prob_kind: str = HYBRID
    rank_tol: float = None
    residual_tol: float = DEFAULT_RESIDUAL_TOL
    boost_trials: int = 1
    norm: str = "frobenius"

    def __post_init__(self):
        check_positive_int(self.k, "k")
        check_positive_int(self.boost_trials, "boost_trials")
        if not self.f >= 1.0:
            raise ValueError("f must be >= 1")
        if self.prob_kind not in (HYBRID, LEVERAGE_ONLY):
            raise ValueError(f"unknown prob_kind {self.prob_kind!r}")
        object.__setattr__(self, "norm", check_norm(self.norm))


@dataclass(frozen=True)
class CsspResult:
    """Outcome of one run. ``selected`` is 0-based and sorted ascending."""

    selected: tuple
    residual_fro: float
    residual_spec: float
    baseline_fro: float
    baseline_spec: float
    bound_factor_fro: float
    bound_spec_term1: float
    bound_spec_term2: float
    c_used: int
    sigma_k_sampled: float
    sigma_k_selected: float
    seed_used: int
    tail_fro: float
    tail_spec: float
    swaps: int
    prob_kind: str

    @property
    def bound_spec(self):
        return self.bound_spec_term1 + self.bound_spec_term2

    def frobenius_bound_holds(self):
        return self.residual_fro <= self.bound_factor_fro * self.baseline_fro

    def spectral_bound_holds(self):
        return self.residual_spec <= self.bound_spec

    def lemma2_holds(self, slack=LEMMA2_SLACK):
        """Deterministic residual bound through the sampled tail, both norms."""
        inv = 1.0 / self.sigma_k_selected
        return (
            self.residual_fro <= self.baseline_fro + inv * self.tail_fro + slack
            and self.residual_spec <= self.baseline_spec + inv * self.tail_spec + slack
        )

    def lemma3_holds(self):
        k = len(self.selected)
        return self.sigma_k_selected >= self.sigma_k_sampled / math.sqrt(
            2 * k * (self.c_used - k) + 1
        )

    def to_dict(self):
        """JSON-ready mapping with 1-based column indices."""
        out = asdict(self)
        out["selected"] = [i + 1 for i in self.selected]
        out["bound_spec"] = self.bound_spec
        return out


def frobenius_bound_factor(k, c):
    """``1 + 8 sqrt(2k(c-k) + 1)``."""
    if c < k:
        raise ValueError("c must be >= k")
    return 1.0 + 8.0 * math.sqrt(2 * k * (c - k) + 1)


def spectral_bound_terms(k, c, baseline_spec, baseline_fro):
    if c < k:
        raise ValueError("c must be >= k")
    root = math.sqrt(2 * k * (c - k) + 1)
    return (1.0 + 2.0 * root) * baseline_spec, 8.0 * root / c**0.25 * baseline_fro


def spectral_bound(k, c, baseline_spec, baseline_fro):
    """``(1 + 2r)||A-A_k||_2 + (8r / c^{1/4})||A-A_k||_F`` with ``r = sqrt(2k(c-k)+1)``."""
    return sum(spectral_bound_terms(k, c, baseline_spec, baseline_fro))


def spectral_tail_bound(c, baseline_spec, baseline_fro):
    """Bound on ``||Sigma_{rho-k} V_{rho-k}^T S1 D1||_2`` that holds w.p. 0.9."""
    return baseline_spec + 4.0 / c**0.25 * baseline_fro


class Prepared:
    """SVD and probabilities of ``A`` reused across seeds."""

    def __init__(self, a, config):
        self.a = check_matrix(a)
        self.config = config
        rank_tol = config.rank_tol
        if rank_tol is None:
            rank_tol = default_rank_tol(self.a.shape)
        self.factors = svd(self.a, rank_tol)
        k = config.k
        if k > self.factors.rank:
            raise RankDeficientError(
                f"k={k} exceeds numerical rank {self.factors.rank} of the input"
            )
        if config.prob_kind == HYBRID:
            self.probs = hybrid_probabilities(self.a, self.factors, k, config.residual_tol)
        else:
            self.probs = leverage_probabilities(self.factors, k)
        self.c = choose_c(k, config.c_mode)
        self.top = self.factors.top_right(k)
        self.tail = self.factors.tail_right(k)
        self.baseline_fro = best_rank_k_residual(self.factors, k, "frobenius")
        self.baseline_spec = best_rank_k_residual(self.factors, k, "spectral")

    def sample(self, seed):
        return sample_exactly_c(self.probs, self.c, seed)

    def tail_norms(self, sample):
        if self.tail.shape[0] == 0:
            return 0.0, 0.0
        t = apply_sample(self.tail, sample)
        return float(np.linalg.norm(t, "fro")), float(np.linalg.norm(t, 2))

    def run(self, seed):
        cfg = self.config
        k = cfg.k
        sample = self.sample(seed)
        omega = apply_sample(self.top, sample)
        sv = np.linalg.svd(omega, compute_uv=False)
        sigma_k_sampled = float(sv[k - 1])
        if sigma_k_sampled <= max(omega.shape) * EPS * sv[0]:
            raise SampleRankLossError(
                f"sampled V_k^T S1 D1 lost rank (sigma_k={sigma_k_sampled:.3g}) at seed {seed}"
            )

        sel = strong_rrqr_select(omega, cfg.f)
        original = sample.indices[list(sel.selected)]
        if np.unique(original).size != k:
            raise CsspError("strong RRQR selected two copies of one column")
        selected = tuple(sorted(int(i) for i in original))

        tail_fro, tail_spec = self.tail_norms(sample)
        term1, term2 = spectral_bound_terms(k, self.c, self.baseline_spec, self.baseline_fro)
        return CsspResult(
            selected=selected,
            residual_fro=projection_residual(self.a, selected, "frobenius"),
            residual_spec=projection_residual(self.a, selected, "spectral"),
            baseline_fro=self.baseline_fro,
            baseline_spec=self.baseline_spec,
            bound_factor_fro=frobenius_bound_factor(k, self.c),
            bound_spec_term1=term1,
            bound_spec_term2=term2,
            c_used=self.c,
            sigma_k_sampled=sigma_k_sampled,
            sigma_k_selected=sel.sigma_k_out,
            seed_used=int(seed),
            tail_fro=tail_fro,
            tail_spec=tail_spec,
            swaps=sel.swaps,
            prob_kind=self.probs.kind,
        )


def two_stage_select(a, config):
    """Select exactly ``config.k`` columns of ``a`` with seed ``config.seed``.

    Raises
    ------
    RankDeficientError
        ``k`` exceeds the numerical rank of ``a``.
    SampleRankLossError
        The randomized stage produced a rank-deficient ``V_k^T S1 D1``.
    """
    return Prepared(a, config).run(config.seed)


def _residual(result, norm):
    return result.residual_fro if norm == "frobenius" else result.residual_spec


def boost(a, config):
    """Best of ``config.boost_trials`` runs at seeds ``seed, seed + 1, ...``.

    Runs that hit :class:`SampleRankLossError` are skipped. Ties on the
    residual go to the earliest trial.
    """
    prepared = Prepared(a, config)
    best = None
    failures = 0
    for t in range(config.boost_trials):
        try:
            result = prepared.run(config.seed + t)
        except SampleRankLossError:
            failures += 1
            continue
        if best is None or _residual(result, config.norm) < _residual(best, config.norm):
            best = result
    if best is None:
        raise AllTrialsFailedError(f"all {failures} trials lost rank in the sampling stage")
    return best


