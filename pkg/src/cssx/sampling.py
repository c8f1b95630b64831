"""Column sampling probabilities and the i.i.d. with-replacement sampler."""

import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_indices, check_matrix, check_positive_int
from .exceptions import RankDeficientError

HYBRID = "hybrid"
LEVERAGE_ONLY = "leverage_only"

DEFAULT_RESIDUAL_TOL = 1e-12


@dataclass(frozen=True)
class ProbabilityVector:
    """Distribution over the ``n`` columns of ``A``.

    ``kind`` is ``"leverage_only"`` whenever the residual-energy half was
    dropped, including the automatic fallback for ``rank(A) <= k``.
    """

    p: np.ndarray
    kind: str

    def __len__(self):
        return self.p.shape[0]


@dataclass(frozen=True)
class ColumnSample:
    """Outcome of ``c`` sampling trials: ``S1`` and ``D1`` in index form.

    Column ``t`` of ``S1 D1`` is ``scales[t] * e_{indices[t]}``. Indices are
    0-based and may repeat.
    """

    indices: np.ndarray
    scales: np.ndarray

    @property
    def c(self):
        return self.indices.shape[0]


@dataclass(frozen=True)
class CMode:
    """How many columns the randomized stage draws.

    ``kind`` is one of ``"theoretical"`` (uses ``c0``), ``"practical"``
    (uses ``alpha``) or ``"explicit"`` (uses ``c``).
    """

    kind: str = "practical"
    c0: float = 1.0
    alpha: float = 4.0
    c: int = None

    def __post_init__(self):
        if self.kind not in ("theoretical", "practical", "explicit"):
            raise ValueError(f"unknown c mode {self.kind!r}")
        if self.kind == "theoretical" and not self.c0 >= 1:
            raise ValueError("c0 must be >= 1")
        if self.kind == "practical" and not self.alpha > 0:
            raise ValueError("alpha must be > 0")
        if self.kind == "explicit":
            check_positive_int(self.c, "c")

    @classmethod
    def theoretical(cls, c0=1.0):
        return cls("theoretical", c0=c0)

    @classmethod
    def practical(cls, alpha=4.0):
        return cls("practical", alpha=alpha)

    @classmethod
    def explicit(cls, c):
        return cls("explicit", c=c)


def _freeze(arr):
    arr.flags.writeable = False
    return arr


def _check_k(factors, k):
    k = check_positive_int(k, "k")
    if k > factors.rank:
        raise RankDeficientError(f"k={k} exceeds numerical rank {factors.rank}")
    return k


def leverage_probabilities(factors, k):
    """``p_i = ||(V_k)_(i)||^2 / k``."""
    k = _check_k(factors, k)
    lev = np.sum(factors.v[:, :k] ** 2, axis=1)
    return ProbabilityVector(p=_freeze(lev / lev.sum()), kind=LEVERAGE_ONLY)


def hybrid_probabilities(a, factors, k, residual_tol=DEFAULT_RESIDUAL_TOL):
    """Half leverage score, half share of the residual energy ``A - A V_k V_k^T``.

    Falls back to :func:`leverage_probabilities` when the residual energy is
    at most ``residual_tol * ||A||_F^2``.
    """
    a = check_matrix(a)
    k = _check_k(factors, k)
    vk = factors.v[:, :k]
    lev = np.sum(vk**2, axis=1)

    # residual columns formed explicitly: the difference of squared norms cancels badly
    resid = a - (a @ vk) @ vk.T
    resid_cols = np.sum(resid**2, axis=0)
    energy = resid_cols.sum()
    if energy <= residual_tol * np.sum(a**2):
        return leverage_probabilities(factors, k)

    p = 0.5 * lev / lev.sum() + 0.5 * resid_cols / energy
    return ProbabilityVector(p=_freeze(p / p.sum()), kind=HYBRID)


def choose_c(k, mode):
    """Number of sampling trials for rank parameter ``k``. Never below ``k``."""
    k = check_positive_int(k, "k")
    if mode.kind == "theoretical":
        t = 800.0 * mode.c0**2 * k
        c = math.ceil(2.0 * t * math.log(t))
    elif mode.kind == "practical":
        c = max(2 * k, math.ceil(mode.alpha * k * math.log(k + 2)))
    else:
        c = mode.c
    return max(int(c), k)


def sample_exactly_c(probs, c, seed):
    """Draw ``c`` column indices i.i.d. from ``probs`` by inverse CDF.

    One uniform from ``numpy.random.default_rng(seed)`` is consumed per
    trial, in order. A draw ``u`` maps to the first positive-probability
    bin whose cumulative upper edge is ``>= u``, so zero-probability
    columns are never returned and every scale is finite.
    """
    c = check_positive_int(c, "c")
    p = np.asarray(probs.p if isinstance(probs, ProbabilityVector) else probs, dtype=np.float64)
    support = np.flatnonzero(p > 0)
    if support.size == 0:
        raise ValueError("probability vector has no positive entries")
    edges = np.cumsum(p[support])
    edges[-1] = max(edges[-1], 1.0)

    u = np.random.default_rng(seed).random(c)
    indices = support[np.searchsorted(edges, u, side="left")]
    scales = 1.0 / np.sqrt(c * p[indices])
    return ColumnSample(indices=_freeze(indices.astype(np.int64)), scales=_freeze(scales))


def apply_sample(m, sample):
    """Form ``M S1 D1``: column ``t`` is ``scales[t] * m[:, indices[t]]``."""
    m = check_matrix(m)
    idx = check_indices(sample.indices, m.shape[1], allow_duplicates=True)
    return m[:, idx] * sample.scales


def gram_approximation_error(a, probs, c, seed):
    """``||A A^T - C C^T||_2`` for ``C = A S1 D1`` drawn with :func:`sample_exactly_c`."""
    a = check_matrix(a)
    cmat = apply_sample(a, sample_exactly_c(probs, c, seed))
    return float(np.linalg.norm(a @ a.T - cmat @ cmat.T, 2))
