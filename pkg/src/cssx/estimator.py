"""scikit-learn front end: column subset selection as unsupervised feature selection."""

import math

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.feature_selection import SelectorMixin
from sklearn.utils.validation import check_is_fitted, validate_data

from .cssp import CsspConfig, boost
from .linalg import projection_residual
from .rrqr import DEFAULT_F
from .sampling import CMode


class ColumnSubsetSelector(SelectorMixin, BaseEstimator):
    """Keep exactly ``k`` columns of ``X`` spanning it nearly as well as its top-k SVD.

    Columns are pre-filtered by leverage-score sampling and then narrowed to
    ``k`` with a strong rank-revealing QR. ``transform`` returns the chosen
    columns in their original order.

    Parameters
    ----------
    k : int
        Number of columns to keep.
    c_mode : {"practical", "theoretical", "explicit"}, default="practical"
    c : int, optional
        Number of sampling trials; overrides ``c_mode`` when given.
    c0 : float, default=1.0
        Constant in the theoretical trial count.
    alpha : float, default=4.0
        Multiplier in the practical trial count ``alpha * k * ln(k + 2)``.
    f : float, default=sqrt(2)
        Interchange threshold for the rank-revealing stage.
    prob : {"hybrid", "leverage_only"}, default="hybrid"
    n_trials : int, default=1
        Independent runs; the one with smallest residual is kept.
    norm : {"frobenius", "spectral"}, default="frobenius"
        Residual norm used to rank the runs.
    random_state : int, default=0

    Attributes
    ----------
    selected_ : ndarray of shape (k,)
        Sorted 0-based indices of the kept columns.
    result_ : CsspResult
    n_features_in_ : int
    """

    def __init__(self, k, *, c_mode="practical", c=None, c0=1.0, alpha=4.0,
                 f=DEFAULT_F, prob="hybrid", n_trials=1, norm="frobenius", random_state=0):
        self.k = k
        self.c_mode = c_mode
        self.c = c
        self.c0 = c0
        self.alpha = alpha
        self.f = f
        self.prob = prob
        self.n_trials = n_trials
        self.norm = norm
        self.random_state = random_state

    def _config(self):
        if self.c is not None:
            mode = CMode.explicit(self.c)
        else:
            mode = CMode(self.c_mode, c0=self.c0, alpha=self.alpha)
        return CsspConfig(
            k=self.k,
            c_mode=mode,
            f=self.f,
            seed=0 if self.random_state is None else int(self.random_state),
            prob_kind=self.prob,
            boost_trials=self.n_trials,
            norm=self.norm,
        )

    def fit(self, X, y=None):
        X = validate_data(self, X, dtype=np.float64)
        self.result_ = boost(X, self._config())
        self.selected_ = np.array(self.result_.selected, dtype=np.intp)
        return self

    def _get_support_mask(self):
        check_is_fitted(self, "selected_")
        mask = np.zeros(self.n_features_in_, dtype=bool)
        mask[self.selected_] = True
        return mask

    def score(self, X, y=None):
        """Negative Frobenius residual of ``X`` projected on the kept columns."""
        check_is_fitted(self, "selected_")
        X = validate_data(self, X, dtype=np.float64, reset=False)
        return -projection_residual(X, self.selected_, "frobenius")

    def relative_error(self):
        """Fit-time residual over ``||X - X_k||_F``; ``inf`` if that baseline is zero."""
        check_is_fitted(self, "result_")
        r = self.result_
        if r.baseline_fro == 0.0:
            return 1.0 if r.residual_fro == 0.0 else math.inf
        return r.residual_fro / r.baseline_fro
