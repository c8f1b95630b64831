"""Dense factorizations and norms shared by the selection stages.

Matrices are plain ``float64`` numpy arrays; :func:`check_matrix` is the
single gate that rejects non-finite input.
"""

from dataclasses import dataclass

import numpy as np

from ._validation import check_indices, check_matrix, check_norm
from .exceptions import ZeroMatrixError

EPS = np.finfo(np.float64).eps


def default_rank_tol(shape):
    """Relative rank tolerance ``max(m, n) * eps`` (multiplies sigma_1)."""
    return max(shape) * EPS


@dataclass(frozen=True)
class SvdFactors:
    """Thin SVD truncated to numerical rank.

    Attributes
    ----------
    u : ndarray of shape (m, rank)
    sigma : ndarray of shape (rank,)
        Nonincreasing, all above the rank tolerance.
    v : ndarray of shape (n, rank)
        Right singular vectors as columns (``V``, not ``V^T``).
    """

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray

    @property
    def rank(self):
        return self.sigma.shape[0]

    def top_right(self, k):
        """``V_k^T`` as a ``k x n`` array."""
        return self.v[:, :k].T

    def tail_right(self, k):
        """``Sigma_{rho-k} V_{rho-k}^T`` as a ``(rho-k) x n`` array."""
        return self.sigma[k:, None] * self.v[:, k:].T


def _freeze(*arrays):
    for arr in arrays:
        arr.flags.writeable = False


def svd(a, rank_tol=None):
    """Thin SVD of ``a`` keeping singular values above ``rank_tol * sigma_1``.

    Each right singular vector is sign-normalized so that its largest
    magnitude entry is nonnegative; the left vector is flipped with it.
    """
    a = check_matrix(a)
    if rank_tol is None:
        rank_tol = default_rank_tol(a.shape)
    if rank_tol < 0:
        raise ValueError("rank_tol must be nonnegative")
    if not np.any(a):
        raise ZeroMatrixError("SVD of an all-zero matrix has no nonzero singular values")

    u, s, vt = np.linalg.svd(a, full_matrices=False)
    rho = int(np.count_nonzero(s > rank_tol * s[0]))
    u = u[:, :rho].copy()
    v = vt[:rho].T.copy()
    s = s[:rho].copy()

    pivot = np.argmax(np.abs(v), axis=0)
    signs = np.where(v[pivot, np.arange(rho)] < 0, -1.0, 1.0)
    u *= signs
    v *= signs
    _freeze(u, s, v)
    return SvdFactors(u=u, sigma=s, v=v)


def singular_values(a):
    a = check_matrix(a)
    return np.linalg.svd(a, compute_uv=False)


def spectral_norm(a):
    a = check_matrix(a)
    if not np.any(a):
        return 0.0
    return float(np.linalg.norm(a, 2))


def frobenius_norm(a):
    a = check_matrix(a)
    return float(np.linalg.norm(a, "fro"))


def matrix_norm(a, norm):
    if check_norm(norm) == "spectral":
        return spectral_norm(a)
    return frobenius_norm(a)


def pseudoinverse(a, rank_tol=None):
    """Moore-Penrose inverse ``V Sigma^{-1} U^T`` over the retained spectrum."""
    a = check_matrix(a)
    if not np.any(a):
        return np.zeros(a.shape[::-1])
    f = svd(a, rank_tol)
    return (f.v / f.sigma) @ f.u.T


def column_basis(c, rank_tol=None):
    """Orthonormal basis for the column span of ``c`` (may have zero columns)."""
    c = check_matrix(c)
    if not np.any(c):
        return np.zeros((c.shape[0], 0))
    return svd(c, rank_tol).u


def projection_residual(a, col_indices, norm="frobenius"):
    """``||A - C C^+ A||`` where ``C`` holds the columns of ``a`` at ``col_indices``.

    Indices are 0-based. Positive rescaling of the chosen columns does not
    change the result, since only their span enters.
    """
    a = check_matrix(a)
    idx = check_indices(col_indices, a.shape[1])
    if idx.size == 0:
        return matrix_norm(a, norm)
    q = column_basis(a[:, idx])
    resid = a - q @ (q.T @ a)
    return matrix_norm(resid, norm)


def best_rank_k_residual(factors, k, norm="frobenius"):
    """``||A - A_k||``: ``sigma_{k+1}`` or the root tail energy."""
    if k < 1:
        raise ValueError("k must be >= 1")
    tail = factors.sigma[k:]
    if tail.size == 0:
        return 0.0
    if check_norm(norm) == "spectral":
        return float(tail[0])
    return float(np.sqrt(np.sum(tail**2)))
