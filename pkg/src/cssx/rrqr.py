"""Strong rank-revealing column selection for wide ``k x c`` matrices.

The selection starts from Householder QR with column pivoting and then
swaps a selected column for an unselected one while doing so grows
``|det|`` of the selected ``k x k`` block by more than a factor ``f``.
For a ``k x c`` input the lower-right block of the (zero-padded) R factor
is identically zero, so the interchange test reduces to the entries of
``W = A_sel^{-1} A_unsel``: swapping selected position ``i`` with
unselected column ``j`` scales the determinant by ``|W[i, j]|``.

On exit every ``|W[i, j]| <= f``, which gives::

    sigma_k(M) <= sigma_k(M[:, sel]) * ||[I, W]||_2
               <= sigma_k(M[:, sel]) * sqrt(1 + f**2 * k * (c - k))
"""

import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_matrix
from .exceptions import NonTerminationError, RankDeficientError
from .linalg import EPS

DEFAULT_F = math.sqrt(2.0)
PIVOT_TIE_RTOL = 1e-12


@dataclass(frozen=True)
class RrqrSelection:
    selected: tuple
    sigma_k_in: float
    sigma_k_out: float
    swaps: int

    def bound_holds(self, f, c):
        k = len(self.selected)
        return self.sigma_k_out >= self.sigma_k_in / math.sqrt(1.0 + f * f * k * (c - k))


def pivoted_qr_order(m, k):
    """First ``k`` pivots of Householder QR with column pivoting.

    Among columns whose remaining norm is within ``PIVOT_TIE_RTOL`` of the
    maximum, the lowest index wins.
    """
    r = check_matrix(m).copy()
    rows, cols = r.shape
    if k > min(rows, cols):
        raise RankDeficientError(f"cannot pivot {k} columns of a {rows}x{cols} matrix")
    perm = np.arange(cols)
    for step in range(k):
        norms = np.linalg.norm(r[step:, step:], axis=0)
        top = norms.max()
        if top == 0.0:
            raise RankDeficientError(f"matrix has rank {step} < {k}")
        pick = step + int(np.flatnonzero(norms >= top * (1.0 - PIVOT_TIE_RTOL))[0])
        r[:, [step, pick]] = r[:, [pick, step]]
        perm[[step, pick]] = perm[[pick, step]]

        x = r[step:, step]
        alpha = -math.copysign(np.linalg.norm(x), x[0])
        v = x.copy()
        v[0] -= alpha
        vnorm2 = v @ v
        if vnorm2 > 0.0:
            r[step:, step:] -= np.outer(v, (2.0 / vnorm2) * (v @ r[step:, step:]))
        r[step + 1:, step] = 0.0
    return perm[:k].tolist()


def _sigma_min(block):
    return float(np.linalg.svd(block, compute_uv=False)[-1])


def strong_rrqr_select(m, f=DEFAULT_F, max_swaps=None, rank_tol=None):
    """Pick ``k`` of the ``c`` columns of a ``k x c`` matrix ``m``.

    Parameters
    ----------
    m : array_like of shape (k, c), c >= k
        Must have full row rank.
    f : float, default sqrt(2)
        Interchange threshold, ``f >= 1``.
    max_swaps : int, optional
        Defaults to ``100 * k * c``.
    rank_tol : float, optional
        Relative tolerance on ``sigma_k / sigma_1``; defaults to
        ``max(k, c) * eps``.

    Returns
    -------
    RrqrSelection
        ``selected`` holds 0-based column positions in pivot order.
    """
    m = check_matrix(m)
    k, c = m.shape
    if c < k:
        raise ValueError(f"need at least as many columns as rows, got {k}x{c}")
    if not f >= 1.0:
        raise ValueError("f must be >= 1")
    if max_swaps is None:
        max_swaps = 100 * k * c
    if rank_tol is None:
        rank_tol = max(k, c) * EPS

    sv = np.linalg.svd(m, compute_uv=False)
    sigma_k_in = float(sv[k - 1])
    if sv[0] == 0.0 or sigma_k_in <= rank_tol * sv[0]:
        raise RankDeficientError(f"input has numerical rank below k={k}")

    swaps = 0
    if c == k:
        # no choice to make; natural order keeps M[:, selected] identical to M
        selected = list(range(k))
    else:
        selected = pivoted_qr_order(m, k)
        chosen = set(selected)
        unselected = [j for j in range(c) if j not in chosen]
        while True:
            w = np.linalg.solve(m[:, selected], m[:, unselected])
            hits = np.argwhere(np.abs(w) > f)
            if hits.size == 0:
                break
            if swaps >= max_swaps:
                raise NonTerminationError(f"exceeded {max_swaps} interchanges")
            i, j = hits[0]
            selected[i], unselected[j] = unselected[j], selected[i]
            swaps += 1

    sigma_k_out = _sigma_min(m[:, selected])
    return RrqrSelection(
        selected=tuple(int(s) for s in selected),
        sigma_k_in=sigma_k_in,
        sigma_k_out=sigma_k_out,
        swaps=swaps,
    )
