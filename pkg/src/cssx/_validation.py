import numbers

import numpy as np

from .exceptions import InvalidSelectionError, NonFiniteError


def check_matrix(a, name="a"):
    """Return ``a`` as a finite 2-D float64 array with at least one entry."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got ndim={arr.ndim}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} must have positive shape, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(f"{name} contains NaN or Inf entries")
    return arr


def check_positive_int(value, name, minimum=1):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def check_indices(indices, n, allow_duplicates=False):
    """Validate 0-based column indices against ``n`` columns."""
    idx = np.asarray(indices, dtype=np.int64).reshape(-1)
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        raise InvalidSelectionError(f"column index out of range for {n} columns")
    if not allow_duplicates and np.unique(idx).size != idx.size:
        raise InvalidSelectionError("duplicate column index in selection")
    return idx


def check_norm(norm):
    aliases = {"fro": "frobenius", "frobenius": "frobenius", "f": "frobenius",
               "spec": "spectral", "spectral": "spectral", "2": "spectral", 2: "spectral"}
    try:
        return aliases[norm]
    except (KeyError, TypeError):
        raise ValueError(f"unknown norm {norm!r}; use 'frobenius' or 'spectral'") from None
