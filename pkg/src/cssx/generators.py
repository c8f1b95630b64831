"""Seeded synthetic test matrices.

Spec strings accepted by :func:`from_spec`::

    gaussian:MxN
    lowrank:MxN:R[:NOISE]     rank-R signal plus NOISE-scaled Gaussian tail
"""

import numpy as np


def gaussian(m, n, seed):
    return np.random.default_rng(seed).standard_normal((m, n))


def low_rank_plus_noise(m, n, rank, noise, seed):
    """Rank-``rank`` matrix with unit-scale signal plus ``noise`` times i.i.d. Gaussian."""
    rng = np.random.default_rng(seed)
    signal = rng.standard_normal((m, rank)) @ rng.standard_normal((rank, n))
    return signal + noise * rng.standard_normal((m, n))


def _parse_shape(token):
    try:
        m, n = token.lower().split("x")
        return int(m), int(n)
    except ValueError:
        raise ValueError(f"bad shape {token!r}, expected MxN") from None


def from_spec(spec, seed):
    kind, _, rest = spec.partition(":")
    parts = rest.split(":") if rest else []
    if kind == "gaussian" and len(parts) == 1:
        return gaussian(*_parse_shape(parts[0]), seed)
    if kind == "lowrank" and len(parts) in (2, 3):
        m, n = _parse_shape(parts[0])
        noise = float(parts[2]) if len(parts) == 3 else 1e-3
        return low_rank_plus_noise(m, n, int(parts[1]), noise, seed)
    raise ValueError(f"unrecognized generator spec {spec!r}")
