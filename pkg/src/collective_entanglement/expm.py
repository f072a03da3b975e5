"""Dense matrix exponential by scaling and squaring of a truncated Taylor series."""

import math

import numpy as np

TAYLOR_ORDER = 12
SCALED_NORM = 0.5


def expm(a, order=TAYLOR_ORDER, max_norm=SCALED_NORM):
    """Return ``exp(a)`` for a square matrix.

    ``a`` is divided by ``2**s`` so that its 1-norm drops below ``max_norm``,
    the Taylor polynomial of degree ``order`` is evaluated with Horner's rule
    and the result is squared ``s`` times.
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expm needs a square matrix, got shape {a.shape}")
    dtype = np.result_type(a.dtype, np.float64)
    a = a.astype(dtype, copy=False)
    norm = float(np.max(np.sum(np.abs(a), axis=0))) if a.size else 0.0
    squarings = 0
    if norm > max_norm:
        squarings = max(0, math.ceil(math.log2(norm / max_norm)))
    scaled = a / 2.0**squarings
    ident = np.eye(a.shape[0], dtype=dtype)
    result = ident.copy()
    for k in range(order, 0, -1):
        result = ident + (scaled @ result) / k
    for _ in range(squarings):
        result = result @ result
    return result
