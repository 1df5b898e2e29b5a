"""NumPy fallback for the compiled kernels (same signatures)."""

import numpy as np


def linear_error_moments(base, coef):
    base = np.asarray(base, dtype=float)
    coef = np.asarray(coef, dtype=float)
    if coef.shape[0] != base.shape[0]:
        raise ValueError("coef length must match number of base rows")
    e2 = np.square(coef @ base)
    return float(e2.sum()), float(np.square(e2).sum())
