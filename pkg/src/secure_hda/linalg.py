"""LU factorisation with partial pivoting for the tiny (<= 6x6) systems used here."""

from __future__ import annotations

import numpy as np

from .core import SingularCovariance


def lu_factor(a):
    """Return ``(lu, perm, sign)`` with ``a[perm] = L @ U`` packed in ``lu``."""
    lu = np.array(a, dtype=float, copy=True)
    n = lu.shape[0]
    if lu.shape != (n, n):
        raise ValueError("matrix must be square")
    perm = np.arange(n)
    sign = 1.0
    for c in range(n):
        p = c + int(np.argmax(np.abs(lu[c:, c])))
        if lu[p, c] == 0.0:
            raise SingularCovariance("matrix is singular")
        if p != c:
            lu[[c, p]] = lu[[p, c]]
            perm[[c, p]] = perm[[p, c]]
            sign = -sign
        lu[c + 1:, c] /= lu[c, c]
        lu[c + 1:, c + 1:] -= np.outer(lu[c + 1:, c], lu[c, c + 1:])
    return lu, perm, sign


def det(a) -> float:
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        return 1.0
    try:
        lu, _, sign = lu_factor(a)
    except SingularCovariance:
        return 0.0
    return float(sign * np.prod(np.diag(lu)))


def lu_solve(lu, perm, b):
    b = np.asarray(b, dtype=float)
    x = b[perm].copy()
    n = lu.shape[0]
    for i in range(n):
        x[i] -= lu[i, :i] @ x[:i]
    for i in range(n - 1, -1, -1):
        x[i] = (x[i] - lu[i, i + 1:] @ x[i + 1:]) / lu[i, i]
    return x


def solve(a, b):
    lu, perm, _ = lu_factor(a)
    return lu_solve(lu, perm, b)


def inv(a):
    a = np.asarray(a, dtype=float)
    lu, perm, _ = lu_factor(a)
    eye = np.eye(a.shape[0])
    return np.column_stack([lu_solve(lu, perm, eye[:, j]) for j in range(a.shape[0])])


def cond1(a) -> float:
    """1-norm condition number (exact, via the explicit inverse)."""
    a = np.asarray(a, dtype=float)
    try:
        ai = inv(a)
    except SingularCovariance:
        return np.inf
    return float(np.abs(a).sum(axis=0).max() * np.abs(ai).sum(axis=0).max())
