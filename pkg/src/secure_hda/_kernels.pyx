# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled reduction for Monte Carlo estimation error moments."""

cimport cython


def linear_error_moments(const double[:, ::1] base, const double[::1] coef):
    """Return (sum e^2, sum e^4) where e_j = sum_i coef[i] * base[i, j]."""
    cdef Py_ssize_t m = base.shape[0]
    cdef Py_ssize_t n = base.shape[1]
    cdef Py_ssize_t i, j
    cdef double e, e2, s2 = 0.0, s4 = 0.0
    if coef.shape[0] != m:
        raise ValueError("coef length must match number of base rows")
    with nogil:
        for j in range(n):
            e = 0.0
            for i in range(m):
                e = e + coef[i] * base[i, j]
            e2 = e * e
            s2 = s2 + e2
            s4 = s4 + e2 * e2
    return s2, s4
