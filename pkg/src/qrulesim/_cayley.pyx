# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled Cayley-stepping kernel.

Advances a complex amplitude vector through n_steps of the
unitary tridiagonal update A xi' = B xi (Dirichlet walls), where A and B
are constant Toeplitz tridiagonals.  The Thomas forward-elimination
coefficients are precomputed once, so each step costs one O(n) sweep
with no Python overhead.
"""

import numpy as np


def advance(double complex[::1] xi,
            double complex a_diag, double complex a_off,
            double complex b_diag, double complex b_off,
            Py_ssize_t n_steps):
    """In-place advance of ``xi`` by ``n_steps`` Cayley steps."""
    cdef Py_ssize_t n = xi.shape[0]
    if n < 3:
        raise ValueError("grid must have at least 3 points")
    cdef double complex[::1] cp = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] inv_den = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] d = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] rhs = np.empty(n, dtype=np.complex128)
    cdef Py_ssize_t i, s
    cdef double complex den

    inv_den[0] = 1.0 / a_diag
    cp[0] = a_off * inv_den[0]
    for i in range(1, n):
        den = a_diag - a_off * cp[i - 1]
        inv_den[i] = 1.0 / den
        cp[i] = a_off * inv_den[i]

    for s in range(n_steps):
        rhs[0] = b_diag * xi[0] + b_off * xi[1]
        for i in range(1, n - 1):
            rhs[i] = b_diag * xi[i] + b_off * (xi[i - 1] + xi[i + 1])
        rhs[n - 1] = b_diag * xi[n - 1] + b_off * xi[n - 2]

        d[0] = rhs[0] * inv_den[0]
        for i in range(1, n):
            d[i] = (rhs[i] - a_off * d[i - 1]) * inv_den[i]
        xi[n - 1] = d[n - 1]
        for i in range(n - 2, -1, -1):
            xi[i] = d[i] - cp[i] * xi[i + 1]
