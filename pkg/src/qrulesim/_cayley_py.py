"""Pure NumPy/SciPy fallback for the Cayley-stepping kernel.

Same contract as the compiled ``_cayley`` module: one banded solve per
step.  Used when the extension was not built, or when
QRULESIM_PURE_PYTHON is set.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import solve_banded


def advance(xi, a_diag, a_off, b_diag, b_off, n_steps):
    """In-place advance of ``xi`` by ``n_steps`` Cayley steps."""
    n = xi.shape[0]
    if n < 3:
        raise ValueError("grid must have at least 3 points")
    ab = np.zeros((3, n), dtype=np.complex128)
    ab[0, 1:] = a_off
    ab[1, :] = a_diag
    ab[2, :-1] = a_off
    work = np.asarray(xi)
    rhs = np.empty(n, dtype=np.complex128)
    for _ in range(n_steps):
        rhs[:] = b_diag * work
        rhs[:-1] += b_off * work[1:]
        rhs[1:] += b_off * work[:-1]
        work[:] = solve_banded((1, 1), ab, rhs, overwrite_b=True, check_finite=False)
