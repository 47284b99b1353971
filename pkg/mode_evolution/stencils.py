# mode_evolution/stencils.py
"""
Finite-difference operators on a uniform grid.

Derivative matrices are scipy.sparse CSR with centered interior stencils
and one-sided stencils of the same order at both ends, so no ghost
points or boundary data are needed.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy import sparse

from core.errors import UsageError

SUPPORTED_ORDERS = (2, 4)


def fd_weights(offsets: np.ndarray | list[float], deriv: int) -> np.ndarray:
    """
    Weights w with sum_j w_j f(x + s_j h) = h^deriv f^(deriv)(x) + O(h^(len - deriv)).

    Args:
        offsets: Stencil offsets s_j in units of h
        deriv: Derivative order

    Returns:
        Weight vector, to be divided by h**deriv
    """
    s = np.asarray(offsets, dtype=float)
    if deriv >= len(s):
        raise UsageError(f"need more than {deriv} stencil points, got {len(s)}")
    vander = np.vander(s, increasing=True).T
    rhs = np.zeros(len(s))
    rhs[deriv] = math.factorial(deriv)
    return np.linalg.solve(vander, rhs)


def _check_order(accuracy: int) -> None:
    if accuracy not in SUPPORTED_ORDERS:
        raise UsageError(f"Invalid spatial order: {accuracy}. Must be one of: 2, 4")


@lru_cache(maxsize=32)
def derivative_matrix(n: int, h: float, accuracy: int = 2, deriv: int = 1) -> sparse.csr_matrix:
    """
    Sparse matrix of the deriv-th derivative on n nodes with spacing h.

    Interior rows use the centered stencil of the requested accuracy;
    the first and last rows that cannot be centered use one-sided
    stencils of width accuracy + deriv.
    """
    _check_order(accuracy)
    half = accuracy // 2 + (deriv - 1) // 2
    width = 2 * half + 1
    if n < accuracy + deriv + 1 or n < width:
        raise UsageError(f"grid of {n} points too small for order {accuracy} derivative {deriv}")

    centered = fd_weights(np.arange(-half, half + 1), deriv) / h**deriv
    side = accuracy + deriv
    rows, cols, vals = [], [], []
    for i in range(n):
        if half <= i < n - half:
            idx = np.arange(i - half, i + half + 1)
            w = centered
        elif i < half:
            idx = np.arange(0, side)
            w = fd_weights(idx - i, deriv) / h**deriv
        else:
            idx = np.arange(n - side, n)
            w = fd_weights(idx - i, deriv) / h**deriv
        rows.extend([i] * len(idx))
        cols.extend(idx.tolist())
        vals.extend(w.tolist())
    return sparse.csr_matrix((vals, (rows, cols)), shape=(n, n))


@lru_cache(maxsize=32)
def dissipation_matrix(n: int, h: float, epsilon: float) -> sparse.csr_matrix:
    """Kreiss-Oliger term -epsilon/(16 h) * fourth difference, interior rows only."""
    if epsilon < 0:
        raise UsageError(f"dissipation must be non-negative, got {epsilon}")
    if epsilon == 0:
        return sparse.csr_matrix((n, n))
    stencil = np.array([1.0, -4.0, 6.0, -4.0, 1.0]) * (-epsilon / (16.0 * h))
    diagonals = [np.full(n, c) for c in stencil]
    mat = sparse.diags(diagonals, offsets=[-2, -1, 0, 1, 2], shape=(n, n), format="lil")
    for i in (0, 1, n - 2, n - 1):
        mat.rows[i] = []
        mat.data[i] = []
    return mat.tocsr()
