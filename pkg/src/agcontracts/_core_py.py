"""Pure-Python implementations of the compiled kernels in ``_core.pyx``.

Same pivot rules and tie-breaking, so both backends walk the same path up to
floating-point summation order.
"""
from __future__ import annotations

import numpy as np

RATIO_TIE = 1e-12


def pivot(T: np.ndarray, r: int, j: int, tol: float) -> None:
    T[r] /= T[r, j]
    T[r, j] = 1.0
    col = T[:, j].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])
    T[:, j] = 0.0
    T[r, j] = 1.0
    rhs = T[:-1, -1]
    rhs[(rhs < 0.0) & (rhs > -tol)] = 0.0


def run_simplex(T, basis, ncols, max_iter, tol, bland_after):
    m = T.shape[0] - 1
    it = 0
    degenerate = 0
    bland = False
    while True:
        costs = T[m, :ncols]
        candidates = np.flatnonzero(costs < -tol)
        if candidates.size == 0:
            return 0, it
        if bland:
            j = int(candidates[0])
        else:
            # first index among the most negative, as in the compiled loop
            j = int(np.argmin(costs))
        if it >= max_iter:
            return 2, it
        best_r = -1
        best_ratio = 0.0
        col = T[:m, j]
        for i in np.flatnonzero(col > tol):
            ratio = T[i, -1] / col[i]
            if best_r < 0 or ratio < best_ratio - RATIO_TIE:
                best_r, best_ratio = int(i), ratio
            elif abs(ratio - best_ratio) <= RATIO_TIE and basis[i] < basis[best_r]:
                best_r, best_ratio = int(i), ratio
        if best_r < 0:
            return 1, it
        if best_ratio <= tol:
            degenerate += 1
            if degenerate >= bland_after:
                bland = True
        else:
            degenerate = 0
        pivot(T, best_r, j, tol)
        basis[best_r] = j
        it += 1


def rollout(A, B, C, D, w, v, x0, inputs):
    K = inputs.shape[0]
    states = np.empty((K + 1, A.shape[0]))
    outputs = np.empty((K, C.shape[0]))
    states[0] = x0
    for k in range(K):
        outputs[k] = C @ states[k] + D @ inputs[k] + v
        states[k + 1] = A @ states[k] + B @ inputs[k] + w
    return states, outputs
