"""Dense matrix helpers and a pivoting rank routine.

Matrices are plain 2-D ``float64`` numpy arrays. The helpers here only add
shape checking with readable messages and a rank count whose tolerance
semantics are fixed (numpy's SVD-based rank uses a different rule).
"""
from __future__ import annotations

import numpy as np

EPS = np.finfo(float).eps


class DimensionError(ValueError):
    """Raised when array shapes do not conform."""


def _coerce(data, name: str) -> np.ndarray:
    try:
        return np.asarray(data, dtype=float)
    except (ValueError, TypeError) as exc:
        raise DimensionError(f"{name}: not a rectangular numeric array ({exc})") from exc


def as_matrix(data, name: str = "matrix", cols: int | None = None) -> np.ndarray:
    """Coerce *data* to a finite 2-D float array.

    An empty sequence becomes a ``(0, cols)`` array when *cols* is given.
    """
    arr = _coerce(data, name)
    if arr.size == 0:
        if arr.ndim == 2 and (cols is None or arr.shape[1] == cols):
            return arr.reshape(arr.shape[0], arr.shape[1])
        if cols is None:
            raise DimensionError(f"{name}: cannot infer column count of an empty matrix")
        return np.zeros((0, cols))
    if arr.ndim != 2:
        raise DimensionError(f"{name}: expected a 2-D matrix, got shape {arr.shape}")
    if cols is not None and arr.shape[1] != cols:
        raise DimensionError(f"{name}: expected {cols} columns, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name}: entries must be finite")
    return arr


def as_vector(data, name: str = "vector", length: int | None = None) -> np.ndarray:
    arr = _coerce(data, name).reshape(-1)
    if length is not None and arr.shape[0] != length:
        raise DimensionError(f"{name}: expected length {length}, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name}: entries must be finite")
    return arr


def matmul(lhs: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    if lhs.ndim != 2 or rhs.ndim != 2 or lhs.shape[1] != rhs.shape[0]:
        raise DimensionError(f"cannot multiply {lhs.shape} by {rhs.shape}")
    return lhs @ rhs


def _eliminate(M: np.ndarray, tol: float) -> tuple[int, np.ndarray]:
    """Row-reduce a copy of *M* with partial pivoting.

    Returns the number of pivots whose magnitude exceeds *tol* and the reduced
    matrix.
    """
    U = np.array(M, dtype=float, copy=True)
    rows, cols = U.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = r + int(np.argmax(np.abs(U[r:, c])))
        if abs(U[piv, c]) <= tol:
            U[r:, c] = 0.0
            continue
        if piv != r:
            U[[r, piv]] = U[[piv, r]]
        factors = U[r + 1:, c] / U[r, c]
        U[r + 1:, c:] -= np.outer(factors, U[r, c:])
        U[r + 1:, c] = 0.0
        r += 1
    return r, U


def rank(M, tol: float | None = None) -> int:
    """Numerical rank by Gaussian elimination with partial pivoting.

    Counts pivots larger than *tol*. The default tolerance is
    ``max(rows, cols) * eps * max|U|`` where ``U`` is the matrix reduced with
    only exact zeros skipped.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2:
        raise DimensionError(f"rank expects a 2-D matrix, got shape {M.shape}")
    if M.size == 0:
        return 0
    if tol is None:
        _, U = _eliminate(M, 0.0)
        tol = max(M.shape) * EPS * float(np.max(np.abs(U)))
    elif tol < 0:
        raise ValueError("tol must be nonnegative")
    return _eliminate(M, tol)[0]
