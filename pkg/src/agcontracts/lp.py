"""Dense two-phase tableau simplex for small linear programs.

Problems are stated as

    maximize    c @ z
    subject to  A_ineq @ z <= b_ineq
                A_eq   @ z == b_eq

with every variable free in sign. Free variables are split into nonnegative
pairs and each equality becomes two opposite inequalities, so a single
``<=`` code path handles everything. Phase I minimizes the sum of artificial
variables on rows with negative right-hand side; Phase II maximizes ``c``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .linalg import DimensionError

FEAS_TOL = 1e-9
BLAND_AFTER = 50
ITERS_PER_VAR = 10_000


class SolverError(RuntimeError):
    """The solver could not produce a trustworthy answer."""


class SolverStalled(SolverError):
    """Pivot budget exhausted before reaching a terminal state."""


class Status(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


def _as_rows(data, n: int, name: str) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.size == 0:
        return np.zeros((0, n))
    if arr.ndim != 2 or arr.shape[1] != n:
        raise DimensionError(f"{name} has shape {arr.shape}, expected {n} columns")
    return arr


@dataclass(frozen=True)
class LinearProgram:
    c: np.ndarray
    A_ineq: np.ndarray
    b_ineq: np.ndarray
    A_eq: np.ndarray
    b_eq: np.ndarray

    def __post_init__(self):
        n = len(self.c)
        A_ineq = _as_rows(self.A_ineq, n, "A_ineq")
        A_eq = _as_rows(self.A_eq, n, "A_eq")
        b_ineq = np.asarray(self.b_ineq, dtype=float).reshape(-1)
        b_eq = np.asarray(self.b_eq, dtype=float).reshape(-1)
        if A_ineq.shape[0] != b_ineq.shape[0]:
            raise DimensionError(f"A_ineq has {A_ineq.shape[0]} rows but b_ineq has {b_ineq.shape[0]}")
        if A_eq.shape[0] != b_eq.shape[0]:
            raise DimensionError(f"A_eq has {A_eq.shape[0]} rows but b_eq has {b_eq.shape[0]}")
        object.__setattr__(self, "c", np.asarray(self.c, dtype=float).reshape(-1))
        object.__setattr__(self, "A_ineq", A_ineq)
        object.__setattr__(self, "A_eq", A_eq)
        object.__setattr__(self, "b_ineq", b_ineq)
        object.__setattr__(self, "b_eq", b_eq)

    @property
    def n_vars(self) -> int:
        return self.c.shape[0]

    @classmethod
    def build(cls, c, A_ineq=None, b_ineq=None, A_eq=None, b_eq=None) -> LinearProgram:
        c = np.asarray(c, dtype=float).reshape(-1)
        n = c.shape[0]
        empty = np.zeros((0, n))
        return cls(
            c,
            empty if A_ineq is None else A_ineq,
            np.zeros(0) if b_ineq is None else b_ineq,
            empty if A_eq is None else A_eq,
            np.zeros(0) if b_eq is None else b_eq,
        )

    def with_objective(self, c) -> LinearProgram:
        return LinearProgram(np.asarray(c, dtype=float), self.A_ineq, self.b_ineq, self.A_eq, self.b_eq)


@dataclass(frozen=True)
class LpOutcome:
    status: Status
    value: float | None = None
    witness: np.ndarray | None = field(default=None, repr=False)
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


def _residual_scale(A, z, b):
    return np.maximum(1.0, np.maximum(np.abs(b), np.abs(A) @ np.abs(z)))


def check_witness(lp: LinearProgram, z: np.ndarray, tol: float = FEAS_TOL) -> bool:
    """True when *z* satisfies every constraint of *lp* to within *tol*.

    The tolerance is relative to the magnitude of each row's terms, with an
    absolute floor of *tol*.
    """
    ok_ineq = np.all(lp.A_ineq @ z - lp.b_ineq <= tol * _residual_scale(lp.A_ineq, z, lp.b_ineq))
    ok_eq = np.all(np.abs(lp.A_eq @ z - lp.b_eq) <= tol * _residual_scale(lp.A_eq, z, lp.b_eq))
    return bool(ok_ineq and ok_eq)


def solve(lp: LinearProgram, tol: float = FEAS_TOL, max_iter: int | None = None,
          bland_after: int = BLAND_AFTER, kernels=None) -> LpOutcome:
    """Solve *lp*; raises :class:`SolverStalled` if the pivot budget runs out.

    *kernels* selects the module providing ``run_simplex``/``pivot``; the
    default is whichever backend :mod:`agcontracts._kernels` picked.
    """
    k = kernels or _kernels
    n = lp.n_vars
    if max_iter is None:
        max_iter = ITERS_PER_VAR * max(n, 1)

    rows = np.vstack([lp.A_ineq, lp.A_eq, -lp.A_eq])
    rhs = np.concatenate([lp.b_ineq, lp.b_eq, -lp.b_eq])
    m = rows.shape[0]
    if m == 0:
        if np.any(lp.c != 0.0):
            return LpOutcome(Status.UNBOUNDED)
        return LpOutcome(Status.OPTIMAL, 0.0, np.zeros(n))

    neg = rhs < 0.0
    n_art = int(np.count_nonzero(neg))
    n_u = 2 * n
    art0 = n_u + m
    width = art0 + n_art + 1

    T = np.zeros((m + 1, width))
    T[:m, :n] = rows
    T[:m, n:n_u] = -rows
    T[:m, n_u:art0] = np.eye(m)
    T[:m, -1] = rhs
    T[:m][neg] *= -1.0
    basis = np.arange(n_u, n_u + m, dtype=np.int64)
    for a, i in enumerate(np.flatnonzero(neg)):
        T[i, art0 + a] = 1.0
        basis[i] = art0 + a

    iters = 0
    if n_art:
        # phase I: maximize -sum(artificials)
        T[m, art0:art0 + n_art] = 1.0
        T[m] -= T[:m][neg].sum(axis=0)
        status, it = k.run_simplex(T, basis, width - 1, max_iter, tol, bland_after)
        iters += it
        if status == 2:
            raise SolverStalled(f"phase I did not finish within {max_iter} pivots")
        scale = max(1.0, float(np.max(np.abs(rhs))))
        if T[m, -1] < -tol * scale:
            return LpOutcome(Status.INFEASIBLE, iterations=iters)
        keep = np.ones(m, dtype=bool)
        for i in range(m):
            if basis[i] < art0:
                continue
            cand = np.flatnonzero(np.abs(T[i, :art0]) > tol)
            if cand.size:
                k.pivot(T, i, int(cand[0]), tol)
                basis[i] = int(cand[0])
            else:
                keep[i] = False  # redundant row
        T = np.ascontiguousarray(np.vstack([T[:m][keep], T[m:]])[:, list(range(art0)) + [width - 1]])
        basis = np.ascontiguousarray(basis[keep])
        m = T.shape[0] - 1

    # phase II
    T[m] = 0.0
    T[m, :n] = -lp.c
    T[m, n:n_u] = lp.c
    for i, b in enumerate(basis):
        if T[m, b] != 0.0:
            T[m] -= T[m, b] * T[i]
    budget = max(max_iter - iters, 0)
    status, it = k.run_simplex(T, basis, T.shape[1] - 1, budget, tol, bland_after)
    iters += it
    if status == 2:
        raise SolverStalled(f"phase II did not finish within {max_iter} pivots")
    if status == 1:
        return LpOutcome(Status.UNBOUNDED, iterations=iters)

    u = np.zeros(T.shape[1] - 1)
    u[basis] = T[:m, -1]
    z = u[:n] - u[n:n_u]
    if not check_witness(lp, z, tol=max(tol, 1e-9) * 10):
        raise SolverError("optimal basis failed the post-solve feasibility check")
    return LpOutcome(Status.OPTIMAL, float(lp.c @ z), z, iters)
