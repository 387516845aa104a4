"""Systems, contracts and initial-condition sets.

A system evolves as

    x(k+1) = A x(k) + B d(k) + w
    y(k)   = C x(k) + D d(k) + v

and its initial state is restricted by ``Fx x(0) + Fd d(0) <= f``. Contracts
use one-step linear inequalities: assumptions ``A1 d(k+1) + A0 d(k) <= a0``
and guarantees ``G1 [d;y](k+1) + G0 [d;y](k) <= g0``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import DimensionError, as_matrix, as_vector, rank


def _check_shape(name: str, arr: np.ndarray, shape: tuple[int, int]) -> None:
    if arr.shape != shape:
        raise DimensionError(f"{name}: expected shape {shape}, got {arr.shape}")


@dataclass(frozen=True)
class InitialSet:
    Fx: np.ndarray
    Fd: np.ndarray
    f: np.ndarray

    @property
    def n_rows(self) -> int:
        return self.f.shape[0]

    def contains(self, x0, d0, tol: float = 1e-9) -> bool:
        return bool(np.all(self.Fx @ np.asarray(x0) + self.Fd @ np.asarray(d0) <= self.f + tol))


@dataclass(frozen=True)
class Assumptions:
    A1: np.ndarray
    A0: np.ndarray
    a0: np.ndarray

    @property
    def n_rows(self) -> int:
        return self.a0.shape[0]

    @property
    def n_d(self) -> int:
        return self.A1.shape[1]

    def residual(self, d_now, d_next) -> np.ndarray:
        """``A1 d_next + A0 d_now - a0``; nonpositive entries mean satisfied."""
        return self.A1 @ d_next + self.A0 @ d_now - self.a0


@dataclass(frozen=True)
class Guarantees:
    G1: np.ndarray
    G0: np.ndarray
    g0: np.ndarray

    @property
    def n_rows(self) -> int:
        return self.g0.shape[0]

    @property
    def width(self) -> int:
        """Length of the stacked ``[d; y]`` vector."""
        return self.G1.shape[1]

    def residual(self, dy_now, dy_next) -> np.ndarray:
        return self.G1 @ dy_next + self.G0 @ dy_now - self.g0


@dataclass(frozen=True)
class Contract:
    assumptions: Assumptions
    guarantees: Guarantees

    def __post_init__(self):
        if self.guarantees.width < self.assumptions.n_d:
            raise DimensionError(
                f"guarantees act on {self.guarantees.width} columns, fewer than the "
                f"{self.assumptions.n_d} input columns of the assumptions"
            )

    @property
    def n_d(self) -> int:
        return self.assumptions.n_d

    @property
    def n_y(self) -> int:
        return self.guarantees.width - self.n_d


@dataclass(frozen=True)
class System:
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    w: np.ndarray
    v: np.ndarray
    obs_index: int
    x0: InitialSet

    @property
    def n_x(self) -> int:
        return self.A.shape[0]

    @property
    def n_d(self) -> int:
        return self.B.shape[1]

    @property
    def n_y(self) -> int:
        return self.C.shape[0]


def observability_matrix(A, C, m: int) -> np.ndarray:
    """Stack ``C, CA, ..., CA^m``."""
    blocks = [np.asarray(C, dtype=float)]
    for _ in range(m):
        blocks.append(blocks[-1] @ A)
    return np.vstack(blocks)


def observability_index(A, C) -> int:
    """Smallest ``m >= 1`` with ``rank O_{m-1} == rank O_m``, capped at ``n_x``.

    With this convention a system with ``C = I`` has index 1.
    """
    A = as_matrix(A, "A")
    n_x = A.shape[0]
    if A.shape != (n_x, n_x):
        raise DimensionError(f"A must be square, got shape {A.shape}")
    C = as_matrix(C, "C", cols=n_x)
    if C.shape[1] != n_x:
        raise DimensionError(f"C must have {n_x} columns, got shape {C.shape}")
    block = C
    prev = rank(block)
    O = block
    for m in range(1, n_x + 1):
        block = block @ A
        O = np.vstack([O, block])
        cur = rank(O)
        if cur == prev:
            return m
        prev = cur
    return max(n_x, 1)


def build_x0(Fx, Fd, f, n_x: int | None = None, n_d: int | None = None) -> InitialSet:
    f = as_vector(f, "initial_set.f")
    Fx = as_matrix(Fx, "initial_set.Fx", cols=n_x)
    Fd = as_matrix(Fd, "initial_set.Fd", cols=n_d)
    m = f.shape[0]
    if Fx.shape[0] != m or Fd.shape[0] != m:
        raise DimensionError(
            f"initial_set: Fx has {Fx.shape[0]} rows, Fd has {Fd.shape[0]}, f has {m}"
        )
    return InitialSet(Fx, Fd, f)


def unconstrained_x0(n_x: int, n_d: int) -> InitialSet:
    return InitialSet(np.zeros((0, n_x)), np.zeros((0, n_d)), np.zeros(0))


def build_assumptions(A1, A0, a0, n_d: int | None = None) -> Assumptions:
    a0 = as_vector(a0, "assumptions.a0")
    A1 = as_matrix(A1, "assumptions.A1", cols=n_d)
    A0 = as_matrix(A0, "assumptions.A0", cols=A1.shape[1])
    if A1.shape != A0.shape:
        raise DimensionError(f"assumptions: A1 has shape {A1.shape} but A0 has shape {A0.shape}")
    if A1.shape[0] != a0.shape[0]:
        raise DimensionError(f"assumptions: A1 has {A1.shape[0]} rows but a0 has length {a0.shape[0]}")
    return Assumptions(A1, A0, a0)


def build_guarantees(G1, G0, g0, width: int | None = None) -> Guarantees:
    g0 = as_vector(g0, "guarantees.g0")
    G1 = as_matrix(G1, "guarantees.G1", cols=width)
    G0 = as_matrix(G0, "guarantees.G0", cols=G1.shape[1])
    if G1.shape != G0.shape:
        raise DimensionError(f"guarantees: G1 has shape {G1.shape} but G0 has shape {G0.shape}")
    if G1.shape[0] != g0.shape[0]:
        raise DimensionError(f"guarantees: G1 has {G1.shape[0]} rows but g0 has length {g0.shape[0]}")
    if width is not None and G1.shape[1] != width:
        raise DimensionError(f"guarantees: expected {width} columns, got {G1.shape[1]}")
    return Guarantees(G1, G0, g0)


def build_contract(assumptions: Assumptions, guarantees: Guarantees) -> Contract:
    return Contract(assumptions, guarantees)


def build_system(A, B, C, D, w=None, v=None, x0: InitialSet | None = None) -> System:
    """Validate the matrices and compute the observability index.

    ``w`` and ``v`` default to zero; a missing initial set leaves ``x(0)`` free.
    """
    A = as_matrix(A, "system.A")
    n_x = A.shape[0]
    if n_x == 0:
        raise DimensionError("system.A: state dimension must be at least 1")
    _check_shape("system.A", A, (n_x, n_x))
    B = as_matrix(B, "system.B")
    if B.shape[0] != n_x:
        raise DimensionError(f"system.B: expected {n_x} rows, got shape {B.shape}")
    n_d = B.shape[1]
    C = as_matrix(C, "system.C", cols=n_x)
    if C.shape[1] != n_x:
        raise DimensionError(f"system.C: expected {n_x} columns, got shape {C.shape}")
    n_y = C.shape[0]
    D = as_matrix(D, "system.D", cols=n_d)
    _check_shape("system.D", D, (n_y, n_d))
    w = np.zeros(n_x) if w is None else as_vector(w, "system.w", n_x)
    v = np.zeros(n_y) if v is None else as_vector(v, "system.v", n_y)
    if x0 is None:
        x0 = unconstrained_x0(n_x, n_d)
    else:
        _check_shape("initial_set.Fx", x0.Fx, (x0.n_rows, n_x))
        _check_shape("initial_set.Fd", x0.Fd, (x0.n_rows, n_d))
    return System(A, B, C, D, w, v, observability_index(A, C), x0)


def unit_gain(n: int) -> System:
    """Static identity ``y = d`` realised with one frozen state fixed at zero."""
    x0 = build_x0([[1.0], [-1.0]], np.zeros((2, n)), [0.0, 0.0])
    return build_system(np.zeros((1, 1)), np.zeros((1, n)), np.zeros((n, 1)), np.eye(n), x0=x0)


def check_pairing(sys: System, con: Contract) -> None:
    if con.n_d != sys.n_d:
        raise DimensionError(f"contract input dimension {con.n_d} != system input dimension {sys.n_d}")
    if con.guarantees.width != sys.n_d + sys.n_y:
        raise DimensionError(
            f"guarantees have {con.guarantees.width} columns, expected n_d + n_y = {sys.n_d + sys.n_y}"
        )
