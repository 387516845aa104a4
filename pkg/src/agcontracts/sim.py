"""Rollouts of affine LTI systems and the two-vehicle scenario."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .linalg import DimensionError
from .model import Assumptions, Guarantees, System

AUDIT_TOL = 1e-7
KMH = 1.0 / 3.6


@dataclass(frozen=True)
class Trace:
    dt: float
    inputs: np.ndarray
    states: np.ndarray
    outputs: np.ndarray
    final_state: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return self.inputs.shape[0]

    @property
    def stacked(self) -> np.ndarray:
        """Rows ``[d(k); y(k)]`` as used by guarantee matrices."""
        return np.hstack([self.inputs, self.outputs])


def simulate(sys: System, inputs, x_init, dt: float = 1.0, kernels=None) -> Trace:
    k = kernels or _kernels
    inputs = np.ascontiguousarray(np.asarray(inputs, dtype=float).reshape(-1, sys.n_d))
    x_init = np.ascontiguousarray(np.asarray(x_init, dtype=float).reshape(-1))
    if x_init.shape[0] != sys.n_x:
        raise DimensionError(f"x_init has length {x_init.shape[0]}, system has {sys.n_x} states")
    c = np.ascontiguousarray
    states, outputs = k.rollout(c(sys.A), c(sys.B), c(sys.C), c(sys.D), c(sys.w), c(sys.v), x_init, inputs)
    return Trace(dt, inputs, states[:-1], outputs, states[-1])


@dataclass(frozen=True)
class Violation:
    k: int
    row: int
    amount: float


def audit_guarantees(trace: Trace, g: Guarantees, tol: float = AUDIT_TOL) -> list[Violation]:
    """Guarantee residuals above *tol* for each step pair ``(k, k+1)``."""
    dy = trace.stacked
    if g.n_rows == 0 or len(dy) < 2:
        return []
    if dy.shape[1] != g.width:
        raise DimensionError(f"trace has {dy.shape[1]} stacked signals, guarantees expect {g.width}")
    res = dy[1:] @ g.G1.T + dy[:-1] @ g.G0.T - g.g0
    return [Violation(int(k), int(i), float(res[k, i])) for k, i in zip(*np.nonzero(res > tol))]


def audit_assumptions(inputs, a: Assumptions, tol: float = 1e-9) -> list[Violation]:
    d = np.asarray(inputs, dtype=float)
    if a.n_rows == 0 or len(d) < 2:
        return []
    res = d[1:] @ a.A1.T + d[:-1] @ a.A0.T - a.a0
    return [Violation(int(k), int(i), float(res[k, i])) for k, i in zip(*np.nonzero(res > tol))]


@dataclass(frozen=True)
class LeaderProfileParams:
    dt: float = 0.1
    phases_s: tuple[float, float, float] = (10.0, 10.0, 10.0)
    v_init: float = 110.0 * KMH
    v_low: float = 80.0 * KMH
    v_high: float = 110.0 * KMH
    a_mag: float = 9.8
    p_init: float = 45.0
    seed: int = 2021

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if not self.v_low < self.v_high:
            raise ValueError("v_low must be below v_high")
        if self.a_mag < 0:
            raise ValueError("a_mag must be nonnegative")
        if len(self.phases_s) != 3 or any(t < 0 for t in self.phases_s):
            raise ValueError("phases_s needs three nonnegative durations")


@dataclass(frozen=True)
class LeaderProfile:
    t: np.ndarray
    p: np.ndarray
    v: np.ndarray
    a: np.ndarray

    @property
    def inputs(self) -> np.ndarray:
        return np.column_stack([self.p, self.v])


def leader_profile(params: LeaderProfileParams) -> LeaderProfile:
    """Cruise, bang-bang sway between the velocity limits, cruise.

    During the sway the leader brakes or accelerates at full magnitude and
    reverses before leaving ``[v_low, v_high]``. Each reversal point is drawn
    at random from the outer quarter of the band, so the dwell between
    reversals varies with the seed.
    """
    dt = params.dt
    k1 = int(round(params.phases_s[0] / dt))
    k2 = k1 + int(round(params.phases_s[1] / dt))
    K = k2 + int(round(params.phases_s[2] / dt))
    rng = np.random.default_rng(params.seed)
    band = params.v_high - params.v_low

    a = np.zeros(K + 1)
    v = np.empty(K + 1)
    p = np.empty(K + 1)
    v[0], p[0] = params.v_init, params.p_init
    direction = -1.0 if params.v_init >= 0.5 * (params.v_low + params.v_high) else 1.0
    lower = params.v_low + 0.25 * band * rng.random()
    upper = params.v_high - 0.25 * band * rng.random()
    for k in range(K + 1):
        if k1 <= k < k2 and params.a_mag > 0:
            nxt = v[k] + dt * direction * params.a_mag
            if direction < 0 and nxt < lower:
                direction = 1.0
                upper = params.v_high - 0.25 * band * rng.random()
            elif direction > 0 and nxt > upper:
                direction = -1.0
                lower = params.v_low + 0.25 * band * rng.random()
            a[k] = direction * params.a_mag
        if k < K:
            v[k + 1] = v[k] + dt * a[k]
            p[k + 1] = p[k] + dt * v[k]
    return LeaderProfile(np.arange(K + 1) * dt, p, v, a)


def vehicle_assumptions(dt: float, a_max: float, a_min: float | None = None,
                        forward: bool = False) -> Assumptions:
    """Leader kinematics on ``d = [p2, v2]`` with bounded acceleration.

    ``forward`` adds ``v2 >= 0``.
    """
    from .model import build_assumptions

    a_min = a_max if a_min is None else a_min
    A1 = [[1, 0], [-1, 0], [0, 1], [0, -1]]
    A0 = [[-1, -dt], [1, dt], [0, -1], [0, 1]]
    a0 = [0.0, 0.0, dt * a_max, dt * a_min]
    if forward:
        A1.append([0, 0])
        A0.append([0, -1])
        a0.append(0.0)
    return build_assumptions(A1, A0, a0)


def headway_guarantee(h: float) -> Guarantees:
    """``p2 - p1 - h v1 >= 0`` on ``[p2, v2, p1, v1]``."""
    from .model import build_guarantees

    return build_guarantees([[0.0, 0.0, 0.0, 0.0]], [[-1.0, 0.0, 1.0, h]], [0.0])


def follower_system(dt: float, h: float, offset: float = 1.0) -> System:
    """Follower under the affine headway law; state and output ``[p1, v1]``.

    The initial set requires the headway to hold at time zero.
    """
    from .model import build_system, build_x0

    A = [[1.0, dt], [-1.0 / h, -dt / h]]
    B = [[0.0, 0.0], [1.0 / h, dt / h]]
    x0 = build_x0([[1.0, h]], [[-1.0, 0.0]], [0.0])
    return build_system(A, B, np.eye(2), np.zeros((2, 2)), [0.0, -dt * offset], None, x0)
