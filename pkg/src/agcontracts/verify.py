"""Contract satisfaction by bounded-window induction.

``theta(n, l)`` is the worst guarantee violation at step ``n`` (the pair of
steps ``n, n+1``) over all trajectories on the window ``p = n - l .. n + 1``
that respect the assumptions, the dynamics, and the guarantees on the earlier
steps of the window. For ``p == 0`` the initial set applies; otherwise the
window's first state is free.

The verdict uses ``theta(n, n)`` for ``n < nu`` plus ``theta(nu + 1, nu)``,
where ``nu`` is the observability index.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import lp
from .model import Contract, InitialSet, System, check_pairing

TOLERANCE = 5e-9


class ThetaStatus(enum.Enum):
    VALUE = "value"
    PLUS_INFINITY = "plus_infinity"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class ThetaValue:
    n: int
    l: int
    status: ThetaStatus
    value: float | None = None
    vacuous: bool = False
    row_values: tuple = ()

    def __post_init__(self):
        if self.l > self.n or self.l < 0:
            raise ValueError(f"need 0 <= l <= n, got n={self.n}, l={self.l}")

    def at_most(self, tol: float) -> bool:
        return self.status is ThetaStatus.VALUE and self.value <= tol

    def sort_key(self) -> float:
        """Total order used for monotonicity checks; infeasible sorts lowest."""
        if self.status is ThetaStatus.VALUE:
            return self.value
        return math.inf if self.status is ThetaStatus.PLUS_INFINITY else -math.inf

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "l": self.l,
            "status": self.status.value,
            "value": None if self.value is None or math.isinf(self.value) else self.value,
            "vacuous": self.vacuous,
        }

    @classmethod
    def from_dict(cls, data: dict) -> ThetaValue:
        status = ThetaStatus(data["status"])
        value = data.get("value")
        if status is ThetaStatus.VALUE and value is None:
            value = -math.inf
        return cls(int(data["n"]), int(data["l"]), status, value, bool(data.get("vacuous", False)))


@dataclass(frozen=True)
class VerificationReport:
    thetas: tuple[ThetaValue, ...]
    verified: bool
    tolerance: float
    obs_index: int
    diagnostics: tuple[str, ...] = field(default=())

    @property
    def vacuous(self) -> bool:
        return bool(self.thetas) and all(t.vacuous for t in self.thetas)

    def to_dict(self) -> dict:
        return {
            "verified": self.verified,
            "tolerance": self.tolerance,
            "obs_index": self.obs_index,
            "vacuous": self.vacuous,
            "thetas": [t.to_dict() for t in self.thetas],
            "diagnostics": list(self.diagnostics),
        }

    @classmethod
    def from_dict(cls, data: dict) -> VerificationReport:
        return cls(
            tuple(ThetaValue.from_dict(t) for t in data["thetas"]),
            bool(data["verified"]),
            float(data["tolerance"]),
            int(data["obs_index"]),
            tuple(data.get("diagnostics", ())),
        )


class _Layout:
    """Column offsets of ``d_k, x_k, y_k`` for ``k = p .. n+1``."""

    def __init__(self, sys: System, p: int, n: int):
        self.p, self.n = p, n
        self.nd, self.nx, self.ny = sys.n_d, sys.n_x, sys.n_y
        self.step = self.nd + self.nx + self.ny
        self.n_vars = (n + 2 - p) * self.step

    def d(self, k):
        s = (k - self.p) * self.step
        return slice(s, s + self.nd)

    def x(self, k):
        s = (k - self.p) * self.step + self.nd
        return slice(s, s + self.nx)

    def y(self, k):
        s = (k - self.p) * self.step + self.nd + self.nx
        return slice(s, s + self.ny)


def _guarantee_rows(con: Contract, L: _Layout, k: int) -> np.ndarray:
    """Coefficients of ``G1 [d;y](k+1) + G0 [d;y](k)`` over the window."""
    G1, G0, nd = con.guarantees.G1, con.guarantees.G0, L.nd
    out = np.zeros((con.guarantees.n_rows, L.n_vars))
    out[:, L.d(k + 1)] += G1[:, :nd]
    out[:, L.y(k + 1)] += G1[:, nd:]
    out[:, L.d(k)] += G0[:, :nd]
    out[:, L.y(k)] += G0[:, nd:]
    return out


def theta_constraints(sys: System, con: Contract, x0: InitialSet, n: int, l: int):
    """Window layout and the shared feasible set of every ``theta(n, l)`` row program."""
    check_pairing(sys, con)
    if not 0 <= l <= n:
        raise ValueError(f"need 0 <= l <= n, got n={n}, l={l}")
    p = n - l
    L = _Layout(sys, p, n)
    ass, gua = con.assumptions, con.guarantees
    ineq, b_ineq, eq, b_eq = [], [], [], []

    for k in range(p, n):
        ineq.append(_guarantee_rows(con, L, k))
        b_ineq.append(gua.g0)
    for k in range(p, n + 1):
        rows = np.zeros((ass.n_rows, L.n_vars))
        rows[:, L.d(k + 1)] = ass.A1
        rows[:, L.d(k)] += ass.A0
        ineq.append(rows)
        b_ineq.append(ass.a0)
    for k in range(p, n + 1):
        rows = np.zeros((L.nx, L.n_vars))
        rows[:, L.x(k + 1)] = np.eye(L.nx)
        rows[:, L.x(k)] -= sys.A
        rows[:, L.d(k)] -= sys.B
        eq.append(rows)
        b_eq.append(sys.w)
    for k in range(p, n + 2):
        rows = np.zeros((L.ny, L.n_vars))
        rows[:, L.y(k)] = np.eye(L.ny)
        rows[:, L.x(k)] -= sys.C
        rows[:, L.d(k)] -= sys.D
        eq.append(rows)
        b_eq.append(sys.v)
    if p == 0 and x0.n_rows:
        rows = np.zeros((x0.n_rows, L.n_vars))
        rows[:, L.x(0)] = x0.Fx
        rows[:, L.d(0)] += x0.Fd
        ineq.append(rows)
        b_ineq.append(x0.f)

    def stack(blocks, width):
        return np.vstack(blocks) if blocks else np.zeros((0, width))

    base = lp.LinearProgram(
        np.zeros(L.n_vars),
        stack(ineq, L.n_vars),
        np.concatenate(b_ineq) if b_ineq else np.zeros(0),
        stack(eq, L.n_vars),
        np.concatenate(b_eq) if b_eq else np.zeros(0),
    )
    return L, base


def build_theta_lp(sys: System, con: Contract, x0: InitialSet, n: int, l: int, row: int) -> lp.LinearProgram:
    """Program maximizing guarantee row *row* at step ``n`` (constant ``-g0[row]`` dropped)."""
    if not 0 <= row < con.guarantees.n_rows:
        raise IndexError(f"guarantee row {row} out of range for {con.guarantees.n_rows} rows")
    L, base = theta_constraints(sys, con, x0, n, l)
    return base.with_objective(_guarantee_rows(con, L, n)[row])


def _max_over_rows(base: lp.LinearProgram, objectives: np.ndarray, offsets: np.ndarray):
    """Solve one program per objective row; returns ``(status, value, row_values)``.

    Statuses follow :class:`ThetaStatus`; an empty objective set yields a
    vacuous ``-inf``.
    """
    if objectives.shape[0] == 0:
        return ThetaStatus.VALUE, -math.inf, ()
    values = []
    unbounded = False
    for c, off in zip(objectives, offsets):
        out = lp.solve(base.with_objective(c))
        if out.status is lp.Status.INFEASIBLE:
            return ThetaStatus.INFEASIBLE, None, ()
        if out.status is lp.Status.UNBOUNDED:
            unbounded = True
            values.append(math.inf)
        else:
            values.append(float(out.value - off))
    if unbounded:
        return ThetaStatus.PLUS_INFINITY, math.inf, tuple(values)
    return ThetaStatus.VALUE, max(values), tuple(values)


def compute_theta(sys: System, con: Contract, x0: InitialSet | None, n: int, l: int) -> ThetaValue:
    x0 = sys.x0 if x0 is None else x0
    if con.guarantees.n_rows == 0:
        return ThetaValue(n, l, ThetaStatus.VALUE, -math.inf, vacuous=True)
    L, base = theta_constraints(sys, con, x0, n, l)
    status, value, rows = _max_over_rows(base, _guarantee_rows(con, L, n), con.guarantees.g0)
    return ThetaValue(n, l, status, value, row_values=rows)


def theta_index_set(obs_index: int) -> list[tuple[int, int]]:
    return [(k, k) for k in range(obs_index)] + [(obs_index + 1, obs_index)]


def verify_contract(sys: System, con: Contract, x0: InitialSet | None = None,
                    tolerance: float = TOLERANCE) -> VerificationReport:
    """Decide ``sys |= con`` from ``nu + 1`` theta values.

    ``verified`` is true only when every theta is a finite-or-vacuous value
    at most *tolerance*. Extendability of the assumptions is not checked
    here (see :func:`agcontracts.compose.check_extendable`).
    """
    x0 = sys.x0 if x0 is None else x0
    check_pairing(sys, con)
    thetas = tuple(compute_theta(sys, con, x0, n, l) for n, l in theta_index_set(sys.obs_index))
    diagnostics = []
    if any(t.status is ThetaStatus.INFEASIBLE for t in thetas):
        diagnostics.append(
            "infeasible window program: the assumptions (with the initial set) may be empty "
            "or not extendable; satisfaction would hold only vacuously"
        )
    if any(t.status is ThetaStatus.PLUS_INFINITY for t in thetas):
        diagnostics.append("unbounded window program: guarantee violation is not bounded on this window")
    if con.guarantees.n_rows == 0:
        diagnostics.append("contract has no guarantee rows; satisfied vacuously")
    verified = all(t.at_most(tolerance) for t in thetas)
    return VerificationReport(thetas, verified, tolerance, sys.obs_index, tuple(diagnostics))
