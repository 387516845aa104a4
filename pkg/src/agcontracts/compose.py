"""Series interconnection of systems and the extendability check."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import lp
from .linalg import DimensionError, as_matrix, as_vector
from .model import InitialSet, System, build_system
from .verify import TOLERANCE

MAX_FM_ROWS = 10_000


class EliminationBlowup(RuntimeError):
    """Fourier-Motzkin produced more rows than the configured limit."""


def cascade_systems(s1: System, s2: System) -> System:
    """Feed the output of *s1* into the input of *s2*.

    The composed state is ``[x1; x2]``. Offsets propagate through the
    interconnection: ``w = [w1; B2 v1 + w2]`` and ``v = D2 v1 + v2``. The
    initial set is the conjunction of both, with s2's input term rewritten
    through ``y1(0) = C1 x1(0) + D1 d(0) + v1``.
    """
    if s1.n_y != s2.n_d:
        raise DimensionError(f"cannot cascade: first system outputs {s1.n_y} signals, second expects {s2.n_d}")
    n1, n2 = s1.n_x, s2.n_x
    A = np.block([[s1.A, np.zeros((n1, n2))], [s2.B @ s1.C, s2.A]])
    B = np.vstack([s1.B, s2.B @ s1.D])
    C = np.hstack([s2.D @ s1.C, s2.C])
    D = s2.D @ s1.D
    w = np.concatenate([s1.w, s2.B @ s1.v + s2.w])
    v = s2.D @ s1.v + s2.v

    i1, i2 = s1.x0, s2.x0
    Fx = np.vstack([
        np.hstack([i1.Fx, np.zeros((i1.n_rows, n2))]),
        np.hstack([i2.Fd @ s1.C, i2.Fx]),
    ])
    Fd = np.vstack([i1.Fd, i2.Fd @ s1.D])
    f = np.concatenate([i1.f, i2.f - i2.Fd @ s1.v])
    return build_system(A, B, C, D, w, v, InitialSet(Fx, Fd, f))


def _normalize(rows: np.ndarray) -> np.ndarray:
    scale = np.max(np.abs(rows[:, :-1]), axis=1) if rows.shape[1] > 1 else np.zeros(len(rows))
    scale[scale == 0.0] = 1.0
    return rows / scale[:, None]


def _dedupe(rows: np.ndarray) -> np.ndarray:
    seen = {}
    for r in rows:
        key = tuple(np.round(r, 12))
        seen.setdefault(key, r)
    return np.array(list(seen.values())).reshape(-1, rows.shape[1])


def fourier_motzkin(M: np.ndarray, b: np.ndarray, n_elim: int, max_rows: int = MAX_FM_ROWS):
    """Project ``{z : M z <= b}`` onto all but the first *n_elim* coordinates.

    Returns ``(Q, q)`` describing the projection. Redundancy is pruned only
    by removing duplicate normalized rows.
    """
    rows = np.hstack([np.asarray(M, float), np.asarray(b, float)[:, None]])
    for _ in range(n_elim):
        col = rows[:, 0]
        pos = rows[col > 0] / col[col > 0, None]
        neg = rows[col < 0] / -col[col < 0, None]
        zero = rows[col == 0]
        if len(zero) + len(pos) * len(neg) > max_rows:
            raise EliminationBlowup(
                f"elimination would create {len(zero) + len(pos) * len(neg)} rows (limit {max_rows})"
            )
        combined = (pos[:, None, :] + neg[None, :, :]).reshape(-1, rows.shape[1])
        rows = np.vstack([zero, combined])[:, 1:]
        if len(rows):
            rows = _dedupe(_normalize(rows))
    return rows[:, :-1], rows[:, -1]


@dataclass(frozen=True)
class Extendability:
    extendable: bool
    vacuous: bool = False
    worst: float = float("-inf")

    def __bool__(self) -> bool:
        return self.extendable


def check_extendable(V1, V0, v0, tolerance: float = TOLERANCE) -> Extendability:
    """Whether every feasible pair ``(u0, u1)`` admits a next value ``u2``.

    ``u2`` is eliminated from ``V1 u2 + V0 u1 <= v0`` by Fourier-Motzkin,
    giving ``Q u1 <= q``; each row is then maximized over the pairs with
    ``V1 u1 + V0 u0 <= v0``.
    """
    V1 = as_matrix(V1, "V1")
    V0 = as_matrix(V0, "V0", cols=V1.shape[1])
    v0 = as_vector(v0, "v0", V1.shape[0])
    if V1.shape != V0.shape:
        raise DimensionError(f"V1 has shape {V1.shape} but V0 has shape {V0.shape}")
    n = V1.shape[1]
    Q, q = fourier_motzkin(np.hstack([V1, V0]), v0, n)
    # pair variables [u0, u1]
    base = lp.LinearProgram.build(np.zeros(2 * n), np.hstack([V0, V1]), v0)
    probe = lp.solve(base)
    if probe.status is lp.Status.INFEASIBLE:
        return Extendability(True, vacuous=True)
    worst = float("-inf")
    for row, rhs in zip(Q, q):
        out = lp.solve(base.with_objective(np.concatenate([np.zeros(n), row])))
        if out.status is lp.Status.UNBOUNDED:
            return Extendability(False, worst=float("inf"))
        worst = max(worst, float(out.value - rhs))
    return Extendability(bool(worst <= tolerance), worst=worst)
