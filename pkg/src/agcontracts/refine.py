"""Contract refinement ``C1 <= C2`` through two one-step programs.

``psi_d`` bounds how far C1's assumption rows can be violated on C2's
assumption set; ``psi_omega`` bounds C2's guarantee rows on the set where
C1's guarantees and C2's assumptions hold. Both at most the tolerance means
C1 refines C2 (given extendability of C2's assumption triple and of the
combined triple).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import lp
from .linalg import DimensionError
from .model import Contract
from .verify import TOLERANCE, ThetaStatus, _max_over_rows


@dataclass(frozen=True)
class PsiValue:
    status: ThetaStatus
    value: float | None = None
    vacuous: bool = False
    row_values: tuple = ()

    def at_most(self, tol: float) -> bool:
        return self.status is ThetaStatus.VALUE and self.value <= tol

    def to_dict(self) -> dict:
        finite = self.value is not None and not math.isinf(self.value)
        return {
            "status": self.status.value,
            "value": self.value if finite else None,
            "vacuous": self.vacuous,
            "row_values": [v if math.isfinite(v) else None for v in self.row_values],
        }

    @classmethod
    def from_dict(cls, data: dict) -> PsiValue:
        status = ThetaStatus(data["status"])
        value = data.get("value")
        if value is None and status is ThetaStatus.VALUE:
            value = -math.inf
        elif value is None and status is ThetaStatus.PLUS_INFINITY:
            value = math.inf
        rows = tuple(math.inf if v is None else v for v in data.get("row_values", ()))
        return cls(status, value, bool(data.get("vacuous", False)), rows)


@dataclass(frozen=True)
class RefinementReport:
    psi_d: PsiValue
    psi_omega: PsiValue
    refines: bool
    tolerance: float
    diagnostics: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "refines": self.refines,
            "tolerance": self.tolerance,
            "psi_d": self.psi_d.to_dict(),
            "psi_omega": self.psi_omega.to_dict(),
            "diagnostics": list(self.diagnostics),
        }

    @classmethod
    def from_dict(cls, data: dict) -> RefinementReport:
        return cls(
            PsiValue.from_dict(data["psi_d"]),
            PsiValue.from_dict(data["psi_omega"]),
            bool(data["refines"]),
            float(data["tolerance"]),
            tuple(data.get("diagnostics", ())),
        )


def _check_dims(c1: Contract, c2: Contract, outputs: bool) -> None:
    if c1.n_d != c2.n_d:
        raise DimensionError(f"input dimensions differ: {c1.n_d} vs {c2.n_d}")
    if outputs and c1.n_y != c2.n_y:
        raise DimensionError(f"output dimensions differ: {c1.n_y} vs {c2.n_y}")


def _solve(base: lp.LinearProgram, objectives: np.ndarray, offsets: np.ndarray) -> PsiValue:
    status, value, rows = _max_over_rows(base, objectives, offsets)
    return PsiValue(status, value, vacuous=objectives.shape[0] == 0, row_values=rows)


def psi_d(c1: Contract, c2: Contract) -> PsiValue:
    """Worst violation of C1's assumption rows over ``(d0, d1)`` allowed by C2."""
    _check_dims(c1, c2, outputs=False)
    A, B = c1.assumptions, c2.assumptions
    # variables [d0, d1]
    base = lp.LinearProgram.build(np.zeros(2 * c1.n_d), np.hstack([B.A0, B.A1]), B.a0)
    return _solve(base, np.hstack([A.A0, A.A1]), A.a0)


def psi_omega(c1: Contract, c2: Contract) -> PsiValue:
    """Worst violation of C2's guarantee rows where C1's guarantees and C2's assumptions hold."""
    _check_dims(c1, c2, outputs=True)
    nd = c1.n_d
    width = c1.guarantees.width
    G, H, B = c1.guarantees, c2.guarantees, c2.assumptions
    # variables [dy0, dy1] with dy = [d; y]
    b_rows = np.zeros((B.n_rows, 2 * width))
    b_rows[:, :nd] = B.A0
    b_rows[:, width:width + nd] = B.A1
    base = lp.LinearProgram.build(
        np.zeros(2 * width),
        np.vstack([np.hstack([G.G0, G.G1]), b_rows]),
        np.concatenate([G.g0, B.a0]),
    )
    return _solve(base, np.hstack([H.G0, H.G1]), H.g0)


def check_refinement(c1: Contract, c2: Contract, tolerance: float = TOLERANCE) -> RefinementReport:
    d = psi_d(c1, c2)
    o = psi_omega(c1, c2)
    diagnostics = []
    if d.status is ThetaStatus.INFEASIBLE:
        diagnostics.append("C2's assumption set is empty; refinement would hold only vacuously")
    elif o.status is ThetaStatus.INFEASIBLE:
        diagnostics.append("C1's guarantees and C2's assumptions are jointly infeasible")
    if o.status is ThetaStatus.PLUS_INFINITY:
        diagnostics.append("C2's guarantee violation is unbounded on C1's guarantee set")
    if d.status is ThetaStatus.PLUS_INFINITY:
        diagnostics.append("C1's assumption violation is unbounded on C2's assumption set")
    return RefinementReport(d, o, d.at_most(tolerance) and o.at_most(tolerance), tolerance, tuple(diagnostics))
