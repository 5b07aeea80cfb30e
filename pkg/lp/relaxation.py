"""
LP relaxation of a Model

Columns fixed by the model (lb == ub) are presolved away: their
contribution moves into the row bounds. Branching fixings are plain bound
changes on the remaining columns, cuts are appended rows. Appending and
reading rows is guarded by a lock so tree workers can share one instance.
"""

import logging
import threading
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from formulation.model_builder import Model
from formulation.rows import EQ, GE, LE, Row

from .backends import INFEASIBLE, LpBasis, LpProblem, LpResult, solve_lp

logger = logging.getLogger(__name__)


class ModelRelaxation:

    def __init__(self, model: Model):
        self.model = model
        fixed = model.fixed_mask
        self.active = np.flatnonzero(~fixed)
        self.position = np.full(model.n_columns, -1, dtype=int)
        self.position[self.active] = np.arange(self.active.size)
        self.fixed_point = np.where(fixed, model.lb, 0.0)
        self.trivially_infeasible = False
        self._lock = threading.Lock()

        self._A: List[np.ndarray] = []
        self._lo: List[float] = []
        self._hi: List[float] = []
        for row in model.rows:
            self._append(row)
        self.n_static_rows = len(self._A)

    @property
    def n_active(self) -> int:
        return int(self.active.size)

    @property
    def n_rows(self) -> int:
        return len(self._A)

    def _append(self, row: Row) -> bool:
        coeffs = np.zeros(self.n_active)
        constant = 0.0
        for col, val in zip(row.idx, row.val):
            pos = self.position[col]
            if pos >= 0:
                coeffs[pos] += val
            else:
                constant += val * self.fixed_point[col]
        rhs = row.rhs - constant
        lo = rhs if row.sense in (GE, EQ) else -np.inf
        hi = rhs if row.sense in (LE, EQ) else np.inf

        if not np.any(coeffs):
            if lo > 1e-9 or hi < -1e-9:
                logger.debug(f"Row {row.name} is violated by the fixed columns alone")
                self.trivially_infeasible = True
            return False
        self._A.append(coeffs)
        self._lo.append(lo)
        self._hi.append(hi)
        return True

    def add_rows(self, rows: Iterable[Row]) -> int:
        with self._lock:
            return sum(1 for row in rows if self._append(row))

    def bounds(self, fixings: Optional[Dict[int, Tuple[float, float]]] = None):
        lb = self.model.lb[self.active].copy()
        ub = self.model.ub[self.active].copy()
        for col, (lo, hi) in (fixings or {}).items():
            pos = self.position[col]
            if pos >= 0:
                lb[pos], ub[pos] = lo, hi
        return lb, ub

    def problem(self, fixings=None) -> LpProblem:
        lb, ub = self.bounds(fixings)
        with self._lock:
            A = np.array(self._A) if self._A else np.zeros((0, self.n_active))
            lo = np.array(self._lo, dtype=float)
            hi = np.array(self._hi, dtype=float)
        return LpProblem(
            A=A,
            row_lo=lo,
            row_hi=hi,
            c=self.model.objective[self.active].copy(),
            lb=lb, ub=ub,
        )

    def constant(self) -> float:
        return float(self.model.objective @ self.fixed_point)

    def expand(self, x_active: np.ndarray) -> np.ndarray:
        point = self.fixed_point.copy()
        point[self.active] = x_active
        return point

    def solve(self, fixings=None, warm_basis: Optional[LpBasis] = None,
              backend: Optional[str] = None) -> Tuple[LpResult, Optional[np.ndarray], Optional[float]]:
        """
        Returns:
            (LpResult, full model point or None, objective including fixed columns or None)
        """
        if self.trivially_infeasible:
            return LpResult(status=INFEASIBLE), None, None
        result = solve_lp(self.problem(fixings), warm_basis=warm_basis, backend=backend)
        if not result.is_optimal:
            return result, None, None
        return result, self.expand(result.x), result.objective + self.constant()
