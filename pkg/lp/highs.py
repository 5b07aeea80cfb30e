"""
External LP backend: HiGHS through scipy.optimize.linprog

No warm starts; the basis descriptor of the result is always None.
"""

import logging
from typing import Optional

import numpy as np
from scipy.optimize import linprog

from .backends import (INFEASIBLE, ITERATION_LIMIT, OPTIMAL, UNBOUNDED, LpBasis, LpProblem,
                       LpResult, register_backend)

logger = logging.getLogger(__name__)

_STATUS = {0: OPTIMAL, 1: ITERATION_LIMIT, 2: INFEASIBLE, 3: UNBOUNDED}


def _split_rows(problem: LpProblem):
    A, lo, hi = problem.A, problem.row_lo, problem.row_hi
    eq = np.isfinite(lo) & np.isfinite(hi) & (lo == hi)
    upper = np.isfinite(hi) & ~eq
    lower = np.isfinite(lo) & ~eq
    A_ub = np.vstack([A[upper], -A[lower]])
    b_ub = np.concatenate([hi[upper], -lo[lower]])
    return A_ub, b_ub, A[eq], lo[eq]


@register_backend('highs')
def solve_highs(problem: LpProblem, warm_basis: Optional[LpBasis] = None,
                max_iterations: Optional[int] = None) -> LpResult:
    A_ub, b_ub, A_eq, b_eq = _split_rows(problem)
    options = {'presolve': True}
    if max_iterations:
        options['maxiter'] = int(max_iterations)
    res = linprog(
        problem.c,
        A_ub=A_ub if A_ub.size else None,
        b_ub=b_ub if A_ub.size else None,
        A_eq=A_eq if A_eq.size else None,
        b_eq=b_eq if A_eq.size else None,
        bounds=np.column_stack([problem.lb, problem.ub]),
        method='highs',
        options=options,
    )
    status = _STATUS.get(res.status, ITERATION_LIMIT)
    if status != OPTIMAL:
        logger.debug(f"HiGHS finished with status {res.status}: {res.message}")
        return LpResult(status=status, iterations=int(getattr(res, 'nit', 0) or 0))
    x = np.clip(res.x, problem.lb, problem.ub)
    return LpResult(status=OPTIMAL, x=x, objective=float(problem.c @ x),
                    iterations=int(getattr(res, 'nit', 0) or 0))
