"""
LP backend contract

Problems are stated in row-bound form

    minimize    c @ x
    subject to  row_lo <= A @ x <= row_hi
                lb <= x <= ub

with finite column bounds. Backends register under a name and are picked
through LP_SETTINGS['backend'] unless a caller asks for one explicitly.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Optional, Tuple

import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError

logger = logging.getLogger(__name__)

OPTIMAL = 'optimal'
INFEASIBLE = 'infeasible'
UNBOUNDED = 'unbounded'
ITERATION_LIMIT = 'iteration_limit'
STATUSES = (OPTIMAL, INFEASIBLE, UNBOUNDED, ITERATION_LIMIT)


@dataclass(frozen=True, eq=False)
class LpProblem:
    A: np.ndarray
    row_lo: np.ndarray
    row_hi: np.ndarray
    c: np.ndarray
    lb: np.ndarray
    ub: np.ndarray

    @property
    def n_rows(self) -> int:
        return int(self.A.shape[0])

    @property
    def n_cols(self) -> int:
        return int(self.A.shape[1])

    def with_bounds(self, lb: np.ndarray, ub: np.ndarray) -> 'LpProblem':
        return LpProblem(self.A, self.row_lo, self.row_hi, self.c, lb, ub)

    def with_rows(self, A_new: np.ndarray, lo_new: np.ndarray, hi_new: np.ndarray) -> 'LpProblem':
        if A_new.size == 0:
            return self
        return LpProblem(
            np.vstack([self.A, A_new]),
            np.concatenate([self.row_lo, lo_new]),
            np.concatenate([self.row_hi, hi_new]),
            self.c, self.lb, self.ub,
        )


@dataclass(frozen=True)
class LpBasis:
    """
    Warm-start descriptor

    basic     ids of basic variables in the extended space: structural j is j,
              the logical of row i is n_cols + i
    at_upper  nonbasic ids resting at their upper bound
    """
    basic: Tuple[int, ...]
    at_upper: FrozenSet[int] = field(default_factory=frozenset)
    n_cols: int = 0

    def extended(self, n_rows: int) -> 'LpBasis':
        """Same basis for a problem with extra rows appended: their logicals become basic."""
        present = len(self.basic)
        if n_rows <= present:
            return self
        extra = tuple(self.n_cols + i for i in range(present, n_rows))
        return LpBasis(self.basic + extra, self.at_upper, self.n_cols)


@dataclass
class LpResult:
    status: str
    x: Optional[np.ndarray] = None
    objective: Optional[float] = None
    basis: Optional[LpBasis] = None
    iterations: int = 0
    warm_started: bool = False

    @property
    def is_optimal(self) -> bool:
        return self.status == OPTIMAL


# ============================================================================
# REGISTRY
# ============================================================================

_BACKENDS: Dict[str, Callable[..., LpResult]] = {}


def register_backend(name: str):
    def decorator(func):
        _BACKENDS[name] = func
        return func
    return decorator


def available_backends():
    _load_builtin()
    return sorted(_BACKENDS)


def _load_builtin():
    # importing registers them
    from . import highs, simplex  # noqa: F401


def validate_problem(problem: LpProblem):
    m, n = problem.A.shape
    for name, vec, size in (('row_lo', problem.row_lo, m), ('row_hi', problem.row_hi, m),
                            ('c', problem.c, n), ('lb', problem.lb, n), ('ub', problem.ub, n)):
        if vec.shape != (size,):
            raise ValidationError(f"LP {name}: expected length {size}, got shape {vec.shape}")
    if not (np.all(np.isfinite(problem.lb)) and np.all(np.isfinite(problem.ub))):
        raise ValidationError("LP column bounds must be finite")


def solve_lp(problem: LpProblem, warm_basis: Optional[LpBasis] = None,
             backend: Optional[str] = None, **options) -> LpResult:
    """
    Solve an LP with the configured backend

    Args:
        problem: LpProblem
        warm_basis: basis of a previous solve of a related problem
        backend: backend name, defaults to LP_SETTINGS['backend']

    Returns:
        LpResult; statuses other than optimal are reported, never raised

    Raises:
        ValidationError: inconsistent dimensions or unknown backend
    """
    validate_problem(problem)
    _load_builtin()
    name = backend or settings.LP_SETTINGS['backend']
    if name not in _BACKENDS:
        raise ValidationError(f"Unknown LP backend '{name}', available: {sorted(_BACKENDS)}")
    result = _BACKENDS[name](problem, warm_basis=warm_basis, **options)
    if result.status != OPTIMAL:
        logger.debug(f"LP {problem.n_rows}x{problem.n_cols} ended with status {result.status}")
    return result
