"""
Bundled LP backend: bounded-variable revised simplex

Every row gets a logical column so the constraint matrix is [A | -I] and
A @ x - s = 0 with row_lo <= s <= row_hi. The basis inverse is kept dense
and refactorized periodically. Cold solves run Phase I on artificial
columns, warm solves run the dual simplex from the supplied basis and fall
back to a cold solve when that basis is unusable.
"""

import logging
from typing import List, Optional, Set

import numpy as np
from django.conf import settings

from .backends import (INFEASIBLE, ITERATION_LIMIT, OPTIMAL, UNBOUNDED, LpBasis, LpProblem,
                       LpResult, register_backend)

logger = logging.getLogger(__name__)

PIVOT_TOL = 1e-9
DEGENERATE_STEP = 1e-12


class SingularBasis(Exception):
    pass


class BoundedSimplex:
    """
    Simplex state over the extended matrix M (rows x columns), all rows
    homogeneous: M @ z = 0, lo <= z <= hi.
    """

    def __init__(self, M: np.ndarray, cost: np.ndarray, lo: np.ndarray, hi: np.ndarray,
                 basic: List[int], at_upper: Set[int], max_iterations: int):
        cfg = settings.LP_SETTINGS
        tol = settings.SOLVER_TOLERANCES
        self.M = M
        self.cost = cost
        self.lo = lo
        self.hi = hi
        self.m, self.N = M.shape
        self.basic = list(basic)
        self.at_upper = set(at_upper)
        self.max_iterations = max_iterations
        self.iterations = 0
        self.degenerate = 0
        self.bland = False
        self.bland_after = cfg['bland_after_degenerate']
        self.refactor_every = cfg['refactor_every']
        self.feas_tol = tol['feasibility']
        self.dual_tol = 1e-9 * max(1.0, float(np.abs(cost).max(initial=0.0)))
        self.z = np.zeros(self.N)
        self._since_refactor = 0
        self.refactor()

    # ------------------------------------------------------------------
    # Basis bookkeeping
    # ------------------------------------------------------------------

    def nonbasic_mask(self) -> np.ndarray:
        mask = np.ones(self.N, dtype=bool)
        mask[self.basic] = False
        return mask

    def refactor(self):
        B = self.M[:, self.basic]
        try:
            self.B_inv = np.linalg.inv(B)
        except np.linalg.LinAlgError:
            raise SingularBasis()
        if not np.all(np.isfinite(self.B_inv)) or np.abs(self.B_inv).max(initial=0.0) > 1e12:
            raise SingularBasis()
        self._since_refactor = 0
        self.place_nonbasic()
        self.compute_basic()

    def place_nonbasic(self):
        nb = self.nonbasic_mask()
        for j in np.flatnonzero(nb):
            if j in self.at_upper:
                self.z[j] = self.hi[j]
            else:
                self.z[j] = self.lo[j]

    def compute_basic(self):
        nb = self.nonbasic_mask()
        rhs = self.M[:, nb] @ self.z[nb]
        self.z[self.basic] = -self.B_inv @ rhs

    def reduced_costs(self) -> np.ndarray:
        y = self.cost[self.basic] @ self.B_inv
        d = self.cost - y @ self.M
        d[self.basic] = 0.0
        return d

    def pivot(self, r: int, q: int, alpha: np.ndarray, leaving_at_upper: bool = False):
        leaving = self.basic[r]
        if leaving_at_upper:
            self.at_upper.add(leaving)
        else:
            self.at_upper.discard(leaving)
        pr = self.B_inv[r] / alpha[r]
        self.B_inv -= np.outer(alpha, pr)
        self.B_inv[r] = pr
        self.basic[r] = q
        self.at_upper.discard(q)
        self._since_refactor += 1
        if self._since_refactor >= self.refactor_every:
            self.refactor()

    def objective(self) -> float:
        return float(self.cost @ self.z)

    def primal_infeasibility(self) -> np.ndarray:
        zb = self.z[self.basic]
        return np.maximum(self.lo[self.basic] - zb, 0.0) + np.maximum(zb - self.hi[self.basic], 0.0)

    # ------------------------------------------------------------------
    # Primal simplex (requires a primal feasible basis)
    # ------------------------------------------------------------------

    def _entering(self, d: np.ndarray):
        nb = self.nonbasic_mask()
        movable = nb & (self.hi > self.lo)
        upper = np.zeros(self.N, dtype=bool)
        if self.at_upper:
            upper[list(self.at_upper)] = True
        can_up = movable & ~upper & (d < -self.dual_tol)
        can_down = movable & upper & (d > self.dual_tol)
        candidates = np.flatnonzero(can_up | can_down)
        if candidates.size == 0:
            return None, 0
        if self.bland:
            q = int(candidates[0])
        else:
            q = int(candidates[np.argmax(np.abs(d[candidates]))])
        return q, (1 if can_up[q] else -1)

    def primal(self) -> str:
        while True:
            if self.iterations >= self.max_iterations:
                return ITERATION_LIMIT
            d = self.reduced_costs()
            q, direction = self._entering(d)
            if q is None:
                return OPTIMAL

            alpha = self.B_inv @ self.M[:, q]
            rate = -alpha * direction
            zb = self.z[self.basic]
            lo_b = self.lo[self.basic]
            hi_b = self.hi[self.basic]

            limits = np.full(self.m, np.inf)
            dec = rate < -PIVOT_TOL
            inc = rate > PIVOT_TOL
            limits[dec] = np.maximum(zb[dec] - lo_b[dec], 0.0) / -rate[dec]
            limits[inc] = np.maximum(hi_b[inc] - zb[inc], 0.0) / rate[inc]
            flip = self.hi[q] - self.lo[q]

            step = float(limits.min()) if self.m else np.inf
            if flip <= step:
                if not np.isfinite(flip):
                    return UNBOUNDED
                self.z[self.basic] = zb + rate * flip
                if direction > 0:
                    self.z[q] = self.hi[q]
                    self.at_upper.add(q)
                else:
                    self.z[q] = self.lo[q]
                    self.at_upper.discard(q)
                self.iterations += 1
                continue
            if not np.isfinite(step):
                return UNBOUNDED

            ties = np.flatnonzero(limits <= step + DEGENERATE_STEP)
            if self.bland:
                r = int(min(ties, key=lambda i: self.basic[i]))
            else:
                r = int(ties[np.argmax(np.abs(alpha[ties]))])

            leaving = self.basic[r]
            self.z[self.basic] = zb + rate * step
            self.z[q] += direction * step
            hits_upper = rate[r] > 0
            self.z[leaving] = self.hi[leaving] if hits_upper else self.lo[leaving]
            self.pivot(r, q, alpha, leaving_at_upper=hits_upper)

            self.iterations += 1
            if step <= DEGENERATE_STEP:
                self.degenerate += 1
                if not self.bland and self.degenerate >= self.bland_after:
                    self.bland = True
                    logger.debug(f"Switching to Bland's rule after {self.degenerate} degenerate pivots")

    # ------------------------------------------------------------------
    # Dual simplex (requires a dual feasible basis)
    # ------------------------------------------------------------------

    def is_dual_feasible(self, d: np.ndarray) -> bool:
        nb = self.nonbasic_mask() & (self.hi > self.lo)
        upper = np.zeros(self.N, dtype=bool)
        if self.at_upper:
            upper[list(self.at_upper)] = True
        wrong_low = nb & ~upper & (d < -1e3 * self.dual_tol)
        wrong_up = nb & upper & (d > 1e3 * self.dual_tol)
        return not (wrong_low.any() or wrong_up.any())

    def dual(self) -> str:
        while True:
            if self.iterations >= self.max_iterations:
                return ITERATION_LIMIT
            infeas = self.primal_infeasibility()
            if infeas.size == 0 or infeas.max() <= self.feas_tol:
                return OPTIMAL
            r = int(np.argmax(infeas))
            leaving = self.basic[r]
            zr = self.z[leaving]
            below = zr < self.lo[leaving]
            bound = self.lo[leaving] if below else self.hi[leaving]
            delta = zr - bound

            d = self.reduced_costs()
            row = self.B_inv[r] @ self.M
            nb = self.nonbasic_mask() & (self.hi > self.lo)
            upper = np.zeros(self.N, dtype=bool)
            if self.at_upper:
                upper[list(self.at_upper)] = True
            if delta < 0:
                eligible = nb & ((~upper & (row < -PIVOT_TOL)) | (upper & (row > PIVOT_TOL)))
            else:
                eligible = nb & ((~upper & (row > PIVOT_TOL)) | (upper & (row < -PIVOT_TOL)))
            candidates = np.flatnonzero(eligible)
            if candidates.size == 0:
                return INFEASIBLE

            ratios = np.abs(d[candidates] / row[candidates])
            best = ratios.min()
            ties = candidates[ratios <= best + 1e-12]
            q = int(ties[np.argmax(np.abs(row[ties]))])

            alpha = self.B_inv @ self.M[:, q]
            step = delta / alpha[r]
            self.z[self.basic] -= alpha * step
            self.z[q] += step
            self.z[leaving] = bound
            self.pivot(r, q, alpha, leaving_at_upper=not below)
            self.iterations += 1


# ============================================================================
# DRIVER
# ============================================================================

def _extended(problem: LpProblem):
    m, n = problem.A.shape
    M = np.hstack([problem.A, -np.eye(m)])
    lo = np.concatenate([problem.lb, problem.row_lo])
    hi = np.concatenate([problem.ub, problem.row_hi])
    cost = np.concatenate([problem.c, np.zeros(m)])
    return M, cost, lo, hi


def _result(problem: LpProblem, solver: BoundedSimplex, status: str, warm: bool) -> LpResult:
    n = problem.n_cols
    if status != OPTIMAL:
        return LpResult(status=status, iterations=solver.iterations, warm_started=warm)
    x = np.clip(solver.z[:n], problem.lb, problem.ub)
    basis = None
    if all(b < n + problem.n_rows for b in solver.basic):
        basis = LpBasis(
            basic=tuple(int(b) for b in solver.basic),
            at_upper=frozenset(int(j) for j in solver.at_upper if j < n + problem.n_rows),
            n_cols=n,
        )
    return LpResult(status=OPTIMAL, x=x, objective=float(problem.c @ x), basis=basis,
                    iterations=solver.iterations, warm_started=warm)


def _is_primal_feasible(problem: LpProblem, x: np.ndarray) -> bool:
    tol = settings.SOLVER_TOLERANCES['feasibility']
    activity = problem.A @ x
    scale = 1.0 + np.abs(problem.A).sum(axis=1) if problem.n_rows else 1.0
    return bool(np.all(activity >= problem.row_lo - tol * scale) and np.all(activity <= problem.row_hi + tol * scale))


def _iteration_cap(problem: LpProblem) -> int:
    return settings.LP_SETTINGS['iteration_factor'] * (problem.n_rows + problem.n_cols + 1)


def _cold_solve(problem: LpProblem, max_iterations: int) -> LpResult:
    m, n = problem.A.shape
    M, cost, lo, hi = _extended(problem)
    x0 = problem.lb.copy()
    activity = problem.A @ x0

    basic, artificial_cols, signs = [], [], []
    for i in range(m):
        if problem.row_lo[i] <= activity[i] <= problem.row_hi[i]:
            basic.append(n + i)
        else:
            bound = problem.row_lo[i] if activity[i] < problem.row_lo[i] else problem.row_hi[i]
            artificial_cols.append(i)
            signs.append(1.0 if bound - activity[i] > 0 else -1.0)

    k = len(artificial_cols)
    at_upper = set()
    if k:
        D = np.zeros((m, k))
        D[artificial_cols, np.arange(k)] = signs
        M1 = np.hstack([M, D])
        lo1 = np.concatenate([lo, np.zeros(k)])
        hi1 = np.concatenate([hi, np.full(k, np.inf)])
        cost1 = np.concatenate([np.zeros(n + m), np.ones(k)])
        art_ids = list(range(n + m, n + m + k))
        # logical of a violated row sits at the violated bound
        for idx, i in enumerate(artificial_cols):
            if activity[i] > problem.row_hi[i]:
                at_upper.add(n + i)
        row_of = {i: art_ids[idx] for idx, i in enumerate(artificial_cols)}
        basis1 = [row_of.get(i, n + i) for i in range(m)]
        solver = BoundedSimplex(M1, cost1, lo1, hi1, basis1, at_upper, max_iterations)
        status = solver.primal()
        if status == ITERATION_LIMIT:
            return LpResult(status=ITERATION_LIMIT, iterations=solver.iterations)
        scale = 1.0 + float(np.abs(problem.A).max(initial=0.0))
        if solver.objective() > settings.SOLVER_TOLERANCES['feasibility'] * scale * max(1, k):
            return LpResult(status=INFEASIBLE, iterations=solver.iterations)

        # drive zero-valued artificials out of the basis
        for r in range(m):
            if solver.basic[r] < n + m:
                continue
            row = solver.B_inv[r] @ solver.M[:, :n + m]
            nb = solver.nonbasic_mask()[:n + m]
            cand = np.flatnonzero(nb & (np.abs(row) > 1e-7))
            if cand.size:
                q = int(cand[np.argmax(np.abs(row[cand]))])
                alpha = solver.B_inv @ solver.M[:, q]
                leaving = solver.basic[r]
                solver.pivot(r, q, alpha)
                solver.z[leaving] = 0.0
        solver.lo[n + m:] = 0.0
        solver.hi[n + m:] = 0.0
        solver.z[n + m:] = 0.0
        solver.cost = np.concatenate([cost, np.zeros(k)])
        solver.dual_tol = 1e-9 * max(1.0, float(np.abs(cost).max(initial=0.0)))
        solver.refactor()
    else:
        solver = BoundedSimplex(M, cost, lo, hi, basic, at_upper, max_iterations)

    status = solver.primal()
    return _result(problem, solver, status, warm=False)


def _warm_solve(problem: LpProblem, basis: LpBasis, max_iterations: int) -> Optional[LpResult]:
    m, n = problem.A.shape
    if basis.n_cols != n:
        return None
    basis = basis.extended(m)
    if len(basis.basic) != m or len(set(basis.basic)) != m or max(basis.basic, default=-1) >= n + m:
        return None
    M, cost, lo, hi = _extended(problem)
    at_upper = set()
    basic_set = set(basis.basic)
    for j in range(n + m):
        if j in basic_set:
            continue
        wants_upper = j in basis.at_upper
        if wants_upper and np.isfinite(hi[j]):
            at_upper.add(j)
        elif not wants_upper and np.isfinite(lo[j]):
            pass
        elif np.isfinite(hi[j]):
            at_upper.add(j)
        elif not np.isfinite(lo[j]):
            return None
    try:
        solver = BoundedSimplex(M, cost, lo, hi, list(basis.basic), at_upper, max_iterations)
    except SingularBasis:
        return None

    if solver.is_dual_feasible(solver.reduced_costs()):
        status = solver.dual()
    elif solver.primal_infeasibility().max(initial=0.0) <= solver.feas_tol:
        status = OPTIMAL
    else:
        return None
    if status == OPTIMAL:
        status = solver.primal()
    if status == INFEASIBLE:
        # confirmed by the cold solve
        return None
    result = _result(problem, solver, status, warm=True)
    if result.status == OPTIMAL and not _is_primal_feasible(problem, result.x):
        return None
    return result


@register_backend('simplex')
def solve_simplex(problem: LpProblem, warm_basis: Optional[LpBasis] = None,
                  max_iterations: Optional[int] = None) -> LpResult:
    cap = max_iterations or _iteration_cap(problem)
    if warm_basis is not None:
        try:
            result = _warm_solve(problem, warm_basis, cap)
        except SingularBasis:
            result = None
        if result is not None and result.status != ITERATION_LIMIT:
            return result
        logger.debug("[UPDATE] Warm start rejected, solving from scratch")
    try:
        result = _cold_solve(problem, cap)
    except SingularBasis:
        logger.warning("[ERROR] Singular basis in cold solve")
        return LpResult(status=ITERATION_LIMIT)
    if result.status == OPTIMAL and not _is_primal_feasible(problem, result.x):
        logger.warning("[ERROR] Simplex returned a point outside the feasible region")
        return LpResult(status=ITERATION_LIMIT, iterations=result.iterations)
    return result
