"""
Method dispatch shared by the solve and bench commands

Every run ends with an independent feasibility check; a solution that
fails it is reported as failed and never written.
"""

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Dict, Optional

from django.core.exceptions import ValidationError

from bnc.branch_and_cut import STATUS_INFEASIBLE, STATUS_OPTIMAL, solve_exact
from formulation.objective import evaluate_objective
from gtsp.pipeline import solve_heuristic
from instances.domain import Instance
from oracle.brute_force import brute_force
from verification.domain import Solution
from verification.feasibility import check_feasibility

logger = logging.getLogger(__name__)

METHOD_BNC = 'bnc'
METHOD_GTSP = 'gtsp'
METHOD_ORACLE = 'oracle'
METHODS = (METHOD_BNC, METHOD_GTSP, METHOD_ORACLE)

# Statuses of heuristic and oracle runs; bnc reports its own
STATUS_HEURISTIC = 'heuristic'
STATUS_FAILED = 'failed'


@dataclass
class MethodRun:
    method: str
    status: str
    solution: Optional[Solution] = None
    cost: Optional[float] = None
    bound: Optional[float] = None
    nodes: int = 0
    cut_counts: Dict[str, int] = field(default_factory=dict)
    seconds: float = 0.0
    detail: object = None

    @property
    def cuts(self) -> int:
        return sum(self.cut_counts.values())

    @property
    def proven_optimal(self) -> bool:
        return self.status == STATUS_OPTIMAL


def run_method(inst: Instance, method: str, time_limit: Optional[float] = None, seed: Optional[int] = None,
               iterations: Optional[int] = None, backend: Optional[str] = None,
               workers: Optional[int] = None) -> MethodRun:
    """
    Solve an instance with one method and re-verify the result

    Args:
        inst: validated instance
        method: 'bnc', 'gtsp' or 'oracle'
        time_limit: bnc tree limit or LNS wall-clock limit
        seed, iterations: LNS parameters
        backend, workers: branch-and-cut parameters

    Returns:
        MethodRun; status 'failed' when verification rejects the solution

    Raises:
        ValidationError: unknown method or a size cap of the method
    """
    if method not in METHODS:
        raise ValidationError(f"unknown method '{method}', expected one of {METHODS}")

    started = time.perf_counter()
    if method == METHOD_BNC:
        report = solve_exact(inst, time_limit=time_limit, backend=backend, workers=workers)
        bound = report.bound if math.isfinite(report.bound) else None
        run = MethodRun(method=method, status=report.status, solution=report.incumbent, cost=report.cost,
                        bound=bound, nodes=report.nodes, cut_counts=dict(report.cut_counts), detail=report)
    elif method == METHOD_GTSP:
        report = solve_heuristic(inst, iterations=iterations, seed=seed, time_limit=time_limit)
        run = MethodRun(method=method, status=STATUS_HEURISTIC, solution=report.solution, cost=report.cost,
                        detail=report)
    else:
        solution, cost = brute_force(inst)
        run = MethodRun(method=method, status=STATUS_OPTIMAL, solution=solution, cost=cost, bound=cost)
    run.seconds = time.perf_counter() - started

    if run.solution is None:
        if run.status != STATUS_INFEASIBLE:
            logger.warning(f"{method} returned no solution for {inst!r} (status {run.status})")
        return run

    verdict = check_feasibility(inst, run.solution)
    if not verdict['ok']:
        logger.error(f"[ERROR] {method} produced an infeasible solution on {inst!r}: {verdict['violations']}")
        run.status = STATUS_FAILED
        run.solution = None
        run.cost = None
        return run
    run.cost = evaluate_objective(inst, run.solution)
    return run
