"""
Heuristic CAGVRP pipeline: transform -> LNS -> map back -> verify
"""

import logging
import time
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from django.core.exceptions import ValidationError

from formulation.objective import evaluate_objective
from instances.domain import Instance
from transform.configurations import Configuration, TransformedGraph, build_transformed_graph
from transform.mapping import map_gtsp_to_cagvrp
from verification.domain import Solution
from verification.feasibility import check_feasibility

from .lns import solve_gtsp_lns

logger = logging.getLogger(__name__)


@dataclass
class HeuristicReport:
    solution: Solution
    cost: float
    tour: List[Configuration] = field(default_factory=list)
    vertices: int = 0
    edges: int = 0
    iterations: int = 0
    improvements: int = 0
    wall_time: float = 0.0


def map_and_verify(inst: Instance, graph: TransformedGraph, tour: List[Configuration],
                   tour_cost: float) -> Tuple[Solution, float]:
    """
    Map a GTSP tour back to the instance and check it independently

    Returns:
        (solution, cost) with cost recomputed on the instance

    Raises:
        ValidationError: the tour does not map, the solution is infeasible
        or its cost drifts from the tour cost
    """
    solution = map_gtsp_to_cagvrp(tour, inst, graph=graph)
    report = check_feasibility(inst, solution)
    if not report['ok']:
        logger.error(f"[ERROR] Mapped GTSP tour is infeasible for {inst!r}: {report['violations']}")
        raise ValidationError(f"mapped solution is infeasible: {'; '.join(report['violations'])}")
    cost = evaluate_objective(inst, solution)
    if abs(cost - tour_cost) > 1e-9 * max(1.0, cost):
        raise ValidationError(f"mapped cost {cost} differs from the tour cost {tour_cost}")
    return solution, cost


def solve_heuristic(inst: Instance, iterations: Optional[int] = None, seed: Optional[int] = None,
                    removal_fraction: Optional[float] = None, time_limit: Optional[float] = None) -> HeuristicReport:
    """
    Solve an instance through the GTSP transformation

    Args:
        inst: validated instance
        iterations, seed, removal_fraction, time_limit: LNS parameters,
            GTSP_SETTINGS defaults when omitted

    Returns:
        HeuristicReport with a verified solution; wall_time covers the
        whole pipeline

    Raises:
        ValidationError: the mapped solution fails verification or its
        cost drifts from the tour cost
    """
    started = time.perf_counter()
    graph = build_transformed_graph(inst)
    result = solve_gtsp_lns(graph, iterations=iterations, seed=seed,
                            removal_fraction=removal_fraction, time_limit=time_limit)
    solution, cost = map_and_verify(inst, graph, result.tour, result.cost)

    wall = time.perf_counter() - started
    logger.info(f"[SUCCESS] Heuristic pipeline on {inst!r}: cost {cost:.4f} in {wall:.2f}s")
    return HeuristicReport(
        solution=solution,
        cost=cost,
        tour=result.tour,
        vertices=len(graph.vertices),
        edges=len(graph.edges),
        iterations=result.iterations,
        improvements=result.improvements,
        wall_time=wall,
    )
