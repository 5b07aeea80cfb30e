"""
Mapping between configuration tours and CAGVRP solutions

A GTSP tour is a list of configurations starting at C(0, 0); the closing
edge back to C(0, 0) is implied. Replaying its edges gives the vehicles'
maneuvers: hubs are GV stops, non-hubs are UAV visits flown from the GV
position of the configuration.
"""

import logging
from typing import Dict, List, Sequence

from django.core.exceptions import ValidationError

from instances.domain import BASE, Instance
from verification.domain import Solution
from verification.feasibility import check_feasibility

from .configurations import Configuration, TransformedGraph, build_transformed_graph

logger = logging.getLogger(__name__)


def tour_cost(graph: TransformedGraph, tour: Sequence[Configuration]) -> float:
    """
    Sum of edge costs around the closed tour

    Raises:
        ValidationError: consecutive vertices are not joined by an edge
    """
    if len(tour) < 2:
        return 0.0
    total = 0.0
    for k, u in enumerate(tour):
        v = tour[(k + 1) % len(tour)]
        if not graph.has_edge(u, v):
            raise ValidationError(f"tour position {k}: {u} -> {v} is not an edge of the transformed graph")
        total += graph.cost(u, v)
    return total


def validate_tour(graph: TransformedGraph, tour: Sequence[Configuration]) -> float:
    """
    Check one vertex per set and edge existence

    Returns:
        the tour cost

    Raises:
        ValidationError: naming the skipped/repeated set or the non-edge
    """
    tour = [Configuration(*v) for v in tour]
    if not tour or tour[0] != Configuration(BASE, BASE):
        raise ValidationError(f"tour must start at C({BASE},{BASE})")
    unknown = [str(v) for v in tour if v not in graph.successors]
    if unknown:
        raise ValidationError(f"tour visits configurations outside the graph: {unknown}")

    seen: Dict[int, int] = {}
    for v in tour:
        seen[graph.set_of(v)] = seen.get(graph.set_of(v), 0) + 1
    repeated = sorted(t for t, k in seen.items() if k > 1)
    if repeated:
        raise ValidationError(f"tour visits sets {repeated} more than once")
    skipped = sorted(t for t in graph.partitions if t not in seen)
    if skipped:
        raise ValidationError(f"tour skips sets {skipped}")
    return tour_cost(graph, tour)


def map_gtsp_to_cagvrp(tour: Sequence[Configuration], inst: Instance, graph: TransformedGraph = None) -> Solution:
    """
    Replay a configuration tour as a CAGVRP solution

    Args:
        tour: configurations starting at C(0, 0), one per set
        inst: the instance the graph was built from
        graph: prebuilt graph, built from inst when omitted

    Returns:
        Solution whose objective equals the tour cost

    Raises:
        ValidationError: the tour skips a set or uses a non-edge
    """
    if graph is None:
        graph = build_transformed_graph(inst)
    tour = [Configuration(*v) for v in tour]
    validate_tour(graph, tour)

    ring: List[int] = [BASE]
    subtours: Dict[int, List[int]] = {}
    gv = BASE
    for v in tour[1:]:
        if v.is_hub:
            gv = v.g
            ring.append(gv)
        elif v.g != gv:
            # rule2 keeps the GV in place, so this only happens on a non-edge
            raise ValidationError(f"{v} flies from {v.g} while the GV waits at {gv}")
        else:
            subtours.setdefault(gv, []).append(v.a)
    return Solution.from_routes(ring, subtours)


def map_cagvrp_to_gtsp(sol: Solution, inst: Instance) -> List[Configuration]:
    """
    Emit the configuration tour of a feasible solution

    The base's own sub-tour, if any, is flown before the GV leaves.

    Raises:
        ValidationError: the solution is infeasible
    """
    report = check_feasibility(inst, sol)
    if not report['ok']:
        raise ValidationError(f"cannot map an infeasible solution: {'; '.join(report['violations'])}")

    tour: List[Configuration] = []
    for stop in sol.gv_ring:
        tour.append(Configuration(stop, stop))
        tour.extend(Configuration(stop, t) for t in sol.subtours.get(stop, ()))
    return tour
