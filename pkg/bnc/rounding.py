"""
LP rounding primal heuristic

Targets with y*_ii >= 0.5 (and the base) become GV stops. Every other
target is served from the closest stop within range by UAV cost, or is
promoted to a stop when none is in range. Rings and sub-tours are then
routed with the tour heuristic.
"""

import logging
from typing import Dict, List

import numpy as np

from formulation.model_builder import ColumnLayout
from instances.domain import BASE, Instance
from tsp.tours import tsp_heuristic
from verification.domain import Solution

logger = logging.getLogger(__name__)

STOP_THRESHOLD = 0.5


def partition(inst: Instance, y: np.ndarray):
    """
    Returns:
        (sorted stops, assignment of every target to a stop)
    """
    stops = {BASE} | {i for i in range(inst.n) if y[i, i] >= STOP_THRESHOLD}
    assignment: Dict[int, int] = {s: s for s in stops}
    promoted = 0
    for u in range(inst.n):
        if u in stops:
            continue
        in_range = [v for v in sorted(stops) if inst.in_range[u, v]]
        if in_range:
            assignment[u] = min(in_range, key=lambda v: (inst.d[u, v], v))
        else:
            stops.add(u)
            assignment[u] = u
            promoted += 1
    if promoted:
        logger.debug(f"Rounding promoted {promoted} target(s) to GV stops")
    return sorted(stops), assignment


def lp_rounding(point: np.ndarray, inst: Instance) -> Solution:
    """
    Round a relaxation point into a feasible solution

    Args:
        point: full model point (only y* is read)
        inst: instance

    Returns:
        Solution; always feasible for the default (non-strict) rules
    """
    y = ColumnLayout(inst.n).y_matrix(np.asarray(point, dtype=float))
    stops, assignment = partition(inst, y)

    ring = tsp_heuristic(inst.c, stops)
    groups: Dict[int, List[int]] = {s: [] for s in stops}
    for t, s in assignment.items():
        if t != s:
            groups[s].append(t)

    subtours = {}
    for s in stops:
        if groups[s]:
            tour = tsp_heuristic(inst.d, [s] + groups[s])
            subtours[s] = tour[1:]
    return Solution.from_routes(ring, subtours)
