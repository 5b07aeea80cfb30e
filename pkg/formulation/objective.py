"""
Objective evaluation and the solution <-> integer point maps
"""

import logging
from typing import Dict, List, Optional

import networkx as nx
import numpy as np
from django.core.exceptions import ValidationError

from instances.domain import BASE, Instance
from verification.domain import Solution

from .model_builder import ColumnLayout
from .rows import Row

logger = logging.getLogger(__name__)


def _check_indices(inst: Instance, sol: Solution):
    ids = list(sol.gv_ring) + [r for r in sol.subtours] + [t for m in sol.subtours.values() for t in m]
    ids += list(sol.assignment) + list(sol.assignment.values())
    for v in ids:
        if not 0 <= int(v) < inst.n:
            raise ValidationError(f"target index {v} out of range 0..{inst.n - 1}")


def evaluate_objective(inst: Instance, sol: Solution, use_penalty_f: bool = False) -> float:
    """
    Objective value of a solution

    Sum of c over GV edges (the out-and-back ring pays its edge twice),
    d over UAV arcs and, with use_penalty_f, f over the assignment.

    Raises:
        ValidationError: index out of range
    """
    _check_indices(inst, sol)
    cost = sum(inst.c[i, j] * mult for (i, j), mult in sol.gv_edge_multiset().items())
    cost += sum(inst.d[i, j] for i, j in sol.uav_arcs())
    if use_penalty_f:
        cost += sum(inst.f[t, s] for t, s in sol.assignment.items())
    return float(cost)


def solution_to_point(inst: Instance, sol: Solution) -> np.ndarray:
    """Integer point (x, w, y, z) of a solution over the model columns."""
    _check_indices(inst, sol)
    layout = ColumnLayout(inst.n)
    point = np.zeros(layout.size)

    for (i, j), mult in sol.gv_edge_multiset().items():
        point[layout.x(i, j)] += mult

    has_out = set()
    for i, j in sol.uav_arcs():
        point[layout.w(i, j)] += 1.0
        has_out.add(i)
    for i in range(inst.n):
        if i not in has_out:
            point[layout.w(i, i)] = 1.0

    for t, s in sol.assignment.items():
        point[layout.y(t, s)] = 1.0

    y = layout.y_matrix(point)
    point[layout.z_slice] = (y[:, None, :] * y[None, :, :]).ravel()
    return point


def check_cut_validity(inst: Instance, cut: Row, sol: Solution, tol: float = 1e-6) -> bool:
    """True iff the solution's integer point satisfies the row."""
    return cut.is_satisfied(solution_to_point(inst, sol), tol)


# ============================================================================
# DECODING INTEGER POINTS
# ============================================================================

def _order_cycle(graph: nx.MultiGraph, nodes, start: int) -> List[int]:
    if len(nodes) == 1:
        return [start]
    if len(nodes) == 2:
        return [start, next(v for v in nodes if v != start)]
    order, prev, cur = [start], None, start
    while True:
        nxt = min((v for v in graph.neighbors(cur) if v != prev and v != cur), default=None)
        if nxt is None or nxt == start:
            break
        if nxt in order:
            break
        order.append(nxt)
        prev, cur = cur, nxt
    return order


def point_to_solution(inst: Instance, point: np.ndarray, tol: float = 1e-6) -> Optional[Solution]:
    """
    Decode an integral point into a Solution

    GV components other than the base's and UAV cycles without a stop come
    back as detached cycles so the feasibility check can name them.

    Returns:
        Solution, or None when the point is not integral
    """
    if np.any(np.abs(point - np.round(point)) > tol):
        return None
    layout = ColumnLayout(inst.n)
    values = np.round(point).astype(int)
    n = inst.n

    y = layout.y_matrix(values)
    assignment = {i: int(np.argmax(y[i])) for i in range(n)}
    stops = {i for i in range(n) if y[i, i] == 1}

    gv = nx.MultiGraph()
    gv.add_nodes_from(sorted(stops | {BASE}))
    for (i, j), value in layout.x_values(values).items():
        for _ in range(int(value)):
            gv.add_edge(i, j)

    ring = [BASE]
    detached_gv = []
    for component in sorted(nx.connected_components(gv), key=min):
        start = min(component)
        cycle = _order_cycle(gv, component, start)
        if BASE in component:
            ring = cycle
        else:
            detached_gv.append(cycle)

    w = layout.w_matrix(values)
    successor = {i: int(np.argmax(w[i])) for i in range(n)}
    subtours: Dict[int, List[int]] = {}
    detached_uav = []
    seen = set()
    for i in range(n):
        if i in seen:
            continue
        cycle = [i]
        seen.add(i)
        nxt = successor[i]
        while nxt not in seen:
            cycle.append(nxt)
            seen.add(nxt)
            nxt = successor[nxt]
        roots = [v for v in cycle if v in stops]
        if len(cycle) == 1:
            if i not in stops:
                detached_uav.append(cycle)
            continue
        if roots:
            root = roots[0]
            k = cycle.index(root)
            rotated = cycle[k:] + cycle[:k]
            subtours[root] = rotated[1:]
        else:
            detached_uav.append(cycle)

    return Solution(
        gv_ring=ring,
        subtours=subtours,
        assignment=assignment,
        detached_gv_cycles=detached_gv,
        detached_uav_cycles=detached_uav,
    )
