"""
Tour subroutines

A tour is the visit order of its nodes, starting with the first node of the
input and closing back to it implicitly. A one-node tour has no edges and
costs 0; a two-node tour is the out-and-back a -> b -> a.
"""

import logging
from functools import lru_cache
from typing import List, Sequence, Tuple

import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError

logger = logging.getLogger(__name__)

# Minimum gain for a move to count as an improvement
IMPROVEMENT_EPS = 1e-12


def tour_cost(cost: np.ndarray, tour: Sequence[int]) -> float:
    """Cost of the closed tour over `cost` (full matrix, node ids index it)."""
    if len(tour) < 2:
        return 0.0
    return float(sum(cost[tour[k], tour[(k + 1) % len(tour)]] for k in range(len(tour))))


def _rotate_to(tour: List[int], start: int) -> List[int]:
    k = tour.index(start)
    return tour[k:] + tour[:k]


# ============================================================================
# HEURISTIC: NEAREST NEIGHBOR + 2-OPT + OR-OPT
# ============================================================================

def nearest_neighbor(cost: np.ndarray, nodes: Sequence[int]) -> List[int]:
    remaining = list(nodes[1:])
    tour = [nodes[0]]
    while remaining:
        last = tour[-1]
        # ties go to the lowest position in the input order
        nxt = min(remaining, key=lambda v: cost[last, v])
        remaining.remove(nxt)
        tour.append(nxt)
    return tour


def two_opt_swap(tour: List[int], i: int, j: int) -> List[int]:
    return tour[:i] + tour[i:j + 1][::-1] + tour[j + 1:]


def two_opt_pass(cost: np.ndarray, tour: List[int]) -> Tuple[List[int], bool]:
    """First improving segment reversal, position 0 stays fixed."""
    best = tour_cost(cost, tour)
    for i in range(1, len(tour) - 1):
        for j in range(i + 1, len(tour)):
            candidate = two_opt_swap(tour, i, j)
            if tour_cost(cost, candidate) < best - IMPROVEMENT_EPS:
                return candidate, True
    return tour, False


def or_opt_pass(cost: np.ndarray, tour: List[int], max_segment: int = 3) -> Tuple[List[int], bool]:
    """First improving relocation of a segment of 1..max_segment nodes."""
    best = tour_cost(cost, tour)
    m = len(tour)
    for length in range(1, max_segment + 1):
        for i in range(1, m - length + 1):
            segment = tour[i:i + length]
            rest = tour[:i] + tour[i + length:]
            for pos in range(1, len(rest) + 1):
                if pos == i:
                    continue
                candidate = rest[:pos] + segment + rest[pos:]
                if tour_cost(cost, candidate) < best - IMPROVEMENT_EPS:
                    return candidate, True
    return tour, False


def tsp_heuristic(cost: np.ndarray, node_list: Sequence[int]) -> List[int]:
    """
    Heuristic tour over node_list

    Args:
        cost: full cost matrix indexed by node id (may be asymmetric)
        node_list: nodes to visit, the first one anchors the tour

    Returns:
        tour starting at node_list[0]; never worse than the nearest-neighbor
        construction and 2-opt / Or-opt locally optimal
    """
    nodes = list(node_list)
    if len(nodes) <= 3:
        if len(nodes) == 3:
            # both orientations of the triangle, relevant only for asymmetric costs
            forward, backward = nodes, [nodes[0], nodes[2], nodes[1]]
            return min((forward, backward), key=lambda t: tour_cost(cost, t))
        return nodes

    tour = nearest_neighbor(cost, nodes)
    improved = True
    while improved:
        tour, improved = two_opt_pass(cost, tour)
        if not improved:
            tour, improved = or_opt_pass(cost, tour)
    return _rotate_to(tour, nodes[0])


# ============================================================================
# EXACT: HELD-KARP
# ============================================================================

def tsp_exact_small(cost_submatrix, max_nodes: int = None) -> List[int]:
    """
    Held-Karp optimum over a square cost matrix

    Returns:
        tour over 0..m-1 starting at 0

    Raises:
        ValidationError: more nodes than TSP_SETTINGS['held_karp_max_nodes']
    """
    cost = np.asarray(cost_submatrix, dtype=float)
    m = cost.shape[0]
    cap = settings.TSP_SETTINGS['held_karp_max_nodes'] if max_nodes is None else max_nodes
    if m > cap:
        raise ValidationError(f"tsp_exact_small: {m} nodes exceeds the Held-Karp cap of {cap}")
    if m <= 2:
        return list(range(m))

    # best[mask][j]: cheapest path 0 -> ... -> j covering mask (bits for nodes 1..m-1)
    k = m - 1
    full = (1 << k) - 1
    best = np.full((1 << k, k), np.inf)
    parent = np.full((1 << k, k), -1, dtype=int)
    for j in range(k):
        best[1 << j, j] = cost[0, j + 1]

    for mask in range(1, full + 1):
        for j in range(k):
            here = best[mask, j]
            if not np.isfinite(here) or not (mask >> j) & 1:
                continue
            for nxt in range(k):
                if (mask >> nxt) & 1:
                    continue
                value = here + cost[j + 1, nxt + 1]
                target = mask | (1 << nxt)
                if value < best[target, nxt]:
                    best[target, nxt] = value
                    parent[target, nxt] = j

    closing = best[full] + cost[1:, 0]
    last = int(np.argmin(closing))
    order = []
    mask = full
    while last != -1:
        order.append(last + 1)
        prev = parent[mask, last]
        mask &= ~(1 << last)
        last = prev
    return [0] + order[::-1]


def tsp_exact(cost: np.ndarray, node_list: Sequence[int]) -> List[int]:
    """Held-Karp optimum over node_list of a full matrix, starting at node_list[0]."""
    nodes = list(node_list)
    sub = np.asarray(cost)[np.ix_(nodes, nodes)]
    return [nodes[k] for k in tsp_exact_small(sub)]


@lru_cache(maxsize=None)
def _cached_exact(key: bytes, m: int) -> Tuple[int, ...]:
    sub = np.frombuffer(key, dtype=float).reshape(m, m)
    return tuple(tsp_exact_small(sub))


def tsp_exact_cached(cost: np.ndarray, node_list: Sequence[int]) -> Tuple[List[int], float]:
    """Memoized exact tour and its cost; used by the enumeration oracle."""
    nodes = list(node_list)
    sub = np.ascontiguousarray(np.asarray(cost, dtype=float)[np.ix_(nodes, nodes)])
    order = _cached_exact(sub.tobytes(), len(nodes))
    tour = [nodes[k] for k in order]
    return tour, tour_cost(cost, tour)
