"""
Exact GTSP solver for small graphs

Enumerates the orders of the non-base sets and, for each order, picks the
cheapest vertex per set with a shortest-path pass through the layered
sequence. Only meant as ground truth next to the enumeration oracle.
"""

import itertools
import logging
import math
import time
from typing import Dict, Tuple

from django.conf import settings
from django.core.exceptions import ValidationError

from transform.configurations import Configuration, TransformedGraph

from .tours import GtspResult, check_set_cover, closed_cost, start_vertex

logger = logging.getLogger(__name__)


def solve_gtsp_exact_small(graph: TransformedGraph, max_sets: int = None, max_product: int = None) -> GtspResult:
    """
    Optimal one-vertex-per-set tour

    Args:
        graph: transformed graph
        max_sets: cap on the number of sets (GTSP_SETTINGS default)
        max_product: cap on the product of set sizes (GTSP_SETTINGS default)

    Returns:
        GtspResult with the optimal tour starting at the base vertex

    Raises:
        ValidationError: a size cap is exceeded or no tour exists
    """
    max_sets = max_sets or settings.GTSP_SETTINGS['exact_max_sets']
    max_product = max_product or settings.GTSP_SETTINGS['exact_max_product']
    sizes = [len(members) for members in graph.partitions.values()]
    if len(sizes) > max_sets:
        raise ValidationError(f"exact GTSP supports at most {max_sets} sets, got {len(sizes)}")
    if math.prod(sizes) > max_product:
        raise ValidationError(f"exact GTSP supports a set-size product of at most {max_product}, "
                              f"got {math.prod(sizes)}")

    started = time.perf_counter()
    start = start_vertex(graph)
    others = [t for t in graph.partitions if t != graph.base_set]
    if not others:
        return GtspResult(tour=[start], cost=0.0)

    best_cost = math.inf
    best_tour = None
    for order in itertools.permutations(others):
        layer: Dict[Configuration, Tuple[float, Tuple[Configuration, ...]]] = {start: (0.0, (start,))}
        for t in order:
            following = {}
            for v in graph.partitions[t]:
                for u, (cost_u, path) in layer.items():
                    edge = graph.edges.get((u, v))
                    if edge is None:
                        continue
                    candidate = cost_u + edge[0]
                    if candidate >= best_cost:
                        continue
                    if v not in following or candidate < following[v][0]:
                        following[v] = (candidate, path + (v,))
            layer = following
            if not layer:
                break
        for u, (cost_u, path) in layer.items():
            edge = graph.edges.get((u, start))
            if edge is not None and cost_u + edge[0] < best_cost:
                best_cost = cost_u + edge[0]
                best_tour = list(path)

    if best_tour is None:
        raise ValidationError("graph admits no tour visiting every set once")
    check_set_cover(graph, best_tour)
    best_cost = closed_cost(graph, best_tour)
    wall = time.perf_counter() - started
    logger.debug(f"Exact GTSP over {len(others) + 1} sets: cost {best_cost:.6f} in {wall:.3f}s")
    return GtspResult(tour=best_tour, cost=best_cost, wall_time=wall)
