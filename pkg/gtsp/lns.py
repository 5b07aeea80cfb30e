"""
Large neighborhood search for the GTSP

Destroy: drop the vertices of a random share of the non-base sets.
Repair: reinsert each dropped set at its cheapest (vertex, position),
preferring positions whose gap has no edge. A re-selection sweep then
swaps every vertex for the cheapest member of its set that fits between
its neighbours. Only strict improvements are accepted.

Missing edges are never padded; an insertion is feasible only when both
of its edges exist.
"""

import logging
import math
import time
from typing import List, Optional, Sequence, Tuple

import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError

from transform.configurations import Configuration, TransformedGraph

from .tours import IMPROVEMENT_EPS, GtspResult, check_set_cover, closed_cost, start_vertex

logger = logging.getLogger(__name__)


class GtspLns:
    """
    Seeded LNS over a transformed graph

    Args:
        graph: graph with a single-vertex base set
        iterations: destroy/repair rounds, iterations_per_set * sets by default
        seed: numpy generator seed
        removal_fraction: share of non-base sets dropped per round
        time_limit: wall-clock cap in seconds
    """

    def __init__(self, graph: TransformedGraph, iterations: int = None, seed: int = None,
                 removal_fraction: float = None, time_limit: float = None):
        config = settings.GTSP_SETTINGS
        self.graph = graph
        self.iterations = config['iterations_per_set'] * graph.set_count if iterations is None else iterations
        self.seed = config['seed'] if seed is None else seed
        self.removal_fraction = config['removal_fraction'] if removal_fraction is None else removal_fraction
        self.time_limit = config['time_limit'] if time_limit is None else time_limit
        self.sweeps = config['reselection_sweeps']
        if not 0.0 < self.removal_fraction <= 1.0:
            raise ValidationError(f"removal_fraction must be in (0, 1], got {self.removal_fraction}")
        if self.iterations < 0:
            raise ValidationError(f"iterations must be non-negative, got {self.iterations}")

        self.start = start_vertex(graph)
        self.others = [t for t in graph.partitions if t != graph.base_set]
        self.rng = np.random.default_rng(self.seed)

    # ========================================================================
    # INSERTION
    # ========================================================================

    def _edge(self, u: Configuration, v: Configuration) -> Optional[float]:
        edge = self.graph.edges.get((u, v))
        return None if edge is None else edge[0]

    def best_insertion(self, tour: List[Configuration], t: int) -> Optional[Tuple[int, Configuration]]:
        """
        Cheapest feasible (position, vertex) for set t

        Gaps without an edge rank first since filling them is the only way
        to repair the tour. Ties keep the earliest position and set order.
        """
        best_key = None
        best = None
        size = len(tour)
        for p in range(size):
            u, w = tour[p], tour[(p + 1) % size]
            gap = 0.0 if size == 1 else self._edge(u, w)
            broken = size > 1 and gap is None
            for v in self.graph.partitions[t]:
                into, out = self._edge(u, v), self._edge(v, w)
                if into is None or out is None:
                    continue
                delta = into + out - (gap or 0.0)
                key = (0 if broken else 1, delta)
                if best_key is None or key[0] < best_key[0] or (
                        key[0] == best_key[0] and key[1] < best_key[1] - IMPROVEMENT_EPS):
                    best_key, best = key, (p + 1, v)
        return best

    def insert_sets(self, tour: List[Configuration], sets: Sequence[int]) -> Optional[List[Configuration]]:
        """
        Insert every set, retrying deferred ones while progress is made

        Returns:
            the extended tour, or None when some set never fits
        """
        tour = list(tour)
        pending = list(sets)
        while pending:
            deferred = []
            for t in pending:
                placement = self.best_insertion(tour, t)
                if placement is None:
                    deferred.append(t)
                else:
                    tour.insert(*placement)
            if len(deferred) == len(pending):
                return None
            pending = deferred
        return tour

    def reselect(self, tour: List[Configuration]) -> List[Configuration]:
        """Swap each non-base vertex for the cheapest fitting member of its set."""
        tour = list(tour)
        size = len(tour)
        if size < 2:
            return tour
        for _ in range(self.sweeps):
            changed = False
            for p in range(1, size):
                u, w = tour[p - 1], tour[(p + 1) % size]
                current = tour[p]
                best_cost = None
                for v in self.graph.partitions[self.graph.set_of(current)]:
                    into, out = self._edge(u, v), self._edge(v, w)
                    if into is None or out is None:
                        continue
                    if best_cost is None or into + out < best_cost - IMPROVEMENT_EPS:
                        best_cost, tour[p] = into + out, v
                changed = changed or tour[p] != current
            if not changed:
                break
        return tour

    # ========================================================================
    # SEARCH
    # ========================================================================

    def initial_tour(self) -> List[Configuration]:
        """
        All-hub tour by nearest neighbour when every set holds a hub,
        greedy set insertion otherwise

        Raises:
            ValidationError: no feasible tour found
        """
        hubs = {}
        for t in self.others:
            hub = next((v for v in self.graph.partitions[t] if v.is_hub), None)
            if hub is not None:
                hubs[t] = hub
        if len(hubs) == len(self.others):
            tour = [self.start]
            remaining = [hubs[t] for t in self.others]
            while remaining:
                reachable = [v for v in remaining if self._edge(tour[-1], v) is not None]
                if not reachable:
                    break
                nxt = min(reachable, key=lambda v: self._edge(tour[-1], v))
                remaining.remove(nxt)
                tour.append(nxt)
            if not remaining and closed_cost(self.graph, tour) is not None:
                return tour
            logger.debug("All-hub construction failed, falling back to greedy insertion")

        tour = self.insert_sets([self.start], self.others)
        if tour is None or closed_cost(self.graph, tour) is None:
            raise ValidationError("no feasible GTSP tour found by construction")
        return tour

    def destroy(self, tour: List[Configuration]) -> Tuple[List[Configuration], List[int]]:
        count = min(len(self.others), max(1, math.ceil(self.removal_fraction * len(self.others))))
        removed = [int(t) for t in self.rng.choice(self.others, size=count, replace=False)]
        dropped = set(removed)
        kept = [v for v in tour if self.graph.set_of(v) not in dropped]
        return kept, [removed[k] for k in self.rng.permutation(count)]

    def run(self) -> GtspResult:
        started = time.perf_counter()
        best = self.reselect(self.initial_tour())
        best_cost = closed_cost(self.graph, best)
        if best_cost is None:
            # re-selection only keeps fitting vertices, so this is a construction bug
            raise ValidationError("initial GTSP tour lost an edge during re-selection")
        initial_cost = best_cost

        improvements = 0
        done = 0
        if self.others and self.iterations:
            for done in range(1, self.iterations + 1):
                if time.perf_counter() - started > self.time_limit:
                    logger.warning(f"GTSP LNS stopped at the {self.time_limit}s limit after {done - 1} iterations")
                    done -= 1
                    break
                partial, removed = self.destroy(best)
                candidate = self.insert_sets(partial, removed)
                if candidate is None:
                    continue
                candidate = self.reselect(candidate)
                cost = closed_cost(self.graph, candidate)
                if cost is not None and cost < best_cost - IMPROVEMENT_EPS:
                    best, best_cost = candidate, cost
                    improvements += 1

        check_set_cover(self.graph, best)
        wall = time.perf_counter() - started
        logger.info(f"[SUCCESS] GTSP LNS: cost {initial_cost:.4f} -> {best_cost:.4f} "
                    f"({improvements} improvements, {done} iterations, {wall:.2f}s)")
        return GtspResult(tour=best, cost=best_cost, iterations=done, improvements=improvements, wall_time=wall)


def solve_gtsp_lns(graph: TransformedGraph, iterations: int = None, seed: int = None,
                   removal_fraction: float = None, time_limit: float = None) -> GtspResult:
    """
    Heuristic GTSP tour; deterministic for a fixed seed unless the time limit hits

    Raises:
        ValidationError: invalid parameters or no feasible tour
    """
    return GtspLns(graph, iterations=iterations, seed=seed, removal_fraction=removal_fraction,
                   time_limit=time_limit).run()
