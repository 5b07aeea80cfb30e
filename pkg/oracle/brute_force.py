"""
Brute-force CAGVRP oracle

Enumerates every GV stop set containing the base and every in-range
assignment of the remaining targets, routing each piece with Held-Karp.
Ground truth for the exact and heuristic solvers on tiny instances.
"""

import itertools
import logging
from typing import Dict, FrozenSet, Iterator, List, Tuple

from django.conf import settings
from django.core.exceptions import ValidationError

from instances.domain import BASE, Instance
from tsp.tours import tsp_exact_cached
from verification.domain import Solution

logger = logging.getLogger(__name__)


class _RouteCache:
    """Per-instance memo of exact ring and sub-tour routes."""

    def __init__(self, inst: Instance):
        self.inst = inst
        self.rings: Dict[Tuple[int, ...], Tuple[List[int], float]] = {}
        self.subtours: Dict[Tuple[int, FrozenSet[int]], Tuple[List[int], float]] = {}

    def ring(self, stops: Tuple[int, ...]) -> Tuple[List[int], float]:
        if stops not in self.rings:
            if len(stops) == 1:
                self.rings[stops] = ([BASE], 0.0)
            elif len(stops) == 2:
                self.rings[stops] = (list(stops), 2.0 * float(self.inst.c[stops[0], stops[1]]))
            else:
                self.rings[stops] = tsp_exact_cached(self.inst.c, stops)
        return self.rings[stops]

    def subtour(self, root: int, members: FrozenSet[int]) -> Tuple[List[int], float]:
        key = (root, members)
        if key not in self.subtours:
            if not members:
                self.subtours[key] = ([], 0.0)
            else:
                tour, cost = tsp_exact_cached(self.inst.d, [root, *sorted(members)])
                self.subtours[key] = (tour[1:], cost)
        return self.subtours[key]


def _stop_sets(n: int) -> Iterator[Tuple[int, ...]]:
    others = range(1, n)
    for size in range(0, n):
        for combo in itertools.combinations(others, size):
            yield (BASE, *combo)


def _assignments(inst: Instance, stops: Tuple[int, ...]) -> Iterator[Dict[int, int]]:
    stop_set = set(stops)
    free = [t for t in range(inst.n) if t not in stop_set]
    options = []
    for t in free:
        reachable = [s for s in stops if inst.in_range[t, s]]
        if not reachable:
            return
        options.append(reachable)
    for choice in itertools.product(*options):
        yield dict(zip(free, choice))


def enumerate_solutions(inst: Instance, strict_rings: bool = False,
                        cache: _RouteCache = None) -> Iterator[Tuple[Solution, float]]:
    """
    Every (stop set, assignment) pair with exact routing, in lexicographic order

    Yields:
        (Solution, cost)
    """
    cache = cache or _RouteCache(inst)
    for stops in _stop_sets(inst.n):
        if strict_rings and inst.n > 1 and len(stops) < 3:
            continue
        ring, ring_cost = cache.ring(stops)
        for assignment in _assignments(inst, stops):
            groups: Dict[int, set] = {s: set() for s in stops}
            for t, s in assignment.items():
                groups[s].add(t)
            cost = ring_cost
            subtours = {}
            for s in stops:
                order, sub_cost = cache.subtour(s, frozenset(groups[s]))
                cost += sub_cost
                if order:
                    subtours[s] = order
            yield Solution.from_routes(ring, subtours), cost


def brute_force(inst: Instance, strict_rings: bool = False, max_targets: int = None) -> Tuple[Solution, float]:
    """
    Optimal solution by exhaustive enumeration

    Args:
        inst: instance with at most ORACLE_SETTINGS['max_targets'] targets
        strict_rings: only rings of at least three stops

    Returns:
        (Solution, cost); ties keep the lexicographically first candidate

    Raises:
        ValidationError: size cap exceeded or no feasible solution
    """
    cap = settings.ORACLE_SETTINGS['max_targets'] if max_targets is None else max_targets
    if inst.n > cap:
        raise ValidationError(f"brute_force: {inst.n} targets exceeds the oracle cap of {cap}")

    best, best_cost = None, float('inf')
    count = 0
    for sol, cost in enumerate_solutions(inst, strict_rings=strict_rings):
        count += 1
        if cost < best_cost - 1e-12:
            best, best_cost = sol, cost

    if best is None:
        raise ValidationError("brute_force: instance admits no feasible solution")
    logger.debug(f"Oracle enumerated {count} candidates on {inst!r}, optimum {best_cost:.6f}")
    return best, best_cost
