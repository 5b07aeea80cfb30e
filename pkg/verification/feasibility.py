"""
Independent feasibility checker

Re-derives everything from the instance; shares no code path with the
solvers. Violations are returned as data, never raised.
"""

import logging
import numbers
from collections import Counter
from typing import Dict, List

from django.conf import settings

from instances.domain import BASE, Instance

from .domain import Solution

logger = logging.getLogger(__name__)


def _valid_index(inst: Instance, value) -> bool:
    return isinstance(value, numbers.Integral) and 0 <= value < inst.n


def check_feasibility(inst: Instance, sol: Solution, strict_rings: bool = False) -> Dict:
    """
    Check a solution against every CAGVRP rule

    Args:
        inst: the instance
        sol: candidate solution (arbitrary content tolerated)
        strict_rings: reject the base-only and out-and-back rings

    Returns:
        {'ok': bool, 'violations': [str, ...]}
    """
    violations: List[str] = []
    tol = settings.SOLVER_TOLERANCES['comparison']

    ring = list(sol.gv_ring or [])
    subtours = {k: list(v) for k, v in (sol.subtours or {}).items()}
    assignment = dict(sol.assignment or {})

    # Index sanity first; nothing below is meaningful with bad indices
    bad = [v for v in ring if not _valid_index(inst, v)]
    for root, members in subtours.items():
        bad += [v for v in [root, *members] if not _valid_index(inst, v)]
    for t, s in assignment.items():
        bad += [v for v in (t, s) if not _valid_index(inst, v)]
    if bad:
        violations.append(f"index out of range: {sorted(set(map(str, bad)))}")
        return {'ok': False, 'violations': violations}

    # GV ring
    if not ring:
        violations.append("GV ring is empty")
    elif ring[0] != BASE:
        violations.append(f"GV ring starts at {ring[0]}, expected base {BASE}")
    repeated = [v for v, k in Counter(ring).items() if k > 1]
    if repeated:
        violations.append(f"GV ring repeats stops {sorted(repeated)}")
    if strict_rings and inst.n > 1 and len(ring) < 3:
        violations.append(f"GV ring with {len(ring)} stop(s) is not a cycle of distinct edges")

    for cycle in sol.detached_gv_cycles:
        violations.append(f"detached GV cycle {list(cycle)} not connected to base {BASE}")
    for cycle in sol.detached_uav_cycles:
        violations.append(f"detached UAV cycle {list(cycle)} not rooted at a GV stop")

    # Sub-tours
    stops = set(ring)
    for root, members in subtours.items():
        if members and root not in stops:
            violations.append(f"sub-tour root {root} is not a GV stop")
        for t in members:
            if t in stops:
                violations.append(f"sub-tour of {root} visits GV stop {t}")

    # Coverage: every target exactly once as a stop or in exactly one sub-tour
    visits = Counter(ring)
    for members in subtours.values():
        visits.update(members)
    for t in range(inst.n):
        if visits[t] == 0:
            violations.append(f"target {t} is not visited")
        elif visits[t] > 1 and t not in repeated:
            violations.append(f"target {t} is visited {visits[t]} times")

    # Assignment agrees with the routes and respects the range
    expected = {s: s for s in ring}
    for root, members in subtours.items():
        for t in members:
            expected.setdefault(t, root)
    if assignment.get(BASE) != BASE:
        violations.append(f"base {BASE} must be assigned to itself")
    for t in range(inst.n):
        if t in expected and t in assignment and assignment[t] != expected[t]:
            violations.append(f"assignment of target {t} is {assignment[t]}, routes serve it from {expected[t]}")
        elif t in expected and t not in assignment:
            violations.append(f"target {t} has no assignment")
    for t, s in expected.items():
        if inst.euclid[t, s] > inst.R + tol:
            violations.append(
                f"target {t} served from stop {s} at distance {inst.euclid[t, s]:.6g} > R = {inst.R:g}"
            )

    ok = not violations
    if not ok:
        logger.debug(f"Solution rejected: {violations}")
    return {'ok': ok, 'violations': violations}


def is_feasible(inst: Instance, sol: Solution, strict_rings: bool = False) -> bool:
    return check_feasibility(inst, sol, strict_rings=strict_rings)['ok']
