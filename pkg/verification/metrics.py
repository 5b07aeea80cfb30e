"""
Report metrics
"""

from django.core.exceptions import ValidationError

from instances.domain import Instance

from .domain import Solution

# Heuristic costs may undercut the optimum by rounding noise only
GAP_SLACK = 1e-9


def ring_cost(inst: Instance, ring) -> float:
    if len(ring) < 2:
        return 0.0
    if len(ring) == 2:
        return 2.0 * float(inst.c[ring[0], ring[1]])
    return float(sum(inst.c[ring[k], ring[(k + 1) % len(ring)]] for k in range(len(ring))))


def subtour_cost(inst: Instance, root: int, members) -> float:
    cycle = [root] + list(members)
    if len(cycle) < 2:
        return 0.0
    return float(sum(inst.d[cycle[k], cycle[(k + 1) % len(cycle)]] for k in range(len(cycle))))


def route_cost(inst: Instance, sol: Solution) -> float:
    """GV ring cost plus every UAV sub-tour cost."""
    return ring_cost(inst, sol.gv_ring) + sum(
        subtour_cost(inst, root, members) for root, members in sol.subtours.items()
    )


def relative_gap(c_t: float, c_star: float) -> float:
    """
    Relative optimality gap in percent, (c_t - c_star) / c_star * 100

    Raises:
        ValidationError: c_star <= 0 or c_t below c_star
    """
    if c_star <= 0:
        raise ValidationError(f"relative_gap: reference cost must be positive, got {c_star}")
    if c_t < c_star - GAP_SLACK * max(1.0, c_star):
        raise ValidationError(f"relative_gap: cost {c_t} is below the reference optimum {c_star}")
    return max(0.0, (c_t - c_star) / c_star * 100.0)
