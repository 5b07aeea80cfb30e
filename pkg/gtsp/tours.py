"""
Shared GTSP tour helpers

Tours list one vertex per set, start with the base-set vertex and close
back to it implicitly.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence

from django.core.exceptions import ValidationError

from transform.configurations import Configuration, TransformedGraph

# Minimum gain for a move to count as an improvement
IMPROVEMENT_EPS = 1e-12


@dataclass
class GtspResult:
    tour: List[Configuration]
    cost: float
    iterations: int = 0
    improvements: int = 0
    wall_time: float = 0.0


def start_vertex(graph: TransformedGraph) -> Configuration:
    """
    The vertex every tour starts from

    Raises:
        ValidationError: the base set is empty or holds several vertices
    """
    members = graph.partitions.get(graph.base_set, ())
    if len(members) != 1:
        raise ValidationError(f"base set {graph.base_set} must hold exactly one vertex, found {len(members)}")
    return members[0]


def closed_cost(graph: TransformedGraph, tour: Sequence[Configuration]) -> Optional[float]:
    """Cost of the closed tour, None when some consecutive pair has no edge."""
    if len(tour) < 2:
        return 0.0
    total = 0.0
    for k, u in enumerate(tour):
        edge = graph.edges.get((u, tour[(k + 1) % len(tour)]))
        if edge is None:
            return None
        total += edge[0]
    return total


def check_set_cover(graph: TransformedGraph, tour: Sequence[Configuration]) -> None:
    """
    Raises:
        ValidationError: a set is visited zero or several times
    """
    visited = [graph.set_of(v) for v in tour]
    if sorted(visited) != sorted(graph.partitions):
        raise ValidationError(f"tour visits sets {sorted(visited)}, expected each of {sorted(graph.partitions)} once")
