"""
Transformed graph of vehicle configurations

A configuration C(g, a) places the GV at target g and the UAV at target a.
It is feasible when the two are within communication range, and a hub
when both vehicles share a target. Partition V_t holds the configurations
with the UAV at t; V_0 only keeps the hub C(0, 0) because the base is
always a GV stop.

Edge rules (directed, typed, costed):

    rule1   hub C(i, i) -> hub C(k, k), i != k                 c_ik
    rule2   C(i, j) -> non-hub C(i, l), l != j                 d_jl
    rule3   non-hub C(i, j) -> hub C(k, k), i != k, j != k     d_ji + c_ik
    rule3   non-hub C(0, j) -> C(0, 0)                         d_j0

The last edge closes a UAV sub-tour flown from the base when the tour
ends there; it is typed rule3 since it is the UAV return without GV travel.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Tuple

from django.core.exceptions import ValidationError

from instances.domain import BASE, Instance

logger = logging.getLogger(__name__)

RULE_GV = 'rule1'
RULE_UAV_HOP = 'rule2'
RULE_UAV_RETURN = 'rule3'
EDGE_RULES = (RULE_GV, RULE_UAV_HOP, RULE_UAV_RETURN)


class Configuration(NamedTuple):
    g: int
    a: int

    @property
    def is_hub(self) -> bool:
        return self.g == self.a

    def __str__(self):
        return f"C({self.g},{self.a})"


Edge = Tuple[Configuration, Configuration]


@dataclass(frozen=True)
class TransformedGraph:
    """
    configurations  every feasible configuration, including C(i, 0), i != 0
    vertices        GTSP vertices (configurations minus the dropped C(i, 0))
    partitions      set key -> vertices of that set, keys in ascending order
    edges           (u, v) -> (cost, rule)
    successors      u -> vertices reachable by one edge, in build order
    """
    configurations: Tuple[Configuration, ...]
    vertices: Tuple[Configuration, ...]
    partitions: Dict[int, Tuple[Configuration, ...]]
    edges: Dict[Edge, Tuple[float, str]]
    successors: Dict[Configuration, Tuple[Configuration, ...]]

    @property
    def base_set(self) -> int:
        return min(self.partitions)

    @property
    def set_count(self) -> int:
        return len(self.partitions)

    def set_of(self, vertex: Configuration) -> int:
        return vertex.a

    def has_edge(self, u: Configuration, v: Configuration) -> bool:
        return (u, v) in self.edges

    def cost(self, u: Configuration, v: Configuration) -> float:
        return self.edges[(u, v)][0]

    def rule(self, u: Configuration, v: Configuration) -> str:
        return self.edges[(u, v)][1]

    def hubs(self) -> List[Configuration]:
        return [v for v in self.vertices if v.is_hub]


def assemble_graph(configurations, vertices, edges: Dict[Edge, Tuple[float, str]]) -> TransformedGraph:
    """
    Group vertices into partitions and index successors

    Raises:
        ValidationError: an edge touches an unknown vertex or stays inside one set
    """
    known = set(vertices)
    partitions: Dict[int, List[Configuration]] = {}
    for v in vertices:
        partitions.setdefault(v.a, []).append(v)

    successors: Dict[Configuration, List[Configuration]] = {v: [] for v in vertices}
    for (u, v), (_, rule) in edges.items():
        if u not in known or v not in known:
            raise ValidationError(f"edge {u} -> {v} touches a vertex outside the graph")
        if u.a == v.a:
            raise ValidationError(f"edge {u} -> {v} stays inside set {u.a}")
        if rule not in EDGE_RULES:
            raise ValidationError(f"edge {u} -> {v} has unknown rule '{rule}'")
        successors[u].append(v)

    return TransformedGraph(
        configurations=tuple(configurations),
        vertices=tuple(vertices),
        partitions={t: tuple(partitions[t]) for t in sorted(partitions)},
        edges=dict(edges),
        successors={u: tuple(vs) for u, vs in successors.items()},
    )


def build_transformed_graph(inst: Instance) -> TransformedGraph:
    """
    Build the GTSP graph of feasible configurations for an instance

    Args:
        inst: validated instance

    Returns:
        TransformedGraph; missing connections are simply absent
    """
    n = inst.n
    in_range = inst.in_range
    c, d = inst.c, inst.d

    configurations = [Configuration(i, j) for i in range(n) for j in range(n) if i == j or in_range[i, j]]
    vertices = [v for v in configurations if v.a != BASE or v.g == BASE]
    hubs = [v for v in vertices if v.is_hub]
    by_gv: Dict[int, List[Configuration]] = {}
    for v in vertices:
        if not v.is_hub:
            by_gv.setdefault(v.g, []).append(v)

    edges: Dict[Edge, Tuple[float, str]] = {}

    # ========================================================================
    # RULE 1: both vehicles drive between hubs
    # ========================================================================
    for u in hubs:
        for v in hubs:
            if u.g != v.g:
                edges[(u, v)] = (float(c[u.g, v.g]), RULE_GV)

    # ========================================================================
    # RULE 2: UAV hops while the GV waits
    # ========================================================================
    for u in vertices:
        for v in by_gv.get(u.g, ()):
            if v.a != u.a:
                edges[(u, v)] = (float(d[u.a, v.a]), RULE_UAV_HOP)

    # ========================================================================
    # RULE 3: UAV returns to the GV, then both drive to the next hub
    # ========================================================================
    base_hub = Configuration(BASE, BASE)
    for u in vertices:
        if u.is_hub:
            continue
        for v in hubs:
            if v.g != u.g and v.g != u.a:
                edges[(u, v)] = (float(d[u.a, u.g] + c[u.g, v.g]), RULE_UAV_RETURN)
        if u.g == BASE:
            edges[(u, base_hub)] = (float(d[u.a, BASE]), RULE_UAV_RETURN)

    graph = assemble_graph(configurations, vertices, edges)
    missing = [t for t in range(n) if t not in graph.partitions]
    if missing:
        raise ValidationError(f"targets {missing} have no feasible configuration")
    logger.debug(f"Transformed graph for {inst!r}: {len(graph.vertices)} vertices, {len(graph.edges)} edges")
    return graph
