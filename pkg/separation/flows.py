import logging
from typing import FrozenSet, Hashable, Tuple

import networkx as nx
from django.core.exceptions import ValidationError
from networkx.algorithms.flow import edmonds_karp

logger = logging.getLogger(__name__)


def min_cut(graph: nx.Graph, s: Hashable, t: Hashable, capacity: str = 'capacity') -> Tuple[float, FrozenSet]:
    """
    Minimum s-t cut by BFS augmenting paths

    Undirected graphs carry each edge's capacity in both directions. Edges
    without the capacity attribute count as capacity 0.

    Args:
        graph: networkx Graph or DiGraph
        s, t: distinct vertices; a vertex absent from the graph is isolated

    Returns:
        (cut value, vertices on the s side)

    Raises:
        ValidationError: s == t, or a negative capacity
    """
    if s == t:
        raise ValidationError(f"min_cut needs distinct endpoints, got s = t = {s}")

    flow_graph = nx.DiGraph()
    flow_graph.add_nodes_from([s, t])
    flow_graph.add_nodes_from(graph.nodes)
    arcs = graph.edges(data=capacity, default=0.0)
    for u, v, cap in arcs:
        if cap < 0:
            raise ValidationError(f"edge ({u}, {v}) has negative capacity {cap}")
        pairs = ((u, v), (v, u)) if not graph.is_directed() else ((u, v),)
        for a, b in pairs:
            if a == b:
                continue
            if flow_graph.has_edge(a, b):
                flow_graph[a][b]['capacity'] += float(cap)
            else:
                flow_graph.add_edge(a, b, capacity=float(cap))

    value, (s_side, _) = nx.minimum_cut(flow_graph, s, t, flow_func=edmonds_karp)
    return float(value), frozenset(s_side)
