"""
Exact separation of the connectivity rows

GV rows, for S not containing the base and i in S:

    sum_{e in delta(S)} x_e - 2 * sum_{j in S} y_ij >= 0

UAV rows, for S holding no GV stop and i in S:

    sum_{[u,v] in delta+(S)} w_uv + sum_{j in S} y_ij >= 1    (out)
    sum_{[u,v] in delta-(S)} w_uv + sum_{j in S} y_ij >= 1    (in)

Candidate sets come from connected components of the support graphs and
from min cuts. On integer points an empty result means no connectivity
row is violated.
"""

import logging
from typing import Dict, FrozenSet, List, Optional

import networkx as nx
import numpy as np
from formulation.model_builder import ColumnLayout
from formulation.rows import (GE, GV_CONNECTIVITY, UAV_CONNECTIVITY_IN, UAV_CONNECTIVITY_OUT,
                              Cut)
from instances.domain import BASE, Instance, TargetSet
from instances.instance_utils import cut_sets

from .cut_utils import keep_violated, min_violation, set_label
from .flows import min_cut
from .support_graph import SupportGraph, build_support_graph

logger = logging.getLogger(__name__)

SINK = 'sink'


# ============================================================================
# GV CONNECTIVITY
# ============================================================================

def gv_cut(inst: Instance, S: FrozenSet[int], i: int, layout: Optional[ColumnLayout] = None) -> Cut:
    layout = layout or ColumnLayout(inst.n)
    sets = cut_sets(inst, TargetSet.of(S))
    terms = [(layout.x(u, v), 1.0) for u, v in sets.delta_edges]
    terms += [(layout.y(i, j), -2.0) for j in S]
    return Cut.from_terms(f"xsec[{i},{set_label(S)}]", terms, GE, 0.0,
                          kind=GV_CONNECTIVITY, S=frozenset(S), root=i)


def gv_candidate_sets(support: SupportGraph) -> List[FrozenSet[int]]:
    graph = support.gv
    candidates: Dict[FrozenSet[int], None] = {}
    components = list(nx.connected_components(graph))
    for component in components:
        if BASE not in component:
            candidates[frozenset(component)] = None

    if len(components) == 1:
        for t in sorted(graph.nodes):
            if t == BASE:
                continue
            value, s_side = min_cut(graph, BASE, t)
            if value < 2.0:
                side = frozenset(graph.nodes) - s_side
                if side:
                    candidates[side] = None
    return list(candidates)


def separate_gv_connectivity(point: np.ndarray, inst: Instance, support: Optional[SupportGraph] = None,
                             threshold: Optional[float] = None) -> List[Cut]:
    """
    Violated GV connectivity rows at a point

    Args:
        point: full model point
        inst: instance
        support: prebuilt support graph, built from the point otherwise
        threshold: minimum violation, defaults to SOLVER_TOLERANCES['cut_violation']

    Returns:
        list of Cut, possibly empty
    """
    support = support or build_support_graph(inst, point)
    threshold = min_violation() if threshold is None else threshold
    layout = ColumnLayout(inst.n)
    cuts = []
    for S in gv_candidate_sets(support):
        for i in sorted(S):
            cuts.append(gv_cut(inst, S, i, layout))
    kept = keep_violated(cuts, point, threshold)
    if kept:
        logger.debug(f"GV separation: {len(kept)} violated rows from {len(cuts)} candidates")
    return kept


# ============================================================================
# UAV CONNECTIVITY
# ============================================================================

def uav_cut(inst: Instance, S: FrozenSet[int], i: int, outgoing: bool,
            layout: Optional[ColumnLayout] = None) -> Cut:
    layout = layout or ColumnLayout(inst.n)
    sets = cut_sets(inst, TargetSet.of(S))
    arcs = sets.delta_out_arcs if outgoing else sets.delta_in_arcs
    terms = [(layout.w(u, v), 1.0) for u, v in arcs]
    terms += [(layout.y(i, j), 1.0) for j in S]
    prefix, kind = ('wsec1', UAV_CONNECTIVITY_OUT) if outgoing else ('wsec2', UAV_CONNECTIVITY_IN)
    return Cut.from_terms(f"{prefix}[{i},{set_label(S)}]", terms, GE, 1.0,
                          kind=kind, S=frozenset(S), root=i)


def _augmented(support: SupportGraph, i: int, outgoing: bool) -> nx.DiGraph:
    """
    w arcs (reversed for the in-direction) plus an arc j -> SINK of
    capacity y*_ij per target; a cut around i then costs exactly the left
    hand side of the UAV row for S = source side.
    """
    graph = nx.DiGraph()
    graph.add_nodes_from(support.uav.nodes)
    for u, v, cap in support.uav.edges(data='capacity'):
        if outgoing:
            graph.add_edge(u, v, capacity=cap)
        else:
            graph.add_edge(v, u, capacity=cap)
    graph.add_node(SINK)
    for j in range(support.y.shape[1]):
        if support.y[i, j] > support.eps:
            graph.add_edge(j, SINK, capacity=float(support.y[i, j]))
    return graph


def _holds_stop(support: SupportGraph, S: FrozenSet[int]) -> bool:
    return any(support.is_stop(v) for v in S)


def uav_candidate_sets(support: SupportGraph, exact: bool = True):
    """(S, i, outgoing) triples to try."""
    triples = []
    for component in nx.weakly_connected_components(support.uav):
        S = frozenset(component)
        if _holds_stop(support, S):
            continue
        for i in sorted(S):
            triples.append((S, i, True))
            triples.append((S, i, False))

    if exact:
        for i in sorted(support.uav.nodes):
            if support.is_stop(i):
                continue
            for outgoing in (True, False):
                value, s_side = min_cut(_augmented(support, i, outgoing), i, SINK)
                S = frozenset(v for v in s_side if v != SINK)
                if value < 1.0 and S and not _holds_stop(support, S):
                    triples.append((S, i, outgoing))
    return triples


def separate_uav_connectivity(point: np.ndarray, inst: Instance, support: Optional[SupportGraph] = None,
                              threshold: Optional[float] = None, exact: bool = True) -> List[Cut]:
    """
    Violated UAV connectivity rows (both arc orientations) at a point

    Args:
        exact: also run the per-target min cut on the augmented graph

    Returns:
        list of Cut, possibly empty
    """
    support = support or build_support_graph(inst, point)
    threshold = min_violation() if threshold is None else threshold
    layout = ColumnLayout(inst.n)
    cuts = [uav_cut(inst, S, i, outgoing, layout) for S, i, outgoing in uav_candidate_sets(support, exact)]
    kept = keep_violated(cuts, point, threshold)
    if kept:
        logger.debug(f"UAV separation: {len(kept)} violated rows from {len(cuts)} candidates")
    return kept
