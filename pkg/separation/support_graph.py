"""
Support graphs of a relaxation point

GV side: undirected graph over the (partial) stops with x*_e as capacity.
UAV side: directed graph over all targets with w*_ij as capacity.
"""

from dataclasses import dataclass
from typing import Optional

import networkx as nx
import numpy as np
from django.conf import settings

from formulation.model_builder import ColumnLayout
from instances.domain import BASE, Instance


def support_epsilon() -> float:
    return settings.SOLVER_TOLERANCES['support']


@dataclass(frozen=True, eq=False)
class SupportGraph:
    """
    stops  V*: targets with y*_ii > eps (the base always included)
    gv     undirected, edge attribute 'capacity' = x*_e
    uav    directed, arc attribute 'capacity' = w*_ij, self loops dropped
    y      assignment matrix y*
    """
    stops: frozenset
    gv: nx.Graph
    uav: nx.DiGraph
    y: np.ndarray
    eps: float

    def is_stop(self, i: int) -> bool:
        return i in self.stops


def build_support_graph(inst: Instance, point: np.ndarray, eps: Optional[float] = None) -> SupportGraph:
    eps = support_epsilon() if eps is None else eps
    layout = ColumnLayout(inst.n)
    y = layout.y_matrix(point)
    stops = {i for i in range(inst.n) if y[i, i] > eps} | {BASE}

    gv = nx.Graph()
    gv.add_nodes_from(sorted(stops))
    for (i, j), value in layout.x_values(point).items():
        if value > eps:
            gv.add_edge(i, j, capacity=float(value))

    uav = nx.DiGraph()
    uav.add_nodes_from(range(inst.n))
    w = layout.w_matrix(point)
    for i, j in zip(*np.nonzero(w > eps)):
        if i != j:
            uav.add_edge(int(i), int(j), capacity=float(w[i, j]))

    return SupportGraph(stops=frozenset(stops), gv=gv, uav=uav, y=y, eps=eps)
