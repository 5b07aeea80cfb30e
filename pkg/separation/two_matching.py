"""
Heuristic 2-matching separation

Handles are the connected components of the fractional part of the GV
support graph; teeth are unit edges leaving the handle, pruned so no two
share an endpoint. The row

    sum_{gamma(H)} x + sum_{I} x - sum_{i in H} y_ii <= (|I| - 1) / 2

is emitted only for an odd number of teeth, at least three.
"""

import logging
from typing import List, Optional, Tuple

import networkx as nx
import numpy as np

from formulation.model_builder import ColumnLayout
from formulation.rows import LE, TWO_MATCHING, Cut
from instances.domain import Instance, TargetSet
from instances.instance_utils import cut_sets

from .cut_utils import keep_violated, min_violation, set_label
from .support_graph import support_epsilon

logger = logging.getLogger(__name__)


def _teeth(x_values, handle, eps: float) -> List[Tuple[int, int]]:
    chosen, used = [], set()
    for (i, j), value in sorted(x_values.items()):
        if (i in handle) == (j in handle):
            continue
        if abs(value - 1.0) > eps:
            continue
        if i in used or j in used:
            continue
        chosen.append((i, j))
        used.update((i, j))
    return chosen


def two_matching_cut(inst: Instance, handle, teeth, layout: Optional[ColumnLayout] = None) -> Cut:
    layout = layout or ColumnLayout(inst.n)
    sets = cut_sets(inst, TargetSet.of(handle))
    terms = [(layout.x(u, v), 1.0) for u, v in sets.gamma_edges]
    terms += [(layout.x(u, v), 1.0) for u, v in teeth]
    terms += [(layout.y(i, i), -1.0) for i in handle]
    return Cut.from_terms(f"twomatch[{set_label(handle)}]", terms, LE, (len(teeth) - 1) / 2.0,
                          kind=TWO_MATCHING, handle=frozenset(handle), teeth=tuple(teeth))


def separate_two_matching(point: np.ndarray, inst: Instance, threshold: Optional[float] = None,
                          eps: Optional[float] = None) -> List[Cut]:
    threshold = min_violation() if threshold is None else threshold
    eps = support_epsilon() if eps is None else eps
    layout = ColumnLayout(inst.n)
    x_values = layout.x_values(point)

    fractional = nx.Graph()
    fractional.add_edges_from(e for e, value in x_values.items() if eps < value < 1.0 - eps)

    cuts = []
    for component in nx.connected_components(fractional):
        handle = frozenset(component)
        teeth = _teeth(x_values, handle, eps)
        if len(teeth) < 3 or len(teeth) % 2 == 0:
            continue
        cuts.append(two_matching_cut(inst, handle, teeth, layout))
    return keep_violated(cuts, point, threshold)
