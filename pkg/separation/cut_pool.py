"""
Cut bookkeeping shared by the separators and the branch-and-cut driver

A separation round runs the three separators on one point, drops rows
already pooled, orders the rest by violation and keeps at most
BNC_SETTINGS['max_cuts_per_round'].
"""

import logging
import threading
from typing import Dict, Iterable, List, Optional

import numpy as np
from django.conf import settings

from formulation.rows import CUT_KINDS, Cut

from .connectivity import separate_gv_connectivity, separate_uav_connectivity
from .cut_utils import keep_violated
from .support_graph import build_support_graph
from .two_matching import separate_two_matching

logger = logging.getLogger(__name__)


class CutPool:
    """Globally valid cuts found so far, with counts by kind."""

    def __init__(self):
        self._keys = set()
        self.cuts: List[Cut] = []
        self.counts: Dict[str, int] = {kind: 0 for kind in CUT_KINDS}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self.cuts)

    def __contains__(self, cut: Cut) -> bool:
        return cut.key() in self._keys

    def add(self, cuts: Iterable[Cut]) -> List[Cut]:
        """Add new cuts; returns the ones that were not pooled yet."""
        added = []
        with self._lock:
            for cut in cuts:
                key = cut.key()
                if key in self._keys:
                    continue
                self._keys.add(key)
                self.cuts.append(cut)
                self.counts[cut.kind] = self.counts.get(cut.kind, 0) + 1
                added.append(cut)
        return added

    def since(self, start: int) -> List[Cut]:
        with self._lock:
            return list(self.cuts[start:])


def separate_all(point: np.ndarray, inst, pool: Optional[CutPool] = None,
                 max_cuts: Optional[int] = None, use_two_matching: bool = True,
                 threshold: Optional[float] = None) -> List[Cut]:
    """
    One separation round

    Args:
        point: full model point
        inst: instance
        pool: cuts already in the relaxation are skipped
        max_cuts: per-round cap, defaults to BNC_SETTINGS['max_cuts_per_round']
        use_two_matching: run the 2-matching heuristic as well

    Returns:
        violated cuts, strongest first
    """
    max_cuts = settings.BNC_SETTINGS['max_cuts_per_round'] if max_cuts is None else max_cuts
    support = build_support_graph(inst, point)
    found = separate_gv_connectivity(point, inst, support=support, threshold=threshold)
    found += separate_uav_connectivity(point, inst, support=support, threshold=threshold)
    if use_two_matching:
        found += separate_two_matching(point, inst, threshold=threshold)

    if pool is not None:
        found = [cut for cut in found if cut not in pool]
    found = keep_violated(found, point, -np.inf)
    found.sort(key=lambda cut: (-cut.violation(point), cut.name))
    return found[:max_cuts]
