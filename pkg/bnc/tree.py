"""
Branch-and-cut tree: nodes, the best-bound queue and variable selection
"""

import heapq
import itertools
import math
import threading
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from django.core.exceptions import ValidationError

from formulation.model_builder import Model
from lp.backends import LpBasis

Fixings = Dict[int, Tuple[float, float]]


@dataclass
class Node:
    """
    fixings       column -> (lo, hi) bounds tightened by branching
    parent_bound  LP value of the parent, a lower bound for this subtree
    basis         parent's optimal basis for the warm start
    """
    fixings: Fixings = field(default_factory=dict)
    parent_bound: float = -math.inf
    depth: int = 0
    basis: Optional[LpBasis] = None

    def __post_init__(self):
        for col, (lo, hi) in self.fixings.items():
            if lo > hi:
                raise ValidationError(f"node fixes column {col} to empty range [{lo}, {hi}]")

    def child(self, col: int, lo: float, hi: float, bound: float, basis: Optional[LpBasis]) -> 'Node':
        fixings = dict(self.fixings)
        fixings[col] = (lo, hi)
        return Node(fixings=fixings, parent_bound=bound, depth=self.depth + 1, basis=basis)


class NodeQueue:
    """Best-bound priority queue; FIFO among equal bounds."""

    def __init__(self):
        self._heap: List[Tuple[float, int, Node]] = []
        self._counter = itertools.count()
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._heap)

    def push(self, node: Node):
        with self._lock:
            heapq.heappush(self._heap, (node.parent_bound, next(self._counter), node))

    def pop(self) -> Optional[Node]:
        with self._lock:
            if not self._heap:
                return None
            return heapq.heappop(self._heap)[2]

    def min_bound(self) -> float:
        with self._lock:
            return self._heap[0][0] if self._heap else math.inf


# ============================================================================
# BRANCHING
# ============================================================================

def fractionality(value: float) -> float:
    return abs(value - round(value))


def is_integral(point: np.ndarray, tol: float) -> bool:
    return bool(np.all(np.abs(point - np.round(point)) <= tol))


def branching_candidates(model: Model) -> List[np.ndarray]:
    """Column groups in branching priority: y_ii, x, w, remaining y. z is never branched."""
    layout = model.layout
    n = layout.n
    diag = np.array([layout.y(i, i) for i in range(n)], dtype=int)
    x_cols = np.arange(layout.x_slice.start, layout.x_slice.stop)
    w_cols = np.arange(layout.w_slice.start, layout.w_slice.stop)
    y_cols = np.arange(layout.y_slice.start, layout.y_slice.stop)
    y_rest = np.setdiff1d(y_cols, diag)
    return [diag, x_cols, w_cols, y_rest]


def select_branching_column(model: Model, point: np.ndarray, tol: float) -> Optional[int]:
    """
    Most fractional column of the first group holding a fractional value;
    ties go to the lowest index.
    """
    for group in branching_candidates(model):
        if group.size == 0:
            continue
        frac = np.abs(point[group] - np.round(point[group]))
        if frac.max() > tol:
            return int(group[int(np.argmax(frac))])
    return None


def split(model: Model, node: Node, col: int, value: float) -> Tuple[Tuple[float, float], Tuple[float, float]]:
    lo, hi = node.fixings.get(col, (float(model.lb[col]), float(model.ub[col])))
    return (lo, float(math.floor(value))), (float(math.ceil(value)), hi)
