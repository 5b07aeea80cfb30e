"""
Sparse constraint rows and generated cuts
"""

from dataclasses import dataclass, field
from typing import FrozenSet, Optional, Tuple

import numpy as np


LE, GE, EQ = '<=', '>=', '='

GV_CONNECTIVITY = 'gv_connectivity'
UAV_CONNECTIVITY_IN = 'uav_connectivity_in'
UAV_CONNECTIVITY_OUT = 'uav_connectivity_out'
TWO_MATCHING = 'two_matching'

CUT_KINDS = (GV_CONNECTIVITY, UAV_CONNECTIVITY_IN, UAV_CONNECTIVITY_OUT, TWO_MATCHING)


def merge_terms(terms) -> Tuple[np.ndarray, np.ndarray]:
    """Collapse (column, coefficient) pairs into sorted index/value arrays."""
    acc = {}
    for col, coef in terms:
        acc[int(col)] = acc.get(int(col), 0.0) + float(coef)
    cols = sorted(c for c, v in acc.items() if v != 0.0)
    return np.array(cols, dtype=int), np.array([acc[c] for c in cols], dtype=float)


@dataclass(frozen=True, eq=False)
class Row:
    name: str
    idx: np.ndarray
    val: np.ndarray
    sense: str
    rhs: float

    @classmethod
    def from_terms(cls, name, terms, sense, rhs, **extra):
        idx, val = merge_terms(terms)
        return cls(name=name, idx=idx, val=val, sense=sense, rhs=float(rhs), **extra)

    def activity(self, point: np.ndarray) -> float:
        return float(np.dot(self.val, point[self.idx])) if self.idx.size else 0.0

    def violation(self, point: np.ndarray) -> float:
        """Positive amount by which the point violates the row, else <= 0."""
        lhs = self.activity(point)
        if self.sense == LE:
            return lhs - self.rhs
        if self.sense == GE:
            return self.rhs - lhs
        return abs(lhs - self.rhs)

    def is_satisfied(self, point: np.ndarray, tol: float = 1e-6) -> bool:
        return self.violation(point) <= tol

    def key(self):
        """Identity of the row's content, for de-duplication."""
        return (self.sense, round(self.rhs, 9), tuple(self.idx.tolist()), tuple(np.round(self.val, 9).tolist()))


@dataclass(frozen=True, eq=False)
class Cut(Row):
    kind: str = GV_CONNECTIVITY
    S: FrozenSet[int] = field(default_factory=frozenset)
    root: Optional[int] = None
    handle: FrozenSet[int] = field(default_factory=frozenset)
    teeth: Tuple[Tuple[int, int], ...] = ()
