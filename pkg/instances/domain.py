"""
Domain types for CAGVRP instances

An instance is a set of targets (target 0 is the base station), a
symmetric ground-vehicle cost matrix c, a UAV cost matrix d, a
communication range R and the auxiliary range-penalty matrix f.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import FrozenSet, Iterable, Iterator, Optional

import numpy as np
from django.conf import settings


CLASS_TAGS = ('A', 'B', 'C', 'custom')
BASE = 0


def comparison_tolerance() -> float:
    return settings.SOLVER_TOLERANCES['comparison']


def _frozen(matrix) -> np.ndarray:
    array = np.array(matrix, dtype=float, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class TargetSet:
    """Set S of target indices used in cut-set queries."""
    members: FrozenSet[int] = field(default_factory=frozenset)

    @classmethod
    def of(cls, indices: Iterable[int]) -> 'TargetSet':
        return cls(frozenset(int(i) for i in indices))

    def __contains__(self, item) -> bool:
        return item in self.members

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True, eq=False)
class Instance:
    """
    Immutable CAGVRP instance

    Build it through `instances.validators.build_instance`, which fills the
    Euclidean defaults, derives f and validates every invariant.
    """
    targets: np.ndarray
    R: float
    c: np.ndarray
    d: np.ndarray
    f: np.ndarray
    alpha: float
    seed: Optional[int] = None
    class_tag: str = 'custom'
    explicit_c: bool = False
    explicit_d: bool = False
    base: int = BASE

    def __post_init__(self):
        for name in ('targets', 'c', 'd', 'f'):
            object.__setattr__(self, name, _frozen(getattr(self, name)))

    @property
    def n(self) -> int:
        return int(self.targets.shape[0])

    @cached_property
    def euclid(self) -> np.ndarray:
        delta = self.targets[:, None, :] - self.targets[None, :, :]
        return _frozen(np.sqrt((delta ** 2).sum(axis=2)))

    @cached_property
    def in_range(self) -> np.ndarray:
        """Boolean matrix, True where euclid(i, j) <= R."""
        mask = self.euclid <= self.R + comparison_tolerance()
        mask.setflags(write=False)
        return mask

    @cached_property
    def big(self) -> float:
        return float(self.f.max()) if self.f.size else 0.0

    def edges(self):
        """Undirected GV edges (i, j), i < j, in lexicographic order."""
        return [(i, j) for i in range(self.n) for j in range(i + 1, self.n)]

    def arcs(self):
        """UAV arcs [i, j] including self loops."""
        return [(i, j) for i in range(self.n) for j in range(self.n)]

    def scaled(self, alpha: float) -> 'Instance':
        """Same geometry with the UAV costs rescaled (Euclidean d only)."""
        from .validators import build_instance
        return build_instance(
            self.targets, R=self.R, alpha=alpha, seed=self.seed,
            class_tag=self.class_tag,
            c=self.c if self.explicit_c else None,
        )

    def __repr__(self):
        return (
            f"Instance(n={self.n}, R={self.R}, alpha={self.alpha}, "
            f"class={self.class_tag}, seed={self.seed})"
        )
