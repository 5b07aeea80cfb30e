"""
Shared test fixtures

TINY4         base (0,0), targets (10,0), (20,0), (10,10), R = 15, alpha = 0.5
FIVE_TARGETS  five targets where the GV stops at 1 and the UAV tours 2, 3 from there
"""

import math
from typing import Iterator, Sequence

import numpy as np

from .domain import Instance
from .generators import generate_instance
from .validators import build_instance


TINY4_TARGETS = [(0.0, 0.0), (10.0, 0.0), (20.0, 0.0), (10.0, 10.0)]
TINY4_R = 15.0
TINY4_ALPHA = 0.5

# Ring 0 -> 1 -> 0 (20) plus UAV loop 1 -> 2 -> 3 -> 1 (0.5 * (10 + 10*sqrt(2) + 10))
TINY4_OPTIMUM = 30.0 + 5.0 * math.sqrt(2.0)

FIVE_TARGETS_TARGETS = [(0.0, 0.0), (20.0, 50.0), (12.0, 58.0), (20.0, 60.0), (50.0, 50.0)]
FIVE_TARGETS_R = 15.0
FIVE_TARGETS_ALPHA = 0.5


def tiny4(alpha: float = TINY4_ALPHA) -> Instance:
    return build_instance(TINY4_TARGETS, R=TINY4_R, alpha=alpha, class_tag='custom')


def five_targets() -> Instance:
    return build_instance(FIVE_TARGETS_TARGETS, R=FIVE_TARGETS_R, alpha=FIVE_TARGETS_ALPHA, class_tag='custom')


def five_targets_cost(inst: Instance) -> float:
    c, d = inst.c, inst.d
    return float(c[0, 1] + c[1, 4] + c[4, 0] + d[1, 2] + d[2, 3] + d[3, 1])


def single_target(alpha: float = 0.1) -> Instance:
    return build_instance([(50.0, 50.0)], R=25.0, alpha=alpha, class_tag='custom')


def random_corpus(count: int, sizes: Sequence[int], alphas: Sequence[float] = (0.1, 0.2, 0.3),
                  class_tag: str = 'A', seed: int = 0) -> Iterator[Instance]:
    """Deterministic stream of small random instances cycling sizes and alphas."""
    for k in range(count):
        n = sizes[k % len(sizes)]
        alpha = alphas[k % len(alphas)]
        yield generate_instance(class_tag, n, alpha, seed + k)


def dense_corpus(count: int, n: int, alpha: float = 0.2, seed: int = 0) -> Iterator[Instance]:
    """
    Instances squeezed into a small box so most pairs are within range
    and UAV sub-tours actually pay off.
    """
    for k in range(count):
        rng = np.random.default_rng(seed + k)
        yield build_instance(rng.uniform(0.0, 30.0, size=(n, 2)), R=15.0, alpha=alpha,
                             seed=seed + k, class_tag='custom')
