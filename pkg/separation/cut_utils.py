"""
Helpers shared by the separators
"""

from typing import Iterable, List

import numpy as np
from django.conf import settings

from formulation.rows import Cut


def min_violation() -> float:
    return settings.SOLVER_TOLERANCES['cut_violation']


def set_label(S: Iterable[int]) -> str:
    return '.'.join(str(v) for v in sorted(S))


def keep_violated(cuts: Iterable[Cut], point: np.ndarray, threshold: float) -> List[Cut]:
    """De-duplicate by row content and keep rows violated by more than threshold."""
    seen, kept = set(), []
    for cut in cuts:
        key = cut.key()
        if key in seen:
            continue
        seen.add(key)
        if cut.violation(point) > threshold:
            kept.append(cut)
    return kept
