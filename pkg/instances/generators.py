"""
Random instance generators for classes A, B and C

Class A  uniform targets on the grid (small and medium n)
Class B  clustered targets with a lower bound on cluster separation
Class C  uniform targets, large n (60 to 80 by convention)

Coordinates depend on (class, n, seed) only; alpha scales d and nothing else.
"""

import logging
import math
from pathlib import Path
from typing import List, Optional

import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError

from .domain import Instance
from .validators import build_instance

logger = logging.getLogger(__name__)

GENERATED_CLASSES = ('A', 'B', 'C')

# Rejection sampling attempts per cluster center before relaxing separation
MAX_CENTER_ATTEMPTS = 1000


def _uniform_targets(rng: np.random.Generator, n: int, grid: float) -> np.ndarray:
    return rng.uniform(0.0, grid, size=(n, 2))


def _cluster_centers(rng: np.random.Generator, k: int, grid: float, separation: float) -> np.ndarray:
    centers: List[np.ndarray] = []
    min_gap = separation
    while len(centers) < k:
        for _ in range(MAX_CENTER_ATTEMPTS):
            candidate = rng.uniform(0.0, grid, size=2)
            if all(np.linalg.norm(candidate - c) >= min_gap for c in centers):
                centers.append(candidate)
                break
        else:
            # grid too crowded for k centers at this separation
            min_gap *= 0.9
            logger.warning(f"[UPDATE] Cluster separation relaxed to {min_gap:.2f}")
    return np.array(centers)


def _clustered_targets(rng: np.random.Generator, n: int, grid: float) -> np.ndarray:
    cfg = settings.INSTANCE_SETTINGS
    k = math.ceil(n / cfg['cluster_size'])
    centers = _cluster_centers(rng, k, grid, cfg['cluster_separation'])
    labels = np.arange(n) % k
    points = centers[labels] + rng.normal(0.0, cfg['cluster_sigma'], size=(n, 2))
    return np.clip(points, 0.0, grid)


def generate_instance(class_tag: str, n: int, alpha: float, seed: int,
                      R: Optional[float] = None) -> Instance:
    """
    Generate a random instance

    Args:
        class_tag: 'A', 'B' or 'C'
        n: number of targets including the base
        alpha: UAV cost scale, d = alpha * euclid
        seed: generator seed
        R: communication range, defaults to INSTANCE_SETTINGS

    Returns:
        Instance

    Raises:
        ValidationError: unknown class tag, n < 1 or alpha <= 0
    """
    if class_tag not in GENERATED_CLASSES:
        raise ValidationError(f"class_tag: unknown class '{class_tag}', expected one of {GENERATED_CLASSES}")
    if int(n) < 1:
        raise ValidationError(f"n: need at least one target, got {n}")

    cfg = settings.INSTANCE_SETTINGS
    grid = cfg['grid_size']
    rng = np.random.default_rng(int(seed))

    if class_tag == 'B':
        targets = _clustered_targets(rng, int(n), grid)
    else:
        targets = _uniform_targets(rng, int(n), grid)

    inst = build_instance(
        targets,
        R=cfg['communication_range'] if R is None else R,
        alpha=alpha,
        seed=seed,
        class_tag=class_tag,
    )
    logger.debug(f"Generated {inst!r}")
    return inst


def corpus_file_name(class_tag: str, n: int, alpha: float, seed: int) -> str:
    return f"{class_tag}_n{int(n)}_a{alpha:g}_s{int(seed)}.txt"


def generate_corpus(class_tag: str, n: int, alpha: float, seed: int, count: int, out_dir) -> List[Path]:
    """
    Write `count` instances with consecutive seeds starting at `seed`

    Returns:
        list of written file paths
    """
    from .file_io import save_instance

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for offset in range(int(count)):
        s = int(seed) + offset
        inst = generate_instance(class_tag, n, alpha, s)
        path = out_dir / corpus_file_name(class_tag, n, alpha, s)
        save_instance(inst, path)
        written.append(path)
    logger.info(f"[SUCCESS] Wrote {len(written)} class {class_tag} instances to {out_dir}")
    return written
