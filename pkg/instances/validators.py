"""
Validation utilities for CAGVRP instances
Ensures every Instance invariant holds before a solver sees it
"""

import logging

import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError

from .domain import CLASS_TAGS, Instance

logger = logging.getLogger(__name__)

# Triangle inequality slack for Euclidean-derived matrices
TRIANGLE_TOLERANCE = 1e-9


def euclidean_matrix(targets: np.ndarray) -> np.ndarray:
    delta = targets[:, None, :] - targets[None, :, :]
    return np.sqrt((delta ** 2).sum(axis=2))


def penalty_matrix(euclid: np.ndarray, R: float, c: np.ndarray, d: np.ndarray) -> np.ndarray:
    """
    Auxiliary range cost f

    f[i][j] = 0 when euclid(i, j) <= R, BIG otherwise, with
    BIG = factor * (sum of all c entries + sum of all d entries).
    """
    factor = settings.INSTANCE_SETTINGS['big_factor']
    big = factor * (float(c.sum()) + float(d.sum()))
    tol = settings.SOLVER_TOLERANCES['comparison']
    return np.where(euclid <= R + tol, 0.0, big)


def _first_triangle_violation(matrix: np.ndarray):
    # via[i, k, j] = matrix[i, k] + matrix[k, j]
    via = matrix[:, :, None] + matrix[None, :, :]
    slack = matrix[:, None, :] - via
    scale = TRIANGLE_TOLERANCE * max(1.0, float(np.abs(matrix).max(initial=0.0)))
    bad = np.argwhere(slack > scale)
    if bad.size == 0:
        return None
    i, k, j = (int(v) for v in bad[0])
    return i, k, j


def validate_instance_fields(targets, R, alpha, class_tag, c, d):
    """
    Check all Instance invariants

    Raises:
        ValidationError: naming the offending field or index pair
    """
    n = targets.shape[0] if targets.ndim == 2 else 0

    if n < 1:
        raise ValidationError("N: an instance needs at least one target (the base)")
    if targets.shape != (n, 2):
        raise ValidationError(f"targets: expected shape ({n}, 2), got {targets.shape}")
    if not np.all(np.isfinite(targets)):
        raise ValidationError("targets: coordinates must be finite")
    if not np.isfinite(R) or R <= 0:
        raise ValidationError(f"R: communication range must be positive, got {R}")
    if not np.isfinite(alpha) or alpha <= 0:
        raise ValidationError(f"ALPHA: scale must be positive, got {alpha}")
    if class_tag not in CLASS_TAGS:
        raise ValidationError(f"CLASS: unknown class tag '{class_tag}', expected one of {CLASS_TAGS}")

    for name, matrix in (('c', c), ('d', d)):
        if matrix.shape != (n, n):
            raise ValidationError(f"{name}: expected a {n}x{n} matrix, got {matrix.shape}")
        if not np.all(np.isfinite(matrix)):
            raise ValidationError(f"{name}: entries must be finite")
        negative = np.argwhere(matrix < 0)
        if negative.size:
            i, j = (int(v) for v in negative[0])
            raise ValidationError(f"{name}[{i}][{j}]: costs must be non-negative")

    asymmetric = np.argwhere(np.abs(c - c.T) > TRIANGLE_TOLERANCE)
    if asymmetric.size:
        i, j = (int(v) for v in asymmetric[0])
        raise ValidationError(f"c[{i}][{j}] != c[{j}][{i}]: GV costs must be symmetric")

    for name, matrix in (('c', c), ('d', d)):
        diagonal = np.flatnonzero(np.abs(np.diag(matrix)) > TRIANGLE_TOLERANCE)
        if diagonal.size:
            i = int(diagonal[0])
            raise ValidationError(f"{name}[{i}][{i}]: diagonal must be zero")
        violation = _first_triangle_violation(matrix)
        if violation is not None:
            i, k, j = violation
            raise ValidationError(
                f"{name}[{i}][{j}] > {name}[{i}][{k}] + {name}[{k}][{j}]: triangle inequality violated"
            )


def build_instance(targets, R, alpha, seed=None, class_tag='custom', c=None, d=None) -> Instance:
    """
    Construct a validated Instance

    Args:
        targets: sequence of (x, y) points, target 0 is the base
        R: communication range
        alpha: UAV cost scale (d = alpha * euclid unless d is given)
        seed: generator seed, kept for provenance
        class_tag: one of A, B, C, custom
        c, d: optional explicit cost matrices overriding Euclidean defaults

    Returns:
        Instance

    Raises:
        ValidationError: if any invariant fails
    """
    targets = np.asarray(targets, dtype=float)
    if targets.ndim == 1 and targets.size == 0:
        targets = targets.reshape(0, 2)
    R = float(R)
    alpha = float(alpha)

    euclid = euclidean_matrix(targets) if targets.ndim == 2 else np.zeros((0, 0))
    explicit_c = c is not None
    explicit_d = d is not None
    c = np.asarray(c, dtype=float) if explicit_c else euclid.copy()
    d = np.asarray(d, dtype=float) if explicit_d else alpha * euclid

    validate_instance_fields(targets, R, alpha, class_tag, c, d)

    f = penalty_matrix(euclid, R, c, d)
    return Instance(
        targets=targets, R=R, c=c, d=d, f=f, alpha=alpha,
        seed=None if seed is None else int(seed),
        class_tag=class_tag, explicit_c=explicit_c, explicit_d=explicit_d,
    )
