"""
MILP model builder

Columns (in this order):
    x_ij   i < j        GV edge use, bounds [0,2] on base edges, [0,1] elsewhere
    w_ij   all i, j     UAV arc use, self loops included
    y_ij   all i, j     target i served from stop j
    z_ijk  all i, j, k  linearization of y_ik * y_jk

Static rows: assignment, degree, linearization and (optionally) the
neighborhood / edge-exclusion valid inequalities. Connectivity and
2-matching rows are generated by the separation routines.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from instances.domain import BASE, Instance
from instances.instance_utils import neighborhoods

from .rows import EQ, GE, LE, Row

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ModelOptions:
    """
    use_penalty_f               objective carries f_ij y_ij instead of fixing
                                out-of-range y_ij to 0
    include_valid_inequalities  add the neighborhood bound and edge exclusion rows
    strict_rings                binary x everywhere, no base-only / out-and-back ring
    """
    use_penalty_f: bool = False
    include_valid_inequalities: bool = True
    strict_rings: bool = False

    @property
    def fix_infeasible_y(self) -> bool:
        return not self.use_penalty_f


class ColumnLayout:
    """Column indexing for an n-target instance."""

    def __init__(self, n: int):
        self.n = n
        self.edges: List[Tuple[int, int]] = [(i, j) for i in range(n) for j in range(i + 1, n)]
        self.edge_index: Dict[Tuple[int, int], int] = {e: k for k, e in enumerate(self.edges)}
        self.w_offset = len(self.edges)
        self.y_offset = self.w_offset + n * n
        self.z_offset = self.y_offset + n * n
        self.size = self.z_offset + n ** 3

    def x(self, i: int, j: int) -> int:
        return self.edge_index[(i, j) if i < j else (j, i)]

    def w(self, i: int, j: int) -> int:
        return self.w_offset + i * self.n + j

    def y(self, i: int, j: int) -> int:
        return self.y_offset + i * self.n + j

    def z(self, i: int, j: int, k: int) -> int:
        return self.z_offset + (i * self.n + j) * self.n + k

    @property
    def x_slice(self) -> slice:
        return slice(0, self.w_offset)

    @property
    def w_slice(self) -> slice:
        return slice(self.w_offset, self.y_offset)

    @property
    def y_slice(self) -> slice:
        return slice(self.y_offset, self.z_offset)

    @property
    def z_slice(self) -> slice:
        return slice(self.z_offset, self.size)

    def kind(self, col: int) -> str:
        if col < self.w_offset:
            return 'x'
        if col < self.y_offset:
            return 'w'
        if col < self.z_offset:
            return 'y'
        return 'z'

    def name(self, col: int) -> str:
        kind = self.kind(col)
        if kind == 'x':
            i, j = self.edges[col]
            return f"x_{i}_{j}"
        if kind in ('w', 'y'):
            offset = self.w_offset if kind == 'w' else self.y_offset
            i, j = divmod(col - offset, self.n)
            return f"{kind}_{i}_{j}"
        rest, k = divmod(col - self.z_offset, self.n)
        i, j = divmod(rest, self.n)
        return f"z_{i}_{j}_{k}"

    # Views of a full point
    def x_values(self, point: np.ndarray) -> Dict[Tuple[int, int], float]:
        return {e: float(point[k]) for k, e in enumerate(self.edges)}

    def w_matrix(self, point: np.ndarray) -> np.ndarray:
        return point[self.w_slice].reshape(self.n, self.n)

    def y_matrix(self, point: np.ndarray) -> np.ndarray:
        return point[self.y_slice].reshape(self.n, self.n)


@dataclass(frozen=True, eq=False)
class Model:
    inst: Instance
    options: ModelOptions
    layout: ColumnLayout
    lb: np.ndarray
    ub: np.ndarray
    objective: np.ndarray
    rows: Tuple[Row, ...]

    @property
    def n_columns(self) -> int:
        return self.layout.size

    @property
    def fixed_mask(self) -> np.ndarray:
        return self.lb == self.ub

    def row_counts(self) -> Dict[str, int]:
        counts: Dict[str, int] = {}
        for row in self.rows:
            family = row.name.split('[')[0]
            counts[family] = counts.get(family, 0) + 1
        return counts


# ============================================================================
# BUILDING
# ============================================================================

def _bounds(inst: Instance, layout: ColumnLayout, options: ModelOptions):
    n = inst.n
    lb = np.zeros(layout.size)
    ub = np.ones(layout.size)

    if not options.strict_rings:
        for j in range(1, n):
            ub[layout.x(BASE, j)] = 2.0

    y_ub = np.ones((n, n))
    if options.fix_infeasible_y:
        y_ub[~inst.in_range] = 0.0
    # y_00 = 1 with the assignment row forces y_0j = 0 elsewhere
    y_ub[BASE, :] = 0.0
    y_ub[BASE, BASE] = 1.0
    ub[layout.y_slice] = y_ub.ravel()
    lb[layout.y(BASE, BASE)] = 1.0

    # z_ijk can only be 1 when both y_ik and y_jk can
    z_ub = (y_ub[:, None, :] * y_ub[None, :, :]).astype(float)
    ub[layout.z_slice] = z_ub.ravel()

    # w_ij needs a common stop for i and j
    w_ub = z_ub.max(axis=2) if n else np.zeros((0, 0))
    ub[layout.w_slice] = w_ub.ravel()
    return lb, ub


def _objective(inst: Instance, layout: ColumnLayout, options: ModelOptions) -> np.ndarray:
    obj = np.zeros(layout.size)
    for k, (i, j) in enumerate(layout.edges):
        obj[k] = inst.c[i, j]
    obj[layout.w_slice] = inst.d.ravel()
    if options.use_penalty_f:
        obj[layout.y_slice] = inst.f.ravel()
    return obj


def _static_rows(inst: Instance, layout: ColumnLayout, options: ModelOptions) -> List[Row]:
    n = inst.n
    rows: List[Row] = []
    T = range(n)

    for i in T:
        rows.append(Row.from_terms(f"assign[{i}]", [(layout.y(i, j), 1.0) for j in T], EQ, 1.0))
    rows.append(Row.from_terms("base_stop[0]", [(layout.y(BASE, BASE), 1.0)], EQ, 1.0))

    if layout.edges:
        for i in T:
            terms = [(layout.x(i, j), 1.0) for j in T if j != i]
            terms.append((layout.y(i, i), -2.0))
            rows.append(Row.from_terms(f"degx[{i}]", terms, EQ, 0.0))

    for i in T:
        rows.append(Row.from_terms(f"outdegw[{i}]", [(layout.w(i, j), 1.0) for j in T], EQ, 1.0))
    for j in T:
        rows.append(Row.from_terms(f"indegw[{j}]", [(layout.w(i, j), 1.0) for i in T], EQ, 1.0))

    for i in T:
        for j in T:
            terms = [(layout.w(i, j), 1.0)] + [(layout.z(i, j, k), -1.0) for k in T]
            rows.append(Row.from_terms(f"wijlin[{i},{j}]", terms, LE, 0.0))
            for k in T:
                z = layout.z(i, j, k)
                rows.append(Row.from_terms(f"zlin1[{i},{j},{k}]", [(z, 1.0), (layout.y(i, k), -1.0)], LE, 0.0))
                if i != j:
                    rows.append(Row.from_terms(f"zlin2[{i},{j},{k}]", [(z, 1.0), (layout.y(j, k), -1.0)], LE, 0.0))
                if i == j:
                    terms3 = [(z, 1.0), (layout.y(i, k), -2.0)]
                else:
                    terms3 = [(z, 1.0), (layout.y(i, k), -1.0), (layout.y(j, k), -1.0)]
                rows.append(Row.from_terms(f"zlin3[{i},{j},{k}]", terms3, GE, -1.0))

    if options.include_valid_inequalities:
        for j, R_j in enumerate(neighborhoods(inst)):
            terms = [(layout.y(i, j), 1.0) for i in R_j]
            terms.append((layout.y(j, j), -float(len(R_j))))
            rows.append(Row.from_terms(f"assign_vi[{j}]", terms, LE, 0.0))
        for i in T:
            for j in T:
                if i == j:
                    continue
                terms = [(layout.w(i, j), 1.0), (layout.y(i, i), 1.0), (layout.y(j, j), 1.0)]
                rows.append(Row.from_terms(f"gv_vi[{i},{j}]", terms, LE, 2.0))
    return rows


def build_model(inst: Instance, options: ModelOptions = None) -> Model:
    """
    Build the MILP for an instance

    Args:
        inst: validated instance
        options: ModelOptions, defaults to fixing out-of-range y with valid
                 inequalities on

    Returns:
        Model
    """
    options = options or ModelOptions()
    layout = ColumnLayout(inst.n)
    lb, ub = _bounds(inst, layout, options)
    model = Model(
        inst=inst,
        options=options,
        layout=layout,
        lb=lb,
        ub=ub,
        objective=_objective(inst, layout, options),
        rows=tuple(_static_rows(inst, layout, options)),
    )
    logger.debug(
        f"Built model for {inst!r}: {layout.size} columns "
        f"({int((~model.fixed_mask).sum())} free), {len(model.rows)} rows"
    )
    return model
