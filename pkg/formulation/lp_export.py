"""
Export a model (plus any generated cuts) in CPLEX LP text format
"""

import logging
from pathlib import Path
from typing import Iterable

from .model_builder import Model
from .rows import EQ, GE, LE, Row

logger = logging.getLogger(__name__)

_SENSE = {LE: '<=', GE: '>=', EQ: '='}


def _terms(model: Model, idx, val) -> str:
    parts = []
    for col, coef in zip(idx, val):
        sign = '-' if coef < 0 else '+'
        parts.append(f"{sign} {float(abs(coef))!r} {model.layout.name(int(col))}")
    text = ' '.join(parts) if parts else '0 ' + model.layout.name(0)
    return text[2:] if text.startswith('+ ') else text


def _row_name(row: Row) -> str:
    return row.name.replace('[', '(').replace(']', ')').replace(',', '_')


def dumps_lp(model: Model, cuts: Iterable[Row] = ()) -> str:
    layout = model.layout
    obj_cols = [c for c in range(layout.size) if model.objective[c] != 0.0]
    lines = ['\\ CAGVRP model', 'Minimize', ' obj: ' + _terms(model, obj_cols, model.objective[obj_cols])]

    lines.append('Subject To')
    for row in list(model.rows) + list(cuts):
        lines.append(f" {_row_name(row)}: {_terms(model, row.idx, row.val)} {_SENSE[row.sense]} {row.rhs!r}")

    lines.append('Bounds')
    generals, binaries = [], []
    for col in range(layout.size):
        name = layout.name(col)
        lo, hi = model.lb[col], model.ub[col]
        if lo == hi:
            lines.append(f" {name} = {float(lo)!r}")
        else:
            lines.append(f" {float(lo)!r} <= {name} <= {float(hi)!r}")
        (generals if hi > 1 else binaries).append(name)

    if generals:
        lines.append('Generals')
        lines.append(' ' + ' '.join(generals))
    lines.append('Binaries')
    lines.append(' ' + ' '.join(binaries))
    lines.append('End')
    return '\n'.join(lines) + '\n'


def export_lp(model: Model, path, cuts: Iterable[Row] = ()) -> None:
    Path(path).write_text(dumps_lp(model, cuts), encoding='utf-8')
    logger.info(f"[SUCCESS] Wrote LP model with {len(model.rows)} static rows to {path}")
