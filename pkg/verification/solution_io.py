"""
Solution file reader and writer

    GVRING <i0 i1 ...>
    SUBTOUR <root>: <t1 t2 ...>     one line per deployed stop
    ASSIGN <t> <stop>               one line per target
    COST <value>
"""

import logging
from pathlib import Path
from typing import Optional, Tuple

from django.core.exceptions import ValidationError

from .domain import Solution

logger = logging.getLogger(__name__)


def dumps_solution(sol: Solution, cost: float) -> str:
    sol = sol.canonical()
    lines = ['GVRING ' + ' '.join(str(s) for s in sol.gv_ring)]
    for root, members in sol.subtours.items():
        lines.append(f"SUBTOUR {root}: " + ' '.join(str(t) for t in members))
    for t, s in sol.assignment.items():
        lines.append(f"ASSIGN {t} {s}")
    lines.append(f"COST {float(cost)!r}")
    return '\n'.join(lines) + '\n'


def _ints(tokens, lineno):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ValidationError(f"line {lineno}: expected integer target indices, got {' '.join(tokens)}")


def loads_solution(text: str) -> Tuple[Solution, Optional[float]]:
    """
    Parse a solution file

    Returns:
        (Solution, recorded cost or None)

    Raises:
        ValidationError: malformed line, with its number
    """
    ring = None
    subtours, assignment = {}, {}
    cost = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        keyword, _, rest = line.partition(' ')
        if keyword == 'GVRING':
            if ring is not None:
                raise ValidationError(f"line {lineno}: duplicate GVRING")
            ring = _ints(rest.split(), lineno)
        elif keyword == 'SUBTOUR':
            root, sep, members = rest.partition(':')
            if not sep:
                raise ValidationError(f"line {lineno}: expected 'SUBTOUR <root>: <targets>'")
            (root_id,) = _ints([root.strip()], lineno)
            if root_id in subtours:
                raise ValidationError(f"line {lineno}: duplicate SUBTOUR for root {root_id}")
            subtours[root_id] = _ints(members.split(), lineno)
        elif keyword == 'ASSIGN':
            pair = _ints(rest.split(), lineno)
            if len(pair) != 2:
                raise ValidationError(f"line {lineno}: expected 'ASSIGN <target> <stop>'")
            assignment[pair[0]] = pair[1]
        elif keyword == 'COST':
            try:
                cost = float(rest)
            except ValueError:
                raise ValidationError(f"line {lineno}: field COST expects a number, got '{rest}'")
        else:
            raise ValidationError(f"line {lineno}: unknown record '{keyword}'")

    if ring is None:
        raise ValidationError("solution file has no GVRING line")
    return Solution(gv_ring=ring, subtours=subtours, assignment=assignment), cost


def save_solution(sol: Solution, cost: float, path) -> None:
    Path(path).write_text(dumps_solution(sol, cost), encoding='utf-8')
    logger.debug(f"Saved solution with cost {cost:.6f} to {path}")


def load_solution(path) -> Tuple[Solution, Optional[float]]:
    text = Path(path).read_text(encoding='utf-8')
    try:
        return loads_solution(text)
    except ValidationError as exc:
        raise ValidationError(f"{path}: {'; '.join(exc.messages)}")
