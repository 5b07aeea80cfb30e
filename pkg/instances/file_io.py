"""
Instance file reader and writer

Format (UTF-8 text):

    CAGVRP 1
    N <n>
    R <range>
    ALPHA <alpha>
    CLASS <A|B|C|custom>
    SEED <seed>                 optional
    <index> <x> <y>             n lines
    CMAT                        optional, n rows of n values
    DMAT                        optional, n rows of n values

Floats are written with repr() so save -> load -> save is byte-identical.
"""

import logging
from pathlib import Path
from typing import List, Optional

import numpy as np
from django.core.exceptions import ValidationError

from .domain import Instance
from .validators import build_instance

logger = logging.getLogger(__name__)

MAGIC = 'CAGVRP'
FORMAT_VERSION = '1'
HEADER_FIELDS = ('N', 'R', 'ALPHA', 'CLASS')


def _fmt(value: float) -> str:
    return repr(float(value))


def dumps_instance(inst: Instance) -> str:
    lines = [
        f"{MAGIC} {FORMAT_VERSION}",
        f"N {inst.n}",
        f"R {_fmt(inst.R)}",
        f"ALPHA {_fmt(inst.alpha)}",
        f"CLASS {inst.class_tag}",
    ]
    if inst.seed is not None:
        lines.append(f"SEED {inst.seed}")
    for i, (x, y) in enumerate(inst.targets):
        lines.append(f"{i} {_fmt(x)} {_fmt(y)}")
    for flag, name, matrix in ((inst.explicit_c, 'CMAT', inst.c), (inst.explicit_d, 'DMAT', inst.d)):
        if flag:
            lines.append(name)
            lines.extend(' '.join(_fmt(v) for v in row) for row in matrix)
    return '\n'.join(lines) + '\n'


def _parse_float(token: str, lineno: int, field: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise ValidationError(f"line {lineno}: field {field} expects a number, got '{token}'")


def _read_matrix(lines: List[str], start: int, n: int, name: str) -> np.ndarray:
    rows = []
    for offset in range(n):
        lineno = start + offset + 1
        if start + offset >= len(lines):
            raise ValidationError(f"line {lineno}: {name} ends after {offset} of {n} rows")
        tokens = lines[start + offset].split()
        if len(tokens) != n:
            raise ValidationError(f"line {lineno}: {name} row {offset} has {len(tokens)} values, expected {n}")
        rows.append([_parse_float(t, lineno, f"{name}[{offset}]") for t in tokens])
    return np.array(rows, dtype=float).reshape(n, n)


def loads_instance(text: str) -> Instance:
    """
    Parse and validate an instance

    Raises:
        ValidationError: malformed content or invariant violation, with
        the line number or field in the message
    """
    lines = [line.rstrip('\r') for line in text.split('\n')]
    while lines and not lines[-1].strip():
        lines.pop()

    if not lines or lines[0].split() != [MAGIC, FORMAT_VERSION]:
        raise ValidationError(f"line 1: expected '{MAGIC} {FORMAT_VERSION}' header")

    header = {}
    pos = 1
    for field in HEADER_FIELDS:
        if pos >= len(lines):
            raise ValidationError(f"line {pos + 1}: missing {field} header")
        tokens = lines[pos].split()
        if len(tokens) != 2 or tokens[0] != field:
            raise ValidationError(f"line {pos + 1}: expected '{field} <value>'")
        header[field] = tokens[1]
        pos += 1

    seed: Optional[int] = None
    if pos < len(lines) and lines[pos].startswith('SEED'):
        tokens = lines[pos].split()
        try:
            seed = int(tokens[1])
        except (IndexError, ValueError):
            raise ValidationError(f"line {pos + 1}: field SEED expects an integer")
        pos += 1

    try:
        n = int(header['N'])
    except ValueError:
        raise ValidationError(f"line 2: field N expects an integer, got '{header['N']}'")
    if n < 1:
        raise ValidationError(f"line 2: field N must be at least 1, got {n}")
    R = _parse_float(header['R'], 3, 'R')
    if R <= 0:
        raise ValidationError(f"line 3: field R must be positive, got {header['R']}")
    alpha = _parse_float(header['ALPHA'], 4, 'ALPHA')

    targets = np.zeros((n, 2))
    for i in range(n):
        lineno = pos + 1
        if pos >= len(lines):
            raise ValidationError(f"line {lineno}: expected target {i}, file ended")
        tokens = lines[pos].split()
        if len(tokens) != 3 or tokens[0] != str(i):
            raise ValidationError(f"line {lineno}: expected '{i} <x> <y>'")
        targets[i] = (_parse_float(tokens[1], lineno, 'x'), _parse_float(tokens[2], lineno, 'y'))
        pos += 1

    matrices = {}
    while pos < len(lines):
        name = lines[pos].strip()
        if name not in ('CMAT', 'DMAT') or name in matrices:
            raise ValidationError(f"line {pos + 1}: unexpected content '{lines[pos]}'")
        matrices[name] = _read_matrix(lines, pos + 1, n, name)
        pos += n + 1

    return build_instance(
        targets, R=R, alpha=alpha, seed=seed, class_tag=header['CLASS'],
        c=matrices.get('CMAT'), d=matrices.get('DMAT'),
    )


def save_instance(inst: Instance, path) -> None:
    Path(path).write_text(dumps_instance(inst), encoding='utf-8')
    logger.debug(f"Saved {inst!r} to {path}")


def load_instance(path) -> Instance:
    """
    Load an instance file

    Raises:
        ValidationError: message prefixed with the file path
    """
    text = Path(path).read_text(encoding='utf-8')
    try:
        return loads_instance(text)
    except ValidationError as exc:
        raise ValidationError(f"{path}: {'; '.join(exc.messages)}")
