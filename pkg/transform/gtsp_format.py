"""
GTSP text format for external solvers

    GTSP 1
    VERTICES <count>
    <id> <g> <a>                one line per vertex
    SETS <count>
    <key> <id> <id> ...         one line per set
    EDGES <count>
    <u id> <v id> <cost> <rule>

Vertex ids are positions in the vertex list. Costs use repr() so the
export reloads to identical floats.
"""

import logging
from pathlib import Path
from typing import Dict, List, Tuple

from django.core.exceptions import ValidationError

from .configurations import EDGE_RULES, Configuration, TransformedGraph, assemble_graph

logger = logging.getLogger(__name__)

MAGIC = 'GTSP'
FORMAT_VERSION = '1'


def dumps_gtsp(graph: TransformedGraph) -> str:
    ids = {v: k for k, v in enumerate(graph.vertices)}
    lines = [f"{MAGIC} {FORMAT_VERSION}", f"VERTICES {len(graph.vertices)}"]
    lines.extend(f"{ids[v]} {v.g} {v.a}" for v in graph.vertices)
    lines.append(f"SETS {len(graph.partitions)}")
    for key, members in graph.partitions.items():
        lines.append(' '.join([str(key)] + [str(ids[v]) for v in members]))
    lines.append(f"EDGES {len(graph.edges)}")
    for (u, v), (cost, rule) in graph.edges.items():
        lines.append(f"{ids[u]} {ids[v]} {float(cost)!r} {rule}")
    return '\n'.join(lines) + '\n'


def _section(lines: List[str], pos: int, name: str) -> int:
    if pos >= len(lines):
        raise ValidationError(f"line {pos + 1}: missing {name} section")
    tokens = lines[pos].split()
    if len(tokens) != 2 or tokens[0] != name or not tokens[1].isdigit():
        raise ValidationError(f"line {pos + 1}: expected '{name} <count>'")
    return int(tokens[1])


def _ints(tokens: List[str], lineno: int) -> List[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ValidationError(f"line {lineno}: expected integers, got '{' '.join(tokens)}'")


def loads_gtsp(text: str) -> TransformedGraph:
    """
    Parse a GTSP export back into a graph

    Raises:
        ValidationError: malformed content, with the line number
    """
    lines = [line.strip() for line in text.split('\n')]
    while lines and not lines[-1]:
        lines.pop()
    if not lines or lines[0].split() != [MAGIC, FORMAT_VERSION]:
        raise ValidationError(f"line 1: expected '{MAGIC} {FORMAT_VERSION}' header")

    pos = 1
    count = _section(lines, pos, 'VERTICES')
    pos += 1
    vertices: List[Configuration] = []
    for k in range(count):
        if pos >= len(lines):
            raise ValidationError(f"line {pos + 1}: expected vertex {k}, file ended")
        values = _ints(lines[pos].split(), pos + 1)
        if len(values) != 3 or values[0] != k:
            raise ValidationError(f"line {pos + 1}: expected '{k} <g> <a>'")
        vertices.append(Configuration(values[1], values[2]))
        pos += 1

    count = _section(lines, pos, 'SETS')
    pos += 1
    declared: Dict[int, List[int]] = {}
    for _ in range(count):
        if pos >= len(lines):
            raise ValidationError(f"line {pos + 1}: expected a set line, file ended")
        values = _ints(lines[pos].split(), pos + 1)
        if len(values) < 2:
            raise ValidationError(f"line {pos + 1}: a set needs a key and at least one vertex")
        declared[values[0]] = values[1:]
        pos += 1

    count = _section(lines, pos, 'EDGES')
    pos += 1
    edges: Dict[Tuple[Configuration, Configuration], Tuple[float, str]] = {}
    for _ in range(count):
        if pos >= len(lines):
            raise ValidationError(f"line {pos + 1}: expected an edge line, file ended")
        tokens = lines[pos].split()
        if len(tokens) != 4 or tokens[3] not in EDGE_RULES:
            raise ValidationError(f"line {pos + 1}: expected '<u> <v> <cost> <rule>'")
        u, v = _ints(tokens[:2], pos + 1)
        if not (0 <= u < len(vertices) and 0 <= v < len(vertices)):
            raise ValidationError(f"line {pos + 1}: vertex id out of range")
        try:
            cost = float(tokens[2])
        except ValueError:
            raise ValidationError(f"line {pos + 1}: cost expects a number, got '{tokens[2]}'")
        edges[(vertices[u], vertices[v])] = (cost, tokens[3])
        pos += 1
    if pos < len(lines):
        raise ValidationError(f"line {pos + 1}: unexpected content '{lines[pos]}'")

    graph = assemble_graph(vertices, vertices, edges)
    ids = {v: k for k, v in enumerate(vertices)}
    rebuilt = {key: sorted(ids[v] for v in members) for key, members in graph.partitions.items()}
    if rebuilt != {key: sorted(members) for key, members in declared.items()}:
        raise ValidationError("SETS section does not match the UAV positions of the vertices")
    return graph


def save_gtsp(graph: TransformedGraph, path) -> None:
    Path(path).write_text(dumps_gtsp(graph), encoding='utf-8')
    logger.debug(f"Saved GTSP graph ({len(graph.vertices)} vertices) to {path}")


def load_gtsp(path) -> TransformedGraph:
    try:
        return loads_gtsp(Path(path).read_text(encoding='utf-8'))
    except ValidationError as exc:
        raise ValidationError(f"{path}: {'; '.join(exc.messages)}")
