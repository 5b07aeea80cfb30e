"""
Neighborhood and cut-set queries over an Instance
"""

from typing import List, NamedTuple, Tuple

from django.core.exceptions import ValidationError

from .domain import Instance, TargetSet


class CutSets(NamedTuple):
    delta_edges: List[Tuple[int, int]]
    gamma_edges: List[Tuple[int, int]]
    delta_in_arcs: List[Tuple[int, int]]
    delta_out_arcs: List[Tuple[int, int]]


def _check_index(inst: Instance, i: int):
    if not 0 <= int(i) < inst.n:
        raise ValidationError(f"target index {i} out of range 0..{inst.n - 1}")


def neighborhood(inst: Instance, i: int) -> TargetSet:
    """
    R_i: every target within communication range of i (i included)

    Raises:
        ValidationError: if i is not a target index
    """
    _check_index(inst, i)
    row = inst.in_range[int(i)]
    return TargetSet.of(j for j in range(inst.n) if row[j])


def neighborhoods(inst: Instance) -> List[TargetSet]:
    return [neighborhood(inst, i) for i in range(inst.n)]


def cut_sets(inst: Instance, S: TargetSet) -> CutSets:
    """
    Cut sets of S

    delta_edges    edges with exactly one end in S
    gamma_edges    edges with both ends in S
    delta_in_arcs  arcs [u, v] entering S (u outside, v inside)
    delta_out_arcs arcs [u, v] leaving S (u inside, v outside)
    """
    for i in S:
        _check_index(inst, i)

    delta_edges, gamma_edges = [], []
    for i, j in inst.edges():
        inside = (i in S) + (j in S)
        if inside == 1:
            delta_edges.append((i, j))
        elif inside == 2:
            gamma_edges.append((i, j))

    delta_in, delta_out = [], []
    for u, v in inst.arcs():
        if u not in S and v in S:
            delta_in.append((u, v))
        elif u in S and v not in S:
            delta_out.append((u, v))

    return CutSets(delta_edges, gamma_edges, delta_in, delta_out)
