"""
Solution type shared by every solver

gv_ring      GV stops in visit order, starting at the base 0. [0] is the
             base-only ring, [0, s] the out-and-back ring.
subtours     stop -> UAV-visited targets in flight order; a stop without an
             entry (or with an empty list) keeps the UAV aboard.
assignment   target -> stop it is served from (stops map to themselves).

detached_gv_cycles / detached_uav_cycles only come out of decoding integer
LP points; a feasible solution has neither.
"""

from dataclasses import dataclass, field
from typing import Dict, List


@dataclass
class Solution:
    gv_ring: List[int]
    subtours: Dict[int, List[int]] = field(default_factory=dict)
    assignment: Dict[int, int] = field(default_factory=dict)
    detached_gv_cycles: List[List[int]] = field(default_factory=list)
    detached_uav_cycles: List[List[int]] = field(default_factory=list)

    @classmethod
    def from_routes(cls, gv_ring, subtours=None) -> 'Solution':
        """Build a solution and derive the assignment from the routes."""
        ring = [int(s) for s in gv_ring]
        tours = {int(s): [int(t) for t in members] for s, members in (subtours or {}).items() if members}
        assignment = {s: s for s in ring}
        for root, members in tours.items():
            for t in members:
                assignment[t] = root
        return cls(gv_ring=ring, subtours=tours, assignment=assignment)

    @property
    def stops(self) -> List[int]:
        return list(self.gv_ring)

    def uav_arcs(self):
        """Directed UAV arcs of all deployed sub-tours (self loops excluded)."""
        arcs = []
        for root in sorted(self.subtours):
            cycle = [root] + list(self.subtours[root])
            if len(cycle) > 1:
                arcs.extend((cycle[k], cycle[(k + 1) % len(cycle)]) for k in range(len(cycle)))
        for cycle in self.detached_uav_cycles:
            if len(cycle) > 1:
                arcs.extend((cycle[k], cycle[(k + 1) % len(cycle)]) for k in range(len(cycle)))
        return arcs

    def gv_edge_multiset(self):
        """GV edges (i, j), i < j, with multiplicity; the out-and-back ring uses its edge twice."""
        edges = {}
        for cycle in [self.gv_ring] + list(self.detached_gv_cycles):
            if len(cycle) < 2:
                continue
            if len(cycle) == 2:
                key = tuple(sorted(cycle))
                edges[key] = edges.get(key, 0) + 2
                continue
            for k in range(len(cycle)):
                key = tuple(sorted((cycle[k], cycle[(k + 1) % len(cycle)])))
                edges[key] = edges.get(key, 0) + 1
        return edges

    def canonical(self) -> 'Solution':
        """Copy with sorted dict keys, used for stable output."""
        return Solution(
            gv_ring=list(self.gv_ring),
            subtours={s: list(self.subtours[s]) for s in sorted(self.subtours) if self.subtours[s]},
            assignment={t: self.assignment[t] for t in sorted(self.assignment)},
            detached_gv_cycles=[list(c) for c in self.detached_gv_cycles],
            detached_uav_cycles=[list(c) for c in self.detached_uav_cycles],
        )
