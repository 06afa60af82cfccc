"""
Region recovery from the orbit dynamics on (edge, wing, direction) passes.

Direction 0 (`+`) traverses an edge from end0 to end1, direction 1 (`-`) the other way.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Tuple

from skelet.core.complex import WINGS, SkeletonComplex
from skelet.core.errors import RegionError

logger = logging.getLogger(__name__)

FORWARD = 0
BACKWARD = 1

Pass = Tuple[int, int, int]


def reverse_pass(p: Pass) -> Pass:
    return (p[0], p[1], 1 - p[2])


@dataclass(frozen=True)
class RegionOrbit:
    id: int
    passes: Tuple[Pass, ...]

    @property
    def length(self) -> int:
        return len(self.passes)

    def edges(self) -> List[int]:
        return [e for e, _, _ in self.passes]


def next_pass(complex_: SkeletonComplex, p: Pass) -> Pass:
    """Successor of a pass around the boundary of its region."""
    edge_id, wing, direction = p
    edge = complex_.edges[edge_id]
    arrival = edge.end1 if direction == FORWARD else edge.end0
    turn_germ = arrival.wing_map[wing]
    next_id, next_k = complex_.edge_at(arrival.vertex, turn_germ)
    next_end = complex_.edges[next_id].end(next_k)
    next_wing = next_end.wing_to(arrival.germ)
    return (next_id, next_wing, FORWARD if next_k == 0 else BACKWARD)


def trace_orbit(complex_: SkeletonComplex, start: Pass) -> List[Pass]:
    orbit = [start]
    current = next_pass(complex_, start)
    while current != start:
        orbit.append(current)
        current = next_pass(complex_, current)
    return orbit


def compute_regions(complex_: SkeletonComplex) -> List[RegionOrbit]:
    """
    Enumerates the regions of Q with canonical identifiers.

    Passes are scanned in lexicographic order (edge id, wing, + before -). The first
    undiscovered pass opens a new orbit; its reverse orbit is the same region and is
    marked as discovered. Raises RegionError if an orbit contains a pass and its reverse.
    """
    seen = set()
    regions: List[RegionOrbit] = []
    for edge in complex_.edges:
        for w in WINGS:
            for d in (FORWARD, BACKWARD):
                start = (edge.id, w, d)
                if start in seen:
                    continue
                orbit = trace_orbit(complex_, start)
                members = set(orbit)
                for p in orbit:
                    if reverse_pass(p) in members:
                        raise RegionError(f"self-reversed orbit through edge {p[0]} wing {p[1]}")
                seen.update(members)
                seen.update(reverse_pass(p) for p in orbit)
                regions.append(RegionOrbit(len(regions), tuple(orbit)))
    logger.debug(f"{complex_.name}: {len(regions)} regions")
    return regions


def region_lookup(regions: List[RegionOrbit]) -> Dict[Tuple[int, int], Tuple[int, int]]:
    """(edge, wing) -> (region id, position in the stored orbit) for every pass in the stored direction."""
    lookup = {}
    for region in regions:
        for i, (e, w, _) in enumerate(region.passes):
            lookup[(e, w)] = (region.id, i)
    return lookup


def find_pass(regions: List[RegionOrbit], p: Pass) -> Tuple[int, int, bool]:
    """Region id, position and whether `p` runs against the stored orbit."""
    for region in regions:
        if p in region.passes:
            return region.id, region.passes.index(p), False
        rp = reverse_pass(p)
        if rp in region.passes:
            return region.id, region.passes.index(rp), True
    raise KeyError(p)
