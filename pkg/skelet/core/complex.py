"""
Encoding of a closed standard polyhedron Q = P ∪ ∂M.

Each vertex of Q has four germs 0..3 (the four edge ends meeting there); the six
sectors at a vertex are the unordered germ pairs. An edge carries three wings 0..2,
and each end records which germ the wing is attached to at that vertex.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterator, List, Sequence, Tuple

from skelet.core.errors import StructureError

GERMS = (0, 1, 2, 3)
WINGS = (0, 1, 2)


@dataclass(frozen=True)
class EdgeEnd:
    vertex: int
    germ: int
    wing_map: Tuple[int, int, int]

    def wing_to(self, germ: int) -> int:
        """Wing label attached to the sector {self.germ, germ}."""
        return self.wing_map.index(germ)


@dataclass(frozen=True)
class EdgeRecord:
    id: int
    end0: EdgeEnd
    end1: EdgeEnd

    def end(self, k: int) -> EdgeEnd:
        return self.end0 if k == 0 else self.end1

    @property
    def is_loop(self) -> bool:
        return self.end0.vertex == self.end1.vertex

    def gluing(self) -> Tuple[int, ...]:
        """Vertex map of the dual face pairing: germ at end0 -> germ at end1."""
        perm = [0, 0, 0, 0]
        perm[self.end0.germ] = self.end1.germ
        for w in WINGS:
            perm[self.end0.wing_map[w]] = self.end1.wing_map[w]
        return tuple(perm)


@dataclass(frozen=True)
class SkeletonComplex:
    name: str
    vertex_count: int
    edges: Tuple[EdgeRecord, ...]
    marked_regions: Tuple[int, ...] = field(default=())

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def n_marked(self) -> int:
        return len(self.marked_regions)

    @cached_property
    def germ_table(self) -> Dict[Tuple[int, int], Tuple[int, int]]:
        """(vertex, germ) -> (edge id, end index)."""
        table = {}
        for edge in self.edges:
            for k in (0, 1):
                end = edge.end(k)
                table[(end.vertex, end.germ)] = (edge.id, k)
        return table

    def edge_at(self, vertex: int, germ: int) -> Tuple[int, int]:
        return self.germ_table[(vertex, germ)]

    def ends(self) -> Iterator[Tuple[EdgeRecord, int, EdgeEnd]]:
        for edge in self.edges:
            yield edge, 0, edge.end0
            yield edge, 1, edge.end1

    def with_marked(self, marked: Sequence[int], name: str | None = None) -> "SkeletonComplex":
        return SkeletonComplex(name or self.name, self.vertex_count, self.edges, tuple(marked))

    def renamed(self, name: str) -> "SkeletonComplex":
        return SkeletonComplex(name, self.vertex_count, self.edges, self.marked_regions)


def make_edge(edge_id: int, v0: int, g0: int, m0: Sequence[int], v1: int, g1: int, m1: Sequence[int]) -> EdgeRecord:
    return EdgeRecord(edge_id, EdgeEnd(v0, g0, tuple(m0)), EdgeEnd(v1, g1, tuple(m1)))


def check_structure(complex_: SkeletonComplex, region_count: int | None = None) -> None:
    """
    Checks the structural invariants of the encoding (not the skeleton axioms).

    Raises StructureError on the first violation. `region_count`, when given, bounds
    the marked region identifiers.
    """
    seen: Dict[Tuple[int, int], int] = {}
    for index, edge in enumerate(complex_.edges):
        if edge.id != index:
            raise StructureError(f"edge ids must be consecutive from 0, found {edge.id} at position {index}")
        for end in (edge.end0, edge.end1):
            if not 0 <= end.vertex < complex_.vertex_count:
                raise StructureError(f"edge {edge.id}: vertex {end.vertex} out of range")
            if end.germ not in GERMS:
                raise StructureError(f"edge {edge.id}: germ {end.germ} not in 0..3")
            if sorted(end.wing_map) != sorted(set(GERMS) - {end.germ}) or len(end.wing_map) != 3:
                raise StructureError(f"edge {edge.id}: wing_map {end.wing_map} is not a bijection onto the other germs")
            key = (end.vertex, end.germ)
            if key in seen:
                raise StructureError(f"duplicate assignment of (vertex {key[0]}, germ {key[1]}) by edges {seen[key]} and {edge.id}")
            seen[key] = edge.id
    missing = [(v, g) for v in range(complex_.vertex_count) for g in GERMS if (v, g) not in seen]
    if missing:
        v, g = missing[0]
        raise StructureError(f"free germ: (vertex {v}, germ {g}) is not referenced by any edge")
    if len(set(complex_.marked_regions)) != len(complex_.marked_regions):
        raise StructureError(f"marked regions are not pairwise distinct: {list(complex_.marked_regions)}")
    if region_count is not None:
        for r in complex_.marked_regions:
            if not 0 <= r < region_count:
                raise StructureError(f"marked region {r} out of range (complex has {region_count} regions)")


def relabel(complex_: SkeletonComplex, vertex_perm: Sequence[int], edge_perm: Sequence[int],
            germ_frames: Sequence[Sequence[int]], wing_perms: Sequence[Sequence[int]] | None = None,
            flips: Sequence[bool] | None = None) -> SkeletonComplex:
    """
    Returns an isomorphic copy with vertices, edges, germs and wings renamed.

    vertex_perm[v] is the new index of vertex v, edge_perm[e] the new id of edge e,
    germ_frames[v][g] the new germ label of germ g at vertex v, wing_perms[e][w] the
    new label of wing w on edge e, and flips[e] swaps the two ends of edge e.
    Marked regions are re-identified through a pass that survives the renaming.
    """
    from skelet.core.regions import compute_regions, region_lookup

    n_edges = complex_.edge_count
    wing_perms = wing_perms or [WINGS] * n_edges
    flips = flips or [False] * n_edges

    new_edges: List[EdgeRecord | None] = [None] * n_edges
    for edge in complex_.edges:
        ends = []
        for end in (edge.end0, edge.end1):
            frame = germ_frames[end.vertex]
            wing_map = [0, 0, 0]
            for w in WINGS:
                wing_map[wing_perms[edge.id][w]] = frame[end.wing_map[w]]
            ends.append(EdgeEnd(vertex_perm[end.vertex], frame[end.germ], tuple(wing_map)))
        if flips[edge.id]:
            ends.reverse()
        new_id = edge_perm[edge.id]
        new_edges[new_id] = EdgeRecord(new_id, ends[0], ends[1])
    result = SkeletonComplex(complex_.name, complex_.vertex_count, tuple(new_edges), ())

    if not complex_.marked_regions:
        return result
    old_regions = compute_regions(complex_)
    new_lookup = region_lookup(compute_regions(result))
    marked = []
    for r in complex_.marked_regions:
        e, w, _ = old_regions[r].passes[0]
        marked.append(new_lookup[(edge_perm[e], wing_perms[e][w])][0])
    return result.with_marked(marked)
