"""
Dual ideal triangulation of a skeleton complex.

Tetrahedron t is dual to vertex t of Q and its face g to germ g; the edge classes are
the regions and the vertex classes are the components of M-hat minus the interior
of Q's complement (one ball plus one per boundary component).
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from skelet.core.complex import GERMS, WINGS, SkeletonComplex, check_structure, make_edge
from skelet.core.regions import RegionOrbit, compute_regions, region_lookup
from skelet.utils.gf2 import rank_z2, solve_z2

logger = logging.getLogger(__name__)

Corner = Tuple[int, int]
TetEdge = Tuple[int, int, int]


class UnionFind:
    def __init__(self, items: Iterable):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # keep the smaller representative for deterministic class order
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def other_vertices(face: int) -> List[int]:
    return [x for x in GERMS if x != face]


def permutation_parity(values: Sequence[int]) -> int:
    inversions = sum(1 for i in range(len(values)) for j in range(i + 1, len(values)) if values[i] > values[j])
    return inversions % 2


@dataclass(frozen=True)
class FacePairing:
    tet0: int
    face0: int
    tet1: int
    face1: int
    perm: Tuple[int, int, int, int]

    @cached_property
    def orientation_bit(self) -> int:
        """1 iff the standard orientations of the two tetrahedra agree across this face."""
        images = [self.perm[x] for x in other_vertices(self.face0)]
        sign_parity = permutation_parity(images)
        return (self.face0 + self.face1 + sign_parity + 1) % 2

    @property
    def flip(self) -> int:
        return 1 - self.orientation_bit


@dataclass(frozen=True)
class LinkSummary:
    euler: int
    orientable: bool


@dataclass(frozen=True)
class DualTriangulation:
    name: str
    tetrahedra: int
    face_pairings: Tuple[FacePairing, ...]
    edge_classes: Tuple[Tuple[TetEdge, ...], ...]
    vertex_classes: Tuple[Tuple[Corner, ...], ...]
    marked_edges: Tuple[int, ...]

    @cached_property
    def corner_class(self) -> Dict[Corner, int]:
        return {corner: i for i, cls in enumerate(self.vertex_classes) for corner in cls}

    def edge_endpoints(self, edge_class: int) -> Tuple[int, int]:
        tet, a, b = self.edge_classes[edge_class][0]
        ends = sorted((self.corner_class[(tet, a)], self.corner_class[(tet, b)]))
        return ends[0], ends[1]


def pass_tet_edges(complex_: SkeletonComplex, edge_id: int, wing: int) -> List[TetEdge]:
    """The tetrahedron edges dual to the sector a wing occupies at each end of its edge."""
    edge = complex_.edges[edge_id]
    out = []
    for end in (edge.end0, edge.end1):
        a, b = sorted(set(GERMS) - {end.germ, end.wing_map[wing]})
        out.append((end.vertex, a, b))
    return out


def _vertex_classes(tetrahedra: int, pairings: Sequence[FacePairing]) -> Tuple[Tuple[Corner, ...], ...]:
    uf = UnionFind((t, a) for t in range(tetrahedra) for a in GERMS)
    for fp in pairings:
        for a in other_vertices(fp.face0):
            uf.union((fp.tet0, a), (fp.tet1, fp.perm[a]))
    groups: Dict[Corner, List[Corner]] = {}
    for corner in sorted(uf.parent):
        groups.setdefault(uf.find(corner), []).append(corner)
    return tuple(tuple(groups[root]) for root in sorted(groups, key=lambda r: groups[r][0]))


def dualize(complex_: SkeletonComplex, regions: List[RegionOrbit] | None = None) -> DualTriangulation:
    regions = regions if regions is not None else compute_regions(complex_)
    pairings = tuple(
        FacePairing(e.end0.vertex, e.end0.germ, e.end1.vertex, e.end1.germ, e.gluing())
        for e in complex_.edges
    )
    edge_classes = []
    for region in regions:
        seen: List[TetEdge] = []
        for e, w, _ in region.passes:
            for tet_edge in pass_tet_edges(complex_, e, w):
                if tet_edge not in seen:
                    seen.append(tet_edge)
        edge_classes.append(tuple(seen))
    dt = DualTriangulation(
        name=complex_.name,
        tetrahedra=complex_.vertex_count,
        face_pairings=pairings,
        edge_classes=tuple(edge_classes),
        vertex_classes=_vertex_classes(complex_.vertex_count, pairings),
        marked_edges=tuple(complex_.marked_regions),
    )
    logger.debug(f"dualize {complex_.name}: {dt.tetrahedra} tetrahedra, {len(dt.edge_classes)} edge classes, "
                 f"{len(dt.vertex_classes)} vertex classes")
    return dt


def _cyclic_sign(corner: int, x: int, y: int) -> int:
    """+1 iff (x, y) follows the cyclic order of the sorted vertices of the link triangle at `corner`."""
    order = other_vertices(corner)
    i, j = order.index(x), order.index(y)
    return 1 if (i + 1) % 3 == j else -1


def link_vertex_classes(dt: DualTriangulation) -> UnionFind:
    """
    Classes of directed tetrahedron edges (t, a, b): the end at vertex a of the edge {a, b}.

    Each class is one vertex of a vertex link, i.e. one side of one region of Q.
    """
    uf = UnionFind((t, a, b) for t in range(dt.tetrahedra) for a in GERMS for b in GERMS if a != b)
    for fp in dt.face_pairings:
        for a in other_vertices(fp.face0):
            for b in other_vertices(fp.face0):
                if a != b:
                    uf.union((fp.tet0, a, b), (fp.tet1, fp.perm[a], fp.perm[b]))
    return uf


def vertex_links(dt: DualTriangulation) -> List[LinkSummary]:
    """
    Euler characteristic and orientability of each vertex link.

    Link triangles are the corners (t, a); link edges are the face pairings through
    each corner; link vertices are the classes of directed tetrahedron edges (t, a, b).
    """
    classes = dt.corner_class
    n = len(dt.vertex_classes)
    faces = [len(cls) for cls in dt.vertex_classes]
    edges = [0] * n
    uf = link_vertex_classes(dt)
    adjacency: Dict[Corner, List[Tuple[Corner, int]]] = {}

    for fp in dt.face_pairings:
        for a in other_vertices(fp.face0):
            edges[classes[(fp.tet0, a)]] += 1
            x, y = [b for b in other_vertices(fp.face0) if b != a]
            d0 = _cyclic_sign(a, x, y)
            d1 = _cyclic_sign(fp.perm[a], fp.perm[x], fp.perm[y])
            flip = 1 if d0 == d1 else 0
            c0, c1 = (fp.tet0, a), (fp.tet1, fp.perm[a])
            adjacency.setdefault(c0, []).append((c1, flip))
            adjacency.setdefault(c1, []).append((c0, flip))

    link_vertices = [0] * n
    for item in uf.parent:
        if uf.find(item) == item:
            link_vertices[classes[(item[0], item[1])]] += 1

    orientable = [True] * n
    sides: Dict[Corner, int] = {}
    for i, cls in enumerate(dt.vertex_classes):
        start = cls[0]
        sides[start] = 0
        stack = [start]
        while stack:
            current = stack.pop()
            for other, flip in adjacency.get(current, []):
                want = sides[current] ^ flip
                if other not in sides:
                    sides[other] = want
                    stack.append(other)
                elif sides[other] != want:
                    orientable[i] = False
    return [LinkSummary(link_vertices[i] - edges[i] + faces[i], orientable[i]) for i in range(n)]


def fundamental_walks(dt: DualTriangulation) -> List[List[Tuple[int, int]]]:
    """One closed walk per face pairing outside a spanning tree of the dual graph, based at tetrahedron 0."""
    if dt.tetrahedra == 0:
        return []
    parent: Dict[int, Tuple[int, int] | None] = {0: None}
    tree = set()
    queue = deque([0])
    while queue:
        t = queue.popleft()
        for i, fp in enumerate(dt.face_pairings):
            for here, there, direction in ((fp.tet0, fp.tet1, 0), (fp.tet1, fp.tet0, 1)):
                if here == t and there not in parent:
                    parent[there] = (i, direction)
                    tree.add(i)
                    queue.append(there)

    def path_from_root(t: int) -> List[Tuple[int, int]]:
        steps = []
        while parent[t] is not None:
            i, direction = parent[t]
            steps.append((i, direction))
            fp = dt.face_pairings[i]
            t = fp.tet0 if direction == 0 else fp.tet1
        return steps[::-1]

    walks = []
    for i, fp in enumerate(dt.face_pairings):
        if i in tree:
            continue
        back = [(j, 1 - d) for j, d in reversed(path_from_root(fp.tet1))]
        walks.append(path_from_root(fp.tet0) + [(i, 0)] + back)
    return walks


def orientation_character(dt: DualTriangulation, loop: Sequence[Tuple[int, int]]) -> int:
    """
    Orientation character of a closed walk through the tetrahedra.

    Each step is (face pairing index, direction); direction 0 crosses from tet0 to tet1.
    Returns 0 iff an orientation carried around the walk comes back unchanged.

    Raises:
        ValueError: if consecutive steps do not share a tetrahedron or the walk does not close.
    """
    if not loop:
        return 0
    bit = 0
    start = position = None
    for index, (pairing, direction) in enumerate(loop):
        if not 0 <= pairing < len(dt.face_pairings) or direction not in (0, 1):
            raise ValueError(f"step {index} ({pairing}, {direction}) is not a face pairing crossing")
        fp = dt.face_pairings[pairing]
        source, target = (fp.tet0, fp.tet1) if direction == 0 else (fp.tet1, fp.tet0)
        if start is None:
            start = source
        elif position != source:
            raise ValueError(f"step {index} leaves tetrahedron {source}, walk is at {position}")
        bit ^= fp.flip
        position = target
    if position != start:
        raise ValueError(f"walk ends at tetrahedron {position}, started at {start}")
    return bit


def is_orientable(dt: DualTriangulation) -> bool:
    return all(orientation_character(dt, walk) == 0 for walk in fundamental_walks(dt))


@dataclass(frozen=True)
class OctopusSignature:
    tentacle_flags: Tuple[int, ...]
    total_flag: int
    h1_rank: int

    def __str__(self) -> str:
        flags = " ".join(str(f) for f in self.tentacle_flags) or "-"
        return f"tentacles {flags} total {self.total_flag} h1 {self.h1_rank}"


def boundary_matrix(complex_: SkeletonComplex, regions: List[RegionOrbit]) -> np.ndarray:
    """Z/2 boundary of the dual 2-cells: rows are edge classes, columns are edges of Q."""
    lookup = region_lookup(regions)
    matrix = np.zeros((len(regions), complex_.edge_count), dtype=np.uint8)
    for edge in complex_.edges:
        for w in WINGS:
            matrix[lookup[(edge.id, w)][0], edge.id] ^= 1
    return matrix


def h1_rank(complex_: SkeletonComplex, regions: List[RegionOrbit] | None = None) -> int:
    """Dimension of H_1(M-hat; Z/2) read off the dual triangulation."""
    regions = regions if regions is not None else compute_regions(complex_)
    vertex_classes = len(dualize(complex_, regions).vertex_classes)
    return len(regions) - (vertex_classes - 1) - rank_z2(boundary_matrix(complex_, regions))


def octopus_signature(complex_: SkeletonComplex, regions: List[RegionOrbit] | None = None) -> OctopusSignature:
    """
    Z/2 shadow of the octopus: whether each tentacle, and the sum of all of them, is a
    boundary in the chain complex of the dual triangulation relative to its vertices,
    together with the Z/2 rank of H_1(M-hat).

    A tentacle joins two different vertex classes, so neither it nor the sum is ever a
    Z/2 boundary and the flags are 0 on every valid skeleton; h1 carries the rest.
    """
    regions = regions if regions is not None else compute_regions(complex_)
    rank = h1_rank(complex_, regions)
    if not complex_.marked_regions:
        return OctopusSignature((), 0, rank)
    matrix = boundary_matrix(complex_, regions)
    flags = []
    total = np.zeros(len(regions), dtype=np.uint8)
    for r in complex_.marked_regions:
        alpha = np.zeros(len(regions), dtype=np.uint8)
        alpha[r] = 1
        total ^= alpha
        flags.append(int(solve_z2(matrix, alpha)[0]))
    return OctopusSignature(tuple(flags), int(solve_z2(matrix, total)[0]), rank)


def codualize(dt: DualTriangulation) -> SkeletonComplex:
    """
    Rebuilds the skeleton complex dual to a triangulation.

    Wing w at end0 of a rebuilt edge is attached to the w-th smallest other germ; end1
    follows through the face pairing.

    Raises:
        StructureError: if some face is unpaired or paired twice.
    """
    edges = []
    for i, fp in enumerate(dt.face_pairings):
        m0 = other_vertices(fp.face0)
        m1 = [fp.perm[x] for x in m0]
        edges.append(make_edge(i, fp.tet0, fp.face0, m0, fp.tet1, fp.face1, m1))
    complex_ = SkeletonComplex(dt.name, dt.tetrahedra, tuple(edges), ())
    check_structure(complex_)
    if not dt.marked_edges:
        return complex_
    lookup = region_lookup(compute_regions(complex_))
    marked = []
    for edge_class in dt.marked_edges:
        tet, a, b = dt.edge_classes[edge_class][0]
        c, d = [x for x in GERMS if x not in (a, b)]
        edge_id, k = complex_.edge_at(tet, c)
        wing = complex_.edges[edge_id].end(k).wing_to(d)
        marked.append(lookup[(edge_id, wing)][0])
    return complex_.with_marked(marked)


def write_tri(dt: DualTriangulation) -> str:
    lines = ["tri v1", f"name {dt.name}", f"tetrahedra {dt.tetrahedra}"]
    for t in range(dt.tetrahedra):
        lines.append(f"tet {t}")
    for fp in dt.face_pairings:
        images = " ".join(str(fp.perm[x]) for x in other_vertices(fp.face0))
        lines.append(f"glue {fp.tet0} {fp.face0} {fp.tet1} {fp.face1} {images}")
    for edge_class in dt.marked_edges:
        lines.append(f"tentacle {edge_class}")
    return "\n".join(lines) + "\n"
