"""
Mutable face-pairing table used to carry out local moves in the dual.

Every move is written as: remove some tetrahedra, append new ones built from a fixed
template, and re-glue the faces that crossed the boundary of the modified part.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from skelet.core.complex import GERMS, SkeletonComplex, make_edge
from skelet.core.regions import compute_regions, region_lookup

logger = logging.getLogger(__name__)

Perm = Tuple[int, int, int, int]
Face = Tuple[int, int]
IDENTITY: Perm = (0, 1, 2, 3)
# edges of a tetrahedron, in lexicographic order
EDGE_PAIRS = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def compose(a: Sequence[int], b: Sequence[int]) -> Perm:
    """a after b."""
    return tuple(a[b[x]] for x in range(4))


def inverse(p: Sequence[int]) -> Perm:
    out = [0, 0, 0, 0]
    for x in range(4):
        out[p[x]] = x
    return tuple(out)


def perm_from_pairs(pairs: Dict[int, int]) -> Perm:
    return tuple(pairs[x] for x in range(4))


@dataclass(frozen=True)
class WalkStep:
    """One tetrahedron around an edge class: the edge is (s, t); the walk enters through `entry` and leaves through `exit`."""
    tet: int
    s: int
    t: int
    entry: int
    exit: int


class Triangulation:
    def __init__(self, name: str, size: int, marked: Sequence[Tuple[int, int, int]] = ()):
        self.name = name
        self.size = size
        self.adj: Dict[Face, Tuple[int, int, Perm]] = {}
        self.marked: List[Tuple[int, int, int]] = list(marked)

    @classmethod
    def from_complex(cls, complex_: SkeletonComplex) -> "Triangulation":
        marked = []
        if complex_.marked_regions:
            regions = compute_regions(complex_)
            for r in complex_.marked_regions:
                e, w, _ = regions[r].passes[0]
                end = complex_.edges[e].end0
                a, b = sorted(set(GERMS) - {end.germ, end.wing_map[w]})
                marked.append((end.vertex, a, b))
        tri = cls(complex_.name, complex_.vertex_count, marked)
        for edge in complex_.edges:
            tri.glue(edge.end0.vertex, edge.end0.germ, edge.end1.vertex, edge.end1.germ, edge.gluing())
        return tri

    def glue(self, t0: int, f0: int, t1: int, f1: int, perm: Sequence[int]) -> None:
        perm = tuple(perm)
        if perm[f0] != f1:
            raise ValueError(f"gluing of ({t0}, {f0}) to ({t1}, {f1}) does not map face to face: {perm}")
        self.adj[(t0, f0)] = (t1, f1, perm)
        self.adj[(t1, f1)] = (t0, f0, inverse(perm))

    def unglue(self, t: int, f: int) -> Tuple[int, int, Perm]:
        t1, f1, perm = self.adj.pop((t, f))
        self.adj.pop((t1, f1), None)
        return t1, f1, perm

    def partner(self, t: int, f: int) -> Tuple[int, int, Perm]:
        return self.adj[(t, f)]

    def add_tetrahedra(self, count: int) -> List[int]:
        new = list(range(self.size, self.size + count))
        self.size += count
        return new

    def remove_tetrahedra(self, removed: Iterable[int]) -> List[Optional[int]]:
        """Deletes tetrahedra (all their faces must be unglued) and compacts indices; returns old -> new."""
        removed = set(removed)
        for t in removed:
            for f in GERMS:
                if (t, f) in self.adj:
                    raise ValueError(f"tetrahedron {t} still glued along face {f}")
            if any(m[0] == t for m in self.marked):
                raise ValueError(f"tetrahedron {t} carries a marked edge")
        mapping: List[Optional[int]] = []
        next_index = 0
        for t in range(self.size):
            if t in removed:
                mapping.append(None)
            else:
                mapping.append(next_index)
                next_index += 1
        self.adj = {(mapping[t], f): (mapping[t1], f1, p) for (t, f), (t1, f1, p) in self.adj.items()}
        self.marked = [(mapping[t], a, b) for t, a, b in self.marked]
        self.size = next_index
        return mapping

    def walk_edge(self, tet: int, s: int, t: int, entry: int) -> List[WalkStep]:
        """Tetrahedra around the edge (s, t) of `tet`, starting with the one entered through face `entry`."""
        exit_ = next(x for x in GERMS if x not in (s, t, entry))
        start = WalkStep(tet, s, t, entry, exit_)
        steps = [start]
        current = start
        while True:
            t1, f1, perm = self.adj[(current.tet, current.exit)]
            current = WalkStep(t1, perm[current.s], perm[current.t], f1, perm[current.entry])
            if current == start:
                return steps
            if len(steps) > 4 * self.size:
                raise ValueError("edge walk does not close")
            steps.append(current)

    def replace(self, removed: Sequence[int], consumed: Iterable[Face], new_count: int,
                internal: Sequence[Tuple[int, int, int, int, Perm]],
                relocation: Dict[Face, Tuple[int, int, Perm]]) -> List[Optional[int]]:
        """
        Template rewrite.

        `internal` gluings use template indices 0..new_count-1 for the new tetrahedra.
        `relocation` sends every non-consumed face of a removed tetrahedron to
        (template tet, template face, old-vertex -> template-vertex map).
        """
        new = self.add_tetrahedra(new_count)
        consumed = set(consumed)
        moved: Dict[Face, Tuple[int, int, Perm]] = {
            face: (new[nt], nf, sigma) for face, (nt, nf, sigma) in relocation.items()
        }
        external = []
        done = set()
        for face, (nt, nf, sigma) in moved.items():
            if face in done:
                continue
            t2, f2, q = self.adj[face]
            done.add(face)
            if (t2, f2) in moved:
                nt2, nf2, sigma2 = moved[(t2, f2)]
                done.add((t2, f2))
            else:
                nt2, nf2, sigma2 = t2, f2, IDENTITY
            external.append((nt, nf, nt2, nf2, compose(compose(sigma2, q), inverse(sigma))))
        for t in removed:
            for f in GERMS:
                if (t, f) in self.adj:
                    if (t, f) not in moved and (t, f) not in consumed:
                        raise ValueError(f"face ({t}, {f}) is neither consumed nor relocated")
                    self.unglue(t, f)
        for a, fa, b, fb, perm in internal:
            self.glue(new[a], fa, new[b], fb, perm)
        for glue in external:
            self.glue(*glue)
        return self.remove_tetrahedra(removed)

    def to_complex(self, name: str | None = None) -> SkeletonComplex:
        edges = []
        for t in range(self.size):
            for f in GERMS:
                t1, f1, perm = self.adj[(t, f)]
                if (t, f) < (t1, f1):
                    m0 = [x for x in GERMS if x != f]
                    edges.append(make_edge(len(edges), t, f, m0, t1, f1, [perm[x] for x in m0]))
        complex_ = SkeletonComplex(name or self.name, self.size, tuple(edges), ())
        if not self.marked:
            return complex_
        lookup = region_lookup(compute_regions(complex_))
        return complex_.with_marked([region_of_tet_edge(complex_, lookup, *m) for m in self.marked])


def region_of_tet_edge(complex_: SkeletonComplex, lookup, tet: int, a: int, b: int) -> int:
    c, d = [x for x in GERMS if x not in (a, b)]
    edge_id, k = complex_.edge_at(tet, c)
    wing = complex_.edges[edge_id].end(k).wing_to(d)
    return lookup[(edge_id, wing)][0]


def pass_of_tet_edge(complex_: SkeletonComplex, tet: int, face: int, a: int, b: int) -> Tuple[int, int]:
    """(edge id, wing) of the sheet through tet edge {a, b} on face `face` of `tet`."""
    d = next(x for x in GERMS if x not in (a, b, face))
    edge_id, k = complex_.edge_at(tet, face)
    return edge_id, complex_.edges[edge_id].end(k).wing_to(d)
