"""
Canonical labeling of skeleton complexes through their dual face-pairing tables.

Two complexes are isomorphic iff their dual triangulations are, with marked edge
classes matched as a set; the code is the lexicographically least BFS relabeling.
"""
from __future__ import annotations

import hashlib
import itertools
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from skelet.core.complex import GERMS, SkeletonComplex
from skelet.core.regions import FORWARD, compute_regions, region_lookup
from skelet.core.sites import CURVE_KINDS, Crossing, CurveOnSkeleton, L, MP, NEGATIVE, POSITIVE, V, C, MoveSite, \
    complex_hash
from skelet.services.dual import pass_tet_edges
from skelet.services.triangulation import EDGE_PAIRS, Triangulation, compose, inverse, region_of_tet_edge

logger = logging.getLogger(__name__)

ALL_PERMS = list(itertools.permutations(GERMS))


@dataclass(frozen=True)
class CanonicalCode:
    code: bytes
    digest: str

    def __str__(self) -> str:
        return self.digest


@dataclass(frozen=True)
class Labeling:
    code: Tuple[int, ...]
    order: Tuple[int, ...]
    perms: Dict[int, Tuple[int, ...]]


def _marked_embeddings(complex_: SkeletonComplex) -> List[List[Tuple[int, int, int]]]:
    if not complex_.marked_regions:
        return []
    regions = compute_regions(complex_)
    out = []
    for r in complex_.marked_regions:
        emb = []
        for e, w, _ in regions[r].passes:
            emb.extend(pass_tet_edges(complex_, e, w))
        out.append(emb)
    return out


def _label_from(tri: Triangulation, start: int, pi: Tuple[int, ...], marked, best: Optional[Tuple[int, ...]]):
    index = {start: 0}
    order = [start]
    perms = {start: pi}
    code: List[int] = []
    i = 0
    while i < len(order):
        t = order[i]
        p = perms[t]
        p_inv = inverse(p)
        for nf in GERMS:
            t2, f2, q = tri.adj[(t, p_inv[nf])]
            if t2 not in index:
                index[t2] = len(order)
                order.append(t2)
                perms[t2] = compose(p, inverse(q))
            glue = compose(compose(perms[t2], q), p_inv)
            code.extend((index[t2], *glue))
        if best is not None and tuple(code) > best[:len(code)]:
            return None
        i += 1
    if len(order) != tri.size:
        raise ValueError("triangulation is not connected")
    for emb in sorted_marked(marked, index, perms):
        code.extend(emb)
    return Labeling(tuple(code), tuple(order), perms)


def sorted_marked(marked, index, perms) -> List[Tuple[int, int, int]]:
    reps = []
    for emb in marked:
        images = []
        for t, a, b in emb:
            x, y = sorted((perms[t][a], perms[t][b]))
            images.append((index[t], x, y))
        reps.append(min(images))
    return sorted(reps)


def canonical_labeling(complex_: SkeletonComplex) -> Labeling:
    tri = Triangulation.from_complex(complex_)
    marked = _marked_embeddings(complex_)
    best: Optional[Labeling] = None
    for start in range(tri.size):
        for pi in ALL_PERMS:
            lab = _label_from(tri, start, pi, marked, best.code if best else None)
            if lab is not None and (best is None or lab.code < best.code):
                best = lab
    if best is None:
        return Labeling((), (), {})
    return best


def canonical_code(complex_: SkeletonComplex) -> CanonicalCode:
    lab = canonical_labeling(complex_)
    header = f"{complex_.vertex_count}:{complex_.n_marked}:"
    raw = (header + ",".join(str(x) for x in lab.code)).encode()
    return CanonicalCode(raw, hashlib.blake2b(raw, digest_size=8).hexdigest())


def is_isomorphic(a: SkeletonComplex, b: SkeletonComplex) -> bool:
    if (a.vertex_count, a.n_marked) != (b.vertex_count, b.n_marked):
        return False
    return canonical_code(a).code == canonical_code(b).code


@dataclass(frozen=True)
class Isomorphism:
    """Tetrahedron map and per-tetrahedron vertex maps from a source complex to a target."""
    tets: Tuple[int, ...]
    vertex_maps: Tuple[Tuple[int, ...], ...]

    def face(self, t: int, f: int) -> Tuple[int, int]:
        return self.tets[t], self.vertex_maps[t][f]


def find_isomorphism(src: SkeletonComplex, dst: SkeletonComplex) -> Optional[Isomorphism]:
    la, lb = canonical_labeling(src), canonical_labeling(dst)
    if (src.vertex_count, src.n_marked) != (dst.vertex_count, dst.n_marked) or la.code != lb.code:
        return None
    tets, maps = [], []
    for t in range(src.vertex_count):
        i = la.order.index(t)
        t2 = lb.order[i]
        tets.append(t2)
        maps.append(compose(inverse(lb.perms[t2]), la.perms[t]))
    return Isomorphism(tuple(tets), tuple(maps))


def map_pass(iso: Isomorphism, src: SkeletonComplex, dst: SkeletonComplex, e: int, w: int, d: int = FORWARD):
    end = src.edges[e].end0
    t2, f2 = iso.face(end.vertex, end.germ)
    target = iso.vertex_maps[end.vertex][end.wing_map[w]]
    e2, k = dst.edge_at(t2, f2)
    w2 = dst.edges[e2].end(k).wing_to(target)
    return e2, w2, d if k == 0 else 1 - d


def transport_site(site: MoveSite, src: SkeletonComplex, dst: SkeletonComplex) -> MoveSite:
    """Carries a site on `src` over to an isomorphic complex `dst`."""
    if complex_hash(src) == complex_hash(dst):
        return site
    iso = find_isomorphism(src, dst)
    if iso is None:
        raise ValueError("complexes are not isomorphic")
    h = complex_hash(dst)
    src_regions = compute_regions(src)
    dst_regions = compute_regions(dst)
    lookup = region_lookup(dst_regions)

    def region(r: int) -> int:
        e, w, _ = src_regions[r].passes[0]
        return lookup[map_pass(iso, src, dst, e, w)[:2]][0]

    loc = site.location
    if site.kind == MP and site.sign == POSITIVE:
        return MoveSite(MP, POSITIVE, (map_pass(iso, src, dst, loc[0], 0)[0],), complex_hash=h)
    if site.kind in (V, C) and site.sign == POSITIVE:
        vertex, variant = loc
        k, swap = divmod(variant, 2)
        a, b = EDGE_PAIRS[k]
        c, d = [x for x in GERMS if x not in (a, b)]
        into, out = (d, c) if swap else (c, d)
        vm = iso.vertex_maps[vertex]
        k2 = EDGE_PAIRS.index(tuple(sorted((vm[a], vm[b]))))
        return MoveSite(site.kind, POSITIVE, (iso.tets[vertex], 2 * k2 + (1 if vm[into] > vm[out] else 0)),
                        complex_hash=h)
    if site.kind == L and site.sign == POSITIVE:
        r, a, b, bit = loc
        r2 = region(r)
        indices = []
        for i in (a, b):
            e, w, _ = src_regions[r].passes[i]
            e2, w2, _ = map_pass(iso, src, dst, e, w)
            indices.append(next(j for j, (x, y, _) in enumerate(dst_regions[r2].passes) if (x, y) == (e2, w2)))
        return MoveSite(L, POSITIVE, (r2, min(indices), max(indices), bit), complex_hash=h)
    if site.sign == NEGATIVE:
        return MoveSite(site.kind, NEGATIVE, (region(loc[0]),), complex_hash=h)
    if site.kind in CURVE_KINDS:
        from skelet.services.discs import apply_curve_site, match_replacement
        crossings = []
        for x in site.curve.crossings:
            e2, w_in, d = map_pass(iso, src, dst, x.edge, x.wing_in)
            _, w_out, _ = map_pass(iso, src, dst, x.edge, x.wing_out)
            position = x.position if d == FORWARD else 1 - x.position
            crossings.append(Crossing(e2, position, w_in, w_out))
        curve = CurveOnSkeleton(tuple(crossings))
        target = apply_curve_site(src, site).complex
        return match_replacement(dst, curve, site.kind, target)
    raise ValueError(f"cannot transport {site.describe()}")
