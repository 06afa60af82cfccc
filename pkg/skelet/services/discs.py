"""
Disc replacement: attach a disc along a curve in P, then remove another region.

A curve is a cyclic list of crossings. Each crossing sits on an edge of P at a
fractional position and moves from one wing (`wing_in`) to another (`wing_out`).
Chord i runs from crossing i to crossing i + 1 inside the region between them.
Attaching the disc D adds one vertex per crossing; the ball then splits into two
balls and any region whose dual edge joins both can be removed again.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Collection, Dict, Iterator, List, Optional, Sequence, Tuple

from skelet.config import MAX_CURVES, T_CROSSINGS
from skelet.core.complex import GERMS, WINGS, EdgeEnd, EdgeRecord, SkeletonComplex, make_edge
from skelet.core.errors import CurveError, MoveError, RegionError
from skelet.core.regions import FORWARD, RegionOrbit, compute_regions, find_pass, region_lookup
from skelet.core.sites import (CR, DISC, T1, T2, UNSIGNED, Crossing, CurveOnSkeleton, MoveSite,
                               complex_hash)
from skelet.core.validator import closure_edges, closure_vertices, validate
from skelet.services.dual import dualize, link_vertex_classes, vertex_links

logger = logging.getLogger(__name__)

# germs at a crossing vertex
TOWARD_END0, TOWARD_END1, CHORD_IN, CHORD_OUT = 0, 1, 2, 3


@dataclass(frozen=True)
class AttachedDisc:
    complex: SkeletonComplex
    disc_region: int
    balls: Tuple[int, int]
    candidates: Tuple[int, ...]


def _third(a: int, b: int) -> int:
    return 3 - a - b


def _stored_forward(regions: List[RegionOrbit], edge_id: int, wing: int) -> Tuple[int, int, bool]:
    """Region, index and whether the pass (edge, wing) runs end0 -> end1 in the stored orbit."""
    region, index, reversed_ = find_pass(regions, (edge_id, wing, FORWARD))
    return region, index, not reversed_


def _side(complex_: SkeletonComplex, classes, crossing: Crossing, entering: bool):
    """Link vertex class of the region side a chord uses at this crossing."""
    end = complex_.edges[crossing.edge].end0
    w3 = _third(crossing.wing_in, crossing.wing_out)
    other = crossing.wing_out if entering else crossing.wing_in
    return classes.find((end.vertex, end.wing_map[w3], end.wing_map[other]))


def _arc_key(regions: List[RegionOrbit], crossing: Crossing, wing: int) -> Tuple[int, int, Fraction]:
    region, index, forward = _stored_forward(regions, crossing.edge, wing)
    return region, index, crossing.position if forward else 1 - crossing.position


def _between(p, x, y) -> bool:
    if x < y:
        return x < p < y
    return p > x or p < y


def check_curve(complex_: SkeletonComplex, curve: CurveOnSkeleton, regions: List[RegionOrbit] | None = None) -> None:
    """
    Raises CurveError unless the curve can bound a disc attached to P.

    Crossings must lie on distinct points of edges away from the boundary closures,
    consecutive crossings must share the unmarked region of their chord on the same
    side, and chords in one region must not cross.
    """
    regions = regions if regions is not None else compute_regions(complex_)
    if len(curve) == 0:
        raise CurveError("empty curve")
    closed = closure_edges(complex_, regions)
    marked = set(complex_.marked_regions)
    seen = set()
    for i, x in enumerate(curve.crossings):
        if not 0 <= x.edge < complex_.edge_count:
            raise CurveError(f"crossing {i}: edge {x.edge} out of range")
        if x.wing_in not in WINGS or x.wing_out not in WINGS or x.wing_in == x.wing_out:
            raise CurveError(f"crossing {i}: wings ({x.wing_in}, {x.wing_out}) are not two distinct wings")
        if not 0 < x.position < 1:
            raise CurveError(f"crossing {i}: position {x.position} is not strictly inside the edge")
        if x.edge in closed:
            raise CurveError(f"crossing {i}: edge {x.edge} lies on a boundary closure")
        if (x.edge, x.position) in seen:
            raise CurveError(f"crossing {i}: point {x.position} of edge {x.edge} used twice")
        seen.add((x.edge, x.position))

    classes = link_vertex_classes(dualize(complex_, regions))
    chords_by_region: Dict[int, List[Tuple]] = {}
    for i, (x, y) in enumerate(curve.chords()):
        rx, ix, px = _arc_key(regions, x, x.wing_out)
        ry, iy, py = _arc_key(regions, y, y.wing_in)
        if rx != ry:
            raise CurveError(f"chord {i}: crossings {i} and {(i + 1) % len(curve)} do not share a region")
        if rx in marked:
            raise CurveError(f"chord {i}: region {rx} is marked")
        if _side(complex_, classes, x, False) != _side(complex_, classes, y, True):
            raise CurveError(f"chord {i}: ends lie on opposite sides of region {rx}")
        chords_by_region.setdefault(rx, []).append(((ix, px), (iy, py)))

    for region, chords in chords_by_region.items():
        for j, (x1, y1) in enumerate(chords):
            for x2, y2 in chords[j + 1:]:
                if _between(x2, x1, y1) != _between(y2, x1, y1):
                    raise CurveError(f"chords in region {region} cross each other")


def attach_disc(complex_: SkeletonComplex, curve: CurveOnSkeleton) -> AttachedDisc:
    """
    Q with a disc glued along the curve.

    Crossing i becomes vertex V + i. The part of a cut edge next to end0 keeps the
    edge id, the other parts and then the chords get new ids in order.
    """
    regions = compute_regions(complex_)
    check_curve(complex_, curve, regions)
    base = complex_.vertex_count
    by_edge: Dict[int, List[Tuple[Fraction, int]]] = {}
    for i, x in enumerate(curve.crossings):
        by_edge.setdefault(x.edge, []).append((x.position, i))

    edges: List[EdgeRecord] = []
    extra: List[EdgeRecord] = []
    next_id = complex_.edge_count
    for edge in complex_.edges:
        cuts = sorted(by_edge.get(edge.id, []))
        if not cuts:
            edges.append(edge)
            continue
        start = edge.end0
        piece_id = edge.id
        for _, i in cuts:
            x = curve.crossings[i]
            w3 = _third(x.wing_in, x.wing_out)
            arrive = [0, 0, 0]
            arrive[w3], arrive[x.wing_in], arrive[x.wing_out] = TOWARD_END1, CHORD_IN, CHORD_OUT
            leave = [0, 0, 0]
            leave[w3], leave[x.wing_in], leave[x.wing_out] = TOWARD_END0, CHORD_IN, CHORD_OUT
            piece = EdgeRecord(piece_id, start, EdgeEnd(base + i, TOWARD_END0, tuple(arrive)))
            (edges if piece_id == edge.id else extra).append(piece)
            start = EdgeEnd(base + i, TOWARD_END1, tuple(leave))
            piece_id = next_id
            next_id += 1
        extra.append(EdgeRecord(piece_id, start, edge.end1))

    chords: List[EdgeRecord] = []
    m = len(curve)
    for i, (x, y) in enumerate(curve.chords()):
        _, _, out_forward = _stored_forward(regions, x.edge, x.wing_out)
        _, _, in_forward = _stored_forward(regions, y.edge, y.wing_in)
        a = 1 if out_forward else 0
        b = 0 if in_forward else 1
        chords.append(make_edge(next_id + i, base + i, CHORD_OUT, (CHORD_IN, a, 1 - a),
                                base + (i + 1) % m, CHORD_IN, (CHORD_OUT, b, 1 - b)))

    attached = SkeletonComplex(complex_.name, base + m, tuple(edges + extra + chords))
    try:
        new_regions = compute_regions(attached)
    except RegionError as e:
        raise CurveError(f"attached disc leaves a non-special polyhedron: {e}") from e
    lookup = region_lookup(new_regions)
    marked = [lookup[regions[r].passes[0][:2]][0] for r in complex_.marked_regions]
    attached = attached.with_marked(marked)

    dt = dualize(attached, new_regions)
    balls = [k for k, link in enumerate(vertex_links(dt)) if link.euler == 2 and link.orientable]
    if len(balls) != 2:
        raise CurveError(f"curve does not cut the ball in two ({len(balls)} ball classes)")
    disc = lookup[(next_id, 0)][0]
    ends = tuple(balls)
    candidates = tuple(r.id for r in new_regions
                       if r.id not in marked and dt.edge_endpoints(r.id) == ends)
    logger.debug(f"attached disc along {m} crossings: region {disc}, {len(candidates)} removable regions")
    return AttachedDisc(attached, disc, (balls[0], balls[1]), candidates)


def _turn(end: EdgeEnd, other_germ: int, wing: int) -> int:
    """Germ that names the sector of `wing` once the edge at `other_germ` replaces this one."""
    y = end.wing_map[wing]
    return end.germ if y == other_germ else y


def _follow(complex_: SkeletonComplex, dissolved, origin: int, far_k: int):
    out = []
    e, k, labels = origin, far_k, WINGS
    while True:
        end = complex_.edges[e].end(k)
        if end.vertex not in dissolved:
            return out, False
        a, b = dissolved[end.vertex][:2]
        ne, nk = complex_.edge_at(end.vertex, b if end.germ == a else a)
        if ne == origin:
            return out, True
        nend = complex_.edges[ne].end(nk)
        labels = tuple(nend.wing_to(_turn(end, nend.germ, labels[w])) for w in WINGS)
        out.append((ne, nk, labels))
        e, k = ne, 1 - nk


def remove_region(complex_: SkeletonComplex, region_id: int,
                  regions: List[RegionOrbit] | None = None) -> Tuple[SkeletonComplex, CurveOnSkeleton]:
    """
    Removes a region and dissolves the vertices on its boundary.

    Returns the new complex (not validated) and the boundary of the removed region
    drawn as a curve on it. Edges that meet at a dissolved vertex merge; a merged edge
    takes the smallest old id's place in the order and its orientation.
    """
    regions = regions if regions is not None else compute_regions(complex_)
    if not 0 <= region_id < len(regions):
        raise MoveError(f"region {region_id} out of range")
    if region_id in complex_.marked_regions:
        raise MoveError(f"region {region_id} is marked")
    passes = regions[region_id].passes
    boundary = {e for e, _, _ in passes}
    if len(boundary) != len(passes):
        raise MoveError(f"region {region_id} runs along an edge twice")
    if boundary & closure_edges(complex_, regions):
        raise MoveError(f"region {region_id} touches a boundary closure")
    closed_vertices = closure_vertices(complex_, regions)

    dissolved: Dict[int, Tuple[int, int, int, int]] = {}
    order: List[int] = []
    for k, (e, w, d) in enumerate(passes):
        arrival = complex_.edges[e].end1 if d == FORWARD else complex_.edges[e].end0
        ne, _, nd = passes[(k + 1) % len(passes)]
        departure = complex_.edges[ne].end0 if nd == FORWARD else complex_.edges[ne].end1
        x = arrival.vertex
        if x in dissolved:
            raise MoveError(f"region {region_id} meets vertex {x} twice")
        if x in closed_vertices:
            raise MoveError(f"region {region_id} touches a boundary closure at vertex {x}")
        a, b = sorted(set(GERMS) - {arrival.germ, departure.germ})
        dissolved[x] = (a, b, arrival.germ, departure.germ)
        order.append(x)

    chains = []
    placed = {}
    for edge in complex_.edges:
        if edge.id in boundary or edge.id in placed:
            continue
        forward, closed = _follow(complex_, dissolved, edge.id, 1)
        if closed:
            raise MoveError(f"removing region {region_id} leaves a circle without vertices")
        backward, _ = _follow(complex_, dissolved, edge.id, 0)
        chain = [(ne, 1 - nk, labels) for ne, nk, labels in reversed(backward)]
        chain.append((edge.id, 0, WINGS))
        chain.extend(forward)
        for e, k, labels in chain:
            placed[e] = (len(chains), k, labels)
        chains.append(chain)

    survivors = [v for v in range(complex_.vertex_count) if v not in dissolved]
    vmap = {v: i for i, v in enumerate(survivors)}
    new_edges = []
    junctions: Dict[int, Tuple[int, Fraction, int, int]] = {}
    for cid, chain in enumerate(chains):
        e0, k0, lab0 = chain[0]
        e1, k1, lab1 = chain[-1]
        start = complex_.edges[e0].end(k0)
        stop = complex_.edges[e1].end(1 - k1)
        new_edges.append(make_edge(cid, vmap[start.vertex], start.germ, [start.wing_map[lab0[w]] for w in WINGS],
                                   vmap[stop.vertex], stop.germ, [stop.wing_map[lab1[w]] for w in WINGS]))
        for j in range(1, len(chain)):
            e, k, labels = chain[j - 1]
            far = complex_.edges[e].end(1 - k)
            _, _, g, h = dissolved[far.vertex]
            wing_g = next(w for w in WINGS if far.wing_map[labels[w]] == g)
            wing_h = next(w for w in WINGS if far.wing_map[labels[w]] == h)
            junctions[far.vertex] = (cid, Fraction(j, len(chain)), wing_g, wing_h)

    result = SkeletonComplex(complex_.name, len(survivors), tuple(new_edges))
    try:
        lookup = region_lookup(compute_regions(result))
    except RegionError as e:
        raise MoveError(f"removing region {region_id} leaves a non-special polyhedron: {e}") from e
    marked = []
    for r in complex_.marked_regions:
        e, w, _ = regions[r].passes[0]
        cid, _, labels = placed[e]
        marked.append(lookup[(cid, labels.index(w))][0])
    trace = CurveOnSkeleton(tuple(Crossing(*junctions[x]) for x in order))
    return result.with_marked(marked), trace


def disc_replacement(complex_: SkeletonComplex, curve: CurveOnSkeleton,
                     replaced: int) -> Tuple[SkeletonComplex, CurveOnSkeleton]:
    """
    Attaches a disc along `curve` and removes region `replaced` of the augmented complex.

    Returns the validated result and the boundary of the removed region on it.
    """
    attached = attach_disc(complex_, curve)
    if replaced not in attached.candidates:
        raise MoveError(f"region {replaced} does not separate the two new balls")
    result, trace = remove_region(attached.complex, replaced)
    report = validate(result)
    if not report.ok:
        raise MoveError(f"disc replacement rejected by the validator: {', '.join(report.codes())}")
    return result, trace


# --- curve classification --------------------------------------------------------------

def curve_character(complex_: SkeletonComplex, curve: CurveOnSkeleton) -> int:
    """
    Orientation character of the curve pushed off into the ball, as 0 or 1.

    Every chord is pushed along its arc forward in the stored orbit. An edge
    contributes its face pairing's flip each time the arc runs over the point
    just after end0.
    """
    regions = compute_regions(complex_)
    dt = dualize(complex_, regions)
    flips = [fp.flip for fp in dt.face_pairings]
    character = 0
    for x, y in curve.chords():
        r, ix, out_forward = _stored_forward(regions, x.edge, x.wing_out)
        _, iy, in_forward = _stored_forward(regions, y.edge, y.wing_in)
        px = x.position if out_forward else 1 - x.position
        py = y.position if in_forward else 1 - y.position
        if ix == iy and py > px:
            continue
        passes = regions[r].passes
        if not out_forward:
            character ^= flips[x.edge]
        i = (ix + 1) % len(passes)
        while i != iy:
            character ^= flips[passes[i][0]]
            i = (i + 1) % len(passes)
        if in_forward:
            character ^= flips[y.edge]
    return character


def chord_regions(complex_: SkeletonComplex, curve: CurveOnSkeleton) -> List[int]:
    regions = compute_regions(complex_)
    return [_stored_forward(regions, x.edge, x.wing_out)[0] for x in curve.crossings]


def kind_holds(complex_: SkeletonComplex, curve: CurveOnSkeleton, kind: str) -> bool:
    if kind == CR:
        return len(curve) == 1
    if kind in (T1, T2):
        if len(curve) < 2 or len(set(chord_regions(complex_, curve))) < 2:
            return False
        return (curve_character(complex_, curve) == 0) == (kind == T1)
    return kind == DISC


def classify_t_kind(complex_: SkeletonComplex, site: MoveSite) -> str:
    """T1 when the attaching curve preserves orientation, T2 otherwise."""
    if site.curve is None or site.kind not in (T1, T2, DISC):
        raise MoveError(f"{site.describe()} does not attach a disc")
    return T1 if curve_character(complex_, site.curve) == 0 else T2


# --- sites --------------------------------------------------------------------------------

def apply_curve_site(complex_: SkeletonComplex, site: MoveSite, with_inverse: bool = False):
    from skelet.services.moves import MoveResult

    if site.curve is None or len(site.location) != 1:
        raise MoveError(f"{site.describe()}: a curve site needs a curve and one replaced region")
    try:
        if not kind_holds(complex_, site.curve, site.kind):
            raise MoveError(f"{site.describe()}: curve does not fit a {site.kind} move")
        after, trace = disc_replacement(complex_, site.curve, site.location[0])
    except (KeyError, ValueError) as e:
        if isinstance(e, MoveError):
            raise
        raise MoveError(f"{site.describe()}: {e}") from e
    result = MoveResult(after, [])
    if with_inverse:
        try:
            kind = site.kind if kind_holds(after, trace, site.kind) else DISC
        except (KeyError, ValueError):
            kind = DISC
        result.inverse = match_replacement(after, trace, kind, complex_)
    return result


def match_replacement(complex_: SkeletonComplex, curve: CurveOnSkeleton, kind: str,
                      target: SkeletonComplex) -> MoveSite:
    """The site along `curve` whose replaced region yields a complex isomorphic to `target`."""
    from skelet.services.canonical import is_isomorphic

    attached = attach_disc(complex_, curve)
    h = complex_hash(complex_)
    for region in attached.candidates:
        try:
            result, _ = disc_replacement(complex_, curve, region)
        except MoveError:
            continue
        if is_isomorphic(result, target):
            return MoveSite(kind, UNSIGNED, (region,), curve, complex_hash=h)
    raise MoveError("no region along the curve leads to the target complex")


def _layouts(sequence: Sequence[Tuple[int, int, int]]) -> Iterator[CurveOnSkeleton]:
    """Every placement of the crossings along their edges; an edge met k times has k! of them."""
    slots: Dict[int, List[int]] = {}
    for i, (e, _, _) in enumerate(sequence):
        slots.setdefault(e, []).append(i)
    edges = sorted(slots)
    orders = [itertools.permutations(range(1, len(slots[e]) + 1)) for e in edges]
    for choice in itertools.product(*orders):
        positions = {}
        for e, order in zip(edges, choice):
            for i, rank in zip(slots[e], order):
                positions[i] = Fraction(rank, len(slots[e]) + 1)
        yield CurveOnSkeleton(tuple(Crossing(e, positions[i], a, b) for i, (e, a, b) in enumerate(sequence)))


def candidate_curves(complex_: SkeletonComplex, max_crossings: int, limit: int = MAX_CURVES,
                     edges: Optional[Collection[int]] = None) -> Iterator[CurveOnSkeleton]:
    """
    Curves with at most `max_crossings` crossings, up to rotation.

    The first crossing is the smallest in the sequence. Repeated crossings of one edge
    are tried in every order along it. `edges` restricts the crossings to those edges.
    """
    regions = compute_regions(complex_)
    lookup = region_lookup(regions)
    closed = closure_edges(complex_, regions)
    marked = set(complex_.marked_regions)
    classes = link_vertex_classes(dualize(complex_, regions))
    allowed = set(edges) if edges is not None else {e.id for e in complex_.edges}
    options = [(e.id, a, b) for e in complex_.edges if e.id not in closed and e.id in allowed
               for a in WINGS for b in WINGS
               if a != b and lookup[(e.id, a)][0] not in marked and lookup[(e.id, b)][0] not in marked]

    def side(option, entering):
        return _side(complex_, classes, Crossing(option[0], Fraction(1, 2), option[1], option[2]), entering)

    successors = {
        o: [p for p in options
            if lookup[(p[0], p[1])][0] == lookup[(o[0], o[2])][0] and side(p, True) == side(o, False)]
        for o in options
    }
    count = 0
    stack = [[o] for o in reversed(options)]
    while stack and count < limit:
        sequence = stack.pop()
        first, last = sequence[0], sequence[-1]
        if first in successors[last]:
            for curve in _layouts(sequence):
                try:
                    check_curve(complex_, curve, regions)
                except CurveError:
                    continue
                count += 1
                yield curve
                if count >= limit:
                    return
        if len(sequence) < max_crossings:
            for nxt in reversed(successors[last]):
                if nxt >= first:
                    stack.append(sequence + [nxt])


def enumerate_curve_sites(complex_: SkeletonComplex, kind: str, max_crossings: int = T_CROSSINGS,
                          max_curves: int = MAX_CURVES) -> List[MoveSite]:
    """
    Disc replacements of one curve kind that change the complex.

    CR curves cross P once; T and DISC curves use up to `max_crossings` crossings.
    Results isomorphic to the input are left out.
    """
    from skelet.services.canonical import canonical_code

    h = complex_hash(complex_)
    own = canonical_code(complex_).code
    budget = 1 if kind == CR else max_crossings
    sites: List[MoveSite] = []
    for curve in candidate_curves(complex_, budget, max_curves):
        if not kind_holds(complex_, curve, kind):
            continue
        try:
            attached = attach_disc(complex_, curve)
        except CurveError as e:
            logger.debug(f"skipping curve: {e}")
            continue
        for region in attached.candidates:
            if region == attached.disc_region:
                continue
            try:
                result, _ = disc_replacement(complex_, curve, region)
            except MoveError as e:
                logger.debug(f"skipping region {region}: {e}")
                continue
            if result.vertex_count == complex_.vertex_count and canonical_code(result).code == own:
                continue
            sites.append(MoveSite(kind, UNSIGNED, (region,), curve, complex_hash=h))
    logger.debug(f"{complex_.name}: {len(sites)} {kind} sites")
    return sites


def find_disc_replacement(complex_: SkeletonComplex, target: SkeletonComplex, max_crossings: Optional[int] = None,
                          max_curves: int = MAX_CURVES,
                          edges: Optional[Collection[int]] = None) -> Optional[MoveSite]:
    """
    A single disc replacement from `complex_` to a complex isomorphic to `target`, if one is found.

    The default crossing budget grows with the vertex difference: the curve of a move
    adding d vertices needs d + 2 crossings. `edges` restricts where the curve may cross.
    """
    from skelet.services.canonical import is_isomorphic

    if max_crossings is None:
        max_crossings = max(T_CROSSINGS, abs(target.vertex_count - complex_.vertex_count) + 2)
    h = complex_hash(complex_)
    for curve in candidate_curves(complex_, max_crossings, max_curves, edges):
        try:
            attached = attach_disc(complex_, curve)
        except CurveError:
            continue
        for region in attached.candidates:
            try:
                result, _ = disc_replacement(complex_, curve, region)
            except MoveError:
                continue
            if result.vertex_count != target.vertex_count or result.n_marked != target.n_marked:
                continue
            if is_isomorphic(result, target):
                logger.info(f"disc replacement found along {len(curve)} crossings, region {region}")
                return MoveSite(DISC, UNSIGNED, (region,), curve, complex_hash=h)
    return None
