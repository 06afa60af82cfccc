"""
MP, V, L and C moves.

Moves are carried out on the dual triangulation: MP+ is a 2-3 move across the face
dual to an edge, MP- the 3-2 move around the edge dual to a triangular region, L+ and
V+ insert a pillow (0-2 move) between two faces around the edge dual to a region, and
L-/V- remove a pillow dual to a bigon region. The rebuilt complex is validated.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from skelet.core.complex import GERMS, SkeletonComplex
from skelet.core.errors import MoveError
from skelet.core.regions import FORWARD, RegionOrbit, compute_regions, region_lookup
from skelet.core.sites import (C, CURVE_KINDS, L, MP, NEGATIVE, POSITIVE, UNSIGNED, V, MovePath, MoveSite,
                               complex_hash)
from skelet.core.validator import closure_edges, closure_vertices, validate
from skelet.services.triangulation import (EDGE_PAIRS, IDENTITY, Triangulation, WalkStep, compose, inverse,
                                           pass_of_tet_edge, perm_from_pairs, region_of_tet_edge)

logger = logging.getLogger(__name__)

# six edges of the dual tetrahedron, two pillow orientations each
V_VARIANTS = 12
# ordered pairs of distinct faces: the face that takes the pocket, the vertex opposite its monogon edge
C_VARIANTS = 12


@dataclass
class MoveResult:
    complex: SkeletonComplex
    tet_map: List[Optional[int]]
    inverse: Optional[MoveSite] = None
    path: Optional[MovePath] = None


@dataclass
class _Rewrite:
    """Outcome of a local rewrite on the triangulation, before the complex is rebuilt."""
    tri: Triangulation
    tet_map: List[Optional[int]]
    inverse_hint: Dict[str, object] = field(default_factory=dict)


def _site_error(site: MoveSite, message: str) -> MoveError:
    return MoveError(f"{site.describe()}: {message}")


def _interior(complex_: SkeletonComplex, regions: List[RegionOrbit]) -> set:
    boundary = closure_vertices(complex_, regions)
    return {v for v in range(complex_.vertex_count) if v not in boundary}


def _walk_from_pass(tri: Triangulation, complex_: SkeletonComplex, p: Tuple[int, int, int]) -> List[WalkStep]:
    """Walk around the edge dual to the region of pass p, first crossing the face dual to p's edge."""
    e, w, d = p
    edge = complex_.edges[e]
    end = edge.end0 if d == FORWARD else edge.end1
    s, t = sorted(set(GERMS) - {end.germ, end.wing_map[w]})
    return tri.walk_edge(end.vertex, s, t, entry=end.wing_map[w])


# --- MP ---------------------------------------------------------------------------

def _two_three(tri: Triangulation, complex_: SkeletonComplex, edge_id: int) -> _Rewrite:
    edge = complex_.edges[edge_id]
    A, fa, B, fb = edge.end0.vertex, edge.end0.germ, edge.end1.vertex, edge.end1.germ
    p = edge.gluing()
    u = [x for x in GERMS if x != fa]
    relocation = {}
    for i in range(3):
        u1, u2 = u[(i + 1) % 3], u[(i + 2) % 3]
        relocation[(A, u[i])] = (i, 1, perm_from_pairs({fa: 0, u[i]: 1, u1: 2, u2: 3}))
        relocation[(B, p[u[i]])] = (i, 0, perm_from_pairs({fb: 1, p[u[i]]: 0, p[u1]: 2, p[u2]: 3}))
    internal = [(i, 2, (i + 1) % 3, 3, (0, 1, 3, 2)) for i in range(3)]
    tet_map = tri.replace([A, B], [(A, fa), (B, fb)], 3, internal, relocation)
    return _Rewrite(tri, tet_map, {"new": tri.size - 3})


def _three_two(tri: Triangulation, steps: List[WalkStep]) -> _Rewrite:
    relocation = {}
    consumed = []
    for k, step in enumerate(steps):
        i = (k + 1) % 3
        rho = perm_from_pairs({step.s: 0, step.t: 1, step.exit: 2, step.entry: 3})
        to_a = (0, 1 + i, 1 + (i + 1) % 3, 1 + (i + 2) % 3)
        to_b = (1 + i, 0, 1 + (i + 1) % 3, 1 + (i + 2) % 3)
        relocation[(step.tet, step.t)] = (0, 1 + i, compose(to_a, rho))
        relocation[(step.tet, step.s)] = (1, 1 + i, compose(to_b, rho))
        consumed += [(step.tet, step.entry), (step.tet, step.exit)]
    tet_map = tri.replace([s.tet for s in steps], consumed, 2, [(0, 0, 1, 0, IDENTITY)], relocation)
    return _Rewrite(tri, tet_map, {"new": tri.size - 2})


# --- pillows (L and V) ------------------------------------------------------------

def _insert_pillow(tri: Triangulation, steps: List[WalkStep], start: int, j: int) -> _Rewrite:
    """
    0-2 move: the faces crossed after steps[start] and steps[start + j] are cut open and
    a pillow N, N' is inserted; N fills the wedge on the side of steps[start + 1 .. start + j].
    """
    n = len(steps)
    t0, t1, tj, tj1 = (steps[(start + k) % n] for k in (0, 1, j, j + 1))
    tri.unglue(t0.tet, t0.exit)
    tri.unglue(tj.tet, tj.exit)
    N, N2 = tri.add_tetrahedra(2)
    tri.glue(N, 0, t1.tet, t1.entry, perm_from_pairs({0: t1.entry, 1: t1.exit, 2: t1.s, 3: t1.t}))
    tri.glue(N, 1, tj.tet, tj.exit, perm_from_pairs({0: tj.entry, 1: tj.exit, 2: tj.s, 3: tj.t}))
    tri.glue(N2, 0, t0.tet, t0.exit, perm_from_pairs({0: t0.exit, 1: t0.entry, 2: t0.s, 3: t0.t}))
    tri.glue(N2, 1, tj1.tet, tj1.entry, perm_from_pairs({0: tj1.exit, 1: tj1.entry, 2: tj1.s, 3: tj1.t}))
    tri.glue(N, 2, N2, 2, IDENTITY)
    tri.glue(N, 3, N2, 3, IDENTITY)
    return _Rewrite(tri, list(range(tri.size - 2)), {"new": N})


def _pillow_partners(tri: Triangulation, steps: List[WalkStep]):
    """Outer gluings of a pillow in template labels: {role: [(tet, face, template -> tet map) for N, N']}."""
    t0, t1 = steps
    rho0 = perm_from_pairs({t0.s: 0, t0.t: 1, t0.exit: 2, t0.entry: 3})
    rho1 = perm_from_pairs({t1.s: 0, t1.t: 1, t1.entry: 2, t1.exit: 3})
    out = {}
    for role, faces in ((0, (t0.s, t1.s)), (1, (t0.t, t1.t))):
        pair = []
        for step, rho, face in ((t0, rho0, faces[0]), (t1, rho1, faces[1])):
            x, fx, q = tri.partner(step.tet, face)
            pair.append((x, fx, compose(q, inverse(rho))))
        out[role] = pair
    return out


def _remove_pillow(tri: Triangulation, steps: List[WalkStep]) -> _Rewrite:
    pillow = {s.tet for s in steps}
    partners = _pillow_partners(tri, steps)
    for role, ((x, fx, _), (y, fy, _)) in partners.items():
        if x in pillow or y in pillow:
            raise MoveError("pillow is glued to itself along an outer face")
    t0, t1 = steps
    for step in steps:
        for f in GERMS:
            if (step.tet, f) in tri.adj:
                tri.unglue(step.tet, f)
    for role in (0, 1):
        (x, fx, alpha), (y, fy, beta) = partners[role]
        tri.glue(x, fx, y, fy, compose(beta, inverse(alpha)))
    tet_map = tri.remove_tetrahedra([t0.tet, t1.tet])
    hint = {"partners": {role: [(tet_map[x], fx, p) for x, fx, p in pair] for role, pair in partners.items()}}
    return _Rewrite(tri, tet_map, hint)


def _v_pattern(tri: Triangulation, steps: List[WalkStep]) -> Optional[Tuple[int, int, int]]:
    """(vertex, face into it, face out of it) when one pillow tetrahedron has both outer faces on one other tetrahedron."""
    pillow = {s.tet for s in steps}
    for step in steps:
        x0, f0, _ = tri.partner(step.tet, step.s)
        x1, f1, _ = tri.partner(step.tet, step.t)
        if x0 == x1 and x0 not in pillow:
            return x0, f0, f1
    return None


def _v_walk(tri: Triangulation, vertex: int, k: int, swap: bool) -> Tuple[List[WalkStep], int, int]:
    a, b = EDGE_PAIRS[k]
    c, d = [x for x in GERMS if x not in (a, b)]
    if swap:
        c, d = d, c
    x, fx, _ = tri.partner(vertex, c)
    if (x, fx) == (vertex, d):
        raise MoveError(f"faces {c} and {d} of tetrahedron {vertex} are glued to each other")
    return tri.walk_edge(vertex, a, b, entry=c), c, d


# --- site-level rewrites ----------------------------------------------------------

def _bigon_steps(tri: Triangulation, complex_: SkeletonComplex, region: RegionOrbit, interior: set) -> List[WalkStep]:
    if region.length != 2:
        raise MoveError(f"region {region.id} has length {region.length}, not a bigon")
    steps = _walk_from_pass(tri, complex_, region.passes[0])
    if len(steps) != 2 or steps[0].tet == steps[1].tet:
        raise MoveError(f"region {region.id} is not dual to a pillow of two distinct tetrahedra")
    if any(s.tet not in interior for s in steps):
        raise MoveError(f"region {region.id} touches a marked closure")
    return steps


def _rewrite(complex_: SkeletonComplex, regions: List[RegionOrbit], site: MoveSite) -> Tuple[_Rewrite, Optional[Tuple]]:
    """Runs the local rewrite of a signed site; returns it with the data needed to invert it."""
    tri = Triangulation.from_complex(complex_)
    interior = _interior(complex_, regions)
    marked = set(complex_.marked_regions)
    loc = site.location

    if site.kind == MP and site.sign == POSITIVE:
        (edge_id,) = loc
        if not 0 <= edge_id < complex_.edge_count:
            raise _site_error(site, "edge out of range")
        edge = complex_.edges[edge_id]
        if edge.is_loop:
            raise _site_error(site, "edge is a loop")
        if edge.end0.vertex not in interior or edge.end1.vertex not in interior:
            raise _site_error(site, "edge touches a marked closure")
        return _two_three(tri, complex_, edge_id), None

    if site.kind in (MP, V, L) and site.sign == NEGATIVE or site.kind == L and site.sign == POSITIVE:
        region_id = loc[0]
        if not 0 <= region_id < len(regions):
            raise _site_error(site, "region out of range")
        if region_id in marked:
            raise _site_error(site, "region is marked")
    if site.kind == MP and site.sign == NEGATIVE:
        region = regions[loc[0]]
        if region.length != 3:
            raise _site_error(site, f"region has length {region.length}, not 3")
        steps = _walk_from_pass(tri, complex_, region.passes[0])
        if len(steps) != 3 or len({s.tet for s in steps}) != 3:
            raise _site_error(site, "edge is not surrounded by three distinct tetrahedra")
        if any(s.tet not in interior for s in steps):
            raise _site_error(site, "region touches a marked closure")
        return _three_two(tri, steps), None

    if site.kind == V and site.sign == POSITIVE:
        vertex, variant = loc
        if vertex not in interior:
            raise _site_error(site, "vertex is not interior")
        if not 0 <= variant < V_VARIANTS:
            raise _site_error(site, "variant out of range")
        k, swap = divmod(variant, 2)
        steps, _, _ = _v_walk(tri, vertex, k, bool(swap))
        return _insert_pillow(tri, steps, len(steps) - 1, 1), None

    if site.kind == L and site.sign == POSITIVE:
        region_id, a, b, _bit = loc
        region = regions[region_id]
        if not (0 <= a < region.length and 0 <= b < region.length) or a == b:
            raise _site_error(site, "pass indices out of range or equal")
        ea, eb = region.passes[a][0], region.passes[b][0]
        boundary = closure_edges(complex_, regions)
        if ea == eb:
            raise _site_error(site, "passes lie on the same edge")
        if ea in boundary or eb in boundary:
            raise _site_error(site, "pass on a marked closure edge")
        steps = _walk_from_pass(tri, complex_, region.passes[a])
        if len(steps) != region.length:
            raise _site_error(site, "edge walk does not match the region")
        j = (b - a) % region.length
        if complex_.edge_at(steps[j].tet, steps[j].exit)[0] != eb:
            raise _site_error(site, "edge walk does not match the region")
        return _insert_pillow(tri, steps, 0, j), None

    if site.kind in (V, L) and site.sign == NEGATIVE:
        steps = _bigon_steps(tri, complex_, regions[loc[0]], interior)
        pattern = _v_pattern(tri, steps)
        if site.kind == V and pattern is None:
            raise _site_error(site, "bigon is not a V-pattern pillow")
        rewrite = _remove_pillow(tri, steps)
        if pattern is not None:
            vertex, f0, f1 = pattern
            rewrite.inverse_hint["v"] = (rewrite.tet_map[vertex], f0, f1)
        return rewrite, pattern

    raise _site_error(site, "unsupported kind/sign combination")


def _inverse_site(site: MoveSite, rewrite: _Rewrite, after: SkeletonComplex) -> MoveSite:
    after_hash = complex_hash(after)
    after_regions = compute_regions(after)
    lookup = region_lookup(after_regions)
    hint = rewrite.inverse_hint
    if site.sign == POSITIVE and site.kind == MP:
        region = region_of_tet_edge(after, lookup, hint["new"], 0, 1)
        return MoveSite(MP, NEGATIVE, (region,), complex_hash=after_hash)
    if site.sign == NEGATIVE and site.kind == MP:
        edge_id, _ = after.edge_at(hint["new"], 0)
        return MoveSite(MP, POSITIVE, (edge_id,), complex_hash=after_hash)
    if site.sign == POSITIVE and site.kind in (V, L):
        region = region_of_tet_edge(after, lookup, hint["new"], 0, 1)
        return MoveSite(site.kind, NEGATIVE, (region,), complex_hash=after_hash)
    if site.kind == V and "v" in hint:
        vertex, f0, f1 = hint["v"]
        k = EDGE_PAIRS.index(tuple(x for x in GERMS if x not in (f0, f1)))
        return MoveSite(V, POSITIVE, (vertex, 2 * k + (1 if f0 > f1 else 0)), complex_hash=after_hash)
    # L-: the two re-glued faces carry the passes of the merged region
    passes = []
    region_ids = set()
    for role in (0, 1):
        x, fx, alpha = hint["partners"][role][0]
        a, b = alpha[2], alpha[3]
        region_ids.add(region_of_tet_edge(after, lookup, x, a, b))
        e, w = pass_of_tet_edge(after, x, fx, a, b)
        passes.append((e, w))
    if len(region_ids) != 1:
        raise MoveError("re-glued faces do not border a common region")
    region_id = region_ids.pop()
    region = after_regions[region_id]
    indices = [next(i for i, (e, w, _) in enumerate(region.passes) if (e, w) == p) for p in passes]
    return MoveSite(L, POSITIVE, (region_id, min(indices), max(indices), 0), complex_hash=after_hash)


def check_fresh(complex_: SkeletonComplex, site: MoveSite) -> None:
    if site.complex_hash and site.complex_hash != complex_hash(complex_):
        raise _site_error(site, f"stale site (complex hash {complex_hash(complex_)}, site expects {site.complex_hash})")


def apply_move_detailed(complex_: SkeletonComplex, site: MoveSite, regions: List[RegionOrbit] | None = None,
                        with_inverse: bool = True) -> MoveResult:
    """
    Applies a site and returns the validated result, the old -> new tetrahedron map and the inverse site.

    Raises:
        MoveError: stale or inapplicable site, or a result the validator rejects.
    """
    check_fresh(complex_, site)
    if site.kind in CURVE_KINDS:
        from skelet.services.discs import apply_curve_site
        return apply_curve_site(complex_, site, with_inverse)
    if site.kind == C:
        if site.sign != POSITIVE:
            raise _site_error(site, "only positive C-moves are sites; invert a C-move through its path")
        vertex, variant = site.location
        after, path = c_move(complex_, vertex, variant)
        return MoveResult(after, [], None, path)

    regions = regions if regions is not None else compute_regions(complex_)
    try:
        rewrite, _ = _rewrite(complex_, regions, site)
    except (ValueError, KeyError) as e:
        if isinstance(e, MoveError):
            raise
        raise _site_error(site, str(e)) from e
    after = rewrite.tri.to_complex(complex_.name)
    report = validate(after)
    if not report.ok:
        raise _site_error(site, f"result rejected by the validator: {', '.join(report.codes())}")
    result = MoveResult(after, rewrite.tet_map)
    result.inverse = _inverse_site(site, rewrite, after)
    logger.debug(f"{site.describe()}: counts {report.counts}")
    return result


def apply_move(complex_: SkeletonComplex, site: MoveSite) -> SkeletonComplex:
    return apply_move_detailed(complex_, site, with_inverse=False).complex


def invert(site: MoveSite, before: SkeletonComplex, after: SkeletonComplex) -> MoveSite:
    """Site of the opposite move on `after` that leads back to a complex isomorphic to `before`."""
    if site.kind == C:
        raise _site_error(site, "a C-move inverts as a path, use invert_path")
    result = apply_move_detailed(before, site)
    if complex_hash(result.complex) != complex_hash(after):
        raise _site_error(site, "`after` is not the result of applying the site to `before`")
    if result.inverse is None:
        raise _site_error(site, "no inverse representable")
    return result.inverse


# --- C-moves ------------------------------------------------------------------------

def c_move(complex_: SkeletonComplex, vertex: int, variant: int) -> Tuple[SkeletonComplex, MovePath]:
    """
    Positive C-move at an interior vertex.

    For variant 2k + side with {a, b} = EDGE_PAIRS[k]: a V-move puts a pillow across
    the two faces of the vertex that contain the edge {a, b}; an MP-move across the
    pillow face opposite a (side 0) or b (side 1) turns the V-move's bigon into a
    triangle; the MP-move collapsing that triangle leaves a two-tetrahedron pocket
    with a monogon in face b (side 0) or a (side 1). Net +2 vertices.
    """
    regions = compute_regions(complex_)
    if vertex not in _interior(complex_, regions):
        raise MoveError(f"C+ {vertex} {variant}: vertex is not interior")
    if not 0 <= variant < C_VARIANTS:
        raise MoveError(f"C+ {vertex} {variant}: variant out of range 0..{C_VARIANTS - 1}")
    k, side = divmod(variant, 2)
    a, b = EDGE_PAIRS[k]

    path = MovePath(start_hash=complex_hash(complex_))
    site = MoveSite(V, POSITIVE, (vertex, 2 * k), complex_hash=path.start_hash)
    current = apply_move_detailed(complex_, site, regions).complex
    path.append(site, complex_hash(current))

    pillow = current.vertex_count - 2
    site = MoveSite(MP, POSITIVE, (current.edge_at(pillow, 2 + side)[0],), complex_hash=complex_hash(current))
    result = apply_move_detailed(current, site)
    current, vertex = result.complex, result.tet_map[vertex]
    path.append(site, complex_hash(current))

    regions = compute_regions(current)
    triangle = region_of_tet_edge(current, region_lookup(regions), vertex, a, b)
    site = MoveSite(MP, NEGATIVE, (triangle,), complex_hash=complex_hash(current))
    after = apply_move_detailed(current, site, regions).complex
    path.append(site, complex_hash(after))
    logger.debug(f"C+ {path.sites()[0].location}: {complex_.vertex_count} -> {after.vertex_count} vertices")
    return after, path


def _pillow_applicable(tri: Triangulation, vertex: int, k: int, swap: bool) -> bool:
    try:
        _v_walk(tri, vertex, k, swap)
    except MoveError:
        return False
    return True


# --- enumeration ----------------------------------------------------------------------

def _attempt(complex_: SkeletonComplex, regions: List[RegionOrbit], site: MoveSite) -> bool:
    try:
        apply_move_detailed(complex_, site, regions, with_inverse=False)
    except MoveError as e:
        logger.debug(f"rejected {site.describe()}: {e}")
        return False
    return True


def enumerate_sites(complex_: SkeletonComplex, kind: str, sign: str = POSITIVE,
                    regions: List[RegionOrbit] | None = None) -> List[MoveSite]:
    """
    All applicable sites of one kind and sign, ordered by location.

    Positive MP, V, L and C sites are applicable by construction; negative ones and
    curve kinds are decided by applying the rewrite and validating the result.
    """
    if kind in CURVE_KINDS:
        from skelet.services.discs import enumerate_curve_sites
        return enumerate_curve_sites(complex_, kind)
    regions = regions if regions is not None else compute_regions(complex_)
    h = complex_hash(complex_)
    interior = _interior(complex_, regions)
    marked = set(complex_.marked_regions)
    unmarked = [r for r in regions if r.id not in marked]
    tri = Triangulation.from_complex(complex_)
    sites: List[MoveSite] = []

    if kind == MP and sign == POSITIVE:
        for edge in complex_.edges:
            if not edge.is_loop and edge.end0.vertex in interior and edge.end1.vertex in interior:
                sites.append(MoveSite(MP, POSITIVE, (edge.id,), complex_hash=h))
    elif kind == MP and sign == NEGATIVE:
        for region in unmarked:
            if region.length == 3:
                sites.append(MoveSite(MP, NEGATIVE, (region.id,), complex_hash=h))
    elif kind == V and sign == POSITIVE:
        for vertex in sorted(interior):
            for variant in range(V_VARIANTS):
                if _pillow_applicable(tri, vertex, variant // 2, bool(variant % 2)):
                    sites.append(MoveSite(V, POSITIVE, (vertex, variant), complex_hash=h))
    elif kind == C and sign == POSITIVE:
        for vertex in sorted(interior):
            for variant in range(C_VARIANTS):
                if _pillow_applicable(tri, vertex, variant // 2, False):
                    sites.append(MoveSite(C, POSITIVE, (vertex, variant), complex_hash=h))
    elif kind == L and sign == POSITIVE:
        boundary = closure_edges(complex_, regions)
        for region in unmarked:
            for a in range(region.length):
                for b in range(a + 1, region.length):
                    ea, eb = region.passes[a][0], region.passes[b][0]
                    if ea != eb and ea not in boundary and eb not in boundary:
                        sites.append(MoveSite(L, POSITIVE, (region.id, a, b, 0), complex_hash=h))
    elif kind in (V, L) and sign == NEGATIVE:
        for region in unmarked:
            if region.length != 2:
                continue
            if kind == V:
                try:
                    steps = _bigon_steps(tri, complex_, region, interior)
                except MoveError:
                    continue
                if _v_pattern(tri, steps) is None:
                    continue
            sites.append(MoveSite(kind, NEGATIVE, (region.id,), complex_hash=h))

    if sign == NEGATIVE:
        sites = [s for s in sites if _attempt(complex_, regions, s)]
    sites.sort(key=lambda s: s.location)
    logger.debug(f"{complex_.name}: {len(sites)} {kind}{sign} sites")
    return sites


def enumerate_all(complex_: SkeletonComplex, kinds: Sequence[str]) -> List[MoveSite]:
    """Sites of every kind in `kinds` ("MP" style names expand to both signs, "MP+" to one)."""
    regions = compute_regions(complex_)
    out = []
    for name in kinds:
        kind, signs = parse_kind(name)
        for sign in signs:
            out.extend(enumerate_sites(complex_, kind, sign, regions))
    return out


def parse_kind(name: str) -> Tuple[str, Tuple[str, ...]]:
    if name and name[-1] in (POSITIVE, NEGATIVE):
        return name[:-1], (name[-1],)
    if name == C:
        return C, (POSITIVE,)
    if name in CURVE_KINDS:
        return name, (UNSIGNED,)
    return name, (POSITIVE, NEGATIVE)


# --- paths ------------------------------------------------------------------------------

def invert_path(path: MovePath, start: SkeletonComplex) -> MovePath:
    """
    The reversed path of inverse sites, starting from the end of `path`.

    C steps are expanded into their V and MP steps. Each inverse move lands on a
    complex isomorphic to the corresponding forward state, so every later site is
    carried over to the actual state before it is applied.
    """
    from skelet.services.canonical import transport_site

    states = [start]
    flat: List[MoveSite] = []
    for site, _ in path.steps:
        if site.kind == C:
            _, sub = c_move(states[-1], *site.location)
            subs = sub.sites()
        else:
            subs = [site]
        for sub_site in subs:
            flat.append(sub_site)
            states.append(apply_move(states[-1], sub_site))

    current = states[-1]
    out = MovePath(start_hash=complex_hash(current))
    for i in range(len(flat) - 1, -1, -1):
        back = transport_site(invert(flat[i], states[i], states[i + 1]), states[i + 1], current)
        current = apply_move(current, back)
        out.append(back, complex_hash(current))
    return out


def replay_states(start: SkeletonComplex, path: MovePath) -> List[SkeletonComplex]:
    states = []
    current = start
    for index, (site, expected) in enumerate(path.steps):
        current = apply_move(current, site)
        actual = complex_hash(current)
        if expected and actual != expected:
            raise MoveError(f"step {index} ({site.describe()}): hash {actual} does not match recorded {expected}")
        states.append(current)
    return states


def replay(start: SkeletonComplex, path: MovePath) -> SkeletonComplex:
    """Re-applies a path, checking the recorded hash after every step."""
    if path.start_hash and path.start_hash != complex_hash(start):
        raise MoveError(f"path starts at {path.start_hash}, complex hash is {complex_hash(start)}")
    states = replay_states(start, path)
    return states[-1] if states else start
