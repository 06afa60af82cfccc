"""
Super-standardization and the random scrambler.

A skeleton is super-standard when, for every boundary component X_i, the regions
touching X_i form a collar X_i x [0, 1) and the rest, Q, is a standard polyhedron
without boundary, or is empty when the collars fill the skeleton (the product seeds).
Collars are read per component, so one region may lie in the collars of two
components. Skeleta are brought into that shape by a best-first search over L- and
MP-moves under an expansion budget.
"""
from __future__ import annotations

import heapq
import itertools
import logging
import random
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Set, Tuple

from skelet.config import BUDGET_BASE, BUDGET_FACTOR
from skelet.core.complex import GERMS, SkeletonComplex
from skelet.core.errors import BudgetExceeded, MoveError
from skelet.core.regions import RegionOrbit, compute_regions, region_lookup
from skelet.core.sites import L, POSITIVE, MovePath, MoveSite, complex_hash
from skelet.core.validator import closure, closure_edges, closure_vertices
from skelet.services.dual import UnionFind
from skelet.services.moves import apply_move, enumerate_all

logger = logging.getLogger(__name__)

Defect = Tuple[int, int, int]

# expanded when a state first comes up; L+ only when it comes up again two vertices later
NARROW_KINDS = ("MP-", "L-", "MP+")
WIDE_KINDS = ("L+",)


@dataclass(frozen=True)
class SuperStandardWitness:
    collars: Tuple[Tuple[int, ...], ...]
    interior: Tuple[int, ...]
    q_vertices: Tuple[int, ...]


@dataclass
class _Shape:
    """Collar bookkeeping for one complex."""
    regions: List[RegionOrbit]
    lookup: Dict[Tuple[int, int], Tuple[int, int]]
    closed_edges: frozenset
    closed_vertices: frozenset
    component_vertices: List[frozenset]
    boundary_hits: Dict[int, Counter]
    vertical: Set[int]

    def owners(self, region: int) -> Set[int]:
        return set(self.boundary_hits[region])


def _shape(complex_: SkeletonComplex) -> _Shape:
    regions = compute_regions(complex_)
    closed = closure_edges(complex_, regions)
    vertices = closure_vertices(complex_, regions)
    marked = set(complex_.marked_regions)
    edge_owner = {}
    component_vertices = []
    for i in range(complex_.n_marked):
        c = closure(complex_, i, regions)
        component_vertices.append(frozenset(c.vertices))
        for e in c.edges:
            edge_owner[e] = i
    hits: Dict[int, Counter] = {}
    for region in regions:
        if region.id in marked:
            continue
        touched = [edge_owner[e] for e, _, _ in region.passes if e in closed]
        if touched:
            hits[region.id] = Counter(touched)
    vertical = {e.id for e in complex_.edges
                if e.id not in closed and (e.end0.vertex in vertices or e.end1.vertex in vertices)}
    return _Shape(regions, region_lookup(regions), closed, vertices, component_vertices, hits, vertical)


def _wing_regions(shape: _Shape, edge_id: int) -> List[int]:
    return [shape.lookup[(edge_id, w)][0] for w in range(3)]


def _overlaps(shape: _Shape) -> List[Tuple[int, int]]:
    """(region, count) for collar regions meeting one boundary component more than once."""
    return [(r, max(hits.values())) for r, hits in sorted(shape.boundary_hits.items()) if max(hits.values()) > 1]


def bad_adjacencies(complex_: SkeletonComplex, shape: Optional[_Shape] = None) -> List[Tuple[int, int, int]]:
    """
    Edges along which two collar wings meet away from the boundary graphs.

    Two wings may share an edge only when it ends on the closure of a component both
    collars belong to; the wings may be one region passing twice.
    Returns (edge, region, region) triples, one per bad edge.
    """
    shape = shape or _shape(complex_)
    bad = []
    for edge in complex_.edges:
        if edge.id in shape.closed_edges:
            continue
        collars = [r for r in _wing_regions(shape, edge.id) if r in shape.boundary_hits]
        ends = {edge.end0.vertex, edge.end1.vertex}
        for r, s in itertools.combinations(collars, 2):
            shared = shape.owners(r) & shape.owners(s)
            if not any(ends & shape.component_vertices[i] for i in shared):
                bad.append((edge.id, r, s))
                break
    return bad


def _q_defect(complex_: SkeletonComplex, shape: _Shape) -> Tuple[int, List[int]]:
    """Failures of Q (the part away from the collars) to be standard, and its true vertices."""
    marked = set(complex_.marked_regions)
    interior = [r.id for r in shape.regions if r.id not in marked and r.id not in shape.boundary_hits]
    if not interior:
        return 0, []
    collar_wings = {e.id: sum(1 for r in _wing_regions(shape, e.id) if r in shape.boundary_hits)
                    for e in complex_.edges if e.id not in shape.closed_edges}
    uf = UnionFind(interior)
    smooth = [e for e, k in collar_wings.items() if k == 1 and e not in shape.vertical]
    for e in smooth:
        inside = [r for r in _wing_regions(shape, e) if r in uf.parent]
        for r in inside[1:]:
            uf.union(inside[0], r)

    def incident(v: int) -> List[int]:
        return [complex_.edge_at(v, g)[0] for g in GERMS]

    chi: Dict[int, int] = {}
    for r in interior:
        chi[uf.find(r)] = chi.get(uf.find(r), 0) + 1
    for e in smooth:
        r = next(r for r in _wing_regions(shape, e) if r in uf.parent)
        chi[uf.find(r)] -= 1
    q_vertices = []
    chain_vertices = set()
    for v in range(complex_.vertex_count):
        if v in shape.closed_vertices:
            continue
        edges = incident(v)
        ks = [collar_wings[e] for e in edges]
        if all(k == 0 and e not in shape.vertical for e, k in zip(edges, ks)):
            q_vertices.append(v)
        elif all(k >= 1 or e in shape.vertical for e, k in zip(edges, ks)):
            e = next((e for e in edges if e in smooth), None)
            if e is not None:
                r = next(r for r in _wing_regions(shape, e) if r in uf.parent)
                chi[uf.find(r)] += 1
        else:
            chain_vertices.add(v)
    failures = sum(abs(1 - x) for x in chi.values())

    singular = [e for e, k in collar_wings.items() if k == 0 and e not in shape.vertical]
    links = UnionFind(singular)
    for v in chain_vertices:
        through = [e for e in incident(v) if e in links.parent]
        for e in through[1:]:
            links.union(through[0], e)
    anchored = set()
    for v in q_vertices:
        anchored.update(links.find(e) for e in incident(v) if e in links.parent)
    failures += len({links.find(e) for e in singular} - anchored)
    if not q_vertices:
        failures += 1
    return failures, q_vertices


def _diagnose(complex_: SkeletonComplex) -> Tuple[Defect, Optional[str], _Shape, List[int]]:
    shape = _shape(complex_)
    overlaps = _overlaps(shape)
    if overlaps:
        split = sum(sum(hits.values()) - len(hits) for hits in shape.boundary_hits.values())
        return (split, 0, 0), f"region meets {overlaps[0][1]} boundary edges", shape, []
    bad = bad_adjacencies(complex_, shape)
    if bad:
        e, r, s = bad[0]
        return (0, len(bad), 0), f"bad adjacency between regions {r} and {s} along edge {e}", shape, []
    failures, q_vertices = _q_defect(complex_, shape)
    if failures:
        return (0, 0, failures), f"interior part is not standard ({failures} defects)", shape, q_vertices
    return (0, 0, 0), None, shape, q_vertices


def defect(complex_: SkeletonComplex) -> Defect:
    """(collar overlaps, bad adjacencies, Q failures); zero exactly on super-standard skeleta."""
    return _diagnose(complex_)[0]


def is_super_standard(complex_: SkeletonComplex) -> Tuple[bool, SuperStandardWitness | str]:
    """
    Checks the collar decomposition P = Q u (X x [0, 1)).

    Returns (True, witness) or (False, reason).

    Raises:
        ValueError: for closed skeleta (no marked region).
    """
    if complex_.n_marked == 0:
        raise ValueError("super-standardness is defined for skeleta with marked boundary only")
    _, reason, shape, q_vertices = _diagnose(complex_)
    if reason is not None:
        return False, reason
    collars = tuple(tuple(sorted(r for r, hits in shape.boundary_hits.items() if k in hits))
                    for k in range(complex_.n_marked))
    marked = set(complex_.marked_regions)
    interior = tuple(r.id for r in shape.regions if r.id not in marked and r.id not in shape.boundary_hits)
    return True, SuperStandardWitness(collars, interior, tuple(q_vertices))


class _Budget:
    def __init__(self, complex_: SkeletonComplex, budget: Optional[int], unit: str = "moves"):
        self.left = budget if budget is not None else BUDGET_FACTOR * complex_.vertex_count + BUDGET_BASE
        self.unit = unit

    def spend(self, n: int = 1) -> None:
        self.left -= n
        if self.left < 0:
            raise BudgetExceeded(f"super-standardization did not converge within the {self.unit} budget")


def split_collar_regions(complex_: SkeletonComplex, budget: Optional[int] = None) -> Tuple[SkeletonComplex, MovePath]:
    """
    L+ moves until every unmarked region meets at most one boundary edge.

    A region meeting m boundary edges takes m - 1 moves: each move cuts it between
    two interior passes that separate its boundary passes.
    """
    spend = _Budget(complex_, budget)
    current = complex_
    path = MovePath(start_hash=complex_hash(complex_))
    while True:
        shape = _shape(current)
        site = None
        for r, hits in sorted(shape.boundary_hits.items()):
            if sum(hits.values()) > 1:
                site = _separating_site(current, shape.regions[r], shape.closed_edges)
                break
        if site is None:
            return current, path
        spend.spend()
        current = apply_move(current, site)
        path.append(site, complex_hash(current))
        logger.info(f"split collar region {site.location[0]}: V = {current.vertex_count}")


def _separating_site(complex_: SkeletonComplex, region: RegionOrbit, closed) -> MoveSite:
    passes = region.passes
    n = len(passes)
    for a in range(n):
        for b in range(a + 1, n):
            ea, eb = passes[a][0], passes[b][0]
            if ea == eb or ea in closed or eb in closed:
                continue
            inside = any(passes[i][0] in closed for i in range(a + 1, b))
            outside = any(passes[i][0] in closed for i in list(range(b + 1, n)) + list(range(a)))
            if inside and outside:
                return MoveSite(L, POSITIVE, (region.id, a, b, 0), complex_hash=complex_hash(complex_))
    raise BudgetExceeded(f"no L-move separates the boundary edges of region {region.id}")


def _trace(seen: Dict[str, Tuple[Optional[str], Optional[MoveSite], SkeletonComplex]], key: str) -> MovePath:
    steps = []
    while seen[key][0] is not None:
        parent, site, _ = seen[key]
        steps.append((site, key))
        key = parent
    path = MovePath(start_hash=key)
    for site, after_hash in reversed(steps):
        path.append(site, after_hash)
    return path


def _search(complex_: SkeletonComplex, goal: Callable[[Defect], bool], spend: _Budget,
            label: str) -> Tuple[SkeletonComplex, MovePath]:
    """
    Best-first search for the nearest complex whose defect satisfies `goal`.

    States are taken smallest first, then by defect. A state is expanded with
    NARROW_KINDS when it first comes up and with WIDE_KINDS when it comes up again
    at two vertices more. Every expansion is charged to `spend`.
    """
    start = complex_hash(complex_)
    seen = {start: (None, None, complex_)}
    heap = [(complex_.vertex_count, defect(complex_), 0, start)]
    expansions = 0
    while heap:
        size, value, wide, key = heapq.heappop(heap)
        spend.spend()
        expansions += 1
        current = seen[key][2]
        if not wide:
            heapq.heappush(heap, (size + 2, value, 1, key))
        for site in enumerate_all(current, WIDE_KINDS if wide else NARROW_KINDS):
            try:
                after = apply_move(current, site)
            except MoveError:
                continue
            after_key = complex_hash(after)
            if after_key in seen:
                continue
            seen[after_key] = (key, site, after)
            after_value = defect(after)
            if goal(after_value):
                path = _trace(seen, after_key)
                logger.info(f"{label}: defect {after_value} after {expansions} expansions, {len(path)} moves")
                return after, path
            heapq.heappush(heap, (after.vertex_count, after_value, 0, after_key))
        logger.debug(f"{label}: expanded V = {size} defect {value}, {len(heap)} queued")
    raise BudgetExceeded(f"{label}: move graph exhausted after {expansions} expansions")


def eliminate_bad_adjacencies(complex_: SkeletonComplex,
                              budget: Optional[int] = None) -> Tuple[SkeletonComplex, MovePath]:
    """
    Removes bad collar adjacencies. Each round searches the nearest skeleton with fewer
    of them and no collar meeting a component twice, so the count strictly drops.

    Raises:
        ValueError: for closed skeleta.
        BudgetExceeded: more than `budget` expansions in total (default 10 V + 100).
    """
    if complex_.n_marked == 0:
        raise ValueError("bad adjacencies are defined for skeleta with marked boundary only")
    spend = _Budget(complex_, budget, "expansion")
    current = complex_
    path = MovePath(start_hash=complex_hash(complex_))
    value = defect(current)[:2]
    while any(value):
        current, steps = _search(current, lambda d, v=value: d[:2] < v, spend, "eliminate bad adjacencies")
        path.extend(steps)
        value = defect(current)[:2]
        logger.info(f"eliminate bad adjacencies: {value[1]} left, V = {current.vertex_count}")
    return current, path


def super_standardize(complex_: SkeletonComplex, budget: Optional[int] = None) -> Tuple[SkeletonComplex, MovePath]:
    """
    Nearest super-standard skeleton reachable by L- and MP-moves.

    Already super-standard input comes back unchanged with an empty path.

    Raises:
        ValueError: for closed skeleta.
        BudgetExceeded: more than `budget` expansions (default 10 V + 100).
    """
    if complex_.n_marked == 0:
        raise ValueError("super-standardization needs marked boundary")
    if not any(defect(complex_)):
        return complex_, MovePath(start_hash=complex_hash(complex_))
    current, path = _search(complex_, lambda d: not any(d), _Budget(complex_, budget, "expansion"),
                            "super-standardize")
    logger.info(f"super-standard after {len(path)} moves: V = {current.vertex_count}")
    return current, path


def scramble(complex_: SkeletonComplex, k: int, kinds: Sequence[str],
             rng_seed: int) -> Tuple[SkeletonComplex, MovePath, bool]:
    """
    Applies k uniformly chosen applicable sites.

    Returns (complex, path, truncated); truncated is True when some step had no site.
    """
    if not kinds:
        raise ValueError("scramble needs at least one move kind")
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    rng = random.Random(rng_seed)
    current = complex_
    path = MovePath(start_hash=complex_hash(complex_), rng_seed=rng_seed)
    for step in range(k):
        sites = enumerate_all(current, kinds)
        if not sites:
            logger.warning(f"scramble stopped at step {step}: no applicable site")
            return current, path, True
        site = rng.choice(sites)
        current = apply_move(current, site)
        path.append(site, complex_hash(current))
        logger.debug(f"scramble step {step}: {site.describe()}")
    return current, path, False
