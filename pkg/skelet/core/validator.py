"""
Full skeleton validation: every clause is checked and every failure reported.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple

from skelet.core.complex import SkeletonComplex, check_structure
from skelet.core.errors import RegionError
from skelet.core.regions import RegionOrbit, compute_regions

logger = logging.getLogger(__name__)

E_DISCONNECTED = "E_DISCONNECTED"
E_EULER = "E_EULER"
E_SELFREV = "E_SELFREV"
E_BOUNDARY_SURFACE = "E_BOUNDARY_SURFACE"
E_BOUNDARY_GRAPH = "E_BOUNDARY_GRAPH"
E_OVERLAP = "E_OVERLAP"
E_LINKS = "E_LINKS"
E_TENTACLE = "E_TENTACLE"
E_MARKED = "E_MARKED"

TORUS = "torus"
KLEIN_BOTTLE = "klein-bottle"
THETA = "theta"
SIGMA = "sigma"

Counts = Tuple[int, int, int, int]


@dataclass
class ValidationReport:
    ok: bool
    errors: List[Tuple[str, str]] = field(default_factory=list)
    counts: Counts = (0, 0, 0, 0)
    boundary_summary: List[Optional[Tuple[str, str]]] = field(default_factory=list)

    def codes(self) -> List[str]:
        return [code for code, _ in self.errors]


@dataclass(frozen=True)
class Closure:
    vertices: FrozenSet[int]
    edges: FrozenSet[int]
    has_loop: bool


@dataclass(frozen=True)
class DerivedViews:
    """P = Q minus the interiors of the marked regions."""
    regions: Tuple[int, ...]
    singular_edges: Tuple[int, ...]
    boundary_edges: Tuple[int, ...]
    interior_vertices: Tuple[int, ...]
    boundary_vertices: Tuple[int, ...]


def counts(complex_: SkeletonComplex, regions: List[RegionOrbit] | None = None) -> Counts:
    if regions is None:
        try:
            regions = compute_regions(complex_)
        except RegionError:
            regions = []
    return complex_.vertex_count, complex_.edge_count, len(regions), complex_.n_marked


def is_connected(complex_: SkeletonComplex) -> bool:
    if complex_.edge_count == 0:
        return False
    adjacency: Dict[int, List[int]] = {}
    for edge in complex_.edges:
        adjacency.setdefault(edge.end0.vertex, []).append(edge.end1.vertex)
        adjacency.setdefault(edge.end1.vertex, []).append(edge.end0.vertex)
    start = complex_.edges[0].end0.vertex
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in adjacency[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == complex_.vertex_count


def closure(complex_: SkeletonComplex, i: int, regions: List[RegionOrbit] | None = None) -> Closure:
    """Vertices and edges of the closure of marked region i (its boundary graph X_i)."""
    if not 0 <= i < complex_.n_marked:
        raise IndexError(f"marked index {i} out of range (n = {complex_.n_marked})")
    regions = regions if regions is not None else compute_regions(complex_)
    region = regions[complex_.marked_regions[i]]
    edge_ids = frozenset(region.edges())
    vertices = set()
    has_loop = False
    for e in edge_ids:
        edge = complex_.edges[e]
        vertices.update((edge.end0.vertex, edge.end1.vertex))
        has_loop = has_loop or edge.is_loop
    return Closure(frozenset(vertices), edge_ids, has_loop)


def closure_edges(complex_: SkeletonComplex, regions: List[RegionOrbit]) -> FrozenSet[int]:
    out = set()
    for r in complex_.marked_regions:
        out.update(regions[r].edges())
    return frozenset(out)


def closure_vertices(complex_: SkeletonComplex, regions: List[RegionOrbit]) -> FrozenSet[int]:
    out = set()
    for e in closure_edges(complex_, regions):
        edge = complex_.edges[e]
        out.update((edge.end0.vertex, edge.end1.vertex))
    return frozenset(out)


def derived_views(complex_: SkeletonComplex, regions: List[RegionOrbit] | None = None) -> DerivedViews:
    regions = regions if regions is not None else compute_regions(complex_)
    boundary_edges = closure_edges(complex_, regions)
    boundary_vertices = closure_vertices(complex_, regions)
    marked = set(complex_.marked_regions)
    return DerivedViews(
        regions=tuple(r.id for r in regions if r.id not in marked),
        singular_edges=tuple(e.id for e in complex_.edges if e.id not in boundary_edges),
        boundary_edges=tuple(sorted(boundary_edges)),
        interior_vertices=tuple(v for v in range(complex_.vertex_count) if v not in boundary_vertices),
        boundary_vertices=tuple(sorted(boundary_vertices)),
    )


def _check_closure(complex_: SkeletonComplex, i: int, region: RegionOrbit) -> List[Tuple[str, str]]:
    errors = []
    wings_per_edge: Dict[int, int] = {}
    for e, _, _ in region.passes:
        wings_per_edge[e] = wings_per_edge.get(e, 0) + 1
    bad = sorted(e for e, k in wings_per_edge.items() if k != 2)
    if bad:
        errors.append((E_BOUNDARY_SURFACE,
                       f"marked region {region.id} (index {i}): edges {bad} do not carry exactly two of its wings"))
    degree: Dict[int, int] = {}
    for e in wings_per_edge:
        edge = complex_.edges[e]
        for end in (edge.end0, edge.end1):
            degree[end.vertex] = degree.get(end.vertex, 0) + 1
    if len(wings_per_edge) != 3 or len(degree) != 2 or any(d != 3 for d in degree.values()):
        errors.append((E_BOUNDARY_GRAPH,
                       f"marked region {region.id} (index {i}): closure graph has {len(degree)} vertices, "
                       f"{len(wings_per_edge)} edges, degrees {sorted(degree.values())}"))
    return errors


def validate(complex_: SkeletonComplex) -> ValidationReport:
    """
    Checks the marked-boundary skeleton axioms and lists every failed clause.

    Structural problems of the encoding raise StructureError instead; marked ids
    beyond the region count are reported as E_MARKED.
    """
    from skelet.services.dual import dualize, vertex_links

    check_structure(complex_)
    errors: List[Tuple[str, str]] = []
    V, E, n = complex_.vertex_count, complex_.edge_count, complex_.n_marked

    if not is_connected(complex_):
        errors.append((E_DISCONNECTED, "complex is empty or not connected"))
    if E != 2 * V:
        errors.append((E_EULER, f"E = {E} but 2V = {2 * V}"))

    try:
        regions = compute_regions(complex_)
    except RegionError as e:
        errors.append((E_SELFREV, str(e)))
        return ValidationReport(False, errors, (V, E, 0, n), [None] * n)

    F = len(regions)
    report = ValidationReport(False, errors, (V, E, F, n), [None] * n)
    if F != V + 1:
        errors.append((E_EULER, f"F = {F} but V + 1 = {V + 1}"))

    outside = [r for r in complex_.marked_regions if not 0 <= r < F]
    if outside:
        errors.append((E_MARKED, f"marked regions {outside} out of range (complex has {F} regions)"))
        return report

    closures = []
    for i, r in enumerate(complex_.marked_regions):
        errors.extend(_check_closure(complex_, i, regions[r]))
        closures.append(closure(complex_, i, regions))
    for i in range(n):
        for j in range(i + 1, n):
            shared_v = closures[i].vertices & closures[j].vertices
            shared_e = closures[i].edges & closures[j].edges
            if shared_v or shared_e:
                errors.append((E_OVERLAP, f"closures of marked indices {i} and {j} share "
                                          f"vertices {sorted(shared_v)} and edges {sorted(shared_e)}"))

    if V > 0:
        dt = dualize(complex_, regions)
        links = vertex_links(dt)
        spheres = [k for k, link in enumerate(links) if link.euler == 2 and link.orientable]
        others = [k for k, link in enumerate(links) if k not in spheres]
        if len(links) != n + 1 or len(spheres) != 1 or any(links[k].euler != 0 for k in others):
            summary = ", ".join(f"({link.euler}, {link.orientable})" for link in links)
            errors.append((E_LINKS, f"expected {n + 1} vertex classes with one sphere link, got {summary}"))
        ball = spheres[0] if len(spheres) == 1 else None
        reached = []
        for i, r in enumerate(complex_.marked_regions):
            a, b = dt.edge_endpoints(r)
            if ball is None or ball not in (a, b) or a == b:
                errors.append((E_TENTACLE, f"dual edge of marked index {i} joins classes {a} and {b}, not the ball"))
                continue
            far = b if a == ball else a
            if far in reached:
                errors.append((E_TENTACLE, f"dual edge of marked index {i} reaches boundary class {far} twice"))
            reached.append(far)
            link = links[far]
            surface = TORUS if link.orientable else KLEIN_BOTTLE
            graph = SIGMA if closures[i].has_loop else THETA
            report.boundary_summary[i] = (surface, graph)
            if link.euler == 0 and (surface, graph) == (TORUS, SIGMA):
                errors.append((E_BOUNDARY_GRAPH, f"marked index {i}: sigma graph on a torus"))

    report.ok = not errors
    if errors:
        logger.debug(f"validate {complex_.name}: {len(errors)} failures: {', '.join(c for c, _ in errors)}")
    return report


def boundary_graph_type(complex_: SkeletonComplex, i: int) -> Tuple[str, str]:
    if not 0 <= i < complex_.n_marked:
        raise IndexError(f"marked index {i} out of range (n = {complex_.n_marked})")
    report = validate(complex_)
    summary = report.boundary_summary[i]
    if summary is None:
        raise ValueError(f"boundary of marked index {i} is not well-formed: {report.codes()}")
    return summary
