"""
Built-in seed complexes.

Product seeds encode Q = (X x I) u (S x {0, 1}) for a two-vertex trivalent graph X
spanning a surface S. Both layers use the rotation 0 -> 1 -> 2 at every graph vertex;
germ 3 is the vertical edge.
"""
import itertools
import logging
from functools import lru_cache
from typing import List, Sequence, Tuple

import pandas as pd

from skelet.core.complex import SkeletonComplex, make_edge
from skelet.core.regions import compute_regions, region_lookup
from skelet.core.validator import validate

logger = logging.getLogger(__name__)

VERTICAL = 3

# (tail vertex, tail germ, head vertex, head germ, twisted); vertices 0 = p, 1 = q
GraphEdge = Tuple[int, int, int, int, bool]

THETA_UNTWISTED: List[GraphEdge] = [(0, 0, 1, 0, False), (0, 1, 1, 1, False), (0, 2, 1, 2, False)]
THETA_TWISTED: List[GraphEdge] = [(0, 0, 1, 0, False), (0, 1, 1, 1, True), (0, 2, 1, 2, False)]
SIGMA_TWISTED_LOOPS: List[GraphEdge] = [(0, 0, 0, 1, True), (0, 2, 1, 2, False), (1, 0, 1, 1, True)]


def _rot(g: int) -> int:
    return (g + 1) % 3


def _rot_inv(g: int) -> int:
    return (g + 2) % 3


def product_seed(name: str, graph: Sequence[GraphEdge]) -> SkeletonComplex:
    """
    Builds the product complex over a ribbon graph.

    Horizontal wings: 0 runs along the side following the rotation at the tail,
    1 along the other side, 2 into the vertical rectangle over the edge. Vertical
    edge wing i is the rectangle over dart i.
    """
    edges = []
    for layer in (0, 1):
        for tail, g_tail, head, g_head, twisted in graph:
            m0 = [_rot(g_tail), _rot_inv(g_tail), VERTICAL]
            if twisted:
                m1 = [_rot(g_head), _rot_inv(g_head), VERTICAL]
            else:
                m1 = [_rot_inv(g_head), _rot(g_head), VERTICAL]
            edges.append(make_edge(len(edges), 2 * layer + tail, g_tail, m0, 2 * layer + head, g_head, m1))
    for v in (0, 1):
        edges.append(make_edge(len(edges), v, VERTICAL, [0, 1, 2], v + 2, VERTICAL, [0, 1, 2]))

    complex_ = SkeletonComplex(name, 4, tuple(edges), ())
    lookup = region_lookup(compute_regions(complex_))
    layer_size = len(graph)
    marked = [lookup[(0, 0)][0], lookup[(layer_size, 0)][0]]
    return complex_.with_marked(marked)


def one_tetrahedron_candidates():
    """All 108 ways to pair the faces of one tetrahedron, in lexicographic order of the encoding."""
    for pairs in (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))):
        images = [list(itertools.permutations([x for x in range(4) if x != g])) for _, g in pairs]
        for perm0 in images[0]:
            for perm1 in images[1]:
                edges = []
                for (f, g), perm in zip(pairs, (perm0, perm1)):
                    m0 = [x for x in range(4) if x != f]
                    edges.append(make_edge(len(edges), 0, f, m0, 0, g, perm))
                yield pairs, perm0, perm1, SkeletonComplex("one_tet_closed", 1, tuple(edges), ())


def census_one_tetrahedron() -> pd.DataFrame:
    """Validation outcome for every one-tetrahedron face pairing."""
    rows = []
    for index, (pairs, perm0, perm1, complex_) in enumerate(one_tetrahedron_candidates()):
        report = validate(complex_)
        rows.append({
            "candidate": index,
            "pairing": " ".join(f"{f}-{g}" for f, g in pairs),
            "perm0": " ".join(map(str, perm0)),
            "perm1": " ".join(map(str, perm1)),
            "regions": report.counts[2],
            "accepted": report.ok,
            "errors": ",".join(sorted(set(report.codes()))),
        })
    df = pd.DataFrame(rows)
    logger.info(f"one-tetrahedron census: {int(df['accepted'].sum())} of {len(df)} candidates accepted")
    return df


@lru_cache(maxsize=1)
def _one_tet_closed() -> SkeletonComplex:
    for _, _, _, complex_ in one_tetrahedron_candidates():
        if validate(complex_).ok:
            return complex_
    raise RuntimeError("no one-tetrahedron face pairing is accepted by the validator")


SEEDS = {
    "product_theta_TxI": lambda: product_seed("product_theta_TxI", THETA_UNTWISTED),
    "product_theta_KxI": lambda: product_seed("product_theta_KxI", THETA_TWISTED),
    "product_sigma_KxI": lambda: product_seed("product_sigma_KxI", SIGMA_TWISTED_LOOPS),
    "one_tet_closed": _one_tet_closed,
}


def seed(name: str) -> SkeletonComplex:
    if name not in SEEDS:
        raise ValueError(f"unknown seed '{name}'; available: {', '.join(SEEDS)}")
    return SEEDS[name]()
