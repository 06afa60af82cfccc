import pytest

from skelet.core import compute_regions, validate
from skelet.core.complex import EdgeEnd, EdgeRecord, SkeletonComplex
from skelet.core.seeds import census_one_tetrahedron, one_tetrahedron_candidates
from skelet.core.validator import (E_BOUNDARY_SURFACE, E_DISCONNECTED, E_LINKS, KLEIN_BOTTLE, SIGMA, THETA, TORUS,
                                   boundary_graph_type, closure, derived_views)


def test_product_seeds_are_accepted(product):
    report = validate(product)
    assert report.ok, report.errors
    assert report.counts == (4, 8, 5, 2)


@pytest.mark.parametrize("name, expected", [
    ("product_theta_TxI", (TORUS, THETA)),
    ("product_theta_KxI", (KLEIN_BOTTLE, THETA)),
    ("product_sigma_KxI", (KLEIN_BOTTLE, SIGMA)),
])
def test_boundary_types(name, expected):
    from skelet.core.seeds import seed
    complex_ = seed(name)
    assert validate(complex_).boundary_summary == [expected, expected]
    assert boundary_graph_type(complex_, 1) == expected


def test_boundary_graph_type_index(theta_txi):
    with pytest.raises(IndexError):
        boundary_graph_type(theta_txi, 2)


def test_one_tetrahedron_closed_seed(one_tet):
    report = validate(one_tet)
    assert report.ok, report.errors
    assert report.counts == (1, 2, 2, 0)


def test_dropping_a_marked_region_breaks_the_links(theta_txi):
    report = validate(theta_txi.with_marked(theta_txi.marked_regions[:1]))
    assert not report.ok
    assert E_LINKS in report.codes()


def test_marking_a_rectangle_is_rejected(theta_txi):
    rectangle = next(r.id for r in compute_regions(theta_txi) if r.id not in theta_txi.marked_regions)
    report = validate(theta_txi.with_marked([theta_txi.marked_regions[0], rectangle]))
    assert not report.ok
    assert E_BOUNDARY_SURFACE in report.codes()


def test_disconnected_union(one_tet):
    shifted = []
    for edge in one_tet.edges:
        ends = [EdgeEnd(end.vertex + 1, end.germ, end.wing_map) for end in (edge.end0, edge.end1)]
        shifted.append(EdgeRecord(edge.id + one_tet.edge_count, *ends))
    union = SkeletonComplex("union", 2, one_tet.edges + tuple(shifted), ())
    report = validate(union)
    assert not report.ok
    assert E_DISCONNECTED in report.codes()


def test_closures_and_derived_views(theta_txi):
    regions = compute_regions(theta_txi)
    for i in range(2):
        c = closure(theta_txi, i, regions)
        assert len(c.edges) == 3
        assert len(c.vertices) == 2
        assert not c.has_loop
    views = derived_views(theta_txi, regions)
    assert views.interior_vertices == ()
    assert views.boundary_edges == tuple(range(6))
    assert views.singular_edges == (6, 7)
    assert len(views.regions) == 3


def test_sigma_closure_has_loops(sigma_kxi):
    assert closure(sigma_kxi, 0).has_loop


def test_one_tetrahedron_census():
    df = census_one_tetrahedron()
    assert len(df) == 108
    assert list(df["candidate"]) == list(range(108))
    accepted = df[df["accepted"]]
    assert len(accepted) >= 1
    assert (accepted["errors"] == "").all()
    assert (accepted["regions"] == 2).all()
    assert df.equals(census_one_tetrahedron())


def test_candidate_order_is_stable():
    first = [c for *_, c in one_tetrahedron_candidates()][:3]
    again = [c for *_, c in one_tetrahedron_candidates()][:3]
    assert first == again
