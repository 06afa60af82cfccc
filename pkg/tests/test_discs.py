from fractions import Fraction

import pytest

from skelet.core.errors import CurveError, MoveError
from skelet.core.sites import CR, DISC, L, MP, POSITIVE, T1, UNSIGNED, Crossing, CurveOnSkeleton, MoveSite
from skelet.services.canonical import is_isomorphic
from skelet.services.discs import (_layouts, apply_curve_site, attach_disc, candidate_curves, check_curve,
                                   classify_t_kind, disc_replacement, enumerate_curve_sites, find_disc_replacement,
                                   kind_holds, remove_region)
from skelet.services.moves import apply_move, enumerate_sites

VERTICAL = 6


def _edge_bubbles(complex_):
    """Two-crossing curves that leave and re-enter one vertical edge."""
    return [c for c in candidate_curves(complex_, 2)
            if len(c) == 2 and {x.edge for x in c.crossings} == {VERTICAL}]


@pytest.mark.parametrize("crossings, message", [
    ((), "empty"),
    ((Crossing(0, Fraction(1, 2), 0, 1),), "boundary closure"),
    ((Crossing(VERTICAL, Fraction(1, 2), 1, 1),), "distinct wings"),
    ((Crossing(VERTICAL, Fraction(1), 0, 1),), "strictly inside"),
    ((Crossing(VERTICAL, Fraction(1, 2), 0, 1), Crossing(VERTICAL, Fraction(1, 2), 1, 0)), "used twice"),
    ((Crossing(VERTICAL, Fraction(1, 2), 0, 1),), "share a region"),
])
def test_rejected_curves(theta_txi, crossings, message):
    with pytest.raises(CurveError, match=message):
        check_curve(theta_txi, CurveOnSkeleton(crossings))


def test_candidate_curves_are_valid(theta_txi):
    curves = list(candidate_curves(theta_txi, 2))
    assert curves
    for curve in curves:
        check_curve(theta_txi, curve)
        assert 1 <= len(curve) <= 2


def test_no_single_crossing_curves_on_theta_product(theta_txi):
    assert list(candidate_curves(theta_txi, 1)) == []
    assert enumerate_curve_sites(theta_txi, CR) == []


def test_attach_disc_along_an_edge_bubble(theta_txi):
    curve = _edge_bubbles(theta_txi)[0]
    attached = attach_disc(theta_txi, curve)
    assert attached.complex.vertex_count == theta_txi.vertex_count + 2
    assert attached.complex.n_marked == 2
    assert attached.disc_region in attached.candidates
    assert attached.balls[0] != attached.balls[1]


def test_replacing_the_disc_by_itself_is_trivial(theta_txi):
    curve = _edge_bubbles(theta_txi)[0]
    attached = attach_disc(theta_txi, curve)
    result, trace = disc_replacement(theta_txi, curve, attached.disc_region)
    assert is_isomorphic(result, theta_txi)
    assert len(trace) == 2


def test_edge_bubble_is_orientation_preserving(theta_txi):
    curve = _edge_bubbles(theta_txi)[0]
    assert kind_holds(theta_txi, curve, T1)
    assert not kind_holds(theta_txi, curve, CR)
    assert kind_holds(theta_txi, curve, DISC)
    site = MoveSite(DISC, UNSIGNED, (0,), curve)
    assert classify_t_kind(theta_txi, site) == T1


def test_disc_replacement_needs_a_separating_region(theta_txi):
    curve = _edge_bubbles(theta_txi)[0]
    attached = attach_disc(theta_txi, curve)
    outside = next(r for r in range(len(attached.complex.edges) + 1)
                   if r not in attached.candidates)
    with pytest.raises(MoveError, match="separate"):
        disc_replacement(theta_txi, curve, outside)


def test_marked_regions_cannot_be_removed(theta_txi):
    with pytest.raises(MoveError, match="marked"):
        remove_region(theta_txi, theta_txi.marked_regions[0])


def test_classify_needs_a_curve(theta_txi):
    with pytest.raises(MoveError):
        classify_t_kind(theta_txi, MoveSite("L", "+", (0, 1, 3, 0)))


def test_repeated_crossings_are_tried_in_every_order():
    curves = list(_layouts([(VERTICAL, 0, 1), (5, 1, 2), (VERTICAL, 2, 0)]))
    assert len(curves) == 2
    placements = {tuple(x.position for x in c.crossings) for c in curves}
    assert placements == {(Fraction(1, 3), Fraction(1, 2), Fraction(2, 3)),
                          (Fraction(2, 3), Fraction(1, 2), Fraction(1, 3))}
    assert len(list(_layouts([(VERTICAL, 0, 1)] * 3))) == 6


def test_candidate_curves_stay_on_the_given_edges(theta_txi):
    curves = list(candidate_curves(theta_txi, 3, edges=[VERTICAL]))
    assert curves
    assert all(x.edge == VERTICAL for c in curves for x in c.crossings)
    assert list(candidate_curves(theta_txi, 3, edges=[])) == []


@pytest.mark.slow
def test_lune_move_is_a_disc_replacement(theta_txi):
    site = enumerate_sites(theta_txi, L, POSITIVE)[0]
    target = apply_move(theta_txi, site)
    found = find_disc_replacement(theta_txi, target)
    assert found is not None
    assert len(found.curve) >= 4
    after = apply_curve_site(theta_txi, found).complex
    assert is_isomorphic(after, target)


@pytest.mark.slow
def test_mp_move_is_a_disc_replacement(theta_txi):
    split = apply_move(theta_txi, enumerate_sites(theta_txi, L, POSITIVE)[0])
    site = enumerate_sites(split, MP, POSITIVE)[0]
    target = apply_move(split, site)
    found = find_disc_replacement(split, target)
    assert found is not None
    assert len(found.curve) <= 3
    assert is_isomorphic(apply_curve_site(split, found).complex, target)


def test_no_disc_replacement_reaches_another_manifold(theta_txi, theta_kxi):
    assert find_disc_replacement(theta_txi, theta_kxi, max_crossings=2) is None
