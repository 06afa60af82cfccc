import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from skelet.core.sites import DISC, T1, UNSIGNED, MoveSite
from skelet.services.canonical import is_isomorphic
from skelet.services.discs import apply_curve_site, candidate_curves, classify_t_kind, enumerate_curve_sites
from skelet.services.dual import (LinkSummary, OctopusSignature, codualize, dualize, fundamental_walks, h1_rank,
                                  is_orientable, octopus_signature, orientation_character, vertex_links, write_tri)
from skelet.services.transform import scramble
from skelet.utils.gf2 import rank_z2, solve_z2


def test_dual_counts(product):
    dt = dualize(product)
    assert dt.tetrahedra == 4
    assert len(dt.face_pairings) == 8
    assert len(dt.edge_classes) == 5
    assert len(dt.vertex_classes) == 3
    assert dt.marked_edges == product.marked_regions


def test_links_of_torus_product(theta_txi):
    links = sorted(vertex_links(dualize(theta_txi)), key=lambda link: -link.euler)
    assert links == [LinkSummary(2, True), LinkSummary(0, True), LinkSummary(0, True)]


def test_links_of_klein_products(theta_kxi, sigma_kxi):
    for complex_ in (theta_kxi, sigma_kxi):
        links = sorted(vertex_links(dualize(complex_)), key=lambda link: -link.euler)
        assert links == [LinkSummary(2, True), LinkSummary(0, False), LinkSummary(0, False)]


def test_orientability(theta_txi, theta_kxi):
    assert is_orientable(dualize(theta_txi))
    assert not is_orientable(dualize(theta_kxi))


def test_walks_of_the_torus_product_preserve_orientation(theta_txi):
    dt = dualize(theta_txi)
    walks = fundamental_walks(dt)
    assert len(walks) == len(dt.face_pairings) - dt.tetrahedra + 1
    assert all(orientation_character(dt, walk) == 0 for walk in walks)
    assert orientation_character(dt, []) == 0


def test_klein_product_has_an_orientation_reversing_walk(theta_kxi):
    dt = dualize(theta_kxi)
    assert any(orientation_character(dt, walk) == 1 for walk in fundamental_walks(dt))


def test_character_is_additive_over_walks(theta_kxi):
    dt = dualize(theta_kxi)
    walks = fundamental_walks(dt)
    for a in walks:
        for b in walks:
            joined = orientation_character(dt, a + b)
            assert joined == orientation_character(dt, a) ^ orientation_character(dt, b)


def test_orientation_character_rejects_broken_walks(theta_txi):
    dt = dualize(theta_txi)
    open_step = next(i for i, fp in enumerate(dt.face_pairings) if fp.tet0 != fp.tet1)
    with pytest.raises(ValueError, match="started at"):
        orientation_character(dt, [(open_step, 0)])
    with pytest.raises(ValueError, match="not a face pairing"):
        orientation_character(dt, [(len(dt.face_pairings), 0)])
    arrived = dt.face_pairings[0].tet1
    elsewhere = next((i, d) for i, fp in enumerate(dt.face_pairings)
                     for d, source in ((0, fp.tet0), (1, fp.tet1)) if source != arrived)
    with pytest.raises(ValueError, match="leaves tetrahedron"):
        orientation_character(dt, [(0, 0), elsewhere])


@pytest.mark.parametrize("rng_seed", range(5))
def test_orientability_survives_moves(theta_txi, theta_kxi, rng_seed):
    for complex_, expected in ((theta_txi, True), (theta_kxi, False)):
        scrambled, _, _ = scramble(complex_, 4, ["L", "V+", "MP"], rng_seed)
        assert is_orientable(dualize(scrambled)) is expected


def test_codualize_inverts_dualize(product, one_tet):
    for complex_ in (product, one_tet):
        assert is_isomorphic(codualize(dualize(complex_)), complex_)


def test_write_tri(theta_txi):
    text = write_tri(dualize(theta_txi))
    lines = text.splitlines()
    assert lines[0] == "tri v1"
    assert "tetrahedra 4" in lines
    assert sum(line.startswith("glue ") for line in lines) == 8
    assert sum(line.startswith("tentacle ") for line in lines) == 2


def test_octopus_signature_of_products(product, one_tet):
    signature = octopus_signature(product)
    assert signature == OctopusSignature((0, 0), 0, 0)
    assert h1_rank(product) == 0
    closed = octopus_signature(one_tet)
    assert closed.tentacle_flags == ()
    assert closed.total_flag == 0
    assert closed.h1_rank >= 0
    assert str(OctopusSignature((1, 0), 1, 2)) == "tentacles 1 0 total 1 h1 2"


@pytest.mark.parametrize("rng_seed", range(5))
def test_octopus_flags_vanish_after_moves(theta_kxi, rng_seed):
    scrambled, _, _ = scramble(theta_kxi, 3, ["L", "V+", "MP"], rng_seed)
    assert octopus_signature(scrambled) == OctopusSignature((0, 0), 0, 0)


@pytest.mark.slow
def test_t1_sites_keep_the_signature(theta_txi):
    signature = octopus_signature(theta_txi)
    for curve in candidate_curves(theta_txi, 2):
        assert classify_t_kind(theta_txi, MoveSite(DISC, UNSIGNED, (0,), curve)) == T1
    for site in enumerate_curve_sites(theta_txi, T1, max_crossings=2):
        assert classify_t_kind(theta_txi, site) == T1
        assert octopus_signature(apply_curve_site(theta_txi, site).complex) == signature


def test_solve_z2_inconsistent():
    A = np.array([[1, 1], [1, 1]], dtype=np.uint8)
    ok, x = solve_z2(A, np.array([1, 0], dtype=np.uint8))
    assert not ok and x is None


@settings(max_examples=50, deadline=None)
@given(data=st.data(), m=st.integers(1, 6), n=st.integers(1, 6))
def test_solve_z2_finds_a_solution(data, m, n):
    A = data.draw(arrays(np.uint8, (m, n), elements=st.integers(0, 1)))
    x = data.draw(arrays(np.uint8, n, elements=st.integers(0, 1)))
    b = (A.astype(int) @ x.astype(int)) % 2
    ok, found = solve_z2(A, b)
    assert ok
    assert np.array_equal((A.astype(int) @ found.astype(int)) % 2, b)
    assert rank_z2(A) <= min(m, n)


@pytest.mark.slow
@pytest.mark.parametrize("rng_seed", range(50))
def test_duality_on_scrambled_complexes(theta_kxi, rng_seed):
    scrambled, _, _ = scramble(theta_kxi, 1 + rng_seed % 5, ["L", "V+", "MP"], rng_seed)
    dt = dualize(scrambled)
    assert is_isomorphic(codualize(dt), scrambled)
    links = sorted(vertex_links(dt), key=lambda link: -link.euler)
    assert links[0] == LinkSummary(2, True)
    assert [link.euler for link in links[1:]] == [0, 0]
