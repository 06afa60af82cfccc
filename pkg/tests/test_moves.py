import pytest

from skelet.core import validate
from skelet.core.errors import MoveError
from skelet.core.regions import compute_regions
from skelet.core.sites import C, CR, L, MP, NEGATIVE, POSITIVE, UNSIGNED, V, MovePath, MoveSite, complex_hash
from skelet.core.validator import closure_vertices
from skelet.services.canonical import is_isomorphic
from skelet.services.discs import apply_curve_site, enumerate_curve_sites
from skelet.services.dual import octopus_signature
from skelet.services.moves import (apply_move, apply_move_detailed, c_move, enumerate_all, enumerate_sites, invert,
                                   invert_path, parse_kind, replay, replay_states)
from skelet.services.transform import scramble


@pytest.fixture
def split(theta_txi):
    site = enumerate_sites(theta_txi, L, POSITIVE)[0]
    return apply_move(theta_txi, site)


def test_product_has_no_interior_vertex_moves(theta_txi):
    assert enumerate_sites(theta_txi, MP, POSITIVE) == []
    assert enumerate_sites(theta_txi, V, POSITIVE) == []
    assert enumerate_sites(theta_txi, C, POSITIVE) == []


def test_lune_sites_join_the_vertical_edges(theta_txi):
    sites = enumerate_sites(theta_txi, L, POSITIVE)
    assert len(sites) == 3
    for site in sites:
        assert site.location[1:3] == (1, 3)
        assert site.complex_hash == complex_hash(theta_txi)


def test_lune_move_counts(theta_txi, split):
    report = validate(split)
    assert report.ok
    assert report.counts == (6, 12, 7, 2)
    assert report.boundary_summary == validate(theta_txi).boundary_summary


def test_lune_move_inverts(theta_txi):
    site = enumerate_sites(theta_txi, L, POSITIVE)[0]
    result = apply_move_detailed(theta_txi, site)
    assert result.inverse.kind == L and result.inverse.sign == NEGATIVE
    back = apply_move(result.complex, result.inverse)
    assert is_isomorphic(back, theta_txi)
    assert invert(site, theta_txi, result.complex) == result.inverse


def test_negative_lune_sites_are_applicable(split):
    sites = enumerate_sites(split, L, NEGATIVE)
    assert sites
    for site in sites:
        assert validate(apply_move(split, site)).ok


def test_v_move_adds_two_vertices(split):
    sites = enumerate_sites(split, V, POSITIVE)
    assert sites
    result = apply_move_detailed(split, sites[0])
    assert result.complex.vertex_count == split.vertex_count + 2
    assert is_isomorphic(apply_move(result.complex, result.inverse), split)


def test_mp_move_round_trip(split):
    v_site = enumerate_sites(split, V, POSITIVE)[0]
    bigger = apply_move(split, v_site)
    sites = enumerate_sites(bigger, MP, POSITIVE)
    assert sites
    result = apply_move_detailed(bigger, sites[0])
    assert result.complex.vertex_count == bigger.vertex_count + 1
    assert result.inverse.kind == MP and result.inverse.sign == NEGATIVE
    assert is_isomorphic(apply_move(result.complex, result.inverse), bigger)


def _interior_vertices(complex_):
    return set(range(complex_.vertex_count)) - closure_vertices(complex_, compute_regions(complex_))


def test_c_sites_cover_every_interior_vertex(split):
    sites = enumerate_sites(split, C, POSITIVE)
    interior = _interior_vertices(split)
    assert len(interior) == 2
    assert len(sites) == 12 * len(interior)
    assert {site.location[0] for site in sites} == interior
    assert {site.location[1] for site in sites} == set(range(12))


def test_c_move_expands_into_its_path(split):
    signature = octopus_signature(split)
    for site in enumerate_sites(split, C, POSITIVE):
        after, path = c_move(split, *site.location)
        assert [(s.kind, s.sign) for s in path.sites()] == [(V, POSITIVE), (MP, POSITIVE), (MP, NEGATIVE)]
        assert after.vertex_count == split.vertex_count + 2
        assert validate(after).ok
        assert complex_hash(replay(split, path)) == complex_hash(after)
        assert octopus_signature(after) == signature
        assert any(len(region.passes) == 1 for region in compute_regions(after))


def test_c_move_path_inverts(split):
    site = enumerate_sites(split, C, POSITIVE)[5]
    after, path = c_move(split, *site.location)
    back = invert_path(path, split)
    assert [(s.kind, s.sign) for s in back.sites()] == [(MP, POSITIVE), (MP, NEGATIVE), (V, NEGATIVE)]
    assert is_isomorphic(replay(after, back), split)


def test_c_move_rejects_boundary_vertices_and_bad_variants(split):
    boundary = min(closure_vertices(split, compute_regions(split)))
    with pytest.raises(MoveError):
        c_move(split, boundary, 0)
    with pytest.raises(MoveError):
        c_move(split, min(_interior_vertices(split)), 12)


def test_moves_keep_the_octopus_signature(split):
    signature = octopus_signature(split)
    for site in enumerate_all(split, ["V+", "L+", "L-"])[:6]:
        assert octopus_signature(apply_move(split, site)) == signature


def test_stale_site_is_rejected(theta_txi):
    site = enumerate_sites(theta_txi, L, POSITIVE)[0]
    stale = MoveSite(site.kind, site.sign, site.location, complex_hash="0" * 16)
    with pytest.raises(MoveError, match="stale"):
        apply_move(theta_txi, stale)


def test_inapplicable_sites(theta_txi):
    rectangle = enumerate_sites(theta_txi, L, POSITIVE)[0].location[0]
    with pytest.raises(MoveError, match="length"):
        apply_move(theta_txi, MoveSite(MP, NEGATIVE, (rectangle,)))
    with pytest.raises(MoveError, match="marked"):
        apply_move(theta_txi, MoveSite(L, NEGATIVE, (theta_txi.marked_regions[0],)))
    with pytest.raises(MoveError, match="interior"):
        apply_move(theta_txi, MoveSite(V, POSITIVE, (0, 0)))


def test_parse_kind():
    assert parse_kind("MP+") == (MP, (POSITIVE,))
    assert parse_kind("L") == (L, (POSITIVE, NEGATIVE))
    assert parse_kind("C") == (C, (POSITIVE,))
    assert parse_kind("CR") == ("CR", (UNSIGNED,))


def test_replay_checks_recorded_hashes(theta_txi):
    site = enumerate_sites(theta_txi, L, POSITIVE)[0]
    path = MovePath(start_hash=complex_hash(theta_txi))
    path.append(site, "f" * 16)
    with pytest.raises(MoveError, match="does not match"):
        replay(theta_txi, path)


def test_replay_rejects_wrong_start(theta_txi, theta_kxi):
    path = MovePath(start_hash=complex_hash(theta_kxi))
    with pytest.raises(MoveError, match="starts at"):
        replay(theta_txi, path)
    assert replay(theta_txi, MovePath()) == theta_txi


def test_invert_path_returns_to_the_start(theta_txi):
    after, path, _ = scramble(theta_txi, 3, ["L", "V+", "MP+"], rng_seed=7)
    states = replay_states(theta_txi, path)
    assert complex_hash(states[-1]) == complex_hash(after)
    back = invert_path(path, theta_txi)
    assert back.start_hash == complex_hash(after)
    assert is_isomorphic(replay(after, back), theta_txi)


VERTEX_DELTA = {V: 2, MP: 1, L: 2}


def _scrambled_states(start, count):
    for rng_seed in range(count):
        yield scramble(start, 1 + rng_seed % 4, ["L+", "V+", "MP+", "MP-"], rng_seed)[0]


@pytest.mark.slow
def test_count_deltas_over_many_sites(theta_txi):
    checked = {}
    for state in _scrambled_states(theta_txi, 60):
        before = validate(state).counts
        for site in enumerate_all(state, ["V", "MP", "L"]):
            after = apply_move(state, site)
            V, E, F, n = validate(after).counts
            delta = VERTEX_DELTA[site.kind] * (1 if site.sign == POSITIVE else -1)
            assert V == before[0] + delta
            assert E == 2 * V
            assert F == V + 1
            assert n == before[3]
            checked[(site.kind, site.sign)] = checked.get((site.kind, site.sign), 0) + 1
        if sum(checked.values()) >= 200:
            break
    assert sum(checked.values()) >= 200
    assert checked.get((MP, NEGATIVE), 0) > 0
    assert checked.get((L, NEGATIVE), 0) > 0


@pytest.mark.slow
def test_inverse_sites_round_trip(theta_txi):
    done = 0
    for state in _scrambled_states(theta_txi, 100):
        for site in enumerate_all(state, ["V", "MP", "L"])[:3]:
            result = apply_move_detailed(state, site)
            assert result.inverse.kind == site.kind
            assert result.inverse.sign != site.sign
            assert is_isomorphic(apply_move(result.complex, result.inverse), state)
            done += 1
        if done >= 100:
            break
    assert done >= 100


@pytest.mark.slow
def test_c_and_cr_sites_keep_the_octopus_signature(theta_txi):
    for state in _scrambled_states(theta_txi, 10):
        signature = octopus_signature(state)
        for site in enumerate_sites(state, C, POSITIVE)[:4]:
            assert octopus_signature(c_move(state, *site.location)[0]) == signature
        for site in enumerate_curve_sites(state, CR)[:4]:
            after = apply_curve_site(state, site).complex
            report = validate(after)
            assert report.ok
            assert report.counts[3] == validate(state).counts[3]
            assert octopus_signature(after) == signature
