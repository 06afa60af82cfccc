import pytest

from skelet.core.complex import relabel
from skelet.core.sites import L, POSITIVE, complex_hash
from skelet.services.moves import apply_move, enumerate_sites, replay
from skelet.services.search import Exhausted, SearchLimits, bfs_connect, canonical_code, is_isomorphic, move_graph_stats
from skelet.services.transform import scramble


@pytest.mark.parametrize("field", ["max_nodes", "max_seconds", "jobs"])
def test_limits_must_be_positive(field):
    with pytest.raises(ValueError, match=field):
        SearchLimits(**{field: 0})


def test_depth_may_be_zero():
    assert SearchLimits(max_depth=0).max_depth == 0
    with pytest.raises(ValueError, match="max_depth"):
        SearchLimits(max_depth=-1)


def test_radius_zero_is_the_start_alone(theta_txi, theta_kxi):
    stats = move_graph_stats(theta_txi, ["L", "MP"], SearchLimits(max_depth=0))
    assert stats.nodes == 1
    assert stats.depth == 0
    assert stats.moves == {}
    result = bfs_connect(theta_txi, theta_kxi, [L], SearchLimits(max_depth=0))
    assert isinstance(result, Exhausted)
    assert result.stats.reason == "max depth"


def test_same_complex_gives_empty_path(theta_txi):
    path = bfs_connect(theta_txi, theta_txi, [L])
    assert len(path) == 0
    assert path.start_hash == complex_hash(theta_txi)


def test_isomorphic_copy_gives_empty_path(theta_txi):
    V, E = theta_txi.vertex_count, theta_txi.edge_count
    copy = relabel(theta_txi, list(reversed(range(V))), list(range(E)), [(1, 0, 2, 3)] * V)
    assert is_isomorphic(copy, theta_txi)
    assert len(bfs_connect(theta_txi, copy, [L])) == 0


def test_marked_counts_must_agree(theta_txi, one_tet):
    with pytest.raises(ValueError, match="marked regions"):
        bfs_connect(theta_txi, one_tet, [L])


def test_one_move_apart(theta_txi):
    target = apply_move(theta_txi, enumerate_sites(theta_txi, L, POSITIVE)[-1])
    path = bfs_connect(theta_txi, target, [L], SearchLimits(max_depth=3))
    assert len(path) == 1
    assert is_isomorphic(replay(theta_txi, path), target)


def test_exhausted_move_graph(theta_txi, theta_kxi):
    result = bfs_connect(theta_txi, theta_kxi, ["MP"])
    assert isinstance(result, Exhausted)
    assert result.stats.reason == "move graph exhausted"
    assert "exhausted" in str(result)


def test_depth_limit(theta_txi, theta_kxi):
    result = bfs_connect(theta_txi, theta_kxi, [L], SearchLimits(max_depth=2))
    assert isinstance(result, Exhausted)
    assert result.stats.reason == "max depth"
    assert result.stats.depth_forward + result.stats.depth_backward == 2


def test_move_graph_stats(theta_txi):
    stats = move_graph_stats(theta_txi, ["L+"], SearchLimits(max_depth=1))
    assert stats.depth == 1
    assert stats.moves == {"L+": 3}
    assert 2 <= stats.nodes <= 4
    assert stats.signature_classes == 1
    df = stats.to_frame()
    assert list(df.columns) == ["kind", "moves", "nodes", "depth"]


def test_canonical_code_separates_products(theta_txi, theta_kxi, sigma_kxi):
    codes = {canonical_code(c).code for c in (theta_txi, theta_kxi, sigma_kxi)}
    assert len(codes) == 3


@pytest.mark.slow
@pytest.mark.parametrize("jobs", [1, 2])
def test_reconnect_scrambled(theta_txi, jobs):
    scrambled, _, _ = scramble(theta_txi, 2, [L], rng_seed=2)
    path = bfs_connect(theta_txi, scrambled, [L], SearchLimits(max_depth=4, jobs=jobs))
    assert not isinstance(path, Exhausted)
    assert len(path) <= 2
    assert is_isomorphic(replay(theta_txi, path), scrambled)


@pytest.mark.slow
@pytest.mark.parametrize("rng_seed", range(20))
def test_reconnect_three_moves_apart(theta_txi, rng_seed):
    scrambled, path, _ = scramble(theta_txi, 3, ["MP", "L"], rng_seed)
    found = bfs_connect(theta_txi, scrambled, ["MP", "L"], SearchLimits(max_depth=3, max_nodes=200000, max_seconds=900))
    assert not isinstance(found, Exhausted), str(found)
    assert len(found) <= len(path)
    assert is_isomorphic(replay(theta_txi, found), scrambled)
