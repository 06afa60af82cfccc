import pytest

from skelet.core import validate
from skelet.core.errors import BudgetExceeded
from skelet.core.sites import L, MP, POSITIVE, complex_hash
from skelet.services.dual import octopus_signature
from skelet.services.moves import apply_move, enumerate_sites, replay
from skelet.services.transform import (
    bad_adjacencies,
    defect,
    eliminate_bad_adjacencies,
    is_super_standard,
    scramble,
    split_collar_regions,
    super_standardize,
)


@pytest.fixture
def split(theta_txi):
    return split_collar_regions(theta_txi)[0]


def test_product_seed_is_super_standard(product):
    ok, witness = is_super_standard(product)
    assert ok
    assert witness.interior == ()
    assert witness.q_vertices == ()
    assert len(witness.collars) == product.n_marked
    assert witness.collars[0] == witness.collars[1]
    assert witness.collars[0]
    assert not set(witness.collars[0]) & set(product.marked_regions)
    assert defect(product) == (0, 0, 0)
    assert bad_adjacencies(product) == []


def test_super_standardize_keeps_a_super_standard_input(theta_txi):
    result, path = super_standardize(theta_txi)
    assert result == theta_txi
    assert len(path) == 0
    assert path.start_hash == complex_hash(theta_txi)


def test_closed_skeleton_has_no_collars(one_tet):
    with pytest.raises(ValueError):
        is_super_standard(one_tet)
    with pytest.raises(ValueError):
        super_standardize(one_tet)
    with pytest.raises(ValueError):
        eliminate_bad_adjacencies(one_tet)


def test_split_collar_regions(theta_txi):
    after, path = split_collar_regions(theta_txi)
    assert len(path) == 3
    assert all(site.kind == L and site.sign == POSITIVE for site in path.sites())
    assert after.vertex_count == theta_txi.vertex_count + 6
    assert validate(after).ok
    assert complex_hash(replay(theta_txi, path)) == complex_hash(after)
    assert len(split_collar_regions(after)[1]) == 0


def test_split_product_has_bad_adjacencies(split):
    ok, reason = is_super_standard(split)
    assert not ok
    assert reason.startswith("bad adjacency")
    overlaps, bad, _ = defect(split)
    assert overlaps == 0
    assert bad == len(bad_adjacencies(split)) > 0


def test_split_respects_the_budget(theta_txi):
    with pytest.raises(BudgetExceeded):
        split_collar_regions(theta_txi, budget=2)


def test_super_standardize_respects_the_budget(split):
    with pytest.raises(BudgetExceeded):
        super_standardize(split, budget=0)
    with pytest.raises(BudgetExceeded):
        eliminate_bad_adjacencies(split, budget=0)


def test_super_standardize_the_split_product(split):
    result, path = super_standardize(split)
    assert is_super_standard(result)[0]
    assert len(path) > 0
    assert all(site.kind in (L, MP) for site in path.sites())
    assert complex_hash(replay(split, path)) == complex_hash(result)
    assert str(octopus_signature(result)) == str(octopus_signature(split))
    assert validate(result).boundary_summary == validate(split).boundary_summary


def test_eliminate_bad_adjacencies_on_clean_input(theta_txi):
    result, path = eliminate_bad_adjacencies(theta_txi)
    assert result == theta_txi
    assert len(path) == 0


def test_eliminate_bad_adjacencies_on_the_split_product(split):
    result, path = eliminate_bad_adjacencies(split)
    assert defect(result)[:2] == (0, 0)
    assert bad_adjacencies(result) == []
    assert all(site.kind in (L, MP) for site in path.sites())
    assert complex_hash(replay(split, path)) == complex_hash(result)


@pytest.mark.parametrize("index", range(3))
def test_eliminate_bad_adjacencies_after_one_lune(theta_txi, index):
    site = enumerate_sites(theta_txi, L, POSITIVE)[index]
    start = apply_move(theta_txi, site)
    result, path = eliminate_bad_adjacencies(start)
    assert bad_adjacencies(result) == []
    assert complex_hash(replay(start, path)) == complex_hash(result)


def test_scramble_zero_moves_is_identity(theta_txi):
    after, path, truncated = scramble(theta_txi, 0, [L], rng_seed=3)
    assert after == theta_txi
    assert len(path) == 0
    assert not truncated
    assert path.rng_seed == 3


def test_scramble_is_deterministic(theta_txi):
    first = scramble(theta_txi, 4, ["L", "V+"], rng_seed=11)
    second = scramble(theta_txi, 4, ["L", "V+"], rng_seed=11)
    assert first[1].steps == second[1].steps
    assert complex_hash(first[0]) == complex_hash(second[0])
    assert complex_hash(replay(theta_txi, first[1])) == complex_hash(first[0])


def test_scramble_truncates_without_sites(theta_txi):
    after, path, truncated = scramble(theta_txi, 2, [MP + POSITIVE], rng_seed=0)
    assert truncated
    assert len(path) == 0
    assert after == theta_txi


@pytest.mark.parametrize("k, kinds", [(-1, [L]), (1, [])])
def test_scramble_arguments(theta_txi, k, kinds):
    with pytest.raises(ValueError):
        scramble(theta_txi, k, kinds, rng_seed=0)


@pytest.mark.slow
@pytest.mark.parametrize("rng_seed", range(50))
def test_super_standardize_contract(theta_txi, rng_seed):
    start, _, _ = scramble(theta_txi, 5, ["MP", "L"], rng_seed)
    result, path = super_standardize(start)
    ok, witness = is_super_standard(result)
    assert ok, witness
    assert all(site.kind in (L, MP) for site in path.sites())
    assert complex_hash(replay(start, path)) == complex_hash(result)
    assert str(octopus_signature(result)) == str(octopus_signature(start))
    assert validate(result).boundary_summary == validate(theta_txi).boundary_summary
