from fractions import Fraction

import pytest

from skelet.core.errors import SkelFormatError
from skelet.core.moves_format import format_site, parse_path, parse_sites, serialize_path, serialize_sites
from skelet.core.sites import DISC, L, POSITIVE, UNSIGNED, Crossing, CurveOnSkeleton, MovePath, MoveSite, complex_hash
from skelet.services.moves import enumerate_sites, replay
from skelet.services.transform import scramble


def test_sites_round_trip(theta_txi):
    sites = enumerate_sites(theta_txi, L, POSITIVE)
    text = serialize_sites(sites)
    assert text.splitlines()[0] == "moves v1"
    assert parse_sites(text) == sites


def test_path_round_trip_replays(theta_txi):
    after, path, _ = scramble(theta_txi, 3, ["L", "V+"], rng_seed=5)
    parsed = parse_path(serialize_path(path))
    assert parsed.start_hash == path.start_hash
    assert parsed.rng_seed == 5
    assert [s.location for s in parsed.sites()] == [s.location for s in path.sites()]
    assert complex_hash(replay(theta_txi, parsed)) == complex_hash(after)


def test_empty_path():
    text = serialize_path(MovePath())
    assert text == "moves v1\nseed - -\npath 0\n"
    assert len(parse_path(text)) == 0


def test_curve_site_line():
    line = "site DISC 0 2 2 3 1/2 0 1 5 2/3 2 0"
    (site,) = parse_sites("moves v1\n" + line + "\n")
    assert site.kind == DISC and site.sign == UNSIGNED
    assert site.location == (2,)
    assert site.curve == CurveOnSkeleton((Crossing(3, Fraction(1, 2), 0, 1), Crossing(5, Fraction(2, 3), 2, 0)))
    assert format_site(site) == line


@pytest.mark.parametrize("text, message", [
    ("site L + 0 1 3 0\n", "header"),
    ("moves v1\nsite Q + 0\n", "unknown move kind"),
    ("moves v1\nsite L * 0\n", "unknown sign"),
    ("moves v1\nsite L + 0 x\n", "integer"),
    ("moves v1\nsite L + 0 1 3 0 @nothex\n", "malformed hash"),
    ("moves v1\nsite DISC 0 2 1 3 1/0 0 1\n", "fraction"),
    ("moves v1\nsite DISC 0 2 2 3 1/2 0 1\n", "crossings"),
])
def test_malformed_sites(text, message):
    with pytest.raises(SkelFormatError, match=message):
        parse_sites(text)


def test_path_count_must_match(theta_txi):
    _, path, _ = scramble(theta_txi, 2, ["L"], rng_seed=1)
    text = serialize_path(path).replace("path 2", "path 3")
    with pytest.raises(SkelFormatError, match="announces 3"):
        parse_path(text)


def test_path_sites_need_hashes():
    text = "moves v1\nseed - -\npath 1\nsite L + 0 1 3 0\n"
    with pytest.raises(SkelFormatError) as e:
        parse_path(text)
    assert e.value.line == 4


def test_site_before_path_line():
    with pytest.raises(SkelFormatError, match="before"):
        parse_path("moves v1\nsite L + 0 1 3 0 @0123456789abcdef\npath 1\n")


def test_describe():
    site = MoveSite(L, POSITIVE, (4, 1, 3, 0))
    assert site.describe() == "L+ 4 1 3 0"
