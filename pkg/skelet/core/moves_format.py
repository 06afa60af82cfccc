"""
MOVES v1 text codec for move sites and move paths.

    moves v1
    seed <start-hash> <rng-seed | ->
    path <n>
    site <kind> <sign> <payload...> @<hash-after>
    ...

Outside a path block a `site` line stands alone and its `@<hash>` names the complex
the site applies to. Payloads are the integers of the site location; curve kinds
append `<m>` and then m crossings `<edge> <p/q> <wing-in> <wing-out>`.
"""
import re
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from skelet.core.errors import SkelFormatError
from skelet.core.sites import CURVE_KINDS, KINDS, NEGATIVE, POSITIVE, UNSIGNED, Crossing, CurveOnSkeleton, \
    MovePath, MoveSite

HEADER = "moves v1"
SIGNS = (POSITIVE, NEGATIVE, UNSIGNED)
HASH_RE = re.compile(r"^[0-9a-f]{16}$")


def _tokens(raw_line: str):
    line = raw_line.split("#", 1)[0]
    for match in re.finditer(r"\S+", line):
        yield match.start() + 1, match.group()


def _int(token: str, line: int, column: int) -> int:
    if not re.fullmatch(r"\d+", token):
        raise SkelFormatError(f"expected a non-negative integer, got '{token}'", line, column)
    return int(token)


def _fraction(token: str, line: int, column: int) -> Fraction:
    match = re.fullmatch(r"(\d+)/(\d+)", token)
    if not match or int(match.group(2)) == 0:
        raise SkelFormatError(f"expected a fraction p/q, got '{token}'", line, column)
    return Fraction(int(match.group(1)), int(match.group(2)))


def format_site(site: MoveSite, hash_: Optional[str] = None) -> str:
    words = ["site", site.kind, site.sign, *(str(x) for x in site.location)]
    if site.curve is not None:
        words.append(str(len(site.curve)))
        for x in site.curve.crossings:
            words.extend([str(x.edge), f"{x.position.numerator}/{x.position.denominator}",
                          str(x.wing_in), str(x.wing_out)])
    if hash_:
        words.append(f"@{hash_}")
    return " ".join(words)


def parse_site_line(toks: Sequence[Tuple[int, str]], line: int) -> Tuple[MoveSite, Optional[str]]:
    """Parses the tokens of one `site` line into (site, hash or None)."""
    toks = list(toks)
    hash_ = None
    if toks and toks[-1][1].startswith("@"):
        col, word = toks.pop()
        if not HASH_RE.match(word[1:]):
            raise SkelFormatError(f"malformed hash '{word}'", line, col)
        hash_ = word[1:]
    if len(toks) < 3 or toks[0][1] != "site":
        raise SkelFormatError("expected 'site <kind> <sign> <payload...>'", line, toks[0][0] if toks else 1)
    kind, sign = toks[1][1], toks[2][1]
    if kind not in KINDS:
        raise SkelFormatError(f"unknown move kind '{kind}'", line, toks[1][0])
    if sign not in SIGNS:
        raise SkelFormatError(f"unknown sign '{sign}'", line, toks[2][0])
    rest = toks[3:]

    if kind not in CURVE_KINDS:
        location = tuple(_int(tok, line, col) for col, tok in rest)
        if not location:
            raise SkelFormatError(f"{kind} site needs a location", line, toks[0][0])
        return MoveSite(kind, sign, location, complex_hash=hash_ or ""), hash_

    if len(rest) < 2:
        raise SkelFormatError("curve site needs '<region> <m> <crossings...>'", line, toks[0][0])
    region = _int(rest[0][1], line, rest[0][0])
    m = _int(rest[1][1], line, rest[1][0])
    body = rest[2:]
    if len(body) != 4 * m:
        raise SkelFormatError(f"expected {m} crossings of 4 fields, got {len(body)} fields", line, rest[1][0])
    crossings = []
    for i in range(m):
        (c0, edge), (c1, pos), (c2, w_in), (c3, w_out) = body[4 * i: 4 * i + 4]
        crossings.append(Crossing(_int(edge, line, c0), _fraction(pos, line, c1),
                                  _int(w_in, line, c2), _int(w_out, line, c3)))
    site = MoveSite(kind, sign, (region,), CurveOnSkeleton(tuple(crossings)), complex_hash=hash_ or "")
    return site, hash_


def serialize_path(path: MovePath) -> str:
    rng = "-" if path.rng_seed is None else str(path.rng_seed)
    lines = [HEADER, f"seed {path.start_hash or '-'} {rng}", f"path {len(path)}"]
    for site, after in path.steps:
        lines.append(format_site(site, after))
    return "\n".join(lines) + "\n"


def serialize_sites(sites: Sequence[MoveSite]) -> str:
    lines = [HEADER] + [format_site(site, site.complex_hash or None) for site in sites]
    return "\n".join(lines) + "\n"


def _lines(text: str):
    header_seen = False
    for line_no, raw in enumerate(text.splitlines(), start=1):
        toks = list(_tokens(raw))
        if not toks:
            continue
        if not header_seen:
            if " ".join(t for _, t in toks) != HEADER:
                raise SkelFormatError(f"expected header '{HEADER}'", line_no, toks[0][0])
            header_seen = True
            continue
        yield line_no, toks
    if not header_seen:
        raise SkelFormatError(f"missing header '{HEADER}'", 1, 1)


def parse_path(text: str) -> MovePath:
    """
    Parses a MOVES v1 document holding one path.

    Each site's complex hash is the recorded hash of the state it applies to.

    Raises:
        SkelFormatError: with line and column of the offending token.
    """
    path = MovePath()
    expected = None
    for line_no, toks in _lines(text):
        keyword = toks[0][1]
        if keyword == "seed":
            if len(toks) != 3:
                raise SkelFormatError("expected 'seed <hash> <rng-seed|->'", line_no, toks[0][0])
            start, rng = toks[1][1], toks[2][1]
            if start != "-" and not HASH_RE.match(start):
                raise SkelFormatError(f"malformed hash '{start}'", line_no, toks[1][0])
            path.start_hash = "" if start == "-" else start
            path.rng_seed = None if rng == "-" else _int(rng, line_no, toks[2][0])
        elif keyword == "path":
            if expected is not None or len(toks) != 2:
                raise SkelFormatError("expected a single 'path <n>' line", line_no, toks[0][0])
            expected = _int(toks[1][1], line_no, toks[1][0])
        elif keyword == "site":
            if expected is None:
                raise SkelFormatError("site line before 'path <n>'", line_no, toks[0][0])
            site, after = parse_site_line(toks, line_no)
            if after is None:
                raise SkelFormatError("path site needs '@<hash-after>'", line_no, toks[-1][0])
            site = MoveSite(site.kind, site.sign, site.location, site.curve, path.end_hash)
            path.append(site, after)
        else:
            raise SkelFormatError(f"unknown keyword '{keyword}'", line_no, toks[0][0])
    if expected is None:
        raise SkelFormatError("missing 'path <n>' line")
    if expected != len(path):
        raise SkelFormatError(f"path announces {expected} sites, found {len(path)}")
    return path


def parse_sites(text: str) -> List[MoveSite]:
    sites = []
    for line_no, toks in _lines(text):
        if toks[0][1] != "site":
            raise SkelFormatError(f"unknown keyword '{toks[0][1]}'", line_no, toks[0][0])
        site, _ = parse_site_line(toks, line_no)
        sites.append(site)
    return sites
