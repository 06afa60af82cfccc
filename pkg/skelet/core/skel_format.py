"""
SKEL v1 text codec.

    skel v1
    name <identifier>
    vertices <V>
    edge <id> <v0> <g0> <m00> <m01> <m02> <v1> <g1> <m10> <m11> <m12>
    marked <r0> <r1> ...

`#` starts a comment; blank lines are ignored.
"""
import re
from typing import List

from skelet.core.complex import SkeletonComplex, check_structure, make_edge
from skelet.core.errors import SkelFormatError

HEADER = "skel v1"
NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_.\-]*$")


def _tokens(raw_line: str):
    """Yields (column, token) pairs with 1-based columns, comments stripped."""
    line = raw_line.split("#", 1)[0]
    for match in re.finditer(r"\S+", line):
        yield match.start() + 1, match.group()


def _int(token: str, line: int, column: int) -> int:
    if not re.fullmatch(r"-?\d+", token):
        raise SkelFormatError(f"expected an integer, got '{token}'", line, column)
    value = int(token)
    if value < 0:
        raise SkelFormatError(f"expected a non-negative integer, got {value}", line, column)
    return value


def parse_skel(text: str) -> SkeletonComplex:
    """
    Parses a SKEL v1 document.

    Structural invariants are checked (germ coverage, wing bijections, distinct marked
    ids); full skeleton validation, marked ids included, is left to `validate`.

    Raises:
        SkelFormatError: with line and column of the offending token.
        StructureError: for a document that parses into a broken encoding.
    """
    name = None
    vertex_count = None
    edges = []
    marked: List[int] = []
    marked_line = None
    header_seen = False

    for line_no, raw in enumerate(text.splitlines(), start=1):
        toks = list(_tokens(raw))
        if not toks:
            continue
        words = [t for _, t in toks]
        if not header_seen:
            if " ".join(words) != HEADER:
                raise SkelFormatError(f"expected header '{HEADER}'", line_no, toks[0][0])
            header_seen = True
            continue

        keyword = words[0]
        if keyword == "name":
            if len(words) != 2 or not NAME_RE.match(words[1]):
                raise SkelFormatError("expected 'name <identifier>'", line_no, toks[0][0])
            name = words[1]
        elif keyword == "vertices":
            if len(words) != 2:
                raise SkelFormatError("expected 'vertices <V>'", line_no, toks[0][0])
            vertex_count = _int(words[1], line_no, toks[1][0])
        elif keyword == "edge":
            if len(words) != 12:
                raise SkelFormatError(f"edge line needs 11 integers, got {len(words) - 1}", line_no, toks[0][0])
            values = [_int(tok, line_no, col) for col, tok in toks[1:]]
            if values[0] != len(edges):
                raise SkelFormatError(f"edge ids must be consecutive: expected {len(edges)}, got {values[0]}", line_no, toks[1][0])
            edges.append(make_edge(values[0], values[1], values[2], values[3:6], values[6], values[7], values[8:11]))
        elif keyword == "marked":
            if marked_line is not None:
                raise SkelFormatError("duplicate 'marked' line", line_no, toks[0][0])
            marked_line = line_no
            marked = [_int(tok, line_no, col) for col, tok in toks[1:]]
        else:
            raise SkelFormatError(f"unknown keyword '{keyword}'", line_no, toks[0][0])

    if not header_seen:
        raise SkelFormatError(f"missing header '{HEADER}'", 1, 1)
    if name is None:
        raise SkelFormatError("missing 'name' line")
    if vertex_count is None:
        raise SkelFormatError("missing 'vertices' line")

    complex_ = SkeletonComplex(name, vertex_count, tuple(edges), tuple(marked))
    check_structure(complex_)
    return complex_


def serialize(complex_: SkeletonComplex) -> str:
    lines = [HEADER, f"name {complex_.name}", f"vertices {complex_.vertex_count}"]
    for edge in complex_.edges:
        a, b = edge.end0, edge.end1
        fields = [edge.id, a.vertex, a.germ, *a.wing_map, b.vertex, b.germ, *b.wing_map]
        lines.append("edge " + " ".join(str(x) for x in fields))
    lines.append(" ".join(["marked"] + [str(r) for r in complex_.marked_regions]))
    return "\n".join(lines) + "\n"
