"""
Move sites, attaching curves and move paths.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

from skelet.core.complex import SkeletonComplex

MP = "MP"
V = "V"
L = "L"
C = "C"
CR = "CR"
T1 = "T1"
T2 = "T2"
DISC = "DISC"

KINDS = (MP, V, L, C, CR, T1, T2, DISC)
SIGNED_KINDS = (MP, V, L, C)
CURVE_KINDS = (CR, T1, T2, DISC)

POSITIVE = "+"
NEGATIVE = "-"
UNSIGNED = "0"


def complex_hash(complex_: SkeletonComplex) -> str:
    """Content hash of the encoding; the name does not take part."""
    h = hashlib.sha256()
    h.update(f"{complex_.vertex_count};".encode())
    for edge in complex_.edges:
        a, b = edge.end0, edge.end1
        h.update(f"{a.vertex},{a.germ},{a.wing_map},{b.vertex},{b.germ},{b.wing_map};".encode())
    h.update(f"marked{complex_.marked_regions}".encode())
    return h.hexdigest()[:16]


@dataclass(frozen=True)
class Crossing:
    edge: int
    position: Fraction
    wing_in: int
    wing_out: int


@dataclass(frozen=True)
class CurveOnSkeleton:
    crossings: Tuple[Crossing, ...]

    def __len__(self) -> int:
        return len(self.crossings)

    def chords(self) -> List[Tuple[Crossing, Crossing]]:
        """(from, to) for each chord; chord i leaves crossing i and enters crossing i + 1."""
        n = len(self.crossings)
        return [(self.crossings[i], self.crossings[(i + 1) % n]) for i in range(n)]


@dataclass(frozen=True)
class MoveSite:
    kind: str
    sign: str
    location: Tuple[int, ...]
    curve: Optional[CurveOnSkeleton] = None
    complex_hash: str = ""

    def describe(self) -> str:
        payload = " ".join(str(x) for x in self.location)
        if self.curve is not None:
            payload += f" curve[{len(self.curve)}]"
        return f"{self.kind}{self.sign if self.sign != UNSIGNED else ''} {payload}".strip()


@dataclass
class MovePath:
    start_hash: str = ""
    rng_seed: Optional[int] = None
    steps: List[Tuple[MoveSite, str]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.steps)

    def sites(self) -> List[MoveSite]:
        return [site for site, _ in self.steps]

    def append(self, site: MoveSite, after_hash: str) -> None:
        self.steps.append((site, after_hash))

    def extend(self, other: "MovePath") -> None:
        self.steps.extend(other.steps)

    @property
    def end_hash(self) -> str:
        return self.steps[-1][1] if self.steps else self.start_hash
