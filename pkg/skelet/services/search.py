"""
Move-graph search over isomorphism classes of skeleta.

Nodes are canonical codes; each node keeps the representative complex it was
reached with, so forward edges replay exactly and backward edges are inverted and
carried over to the actual state when the path is assembled.
"""
from __future__ import annotations

import logging
import time
from collections import deque
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Dict, List, Optional, Sequence, Tuple, Union

import pandas as pd

from skelet.config import JOBS, MAX_DEPTH, MAX_NODES, MAX_SECONDS
from skelet.core.complex import SkeletonComplex
from skelet.core.sites import MovePath, MoveSite, complex_hash
from skelet.services.canonical import canonical_code, is_isomorphic, transport_site
from skelet.services.dual import octopus_signature
from skelet.services.moves import apply_move, enumerate_all, invert_path

logger = logging.getLogger(__name__)

__all__ = [
    "SearchLimits", "SearchStats", "Exhausted", "MoveGraphStats",
    "bfs_connect", "move_graph_stats", "canonical_code", "is_isomorphic",
]


@dataclass(frozen=True)
class SearchLimits:
    max_depth: int = MAX_DEPTH
    max_nodes: int = MAX_NODES
    max_seconds: float = MAX_SECONDS
    jobs: int = JOBS

    def __post_init__(self):
        if self.max_depth < 0:
            raise ValueError(f"max_depth must be non-negative, got {self.max_depth}")
        for name in ("max_nodes", "max_seconds", "jobs"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")


@dataclass
class SearchStats:
    nodes: int = 0
    depth_forward: int = 0
    depth_backward: int = 0
    seconds: float = 0.0
    reason: str = ""


@dataclass
class Exhausted:
    stats: SearchStats

    def __str__(self) -> str:
        s = self.stats
        return (f"exhausted ({s.reason}): {s.nodes} nodes, depth {s.depth_forward}+{s.depth_backward}, "
                f"{s.seconds:.1f}s")


def _expand(args: Tuple[SkeletonComplex, Tuple[str, ...]]) -> List[Tuple[MoveSite, SkeletonComplex, bytes]]:
    complex_, kinds = args
    out = []
    for site in enumerate_all(complex_, kinds):
        after = apply_move(complex_, site)
        out.append((site, after, canonical_code(after).code))
    return out


def _expand_all(frontier: List[SkeletonComplex], kinds: Tuple[str, ...], jobs: int):
    work = [(c, kinds) for c in frontier]
    if jobs > 1 and len(work) > 1:
        with Pool(jobs) as pool:
            return pool.map(_expand, work)
    return [_expand(w) for w in work]


class _Side:
    """One direction of the bidirectional search."""

    def __init__(self, root: SkeletonComplex):
        code = canonical_code(root).code
        self.rep: Dict[bytes, SkeletonComplex] = {code: root}
        self.parent: Dict[bytes, Optional[Tuple[bytes, MoveSite]]] = {code: None}
        self.frontier = deque([code])
        self.depth = 0

    def chain(self, code: bytes) -> List[Tuple[bytes, MoveSite, bytes]]:
        """(parent, site, child) edges from the root down to `code`."""
        out = []
        while self.parent[code] is not None:
            parent, site = self.parent[code]
            out.append((parent, site, code))
            code = parent
        return list(reversed(out))


def _assemble(a: SkeletonComplex, forward: _Side, backward: _Side, meet: bytes) -> MovePath:
    path = MovePath(start_hash=complex_hash(a))
    current = a
    for _, site, child in forward.chain(meet):
        current = apply_move(current, site)
        path.append(site, complex_hash(current))
    for parent, site, child in reversed(backward.chain(meet)):
        theirs = backward.rep[child]
        single = MovePath(start_hash=complex_hash(backward.rep[parent]))
        single.append(site, complex_hash(theirs))
        for back in invert_path(single, backward.rep[parent]).sites():
            ours = transport_site(back, theirs, current)
            theirs = apply_move(theirs, back)
            current = apply_move(current, ours)
            path.append(ours, complex_hash(current))
    return path


def bfs_connect(a: SkeletonComplex, b: SkeletonComplex, kinds: Sequence[str],
                limits: SearchLimits | None = None) -> Union[MovePath, Exhausted]:
    """
    Bidirectional BFS from `a` and `b` over canonical codes.

    Returns a path that replays from `a` to a complex isomorphic to `b`, or Exhausted.
    Frontiers are expanded level by level in code order, so the outcome only depends
    on the inputs and the limits.
    """
    limits = limits or SearchLimits()
    if a.n_marked != b.n_marked:
        raise ValueError(f"complexes have {a.n_marked} and {b.n_marked} marked regions")
    kinds = tuple(kinds)
    started = time.monotonic()
    forward, backward = _Side(a), _Side(b)
    stats = SearchStats(nodes=2)
    meet = next((c for c in forward.rep if c in backward.rep), None)
    if meet is not None:
        return MovePath(start_hash=complex_hash(a))

    while forward.frontier and backward.frontier:
        if forward.depth + backward.depth >= limits.max_depth:
            stats.reason = "max depth"
            break
        side, other = (forward, backward) if len(forward.frontier) <= len(backward.frontier) else (backward, forward)
        level = sorted(side.frontier)
        side.frontier.clear()
        side.depth += 1
        results = _expand_all([side.rep[c] for c in level], kinds, limits.jobs)
        found = None
        for code, children in zip(level, results):
            for site, after, child in children:
                if child in side.rep:
                    continue
                side.rep[child] = after
                side.parent[child] = (code, site)
                side.frontier.append(child)
                stats.nodes += 1
                if found is None and child in other.rep:
                    found = child
        stats.depth_forward, stats.depth_backward = forward.depth, backward.depth
        logger.info(f"search depth {forward.depth}+{backward.depth}: {stats.nodes} nodes")
        if found is not None:
            path = _assemble(a, forward, backward, found)
            logger.info(f"connected with {len(path)} moves after {stats.nodes} nodes")
            return path
        if stats.nodes >= limits.max_nodes:
            stats.reason = "max nodes"
            break
        if time.monotonic() - started > limits.max_seconds:
            stats.reason = "max seconds"
            break
    else:
        stats.reason = "move graph exhausted"
    stats.seconds = time.monotonic() - started
    logger.info(f"search {stats.reason}: {stats.nodes} nodes")
    return Exhausted(stats)


@dataclass
class MoveGraphStats:
    nodes: int
    depth: int
    signatures: Dict[str, int] = field(default_factory=dict)
    moves: Dict[str, int] = field(default_factory=dict)

    @property
    def signature_classes(self) -> int:
        return len(self.signatures)

    def to_frame(self) -> pd.DataFrame:
        """Per-kind move counts, one row per kind."""
        df = pd.DataFrame(sorted(self.moves.items()), columns=["kind", "moves"])
        df["nodes"] = self.nodes
        df["depth"] = self.depth
        return df


def move_graph_stats(complex_: SkeletonComplex, kinds: Sequence[str],
                     limits: SearchLimits | None = None) -> MoveGraphStats:
    """Explores the ball of radius max_depth around `complex_` and counts nodes, signatures and moves."""
    limits = limits or SearchLimits()
    kinds = tuple(kinds)
    started = time.monotonic()
    side = _Side(complex_)
    stats = MoveGraphStats(nodes=1, depth=0)
    stats.signatures[str(octopus_signature(complex_))] = 1
    while side.frontier and side.depth < limits.max_depth:
        level = sorted(side.frontier)
        side.frontier.clear()
        side.depth += 1
        for code, children in zip(level, _expand_all([side.rep[c] for c in level], kinds, limits.jobs)):
            for site, after, child in children:
                key = f"{site.kind}{site.sign}" if site.sign in "+-" else site.kind
                stats.moves[key] = stats.moves.get(key, 0) + 1
                if child in side.rep or stats.nodes >= limits.max_nodes:
                    continue
                side.rep[child] = after
                side.parent[child] = (code, site)
                side.frontier.append(child)
                stats.nodes += 1
                signature = str(octopus_signature(after))
                stats.signatures[signature] = stats.signatures.get(signature, 0) + 1
        stats.depth = side.depth
        logger.info(f"move graph radius {side.depth}: {stats.nodes} nodes, {stats.signature_classes} signatures")
        if time.monotonic() - started > limits.max_seconds:
            break
    return stats
