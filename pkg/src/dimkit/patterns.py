"""Induced-subgraph detectors used by the solver's preprocessing.

A graph with a dominating induced matching cannot contain K4.  Two other
small patterns pin matching edges outright: in an induced diamond (K4 minus
an edge) the edge joining the two degree-3 vertices must be in the matching;
in an induced butterfly (two triangles sharing one vertex) both non-center
edges must be.  Detection works on bit-rows; everything is deterministic,
ascending-id order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .graph import Edge, Graph, bits


@dataclass(frozen=True)
class PatternHit:
    kind: str  # "K4" | "diamond" | "butterfly"
    vertices: tuple[int, ...]
    forced_edges: tuple[Edge, ...]


class ScanBudget(Exception):
    """Raised when a bounded enumeration runs out of steps."""


def find_k4(g: Graph, within: int | None = None) -> PatternHit | None:
    """Lexicographically first K4 (inside `within` if given), or None."""
    scope = (1 << g.n) - 1 if within is None else within
    for a in bits(scope):
        row_a = g.rows[a] & scope >> (a + 1) << (a + 1)  # neighbors above a
        for b in bits(row_a):
            common_ab = g.rows[a] & g.rows[b] & scope
            for c in bits(common_ab >> (b + 1) << (b + 1)):
                for d in bits(common_ab & g.rows[c] >> (c + 1) << (c + 1)):
                    return PatternHit("K4", (a, b, c, d), ())
    return None


def iter_diamonds(g: Graph) -> Iterator[PatternHit]:
    """All induced diamonds; forced edge = the one joining both degree-3
    vertices.  Emitted per (mid-edge, wing pair)."""
    for u in range(g.n):
        for v in bits(g.rows[u] >> (u + 1) << (u + 1)):
            wings = g.common_neighbors(u, v)
            for a in bits(wings):
                for b in bits(wings >> (a + 1) << (a + 1)):
                    if not g.has_edge(a, b):
                        yield PatternHit("diamond", (u, v, a, b), ((u, v),))


def iter_butterflies(g: Graph) -> Iterator[PatternHit]:
    """All induced butterflies; forced edges = the two non-center edges."""
    for c in range(g.n):
        row = g.rows[c]
        tri = []  # edges inside N(c)
        for a in bits(row):
            for b in bits(row & g.rows[a] >> (a + 1) << (a + 1)):
                tri.append((a, b))
        for i, (a, b) in enumerate(tri):
            for d, e in tri[i + 1:]:
                if d in (a, b) or e in (a, b):
                    continue
                cross = (
                    g.has_edge(a, d) or g.has_edge(a, e)
                    or g.has_edge(b, d) or g.has_edge(b, e)
                )
                if not cross:
                    yield PatternHit("butterfly", (c, a, b, d, e), ((a, b), (d, e)))


def scan_forced_patterns(g: Graph) -> list[PatternHit]:
    hits = list(iter_diamonds(g))
    hits.extend(iter_butterflies(g))
    return hits


def find_induced_path(g: Graph, k: int, node_limit: int | None = None) -> tuple[int, ...] | None:
    """First induced path on k vertices found by DFS, or None.

    Extension prunes with bit-rows: a new tip may touch only the current
    tip.  node_limit bounds DFS steps and raises ScanBudget when exhausted.
    """
    if k <= 0:
        raise ValueError("k must be positive")
    if k == 1:
        return (0,) if g.n else None
    full = g.full_mask()
    steps = [0]

    def rec(path: list[int], path_mask: int, banned: int) -> tuple[int, ...] | None:
        steps[0] += 1
        if node_limit is not None and steps[0] > node_limit:
            raise ScanBudget
        if len(path) == k:
            return tuple(path)
        tip = path[-1]
        cand = g.rows[tip] & ~banned & ~path_mask & full
        for w in bits(cand):
            new_banned = banned | g.rows[tip]
            found = rec(path + [w], path_mask | (1 << w), new_banned)
            if found:
                return found
        return None

    for s in range(g.n):
        for t in bits(g.rows[s]):
            found = rec([s, t], (1 << s) | (1 << t), g.rows[s])
            if found:
                return found
    return None


def enumerate_short_induced_cycles(
    g: Graph,
    within: int | None = None,
    max_len: int = 9,
    node_limit: int | None = None,
) -> Iterator[tuple[int, ...]]:
    """Chordless cycles of length 3..max_len inside `within`.

    Each cycle appears once: rotated to start at its smallest vertex, with
    the direction fixed by second-vertex < last-vertex.
    """
    if max_len < 3:
        return
    scope = g.full_mask() if within is None else within
    steps = [0]

    def rec(s: int, path: list[int], path_mask: int, banned: int) -> Iterator[tuple[int, ...]]:
        steps[0] += 1
        if node_limit is not None and steps[0] > node_limit:
            raise ScanBudget
        tip = path[-1]
        above_s = scope >> (s + 1) << (s + 1)
        cand = g.rows[tip] & above_s & ~path_mask & ~banned
        row_s = g.rows[s]
        for w in bits(cand):
            if row_s & (1 << w):
                if len(path) >= 2 and path[1] < w:
                    yield (*path, w)
                continue
            if len(path) + 2 <= max_len:
                yield from rec(s, path + [w], path_mask | (1 << w), banned | g.rows[tip])
        return

    for s in bits(scope):
        for t in bits(g.rows[s] & scope >> (s + 1) << (s + 1)):
            yield from rec(s, [s, t], (1 << s) | (1 << t), 0)
