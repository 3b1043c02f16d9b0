"""Black/white vertex coloring with constraint propagation.

Colors encode matching membership: black vertices are matched (each needs
exactly one black neighbor, its partner), white vertices are unmatched
(no two adjacent whites, or the edge between them would go undominated).
A complete feasible coloring is exactly a dominating induced matching:
read the matching off the black partner pairs.

Propagation rules, run to a fixpoint over a dirty queue:
  (a) a white vertex forces all its neighbors black;
  (b) two adjacent blacks become partners and force every other neighbor
      of either endpoint white;
  (c) an unpartnered black with exactly one non-white candidate neighbor
      left forces that neighbor black;
  (d) contradictions: white-white edge, black with two black neighbors,
      black with no candidate partner left, conflicting assignment.

A context may mark edges as excluded (known never to be matching edges);
a black endpoint of an excluded edge then whitens the other endpoint, and
two black endpoints are a contradiction.  Exclusions only ever come from
facts about the instance, so they are sound to add mid-solve.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .graph import Edge, Graph, bits

UNKNOWN, WHITE, BLACK = 0, 1, 2

_NAMES = {WHITE: "white", BLACK: "black"}


@dataclass(frozen=True)
class Contradiction:
    rule: str
    witnesses: tuple[int, ...]

    def __str__(self) -> str:
        verts = ",".join(str(v) for v in self.witnesses)
        return f"{self.rule} at {verts}"


Snapshot = tuple[int, int, list[int]]


class Coloring:
    """Mutable coloring state over a fixed graph."""

    __slots__ = ("g", "white", "black", "mate", "dirty", "excluded")

    def __init__(self, g: Graph):
        self.g = g
        self.white = 0
        self.black = 0
        self.mate = [-1] * g.n
        self.dirty: deque[int] = deque()
        self.excluded: list[int] | None = None

    def clone(self) -> "Coloring":
        c = Coloring.__new__(Coloring)
        c.g = self.g
        c.white = self.white
        c.black = self.black
        c.mate = list(self.mate)
        c.dirty = deque(self.dirty)
        c.excluded = self.excluded
        return c

    def snapshot(self) -> Snapshot:
        return (self.white, self.black, list(self.mate))

    def restore(self, snap: Snapshot) -> None:
        self.white, self.black, mate = snap
        self.mate = list(mate)
        self.dirty.clear()

    # -- queries -----------------------------------------------------------

    def color_of(self, v: int) -> int:
        bit = 1 << v
        if self.white & bit:
            return WHITE
        if self.black & bit:
            return BLACK
        return UNKNOWN

    def unknown_mask(self, scope: int | None = None) -> int:
        full = self.g.full_mask() if scope is None else scope
        return full & ~self.white & ~self.black

    def unmated_black_mask(self, scope: int | None = None) -> int:
        full = self.g.full_mask() if scope is None else scope
        out = 0
        for v in bits(self.black & full):
            if self.mate[v] < 0:
                out |= 1 << v
        return out

    def excluded_mask(self, v: int) -> int:
        if self.excluded is None:
            return 0
        return self.excluded[v] & self.g.rows[v]

    # -- mutation ----------------------------------------------------------

    def _set(self, v: int, color: int) -> Contradiction | None:
        bit = 1 << v
        cur = self.color_of(v)
        if cur == color:
            return None
        if cur != UNKNOWN:
            return Contradiction("conflict", (v,))
        if color == WHITE:
            self.white |= bit
            self.dirty.append(v)
            # unpartnered black neighbors lost a candidate
            for u in bits(self.g.rows[v] & self.black):
                if self.mate[u] < 0:
                    self.dirty.append(u)
        else:
            self.black |= bit
            self.dirty.append(v)
            for u in bits(self.g.rows[v] & self.black & ~bit):
                self.dirty.append(u)
        return None

    def _scan(self, v: int) -> Contradiction | None:
        g = self.g
        bit = 1 << v
        if self.white & bit:
            row = g.rows[v]
            ww = row & self.white
            if ww:
                return Contradiction("white-white-edge", (v, next(bits(ww))))
            for u in bits(row & self.unknown_mask()):
                bad = self._set(u, BLACK)
                if bad:
                    return bad
            return None
        if not self.black & bit:
            return None
        row = g.rows[v]
        ex = self.excluded_mask(v)
        if ex & self.black:
            return Contradiction("excluded-edge-matched", (v, next(bits(ex & self.black))))
        for u in bits(ex & self.unknown_mask()):
            bad = self._set(u, WHITE)
            if bad:
                return bad
        nb_black = row & self.black & ~ex
        k = nb_black.bit_count()
        if k >= 2:
            it = bits(nb_black)
            return Contradiction("two-black-neighbors", (v, next(it), next(it)))
        if k == 1:
            u = next(bits(nb_black))
            if self.mate[v] not in (-1, u) or self.mate[u] not in (-1, v):
                return Contradiction("partner-clash", (v, u))
            if self.mate[v] < 0:
                self.mate[v], self.mate[u] = u, v
                spread = (row | g.rows[u]) & ~bit & ~(1 << u)
                for w in bits(spread & self.unknown_mask()):
                    bad = self._set(w, WHITE)
                    if bad:
                        return bad
                self.dirty.append(u)
            return None
        # no black neighbor available
        if self.mate[v] >= 0:
            return Contradiction("partner-clash", (v, self.mate[v]))
        cand = row & ~self.white & ~ex
        if not cand:
            return Contradiction("black-unmatchable", (v,))
        if cand.bit_count() == 1:
            return self._set(next(bits(cand)), BLACK)
        return None

    def propagate(self) -> Contradiction | None:
        while self.dirty:
            v = self.dirty.popleft()
            bad = self._scan(v)
            if bad:
                self.dirty.clear()
                return bad
        return None


def assign_and_propagate(c: Coloring, v: int, color: int) -> Contradiction | None:
    """Set v to color and run propagation to a fixpoint."""
    if color not in (WHITE, BLACK):
        raise ValueError(f"bad color {color}")
    bad = c._set(v, color)
    if bad:
        c.dirty.clear()
        return bad
    return c.propagate()


def force_pair(c: Coloring, u: int, v: int) -> Contradiction | None:
    """Force edge uv into the matching: both endpoints black, partnered."""
    if not c.g.has_edge(u, v):
        raise ValueError(f"({u},{v}) is not an edge")
    bad = c._set(u, BLACK)
    if bad is None:
        bad = c._set(v, BLACK)
    if bad is None:
        bad = c.propagate()
    if bad:
        c.dirty.clear()
        return bad
    if c.mate[u] != v:
        # partners resolved differently during propagation
        return Contradiction("partner-clash", (u, v))
    return None


def is_complete_feasible(c: Coloring, scope: int | None = None) -> bool:
    """Every vertex colored, whites independent, every black partnered with
    exactly one black neighbor."""
    g = c.g
    full = g.full_mask() if scope is None else scope
    if c.unknown_mask(full):
        return False
    for v in bits(c.white & full):
        if g.rows[v] & c.white & full:
            return False
    for v in bits(c.black & full):
        nb = g.rows[v] & c.black & full
        if nb.bit_count() != 1:
            return False
        if c.mate[v] != next(bits(nb)):
            return False
    return True


def extract_matching(c: Coloring, scope: int | None = None) -> tuple[Edge, ...]:
    full = c.g.full_mask() if scope is None else scope
    out = []
    for v in bits(c.black & full):
        u = c.mate[v]
        if u > v:
            out.append((v, u))
    return tuple(out)


def parse_matching(text: str) -> tuple[Edge, ...]:
    """Matching file format: one 'u v' pair per line, '#' comments allowed."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ValueError(f"line {lineno}: non-integer pair {line!r}") from None
        out.append((u, v) if u < v else (v, u))
    return tuple(sorted(out))


def serialize_matching(matching: tuple[Edge, ...]) -> str:
    return "".join(f"{u} {v}\n" for u, v in sorted(matching))
