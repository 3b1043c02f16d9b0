"""Undirected graph kernel: bit-row adjacency, text IO, BFS layers, centers.

Vertices are dense ints 0..n-1.  Adjacency is one Python int per vertex
(bit i set iff i is a neighbor), which makes neighborhood algebra cheap:
intersection is ``&``, spread is ``|``, popcount is ``int.bit_count``.
Edges are normalized (u, v) tuples with u < v.
"""

from __future__ import annotations

from typing import Iterable, Iterator

Edge = tuple[int, int]


class GraphFormatError(ValueError):
    """Malformed graph text.  Carries the 1-based line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno
        self.message = message


def edge(u: int, v: int) -> Edge:
    if u == v:
        raise ValueError(f"self-loop at {u}")
    return (u, v) if u < v else (v, u)


def bits(mask: int) -> Iterator[int]:
    """Yield set bit indexes of mask, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Graph:
    """Immutable undirected graph over vertices 0..n-1."""

    __slots__ = ("n", "rows", "m")

    def __init__(self, n: int, rows: Iterable[int]):
        rows = list(rows)
        if len(rows) != n:
            raise ValueError(f"expected {n} rows, got {len(rows)}")
        deg_total = 0
        for v, row in enumerate(rows):
            if row >> n:
                raise ValueError(f"row {v} mentions vertices >= n")
            if row & (1 << v):
                raise ValueError(f"self-loop at {v}")
            deg_total += row.bit_count()
        for v in range(n):
            for u in bits(rows[v]):
                if not rows[u] & (1 << v):
                    raise ValueError(f"asymmetric edge ({v},{u})")
        if deg_total % 2:
            raise ValueError("odd total degree; rows are inconsistent")
        self.n = n
        self.rows = tuple(rows)
        self.m = deg_total // 2

    @staticmethod
    def from_edges(n: int, edges: Iterable[Edge]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return Graph(n, rows)

    # -- adjacency queries ------------------------------------------------

    def neighbors_mask(self, v: int) -> int:
        return self.rows[v]

    def neighbors(self, v: int) -> list[int]:
        return list(bits(self.rows[v]))

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] & (1 << v))

    def common_neighbors(self, u: int, v: int) -> int:
        """Mask of N(u) & N(v) minus the endpoints themselves."""
        return self.rows[u] & self.rows[v] & ~(1 << u) & ~(1 << v)

    def edges(self) -> list[Edge]:
        out = []
        for v in range(self.n):
            row = self.rows[v] >> (v + 1)
            for off in bits(row):
                out.append((v, v + 1 + off))
        return out

    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and self.rows == other.rows
        )

    def __hash__(self) -> int:
        return hash((self.n, self.rows))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


# -- text format ----------------------------------------------------------
#
#   # optional comment / blank lines anywhere
#   n m
#   u v          (m lines, 0 <= u < v < n, single space, ascending not required)


def parse_graph(text: str) -> Graph:
    header: tuple[int, int] | None = None
    rows: list[int] = []
    seen = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 2:
                raise GraphFormatError(lineno, f"expected 'n m' header, got {line!r}")
            try:
                n, m = int(parts[0]), int(parts[1])
            except ValueError:
                raise GraphFormatError(lineno, f"non-integer header {line!r}") from None
            if n < 0 or m < 0:
                raise GraphFormatError(lineno, "negative counts in header")
            header = (n, m)
            rows = [0] * n
            continue
        n, m = header
        if len(parts) != 2:
            raise GraphFormatError(lineno, f"expected 'u v' edge line, got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(lineno, f"non-integer edge line {line!r}") from None
        if u == v:
            raise GraphFormatError(lineno, f"self-loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(lineno, f"vertex id out of range in ({u},{v})")
        if u > v:
            u, v = v, u
        if rows[u] & (1 << v):
            raise GraphFormatError(lineno, f"duplicate edge ({u},{v})")
        rows[u] |= 1 << v
        rows[v] |= 1 << u
        seen += 1
    if header is None:
        raise GraphFormatError(1, "empty input, missing 'n m' header")
    if seen != header[1]:
        raise GraphFormatError(lineno if text else 1, f"header promised {header[1]} edges, found {seen}")
    return Graph(header[0], rows)


def serialize_graph(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def load_graph(path: str) -> Graph:
    with open(path, "r", encoding="ascii") as fh:
        return parse_graph(fh.read())


def save_graph(g: Graph, path: str) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(serialize_graph(g))


# -- traversal ------------------------------------------------------------


def bfs_levels(g: Graph, seeds: Iterable[int], within: int | None = None) -> tuple[list[int], int]:
    """BFS layer masks from a seed set, restricted to `within`.

    Returns (levels, unreachable) where levels[0] is the seed mask and
    levels[i] the mask at distance i; unreachable holds the vertices of
    `within` no level touches.
    """
    scope = g.full_mask() if within is None else within
    seed_mask = 0
    for s in seeds:
        seed_mask |= 1 << s
    seed_mask &= scope
    if not seed_mask:
        return [], scope
    levels = [seed_mask]
    visited = seed_mask
    frontier = seed_mask
    while True:
        nxt = 0
        for v in bits(frontier):
            nxt |= g.rows[v]
        nxt &= scope & ~visited
        if not nxt:
            break
        levels.append(nxt)
        visited |= nxt
        frontier = nxt
    return levels, scope & ~visited


def connected_components(g: Graph, within: int | None = None) -> list[int]:
    """Component masks of the induced subgraph, ordered by smallest member."""
    scope = g.full_mask() if within is None else within
    comps = []
    rest = scope
    while rest:
        seed = rest & -rest
        comp = seed
        frontier = seed
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= g.rows[v]
            nxt &= scope & ~comp
            comp |= nxt
            frontier = nxt
        comps.append(comp)
        rest &= ~comp
    return comps


def eccentricity(g: Graph, v: int, within: int | None = None, cap: int | None = None) -> int:
    """Eccentricity of v in the induced subgraph; vertices beyond `cap` hops
    make the result cap+1 (early exit).  Unreachable vertices raise."""
    scope = g.full_mask() if within is None else within
    visited = 1 << v
    frontier = visited
    ecc = 0
    while True:
        nxt = 0
        for u in bits(frontier):
            nxt |= g.rows[u]
        nxt &= scope & ~visited
        if not nxt:
            break
        ecc += 1
        visited |= nxt
        frontier = nxt
        if cap is not None and ecc > cap:
            return ecc
    if visited != scope:
        raise ValueError("graph is disconnected within scope")
    return ecc


def central_vertex(g: Graph, within: int | None = None) -> int:
    """Vertex of minimum eccentricity, smallest id on ties.

    Raises ValueError when the (induced) graph is disconnected or empty.
    BFS from every vertex; a running best caps later searches early.
    """
    scope = g.full_mask() if within is None else within
    if not scope:
        raise ValueError("empty scope has no central vertex")
    best_v = -1
    best_ecc = None
    for v in bits(scope):
        ecc = eccentricity(g, v, scope, cap=best_ecc)
        if best_ecc is None or ecc < best_ecc:
            best_v, best_ecc = v, ecc
    return best_v
