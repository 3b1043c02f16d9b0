"""Instance generators for differential testing and benchmarking.

Three sources of test graphs:

* ``gen_planted``     -- yes-instances built around a known dominating
                         induced matching, arbitrary size.
* ``gen_random``      -- G(n, p) rejection sampling with optional
                         structural filters.
* ``emit_small_corpus`` -- every connected graph up to a small vertex
                         count, one representative per isomorphism
                         class, labeled by the exact oracle.

All generators are deterministic in (parameters, seed): the same call
produces byte-identical graph files on every run.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path

import networkx as nx

from .graph import Edge, Graph, bits, serialize_graph
from .oracle import oracle_dim, verify_dim
from .patterns import (
    ScanBudget,
    find_induced_path,
    find_k4,
    iter_butterflies,
    iter_diamonds,
)

P9_VERIFIED = "verified"
P9_VIOLATED = "violated"
P9_UNCHECKED = "unchecked"


def classify_p9(g: Graph, node_limit: int | None = 2_000_000) -> str:
    """Scan for an induced nine-vertex path; budget overrun means unchecked."""
    try:
        hit = find_induced_path(g, 9, node_limit=node_limit)
    except ScanBudget:
        return P9_UNCHECKED
    return P9_VIOLATED if hit is not None else P9_VERIFIED


# ---------------------------------------------------------------------------
# Planted yes-instances
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PlantedInstance:
    graph: Graph
    planted: tuple[Edge, ...]
    seed: int
    p9_free: str


def gen_planted(n: int, k: int, extra: int, seed: int) -> PlantedInstance:
    """Graph on n vertices with a planted dominating induced matching of k edges.

    Vertices 2i and 2i+1 are matched for i < k; the rest are unmatched.
    Every additional edge joins an unmatched vertex to a matched one, which
    preserves the planted matching: unmatched vertices stay pairwise
    non-adjacent and each matched vertex keeps exactly one matched neighbor.
    The first extra edges are spent making the graph connected (as far as
    the budget and the vertex mix allow), the rest are placed uniformly.
    """
    if n < 0 or k < 0 or extra < 0:
        raise ValueError("n, k and extra must be nonnegative")
    if 2 * k > n:
        raise ValueError(f"need 2*k <= n, got n={n} k={k}")
    capacity = 2 * k * (n - 2 * k)
    if extra > capacity:
        raise ValueError(f"extra={extra} exceeds cross-edge capacity {capacity}")

    rng = random.Random(seed)
    planted = tuple((2 * i, 2 * i + 1) for i in range(k))
    edges: list[Edge] = list(planted)
    matched = list(range(2 * k))
    unmatched = list(range(2 * k, n))

    # Initial components: k matched pairs plus n-2k isolated vertices. Chain
    # the pairs together through distinct unmatched vertices, then hang every
    # remaining unmatched vertex off a random matched one. That spans all
    # components whenever the budget and the vertex mix allow.
    budget = extra
    if matched and unmatched:
        pair_order = list(range(k))
        rng.shuffle(pair_order)
        ws = unmatched[:]
        rng.shuffle(ws)
        repair: list[Edge] = []
        chain = min(k - 1, len(ws))
        for i in range(chain):
            w = ws[i]
            repair.append((w, 2 * pair_order[i] + rng.randrange(2)))
            repair.append((w, 2 * pair_order[i + 1] + rng.randrange(2)))
        for w in ws[chain:]:
            repair.append((w, 2 * pair_order[rng.randrange(k)] + rng.randrange(2)))
        for w, b in repair:
            if budget == 0:
                break
            edges.append((min(w, b), max(w, b)))
            budget -= 1

    if budget > 0:
        used = {frozenset(e) for e in edges}
        free = [
            (u, m)
            for u in unmatched
            for m in matched
            if frozenset((u, m)) not in used
        ]
        for u, m in rng.sample(free, budget):
            edges.append((min(u, m), max(u, m)))

    g = Graph.from_edges(n, edges)
    check = verify_dim(g, planted)
    assert check.ok, f"planted matching failed verification: {check.reason}"
    return PlantedInstance(graph=g, planted=planted, seed=seed, p9_free=classify_p9(g))


def gen_c4_augmented(n: int, k: int, extra: int, seed: int) -> Graph:
    """Planted instance plus a pendant four-cycle, which has no solution.

    A four-cycle never contributes a matching edge, so all four of its edges
    need endpoints matched elsewhere; the corner opposite the attachment
    point has no elsewhere.  Useful as a guaranteed-rejection benchmark
    family.  The four cycle vertices take the ids n, n+1, n+2, n+3.
    """
    base = gen_planted(n, k, extra, seed)
    rng = random.Random(seed ^ 0x5EED)
    attach = rng.randrange(n) if n else 0
    c = [n, n + 1, n + 2, n + 3]
    edges = base.graph.edges()
    edges += [(c[0], c[1]), (c[1], c[2]), (c[2], c[3]), (c[0], c[3])]
    if n:
        edges.append((attach, c[0]))
    return Graph.from_edges(n + 4, edges)


# ---------------------------------------------------------------------------
# Filtered random graphs
# ---------------------------------------------------------------------------

RANDOM_FILTERS = ("k4_free", "diamond_butterfly_free", "p9_free")


@dataclass(frozen=True)
class RandomDraw:
    """Outcome of rejection sampling; graph is None when the cap ran out."""

    graph: Graph | None
    attempts: int
    seed: int
    rejections: dict[str, int]


def _erdos_renyi(n: int, p: float, rng: random.Random) -> Graph:
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges.append((u, v))
    return Graph.from_edges(n, edges)


def _first_failed_filter(g: Graph, filters: tuple[str, ...]) -> str | None:
    for f in filters:
        if f == "k4_free":
            if find_k4(g) is not None:
                return f
        elif f == "diamond_butterfly_free":
            if next(iter_diamonds(g), None) is not None:
                return f
            if next(iter_butterflies(g), None) is not None:
                return f
        elif f == "p9_free":
            if classify_p9(g) != P9_VERIFIED:
                return f
    return None


def gen_random(
    n: int,
    p: float,
    seed: int,
    filters: tuple[str, ...] = (),
    attempt_cap: int = 200,
) -> RandomDraw:
    """Sample G(n, p) until every requested filter passes or the cap is hit."""
    unknown = set(filters) - set(RANDOM_FILTERS)
    if unknown:
        raise ValueError(f"unknown filters: {sorted(unknown)}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability must be in [0, 1], got {p}")
    if attempt_cap < 1:
        raise ValueError("attempt_cap must be positive")
    rng = random.Random(seed)
    rejections = {f: 0 for f in filters}
    for attempt in range(1, attempt_cap + 1):
        g = _erdos_renyi(n, p, rng)
        failed = _first_failed_filter(g, tuple(filters))
        if failed is None:
            return RandomDraw(graph=g, attempts=attempt, seed=seed, rejections=rejections)
        rejections[failed] += 1
    return RandomDraw(graph=None, attempts=attempt_cap, seed=seed, rejections=rejections)


# ---------------------------------------------------------------------------
# Exhaustive small-graph corpus
# ---------------------------------------------------------------------------


def _invariant_key(g: Graph) -> tuple:
    """Cheap isomorphism invariant: neighbor-profile refinement run to a
    fixpoint, seeded with degrees and triangle counts, plus a profile of
    endpoint classes and common-neighbor counts over the edges.  Strong
    enough that bucket collisions are almost always true duplicates."""
    rows = g.rows
    tri = [0] * g.n
    for v in range(g.n):
        tri[v] = sum((rows[v] & rows[u]).bit_count() for u in bits(rows[v]))
    base = [(rows[v].bit_count(), tri[v]) for v in range(g.n)]
    rank = {val: i for i, val in enumerate(sorted(set(base)))}
    col = tuple(rank[b] for b in base)
    while True:
        raw = [
            (
                col[v],
                tuple(sorted(
                    (col[u], (rows[v] & rows[u]).bit_count()) for u in bits(rows[v])
                )),
            )
            for v in range(g.n)
        ]
        rank = {val: i for i, val in enumerate(sorted(set(raw)))}
        new = tuple(rank[r] for r in raw)
        if len(set(new)) == len(set(col)):
            # no class split this round; refinement has stabilized
            col = new
            break
        col = new
    edge_prof = sorted(
        (min(col[u], col[v]), max(col[u], col[v]), (rows[u] & rows[v]).bit_count())
        for u, v in g.edges()
    )
    return (g.n, g.m, tuple(sorted(col)), tuple(edge_prof))


def _to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def _extend(parent: Graph, mask: int) -> Graph:
    edges = parent.edges()
    v_new = parent.n
    edges.extend((u, v_new) for u in bits(mask))
    return Graph.from_edges(parent.n + 1, edges)


def iter_small_corpus(max_n: int):
    """Yield one representative per isomorphism class of connected graphs
    on 2..max_n vertices, in a deterministic order.

    Every connected graph on n >= 3 vertices has a vertex whose removal
    leaves it connected, so extending each (n-1)-vertex representative by
    one vertex with every nonempty neighborhood reaches every class.
    Duplicates are rejected exactly: candidates are bucketed by a
    refinement invariant and compared within buckets.
    """
    if not 2 <= max_n <= 8:
        raise ValueError(f"max_n must be in 2..8, got {max_n}")
    layer = [Graph.from_edges(2, [(0, 1)])]
    yield layer[0]
    for n in range(3, max_n + 1):
        nxt: list[Graph] = []
        seen: dict[tuple, list[nx.Graph]] = {}
        for parent in layer:
            for mask in range(1, 1 << (n - 1)):
                cand = _extend(parent, mask)
                bucket = seen.setdefault(_invariant_key(cand), [])
                cand_nx = _to_nx(cand)
                if any(nx.is_isomorphic(cand_nx, other) for other in bucket):
                    continue
                bucket.append(cand_nx)
                nxt.append(cand)
                yield cand
        layer = nxt


def emit_small_corpus(out_dir: str | Path, max_n: int) -> list[dict]:
    """Write the corpus plus a JSON-lines manifest; returns the manifest rows.

    Graphs on at most eight vertices cannot contain an induced nine-vertex
    path, so p9_free is verified by construction.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    counter: dict[int, int] = {}
    for g in iter_small_corpus(max_n):
        idx = counter.get(g.n, 0)
        counter[g.n] = idx + 1
        name = f"n{g.n}_{idx:04d}.graph"
        (out / name).write_text(serialize_graph(g))
        report = oracle_dim(g)
        assert report.status in ("dim", "no-dim")
        rows.append(
            {
                "path": name,
                "n": g.n,
                "m": g.m,
                "label": report.status,
                "p9_free": P9_VERIFIED,
                "seed": None,
            }
        )
    lines = "".join(json.dumps(row) + "\n" for row in rows)
    (out / "manifest.jsonl").write_text(lines)
    return rows
