import json
import random

import pytest

from dimkit.coloring import Coloring
from dimkit.driver import (
    SolveConfig,
    SolveOutcome,
    solve,
    try_edge,
    trivial_dim,
    verify_outcome,
)
from dimkit.generator import gen_c4_augmented, gen_planted
from dimkit.graph import Graph
from dimkit.oracle import count_dims, oracle_dim, verify_dim
from conftest import complete_graph, cycle_graph, disjoint_union, path_graph

ENGINE_ONLY = SolveConfig(fallback_oracle_max_n=0, complete_search_budget=0)


def test_hexagon():
    out = solve(cycle_graph(6))
    assert out.status == "dim"
    assert len(out.matching) == 2
    assert verify_dim(cycle_graph(6), out.matching).ok


def test_square():
    out = solve(cycle_graph(4))
    assert out.status == "no-dim"
    assert out.matching is None
    assert out.reason


def test_nine_cycle():
    out = solve(cycle_graph(9))
    assert out.status == "dim"
    assert len(out.matching) == 3


def test_k4_refused_by_pattern():
    out = solve(complete_graph(4), ENGINE_ONLY)
    assert out.status == "no-dim"
    assert "complete subgraph" in out.reason
    assert out.stats["edges_tried"] == 0


def test_paths():
    for n in range(2, 13):
        out = solve(path_graph(n))
        assert out.status == "dim", (n, out.reason)
        assert verify_dim(path_graph(n), out.matching).ok


def test_diamond_preprocessing_forces_mid_edge():
    # diamond plus a tail; the mid edge (0,1) must be in any solution
    g = Graph.from_edges(6, [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (3, 4), (4, 5)])
    out = solve(g, ENGINE_ONLY)
    assert out.status == "dim"
    assert set(out.matching) == {(0, 1), (4, 5)}
    assert out.stats["forced_edges"] >= 1
    assert count_dims(g) == 1  # the forced shape is the only one


def test_butterfly_preprocessing():
    g = Graph.from_edges(5, [(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)])
    out = solve(g, ENGINE_ONLY)
    assert out.status == "dim"
    assert set(out.matching) == {(1, 2), (3, 4)}


def test_components_solved_independently():
    g = disjoint_union(cycle_graph(6), path_graph(4))
    out = solve(g)
    assert out.status == "dim"
    assert len(out.matching) == 3
    assert verify_dim(g, out.matching).ok
    # one bad component sinks the whole graph
    g = disjoint_union(cycle_graph(6), cycle_graph(4))
    assert solve(g).status == "no-dim"


def test_isolated_vertices_are_fine():
    g = Graph.from_edges(4, [(1, 2)])
    out = solve(g)
    assert out.status == "dim"
    assert out.matching == ((1, 2),)


def test_edgeless_graph():
    out = solve(Graph.from_edges(3, []))
    assert out.status == "dim"
    assert out.matching == ()


def test_trivial_dim_helper():
    g = complete_graph(3)
    assert trivial_dim(g, g.full_mask()) == (0, 1)
    g = cycle_graph(6)
    assert trivial_dim(g, g.full_mask()) is None


def test_long_path_instance_still_decided():
    out = solve(path_graph(8))
    assert out.status == "dim"
    assert verify_dim(path_graph(8), out.matching).ok


def test_try_edge_radius_blowup_is_undecided_when_untrusted():
    g = path_graph(8)
    stats = {"edges_tried": 0, "forced_edges": 0, "branches": 0}
    status, reason = try_edge(
        g, g.full_mask(), 0, 1, Coloring(g), SolveConfig(), stats, trusted=False
    )
    assert status == "undecided"
    assert "farther than" in reason


def test_downgrade_policy_withholds_engine_negative():
    # square (engine-refutable) disjoint from a nine-path: with a long
    # path present and both exact fallbacks off, negatives are withheld
    g = disjoint_union(cycle_graph(4), path_graph(9))
    out = solve(g, ENGINE_ONLY)
    assert out.status == "inconclusive"
    assert "withheld" in out.reason
    assert out.p9_checked
    # the exact fallbacks settle it without any long-path guarantee
    out = solve(g)
    assert out.status == "no-dim"


def test_no_downgrade_without_p9():
    out = solve(cycle_graph(4), SolveConfig(check_p9=False, fallback_oracle_max_n=0))
    assert out.status == "no-dim"
    assert not out.p9_checked


def test_complete_search_settles_midsize_reject():
    g = gen_c4_augmented(14, 3, 10, seed=5)
    assert g.n == 18
    out = solve(g, SolveConfig(fallback_oracle_max_n=0))
    assert out.status == "no-dim"
    assert oracle_dim(g).status == "no-dim"


def test_complete_search_budget_zero_stays_inconclusive():
    g = gen_c4_augmented(14, 3, 10, seed=5)
    out = solve(g, ENGINE_ONLY)
    assert out.status == "inconclusive"


def test_complete_search_finds_planted():
    inst = gen_planted(40, 8, 30, seed=11)
    out = solve(inst.graph, SolveConfig(fallback_oracle_max_n=0))
    assert out.status == "dim"
    assert verify_dim(inst.graph, out.matching).ok


def test_verify_outcome():
    out = solve(cycle_graph(6))
    assert verify_outcome(cycle_graph(6), out).ok
    forged = SolveOutcome("dim", ((0, 1), (2, 3)), None, dict(out.stats), True)
    assert not verify_outcome(cycle_graph(6), forged).ok
    assert verify_outcome(cycle_graph(4), solve(cycle_graph(4))).ok


def test_json_shape_and_stability():
    out = solve(cycle_graph(6))
    d = json.loads(out.to_json())
    assert list(d) == ["status", "matching", "reason", "stats", "p9_checked"]
    assert list(d["stats"]) == ["edges_tried", "forced_edges", "branches", "millis"]
    assert d["stats"]["millis"] == 0
    assert out.to_json() == solve(cycle_graph(6)).to_json()


def test_matches_oracle_on_random_graphs():
    rng = random.Random(1234)
    for _ in range(300):
        n = rng.randint(2, 10)
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.3]
        g = Graph.from_edges(n, edges)
        out = solve(g)
        want = oracle_dim(g).status
        assert out.status == want, (edges, out.reason)
        if out.status == "dim":
            assert verify_dim(g, out.matching).ok


def test_matches_oracle_engine_only_when_conclusive(corpus7):
    # without fallbacks the engine must never contradict the oracle
    for g in corpus7:
        out = solve(g, ENGINE_ONLY)
        if out.status == "inconclusive":
            continue
        assert out.status == oracle_dim(g).status
