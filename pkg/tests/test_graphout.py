import itertools
import json
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coordterm import graphout
from coordterm.graphout import (
    CoordGraph,
    annotate,
    betweenness,
    betweenness_rank,
    build_graph,
    export,
    from_dot,
    load_graph,
    louvain,
    to_dot,
)


def graph_of(edges, nodes=()):
    names = sorted({n for e in edges for n in e} | set(nodes))
    g = CoordGraph(names, {tuple(sorted(e)): 1.0 for e in edges})
    return annotate(g)


def two_cliques():
    left, right = "abcd", "efgh"
    edges = [(x, y) for grp in (left, right) for x, y in itertools.combinations(grp, 2)]
    return graph_of(edges + [("d", "e")])


def matrix_modularity(nodes, edges, labels):
    idx = {n: i for i, n in enumerate(nodes)}
    A = np.zeros((len(nodes), len(nodes)))
    for a, b in edges:
        A[idx[a], idx[b]] = A[idx[b], idx[a]] = 1.0
    k = A.sum(axis=1)
    two_m = k.sum()
    same = np.array([[labels[a] == labels[b] for b in nodes] for a in nodes])
    return float(((A - np.outer(k, k) / two_m) * same).sum() / two_m)


def set_partitions(items):
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[head] + part[i]] + part[i + 1:]
        yield [[head]] + part


def test_planted_partition_is_global_optimum():
    g = two_cliques()
    best, best_q = None, -1.0
    for part in set_partitions(g.nodes):
        labels = {n: i for i, blk in enumerate(part) for n in blk}
        q = matrix_modularity(g.nodes, g.edges, labels)
        if q > best_q + 1e-12:
            best, best_q = part, q
    assert sorted(sorted(b) for b in best) == [list("abcd"), list("efgh")]
    assert g.modularity == pytest.approx(best_q, abs=1e-12)
    assert g.modularity == pytest.approx(0.4231, abs=1e-4)
    assert {g.community[n] for n in "abcd"} == {0} and {g.community[n] for n in "efgh"} == {1}


def test_complete_graph_is_one_community():
    g = graph_of(list(itertools.combinations("vwxyz", 2)))
    assert set(g.community.values()) == {0}
    assert g.modularity == pytest.approx(0.0, abs=1e-12)


def test_edgeless_graph():
    g = annotate(CoordGraph(["a", "b", "c"], {}))
    assert g.modularity == 0.0
    assert sorted(g.community.values()) == [0, 1, 2]
    assert all(v == 0.0 for v in g.betweenness.values())


def random_graph(seed, n_max=30):
    rng = random.Random(seed)
    n = rng.randint(2, n_max)
    p = rng.uniform(0.05, 0.4)
    nodes = [f"n{i:02d}" for i in range(n)]
    edges = [(a, b) for a, b in itertools.combinations(nodes, 2) if rng.random() < p]
    return nodes, edges


@pytest.mark.parametrize("seed", range(100))
def test_louvain_history_and_dense_ids(seed):
    nodes, edges = random_graph(seed)
    g = graph_of(edges, nodes)
    assignment, q, history = louvain(g)
    assert all(b >= a - 1e-12 for a, b in zip(history, history[1:]))
    assert sorted(set(assignment.values())) == list(range(len(set(assignment.values()))))
    if edges:
        assert q == pytest.approx(matrix_modularity(g.nodes, g.edges, assignment), abs=1e-9)


def brute_betweenness(nodes, edges):
    """Enumerate every shortest path explicitly and split credit among them."""
    adj = {n: set() for n in nodes}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)

    def dist_from(s):
        d, frontier = {s: 0}, [s]
        while frontier:
            nxt = []
            for v in frontier:
                for w in adj[v]:
                    if w not in d:
                        d[w] = d[v] + 1
                        nxt.append(w)
            frontier = nxt
        return d

    dists = {s: dist_from(s) for s in nodes}
    score = dict.fromkeys(nodes, 0.0)
    for s, t in itertools.combinations(nodes, 2):
        if t not in dists[s]:
            continue
        paths = []

        def walk(path):
            v = path[-1]
            if v == t:
                paths.append(path)
                return
            for w in adj[v]:
                if dists[s].get(w) == len(path) and dists[w][t] == dists[s][t] - len(path):
                    walk(path + [w])

        walk([s])
        for path in paths:
            for v in path[1:-1]:
                score[v] += 1.0 / len(paths)
    return score


@pytest.mark.parametrize("seed", range(100))
def test_betweenness_matches_path_enumeration(seed):
    nodes, edges = random_graph(seed)
    g = graph_of(edges, nodes)
    expected = brute_betweenness(nodes, edges)
    for n in nodes:
        assert g.betweenness[n] == pytest.approx(expected[n], abs=1e-9)


def test_path_star_and_leaves():
    path = graph_of([("a", "b"), ("b", "c")])
    assert path.betweenness == {"a": 0.0, "b": 1.0, "c": 0.0}
    star = graph_of([("hub", x) for x in "pqrs"])
    assert star.betweenness["hub"] == 6.0
    nodes, edges = random_graph(7)
    g = graph_of(edges, nodes)
    for n, nbrs in g.adjacency().items():
        if len(nbrs) <= 1:
            assert g.betweenness[n] == 0.0


def test_betweenness_rank_dense():
    g = graph_of([("hub", x) for x in "pqrs"] + [("p", "z")])
    rank = betweenness_rank(g)
    assert rank["q"] == rank["z"] == 1 and rank["hub"] == max(rank.values())
    assert sorted(set(rank.values())) == list(range(1, max(rank.values()) + 1))


def test_build_graph_empty():
    g = build_graph([])
    assert g.nodes == [] and g.edges == {} and g.modularity == 0.0


def test_build_graph_threshold_default_zero():
    assert graphout.DEFAULT_THRESHOLD == 0.0
    g = build_graph([("a", "b", 0.5), ("b", "c", 0.0), ("c", "d", -0.1)])
    assert list(g.edges) == [("a", "b"), ("b", "c")]


def test_build_graph_top_k_and_dedupe():
    ranked = [("b", "a", 3.0), ("a", "b", 1.0), ("x", "x", 9.0), ("c", "d", 2.0)]
    assert build_graph(ranked, top_k=1).edges == {("a", "b"): 3.0}
    g = build_graph(ranked)
    assert g.edges == {("a", "b"): 3.0, ("c", "d"): 2.0}
    assert "x" not in g.nodes


def test_dot_attributes():
    g = two_cliques()
    text = to_dot(g)
    assert text.startswith("graph coordterms {")
    assert '"d" -- "e" [score=1.0, community=-1, color="#c0c0c0"];' in text
    assert f'"a" -- "b" [score=1.0, community=0, color="{graphout.PALETTE[0]}"];' in text


@pytest.mark.parametrize("fmt", ["dot", "json"])
def test_export_round_trip_fixed_point(tmp_path, fmt):
    g = two_cliques()
    p1, p2 = tmp_path / f"a.{fmt}", tmp_path / f"b.{fmt}"
    export(g, p1, fmt, header='{"seed":1}')
    back = load_graph(p1)
    assert back == g
    export(back, p2, fmt, header='{"seed":1}')
    assert p1.read_bytes() == p2.read_bytes()


@pytest.mark.parametrize("fmt", ["dot", "json"])
def test_export_empty_graph(tmp_path, fmt):
    g = build_graph([])
    export(g, tmp_path / "e", fmt)
    assert load_graph(tmp_path / "e") == g


def test_json_header_and_bad_format(tmp_path):
    export(two_cliques(), tmp_path / "g.json", "json", header='{"seed":4}')
    assert json.loads((tmp_path / "g.json").read_text())["config"] == {"seed": 4}
    with pytest.raises(ValueError):
        export(two_cliques(), tmp_path / "g.x", "svg")


def test_quoted_names_survive_dot():
    g = graph_of([('we"ird', "back\\slash"), ("back\\slash", "plain")])
    assert from_dot(to_dot(g)) == g


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(st.sampled_from("ABCDEFGH"), st.sampled_from("ABCDEFGH"),
                          st.floats(-2, 2, allow_nan=False)), max_size=25))
def test_build_graph_invariants(ranked):
    g = build_graph(ranked)
    assert all(a < b for a, b in g.edges)
    assert all(s >= 0.0 for s in g.edges.values())
    assert set(g.nodes) == {n for e in g.edges for n in e}
    assert from_dot(to_dot(g)) == g
