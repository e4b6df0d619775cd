"""Coordinate-term graph: communities (Louvain), betweenness (Brandes), DOT/JSON export."""
from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

DEFAULT_THRESHOLD = 0.0
_EPS = 1e-12
PALETTE = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
]
CROSS_COLOR = "#c0c0c0"


@dataclass
class CoordGraph:
    nodes: list[str] = field(default_factory=list)
    edges: dict[tuple[str, str], float] = field(default_factory=dict)
    betweenness: dict[str, float] = field(default_factory=dict)
    community: dict[str, int] = field(default_factory=dict)
    modularity: float = 0.0

    def adjacency(self) -> dict[str, set[str]]:
        adj: dict[str, set[str]] = {n: set() for n in self.nodes}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def __eq__(self, other):
        if not isinstance(other, CoordGraph):
            return NotImplemented
        return to_json(self) == to_json(other)


def build_graph(ranked, threshold: float | None = DEFAULT_THRESHOLD, top_k: int | None = None) -> CoordGraph:
    """Keep pairs scoring at least ``threshold``, or the ``top_k`` best when given.

    Self-pairs are dropped; a pair listed twice keeps its highest score.
    """
    rows = sorted(((x, y, float(s)) for x, y, s in ranked if x != y), key=lambda r: (-r[2], r[0], r[1]))
    edges: dict[tuple[str, str], float] = {}
    for x, y, s in rows:
        key = (x, y) if x <= y else (y, x)
        if key in edges:
            continue
        if top_k is not None:
            if len(edges) >= top_k:
                break
        elif threshold is not None and s < threshold:
            break
        edges[key] = s
    nodes = sorted({n for e in edges for n in e})
    g = CoordGraph(nodes, dict(sorted(edges.items())))
    annotate(g)
    return g


def annotate(g: CoordGraph) -> CoordGraph:
    g.betweenness = betweenness(g)
    g.community, g.modularity, _ = louvain(g)
    return g


def _weighted(g: CoordGraph) -> dict[str, dict[str, float]]:
    adj: dict[str, dict[str, float]] = {n: {} for n in g.nodes}
    for a, b in g.edges:
        adj[a][b] = adj[a].get(b, 0.0) + 1.0
        adj[b][a] = adj[b].get(a, 0.0) + 1.0
    return adj


def modularity(adj: dict, assignment: dict) -> float:
    """Newman modularity of ``assignment`` on a weighted adjacency map.

    A self-loop of weight w at node i is stored as adj[i][i] = 2w, so
    degrees are plain row sums. Edgeless graphs have Q = 0.
    """
    two_m = sum(w for row in adj.values() for w in row.values())
    if two_m == 0:
        return 0.0
    inside: dict = {}
    total: dict = {}
    for i, row in adj.items():
        c = assignment[i]
        total[c] = total.get(c, 0.0) + sum(row.values())
        inside[c] = inside.get(c, 0.0) + sum(w for j, w in row.items() if assignment[j] == c)
    return sum(inside.get(c, 0.0) / two_m - (total[c] / two_m) ** 2 for c in total)


def _local_moves(adj: dict, order: list) -> tuple[dict, bool]:
    two_m = sum(w for row in adj.values() for w in row.values())
    comm = {i: i for i in order}
    pos = {n: k for k, n in enumerate(order)}
    degree = {i: sum(adj[i].values()) for i in order}
    tot = dict(degree)
    moved_any = False
    improved = True
    while improved:
        improved = False
        for i in order:
            ci = comm[i]
            links: dict = {}
            for j, w in adj[i].items():
                if j != i:
                    links[comm[j]] = links.get(comm[j], 0.0) + w
            tot[ci] -= degree[i]
            k = degree[i]

            def gain(c):
                return links.get(c, 0.0) - tot[c] * k / two_m

            best, best_gain = ci, gain(ci)
            for c in sorted(links, key=pos.__getitem__):
                g = gain(c)
                if g > best_gain + _EPS:
                    best, best_gain = c, g
            tot[best] += k
            if best != ci:
                comm[i] = best
                improved = moved_any = True
    return comm, moved_any


def _aggregate(adj: dict, comm: dict) -> dict:
    out: dict = {c: {} for c in comm.values()}
    for i, row in adj.items():
        for j, w in row.items():
            a, b = comm[i], comm[j]
            out[a][b] = out[a].get(b, 0.0) + w
    return out


def louvain(g: CoordGraph) -> tuple[dict[str, int], float, list[float]]:
    """Two-phase modularity optimization with lexicographic node order.

    Returns (assignment with dense ids in node order, final Q, Q after each pass).
    """
    adj = _weighted(g)
    membership = {n: n for n in g.nodes}
    history = [modularity(adj, membership)]
    level = adj
    if sum(len(r) for r in adj.values()) > 0:
        while True:
            order = sorted(level, key=_sort_key)
            comm, moved = _local_moves(level, order)
            if not moved:
                break
            membership = {n: comm[c] for n, c in membership.items()}
            q = modularity(adj, membership)
            if q < history[-1] - 1e-12:
                raise AssertionError(f"modularity decreased from {history[-1]} to {q}")
            history.append(q)
            level = _aggregate(level, comm)
    dense: dict = {}
    assignment = {}
    for n in g.nodes:
        assignment[n] = dense.setdefault(membership[n], len(dense))
    return assignment, history[-1], history


def _sort_key(node):
    # community labels are original node names, so strings sort throughout
    return str(node)


def betweenness(g: CoordGraph) -> dict[str, float]:
    """Exact unweighted betweenness (Brandes), each unordered pair counted once."""
    adj = {n: sorted(v) for n, v in g.adjacency().items()}
    score = {n: 0.0 for n in g.nodes}
    for s in g.nodes:
        stack = []
        preds: dict[str, list[str]] = {n: [] for n in g.nodes}
        sigma = dict.fromkeys(g.nodes, 0)
        sigma[s] = 1
        dist = dict.fromkeys(g.nodes, -1)
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            stack.append(v)
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = dict.fromkeys(g.nodes, 0.0)
        while stack:
            w = stack.pop()
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                score[w] += delta[w]
    return {n: score[n] / 2.0 for n in g.nodes}


def betweenness_rank(g: CoordGraph) -> dict[str, int]:
    """Dense rank of betweenness, 1 for the smallest value."""
    levels = sorted(set(g.betweenness.values()))
    pos = {v: i + 1 for i, v in enumerate(levels)}
    return {n: pos[g.betweenness[n]] for n in g.nodes}


def to_json(g: CoordGraph) -> dict:
    return {
        "modularity": g.modularity,
        "nodes": [
            {"id": n, "betweenness": g.betweenness.get(n, 0.0), "community": g.community.get(n, 0)}
            for n in g.nodes
        ],
        "edges": [{"source": a, "target": b, "score": s} for (a, b), s in sorted(g.edges.items())],
    }


def from_json(doc: dict) -> CoordGraph:
    nodes = [d["id"] for d in doc["nodes"]]
    edges = {}
    for e in doc["edges"]:
        a, b = sorted((e["source"], e["target"]))
        if a == b:
            raise ValueError(f"self-loop at {a}")
        edges[(a, b)] = float(e["score"])
    return CoordGraph(
        nodes,
        dict(sorted(edges.items())),
        {d["id"]: float(d["betweenness"]) for d in doc["nodes"]},
        {d["id"]: int(d["community"]) for d in doc["nodes"]},
        float(doc.get("modularity", 0.0)),
    )


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _unquote(s: str) -> str:
    return re.sub(r"\\(.)", r"\1", s[1:-1])


def to_dot(g: CoordGraph) -> str:
    rank = betweenness_rank(g)
    lines = ["graph coordterms {", f"  // modularity={g.modularity!r}"]
    for n in g.nodes:
        c = g.community.get(n, 0)
        lines.append(
            f"  {_quote(n)} [betweenness={g.betweenness.get(n, 0.0)!r}, community={c}, "
            f"rank={rank[n]}, width={0.5 + 0.25 * rank[n]!r}, color=\"{PALETTE[c % len(PALETTE)]}\"];"
        )
    for (a, b), s in sorted(g.edges.items()):
        ca, cb = g.community.get(a, 0), g.community.get(b, 0)
        color = PALETTE[ca % len(PALETTE)] if ca == cb else CROSS_COLOR
        comm = ca if ca == cb else -1
        lines.append(f"  {_quote(a)} -- {_quote(b)} [score={s!r}, community={comm}, color=\"{color}\"];")
    lines.append("}")
    return "\n".join(lines) + "\n"


_STR = r'"(?:[^"\\]|\\.)*"'
_NODE_RE = re.compile(rf"^\s*({_STR}) \[betweenness=([^,]+), community=(-?\d+),")
_EDGE_RE = re.compile(rf"^\s*({_STR}) -- ({_STR}) \[score=([^,]+),")
_MOD_RE = re.compile(r"^\s*// modularity=(\S+)")


def from_dot(text: str) -> CoordGraph:
    """Parse DOT as written by :func:`to_dot`."""
    g = CoordGraph()
    for line in text.splitlines():
        if m := _MOD_RE.match(line):
            g.modularity = float(m.group(1))
        elif m := _EDGE_RE.match(line):
            a, b = sorted((_unquote(m.group(1)), _unquote(m.group(2))))
            g.edges[(a, b)] = float(m.group(3))
        elif m := _NODE_RE.match(line):
            n = _unquote(m.group(1))
            g.nodes.append(n)
            g.betweenness[n] = float(m.group(2))
            g.community[n] = int(m.group(3))
    g.edges = dict(sorted(g.edges.items()))
    return g


def export(g: CoordGraph, path, fmt: str = "dot", header: str | None = None) -> None:
    """Write ``g`` as DOT or JSON; ``header`` (a config echo) is embedded when given."""
    if fmt == "dot":
        text = to_dot(g)
        if header is not None:
            text = f"// config: {header}\n" + text
    elif fmt == "json":
        doc = to_json(g)
        if header is not None:
            doc = {"config": json.loads(header), **doc}
        text = json.dumps(doc, indent=1, ensure_ascii=False) + "\n"
    else:
        raise ValueError(f"unknown graph format {fmt!r}")
    Path(path).write_text(text, encoding="utf-8")


def load_graph(path) -> CoordGraph:
    text = Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        return from_json(json.loads(text))
    return from_dot(text)
