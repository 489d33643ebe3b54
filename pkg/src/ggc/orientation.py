"""Orientations of bounded maximum outdegree.

Feasibility of ``max outdegree <= k`` is a bipartite flow problem: the source
sends one unit to every edge, each edge forwards its unit to one of its
endpoints, and every vertex passes at most ``k`` units to the sink. The
endpoint that absorbs an edge's unit becomes its tail. When the flow falls
short of ``m``, the vertices reachable from the source in the residual network
form a set ``H`` with more than ``k * |H|`` internal edges.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import GraphError
from .graph import SimpleGraph, max_degree


@dataclass(frozen=True)
class Orientation:
    graph: SimpleGraph
    tails: tuple[int, ...]
    out_lists: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    in_lists: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        G = self.graph
        if len(self.tails) != G.m:
            raise GraphError("orientation must direct every edge exactly once")
        outs: list[list[int]] = [[] for _ in range(G.n)]
        ins: list[list[int]] = [[] for _ in range(G.n)]
        for j, ((u, v), t) in enumerate(zip(G.edges, self.tails)):
            if t not in (u, v):
                raise GraphError(f"tail {t} is not an endpoint of edge {j}")
            outs[t].append(j)
            ins[v if t == u else u].append(j)
        object.__setattr__(self, "out_lists", tuple(map(tuple, outs)))
        object.__setattr__(self, "in_lists", tuple(map(tuple, ins)))

    def head(self, j: int) -> int:
        u, v = self.graph.edges[j]
        return v if self.tails[j] == u else u

    def tail(self, j: int) -> int:
        return self.tails[j]

    @property
    def max_outdegree(self) -> int:
        return max((len(o) for o in self.out_lists), default=0)

    def out_edges(self, x: int) -> tuple[int, ...]:
        return self.out_lists[x]

    def in_edges(self, x: int) -> tuple[int, ...]:
        return self.in_lists[x]

    def serialize(self) -> list[str]:
        return [f"{self.tails[j]}>{self.head(j)}" for j in range(self.graph.m)]

    @classmethod
    def parse(cls, G: SimpleGraph, pairs: list[str]) -> Orientation:
        if len(pairs) != G.m:
            raise GraphError(f"expected {G.m} tail>head pairs, got {len(pairs)}")
        tails = []
        for j, text in enumerate(pairs):
            t, _, h = text.partition(">")
            t, h = int(t), int(h)
            if (min(t, h), max(t, h)) != G.edges[j]:
                raise GraphError(f"pair {text!r} does not match edge {j} = {G.edges[j]}")
            tails.append(t)
        return cls(G, tuple(tails))


@dataclass(frozen=True)
class DensityCertificate:
    """Vertex set ``H`` whose induced edge count exceeds ``k * |H|``."""

    vertices: tuple[int, ...]
    edges_within: int
    k: int

    def check(self, G: SimpleGraph) -> bool:
        return G.count_edges_within(self.vertices) == self.edges_within and self.edges_within > self.k * len(self.vertices)


def _max_flow(G: SimpleGraph, k: int):
    m, n = G.m, G.n
    source, sink = 0, m + n + 1
    size = m + n + 2
    # cap[u] maps neighbor -> residual capacity; insertion order fixes BFS order
    cap: list[dict[int, int]] = [dict() for _ in range(size)]

    def arc(u, v, c):
        cap[u][v] = cap[u].get(v, 0) + c
        cap[v].setdefault(u, 0)

    inf = m + 1
    for j, (u, v) in enumerate(G.edges):
        arc(source, 1 + j, 1)
        arc(1 + j, 1 + m + u, inf)
        arc(1 + j, 1 + m + v, inf)
    for x in range(n):
        arc(1 + m + x, sink, k)

    flow = 0
    while True:
        parent = {source: None}
        q = deque([source])
        while q and sink not in parent:
            u = q.popleft()
            for v, c in cap[u].items():
                if c > 0 and v not in parent:
                    parent[v] = u
                    q.append(v)
        if sink not in parent:
            break
        v = sink
        while parent[v] is not None:
            u = parent[v]
            cap[u][v] -= 1
            cap[v][u] += 1
            v = u
        flow += 1
    return flow, cap, parent


def feasible_orientation(G: SimpleGraph, k: int) -> Orientation | DensityCertificate:
    """An orientation with max outdegree ``<= k``, or a certificate that none exists."""
    if k < 0:
        raise ValueError("k must be non-negative")
    m = G.m
    flow, cap, reach = _max_flow(G, k)
    if flow == m:
        tails = []
        for j, (u, v) in enumerate(G.edges):
            # the reverse arc from the vertex back to the edge carries the used unit
            tails.append(u if cap[1 + m + u][1 + j] > 0 else v)
        return Orientation(G, tuple(tails))
    H = tuple(x for x in range(G.n) if 1 + m + x in reach)
    return DensityCertificate(H, G.count_edges_within(H), k)


def min_max_outdegree_orientation(G: SimpleGraph) -> Orientation:
    return optimal_orientation(G)[0]


def optimal_orientation(G: SimpleGraph) -> tuple[Orientation, DensityCertificate | None]:
    """Optimal orientation plus the infeasibility certificate one below optimum.

    Binary search on ``k`` over ``[ceil(m/n), Delta]``. The certificate is
    ``None`` when the optimum is 0 (edgeless graphs).
    """
    if G.m == 0:
        return Orientation(G, ()), None
    lo, hi = -(-G.m // G.n), max_degree(G)
    best = None
    while lo < hi:
        mid = (lo + hi) // 2
        res = feasible_orientation(G, mid)
        if isinstance(res, Orientation):
            hi, best = mid, res
        else:
            lo = mid + 1
    if best is None:
        best = feasible_orientation(G, lo)
    cert = feasible_orientation(G, lo - 1)
    assert isinstance(best, Orientation) and isinstance(cert, DensityCertificate)
    return best, cert


def verify_orientation(G: SimpleGraph, D: Orientation, k: int) -> bool:
    if D.graph != G:
        raise GraphError("orientation is defined on a different graph")
    return D.max_outdegree <= k

