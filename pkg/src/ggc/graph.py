"""Simple graphs, game objects, and the conflict graphs games are played on.

Every game in this package is a vertex game on a :class:`ConflictGraph`.
The total game on ``G`` is the vertex game on the total graph ``T(G)``, the
edge game is the vertex game on the line graph ``L(G)``, and the vertex game
is played on ``G`` itself.

Objects of ``G`` are numbered by a flat index: vertices ``0..n-1`` followed
by edges ``n..n+m-1``, edges in lexicographic endpoint order.
"""

from __future__ import annotations

import enum
import itertools
import os
import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import CapExceeded, GraphError, ParseError

DEFAULT_OBJECT_CAP = 64


def object_cap() -> int:
    raw = os.environ.get("GGC_OBJECT_CAP")
    if raw is None:
        return DEFAULT_OBJECT_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise GraphError(f"GGC_OBJECT_CAP must be an integer, got {raw!r}") from None
    if cap < 1:
        raise GraphError("GGC_OBJECT_CAP must be positive")
    return cap


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected simple graph with a canonical edge order.

    ``edges[j]`` is the pair ``(u, v)`` with ``u < v``; ``j`` is the stable
    edge label used by every strategy and trace.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    edge_index: dict[tuple[int, int], int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise GraphError("vertex count must be non-negative")
        norm = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge {e} has an endpoint outside [0, {self.n})")
            pair = (min(u, v), max(u, v))
            if pair in norm:
                raise GraphError(f"duplicate edge {pair}")
            norm.add(pair)
        edges = tuple(sorted(norm))
        cap = object_cap()
        if self.n + len(edges) > cap:
            raise CapExceeded(f"graph has {self.n + len(edges)} objects, cap is {cap}")
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in edges:
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "adjacency", tuple(tuple(sorted(a)) for a in adj))
        object.__setattr__(self, "edge_index", {e: j for j, e in enumerate(edges)})

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def num_objects(self) -> int:
        return self.n + len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def incident_edges(self, v: int) -> list[int]:
        return [self.edge_index[(min(u, v), max(u, v))] for u in self.adjacency[v]]

    def objects(self) -> list[ObjectRef]:
        return [self.vertex_ref(i) for i in range(self.n)] + [self.edge_ref(j) for j in range(self.m)]

    def vertex_ref(self, i: int) -> ObjectRef:
        if not 0 <= i < self.n:
            raise GraphError(f"no vertex {i}")
        return ObjectRef(ObjectKind.VERTEX, i, i)

    def edge_ref(self, j: int) -> ObjectRef:
        if not 0 <= j < self.m:
            raise GraphError(f"no edge {j}")
        return ObjectRef(ObjectKind.EDGE, j, self.n + j)

    def ref(self, flat: int) -> ObjectRef:
        if flat < self.n:
            return self.vertex_ref(flat)
        return self.edge_ref(flat - self.n)

    def parse_label(self, label: str) -> ObjectRef:
        """Resolve ``"v3"`` / ``"e5"`` into an object of this graph."""
        if len(label) < 2 or label[0] not in "ve" or not label[1:].isdigit():
            raise GraphError(f"bad object label {label!r}")
        idx = int(label[1:])
        return self.vertex_ref(idx) if label[0] == "v" else self.edge_ref(idx)

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = {0}
        stack = [0]
        while stack:
            for w in self.adjacency[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def relabel(self, perm: Sequence[int]) -> SimpleGraph:
        """Return the graph with vertex ``v`` renamed ``perm[v]``."""
        return SimpleGraph(self.n, tuple((perm[u], perm[v]) for u, v in self.edges))

    def count_edges_within(self, vertices: Iterable[int]) -> int:
        vs = set(vertices)
        return sum(1 for u, v in self.edges if u in vs and v in vs)

    def __str__(self):
        return to_graph6(self)


def make_graph(n: int, edges: Iterable[tuple[int, int]]) -> SimpleGraph:
    return SimpleGraph(n, tuple(tuple(e) for e in edges))


class ObjectKind(str, enum.Enum):
    VERTEX = "vertex"
    EDGE = "edge"


@dataclass(frozen=True, order=True)
class ObjectRef:
    kind: ObjectKind
    index: int
    flat: int

    @property
    def label(self) -> str:
        return ("v" if self.kind is ObjectKind.VERTEX else "e") + str(self.index)

    def __str__(self):
        return self.label


class ConflictMode(str, enum.Enum):
    IDENTITY = "identity"
    LINE = "line"
    TOTAL = "total"
    # L(G) plus one isolated vertex per source vertex, labeled like T(G).
    LINE_PLUS_ISOLATED = "line+isolated"


@dataclass(frozen=True)
class ConflictGraph:
    """A labeled simple graph whose vertices are game objects of ``source``.

    Games index positions by conflict-vertex index ``i`` (0..size-1); the
    label ``vertices[i]`` ties it back to an object of the source graph.
    """

    mode: ConflictMode
    vertices: tuple[ObjectRef, ...]
    adjacency: tuple[tuple[int, ...], ...]
    source: SimpleGraph
    masks: tuple[int, ...] = field(init=False, repr=False, compare=False)
    index_of: dict[ObjectRef, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        masks = []
        for i, nbrs in enumerate(self.adjacency):
            mask = 0
            for j in nbrs:
                if j == i:
                    raise GraphError("conflict graph has a self-loop")
                mask |= 1 << j
            masks.append(mask)
        for i, mask in enumerate(masks):
            for j in self.adjacency[i]:
                if not masks[j] >> i & 1:
                    raise GraphError("conflict adjacency is not symmetric")
        object.__setattr__(self, "masks", tuple(masks))
        object.__setattr__(self, "index_of", {ref: i for i, ref in enumerate(self.vertices)})

    @property
    def size(self) -> int:
        return len(self.vertices)

    def degree(self, i: int) -> int:
        return len(self.adjacency[i])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    def locate(self, obj: ObjectRef | int | str) -> int:
        """Conflict index of an object given as ref, conflict index or label."""
        if isinstance(obj, int):
            if not 0 <= obj < self.size:
                raise GraphError(f"no conflict vertex {obj}")
            return obj
        if isinstance(obj, str):
            obj = self.source.parse_label(obj)
        try:
            return self.index_of[obj]
        except KeyError:
            raise GraphError(f"{obj} is not an object of this {self.mode.value} conflict graph") from None

    def is_edge(self, i: int, j: int) -> bool:
        return bool(self.masks[i] >> j & 1)

    def as_simple(self) -> SimpleGraph:
        return SimpleGraph(self.size, tuple((i, j) for i, a in enumerate(self.adjacency) for j in a if i < j))


def _conflict(mode: ConflictMode, G: SimpleGraph, labels: list[ObjectRef], pairs: Iterable[tuple[int, int]]) -> ConflictGraph:
    adj: list[set[int]] = [set() for _ in labels]
    for a, b in pairs:
        adj[a].add(b)
        adj[b].add(a)
    return ConflictGraph(mode, tuple(labels), tuple(tuple(sorted(s)) for s in adj), G)


def identity_graph(G: SimpleGraph) -> ConflictGraph:
    labels = [G.vertex_ref(i) for i in range(G.n)]
    return _conflict(ConflictMode.IDENTITY, G, labels, G.edges)


def _edge_adjacencies(G: SimpleGraph) -> Iterator[tuple[int, int]]:
    for v in range(G.n):
        yield from itertools.combinations(G.incident_edges(v), 2)


def line_graph(G: SimpleGraph) -> ConflictGraph:
    labels = [G.edge_ref(j) for j in range(G.m)]
    return _conflict(ConflictMode.LINE, G, labels, _edge_adjacencies(G))


def total_graph(G: SimpleGraph) -> ConflictGraph:
    n = G.n
    pairs = list(G.edges)
    for j, (u, v) in enumerate(G.edges):
        pairs.append((u, n + j))
        pairs.append((v, n + j))
    pairs.extend((n + a, n + b) for a, b in _edge_adjacencies(G))
    return _conflict(ConflictMode.TOTAL, G, G.objects(), pairs)


def line_plus_isolated(G: SimpleGraph) -> ConflictGraph:
    """``L(G)`` together with ``n`` isolated vertices, on the labels of ``T(G)``."""
    n = G.n
    pairs = ((n + a, n + b) for a, b in _edge_adjacencies(G))
    return _conflict(ConflictMode.LINE_PLUS_ISOLATED, G, G.objects(), pairs)


_BUILDERS = {
    "vertex": identity_graph,
    "edge": line_graph,
    "total": total_graph,
}


def conflict_graph(G: SimpleGraph, mode: str) -> ConflictGraph:
    """Conflict graph for a game mode: ``vertex``, ``edge`` or ``total``."""
    try:
        return _BUILDERS[mode](G)
    except KeyError:
        raise GraphError(f"unknown game mode {mode!r}") from None


def max_degree(G: SimpleGraph) -> int:
    return max((len(a) for a in G.adjacency), default=0)


# --------------------------------------------------------------------------
# graph6


def parse_graph6(text: str) -> SimpleGraph:
    """Decode one graph6 line (short order form only, ``n <= 62``)."""
    s = text.strip()
    base = 0
    if s.startswith(">>graph6<<"):
        base = len(">>graph6<<")
        s = s[base:]
    if not s:
        raise ParseError("empty graph6 string", base)
    data = []
    for pos, ch in enumerate(s):
        code = ord(ch) - 63
        if not 0 <= code <= 63:
            raise ParseError(f"character {ch!r} outside the graph6 range", base + pos)
        data.append(code)
    n = data[0]
    if n == 63:
        raise ParseError("multi-byte order forms (n > 62) are not supported", base)
    nbits = n * (n - 1) // 2
    expected = (nbits + 5) // 6
    if len(data) - 1 != expected:
        raise ParseError(
            f"n={n} needs {expected} data bytes, found {len(data) - 1}",
            base + 1 + min(expected, len(data) - 1),
        )
    bits = []
    for d in data[1:]:
        bits.extend((d >> (5 - b)) & 1 for b in range(6))
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                edges.append((i, j))
            k += 1
    if any(bits[nbits:]):
        raise ParseError("nonzero padding bits", base + len(data) - 1)
    return make_graph(n, edges)


def to_graph6(G: SimpleGraph) -> str:
    if G.n > 62:
        raise GraphError("graph6 short form only covers n <= 62")
    present = set(G.edges)
    bits = [1 if (i, j) in present else 0 for j in range(1, G.n) for i in range(j)]
    bits.extend([0] * (-len(bits) % 6))
    out = [chr(G.n + 63)]
    for p in range(0, len(bits), 6):
        val = 0
        for b in bits[p:p + 6]:
            val = val << 1 | b
        out.append(chr(val + 63))
    return "".join(out)


def read_graph6_lines(lines: Iterable[str]) -> list[SimpleGraph]:
    graphs = []
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        graphs.append(parse_graph6(line))
    return graphs


# --------------------------------------------------------------------------
# families


def complete(n: int) -> SimpleGraph:
    return make_graph(n, itertools.combinations(range(n), 2))


def empty(n: int) -> SimpleGraph:
    return make_graph(n, [])


def path(n: int) -> SimpleGraph:
    return make_graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> SimpleGraph:
    if n < 3:
        raise GraphError("a cycle needs at least 3 vertices")
    return make_graph(n, [(i, (i + 1) % n) for i in range(n)])


def star(leaves: int) -> SimpleGraph:
    """``K_{1,leaves}`` with the center at vertex 0."""
    return make_graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete_bipartite(a: int, b: int) -> SimpleGraph:
    return make_graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def disjoint_union(*graphs: SimpleGraph) -> SimpleGraph:
    edges = []
    offset = 0
    for H in graphs:
        edges.extend((u + offset, v + offset) for u, v in H.edges)
        offset += H.n
    return make_graph(offset, edges)


def gnp(n: int, p: float, seed: int | None = None) -> SimpleGraph:
    rng = random.Random(seed)
    return make_graph(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < p])


def gnm(n: int, m: int, seed: int | None = None) -> SimpleGraph:
    pairs = list(itertools.combinations(range(n), 2))
    if m > len(pairs):
        raise GraphError(f"G({n}, m) has at most {len(pairs)} edges")
    return make_graph(n, random.Random(seed).sample(pairs, m))


_FAMILIES = {
    "complete": (complete, 1),
    "empty": (empty, 1),
    "path": (path, 1),
    "cycle": (cycle, 1),
    "star": (star, 1),
    "bipartite": (complete_bipartite, 2),
}


def generate(family: str, params: Sequence = (), seed: int | None = None) -> SimpleGraph:
    """Build a graph from a named family.

    ``gnp`` takes ``(n, p)`` and ``gnm`` takes ``(n, m)``; both use ``seed``.
    ``union`` takes already-built graphs.
    """
    if family == "union":
        return disjoint_union(*params)
    if family == "gnp":
        n, p = params
        return gnp(int(n), float(p), seed)
    if family == "gnm":
        n, m = params
        return gnm(int(n), int(m), seed)
    try:
        fn, arity = _FAMILIES[family]
    except KeyError:
        raise GraphError(f"unknown graph family {family!r}") from None
    if len(params) != arity:
        raise GraphError(f"family {family!r} takes {arity} integer parameter(s)")
    return fn(*(int(p) for p in params))


def from_dsl(spec: str) -> SimpleGraph:
    """Parse a family string such as ``"complete:3"``, ``"gnp:6:0.5:seed=7"``
    or ``"union:complete:3,complete:1"``."""
    family, _, rest = spec.strip().partition(":")
    if family == "union":
        if not rest:
            raise GraphError("union needs at least one part")
        return disjoint_union(*(from_dsl(part) for part in _split_top(rest)))
    seed = None
    params = []
    for tok in rest.split(":") if rest else []:
        if tok.startswith("seed="):
            seed = int(tok[5:])
        else:
            params.append(tok)
    try:
        return generate(family, params, seed)
    except ValueError as exc:
        raise GraphError(f"bad parameters in {spec!r}: {exc}") from None


def _split_top(text: str) -> list[str]:
    # unions nest, so split on commas outside any inner "union:..." run
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip("() ") for p in parts]


def parse_graph_arg(text: str) -> SimpleGraph:
    """Accept either a family DSL string or a graph6 string."""
    head = text.split(":", 1)[0]
    if ":" in text and (head in _FAMILIES or head in ("union", "gnp", "gnm")):
        return from_dsl(text)
    return parse_graph6(text)


# --------------------------------------------------------------------------
# canonical labeling


def _refine(adj_masks: Sequence[int], cells: list[list[int]]) -> list[list[int]]:
    """Refine an ordered partition to the coarsest equitable one below it.

    Cells are split by neighbor counts into each other cell; split pieces are
    ordered by count so the result is labeling-independent.
    """
    changed = True
    while changed:
        changed = False
        cell_masks = []
        for cell in cells:
            mask = 0
            for v in cell:
                mask |= 1 << v
            cell_masks.append(mask)
        new_cells = []
        for cell in cells:
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            groups: dict[tuple[int, ...], list[int]] = {}
            for v in cell:
                sig = tuple((adj_masks[v] & cm).bit_count() for cm in cell_masks)
                groups.setdefault(sig, []).append(v)
            if len(groups) > 1:
                changed = True
                for sig in sorted(groups):
                    new_cells.append(groups[sig])
            else:
                new_cells.append(cell)
        cells = new_cells
    return cells


def _leaf_code(adj_masks: Sequence[int], order: Sequence[int]) -> tuple[int, ...]:
    pos = {v: i for i, v in enumerate(order)}
    rows = []
    for v in order:
        row = 0
        m = adj_masks[v]
        while m:
            low = m & -m
            row |= 1 << pos[low.bit_length() - 1]
            m ^= low
        rows.append(row)
    return tuple(rows)


def canonical_form(G: SimpleGraph) -> tuple[int, ...]:
    """Lexicographically extremal adjacency code over refinement leaves.

    Individualize-refine search; candidates within a cell are deduplicated
    by twin class (vertices with equal open or closed neighborhoods are
    interchangeable by an automorphism), which keeps empty and complete
    pieces polynomial.
    """
    masks = [0] * G.n
    for u, v in G.edges:
        masks[u] |= 1 << v
        masks[v] |= 1 << u
    if G.n == 0:
        return ()
    best: list[tuple[int, ...] | None] = [None]

    def search(cells: list[list[int]]):
        cells = _refine(masks, cells)
        target = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if target is None:
            code = _leaf_code(masks, [c[0] for c in cells])
            if best[0] is None or code > best[0]:
                best[0] = code
            return
        seen_twins: list[int] = []
        for v in cells[target]:
            if any(_twins(masks, v, w) for w in seen_twins):
                continue
            seen_twins.append(v)
            rest = [w for w in cells[target] if w != v]
            search(cells[:target] + [[v], rest] + cells[target + 1:])

    search([list(range(G.n))])
    return best[0]


def _twins(masks: Sequence[int], a: int, b: int) -> bool:
    ma = masks[a] & ~(1 << b)
    mb = masks[b] & ~(1 << a)
    return ma == mb


def canonical_key(G: SimpleGraph) -> str:
    """String equal for two graphs iff they are isomorphic."""
    code = canonical_form(G)
    width = (G.n + 3) // 4
    return f"{G.n}:" + ".".join(format(r, f"0{width}x") for r in code)


def canonical_graph(G: SimpleGraph) -> SimpleGraph:
    code = canonical_form(G)
    return make_graph(G.n, [(i, j) for i, row in enumerate(code) for j in range(i + 1, G.n) if row >> j & 1])


def enumerate_graphs(n: int, connected: bool = False) -> list[SimpleGraph]:
    """All graphs on exactly ``n`` vertices up to isomorphism.

    Generate-and-canonicalize over every edge subset; output is sorted by
    canonical key so the order is reproducible.
    """
    pairs = list(itertools.combinations(range(n), 2))
    found: dict[str, SimpleGraph] = {}
    for bits in range(1 << len(pairs)):
        G = make_graph(n, [pairs[i] for i in range(len(pairs)) if bits >> i & 1])
        if connected and not G.is_connected():
            continue
        key = canonical_key(G)
        if key not in found:
            found[key] = canonical_graph(G)
    return [found[k] for k in sorted(found, key=lambda k: (found[k].m, k))]
