"""Batch experiments over graph corpora.

A corpus is described by a short string:

* ``graph6:Bw,Cw`` - literal graph6 strings
* ``file:graphs.g6`` - a graph6 file, one graph per line, ``#`` comments
* ``gen:complete:3;path:4`` - family strings separated by ``;``
* ``exhaustive:4`` or ``exhaustive:1-4`` - every graph on exactly that many
  vertices (or on every count in the range), up to isomorphism

Any form may end in ``:connected`` to keep connected graphs only.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import os
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from .coloring import game_chromatic_profile
from .errors import BudgetExceeded, CacheError, CapExceeded, GraphError, InconsistencyError
from .graph import SimpleGraph, canonical_key, enumerate_graphs, from_dsl, max_degree, parse_graph6, to_graph6
from .marking import gcol
from .orientation import min_max_outdegree_orientation
from .strategies import verify_activation

log = logging.getLogger(__name__)

CACHE_SCHEMA = 1
SKIPPED = "skipped"
ALL_TASKS = ("gcol_edge", "gcol_total", "chi_g_total", "bounds", "verify_activation")


@dataclass
class ResultRow:
    key: str
    graph6: str
    n: int
    m: int
    delta: int
    dplus: int | None = None
    gcol_edge: int | None = None
    gcol_total: int | None = None
    chi_g_total: int | None = None
    bound_obs1: int | None = None
    bound_thm2: int | None = None
    conj_diff: int | None = None
    # beyond the core columns: A/B winner string over k = 1..2*delta+1,
    # the activation verification status, and budget-skipped fields
    chi_g_profile: str | None = None
    activation: str | None = None
    skipped: list[str] = field(default_factory=list)

    def violations(self) -> list[str]:
        out = []
        if self.gcol_edge is not None and self.gcol_total is not None and self.gcol_edge > self.gcol_total:
            out.append(f"gcol_edge={self.gcol_edge} > gcol_total={self.gcol_total}")
        if self.chi_g_total is not None and self.gcol_total is not None and self.chi_g_total > self.gcol_total:
            out.append(f"chi_g_total={self.chi_g_total} > gcol_total={self.gcol_total}")
        if self.chi_g_total is not None and self.bound_obs1 is not None and self.chi_g_total > self.bound_obs1:
            out.append(f"chi_g_total={self.chi_g_total} > 2*delta+1={self.bound_obs1}")
        if self.gcol_total is not None and self.bound_thm2 is not None and self.gcol_total > self.bound_thm2:
            out.append(f"gcol_total={self.gcol_total} > delta+3*dplus+1={self.bound_thm2}")
        if self.activation not in (None, "ok", SKIPPED):
            out.append(f"activation strategy verification: {self.activation}")
        return out

    def has(self, name: str) -> bool:
        return getattr(self, name) is not None or name in self.skipped


COLUMNS = [f.name for f in fields(ResultRow)]
_INT_COLUMNS = {"n", "m", "delta", "dplus", "gcol_edge", "gcol_total", "chi_g_total", "bound_obs1", "bound_thm2", "conj_diff"}


@dataclass
class CorpusSpec:
    source: str
    items: list[str] = field(default_factory=list)
    connected: bool = False
    node_budget: int | None = 2_000_000
    time_budget: float | None = None
    rejected: list[str] = field(default_factory=list)

    @classmethod
    def parse(cls, text: str, **budget) -> CorpusSpec:
        kind, _, rest = text.partition(":")
        connected = False
        if rest.endswith(":connected") or rest == "connected":
            connected = True
            rest = rest[: -len("connected")].rstrip(":")
        if kind == "graph6":
            items = [s for s in rest.split(",") if s]
        elif kind == "gen":
            items = [s for s in rest.split(";") if s]
        elif kind in ("file", "exhaustive"):
            if not rest:
                raise GraphError(f"corpus {text!r} needs an argument")
            items = [rest]
        else:
            raise GraphError(f"unknown corpus source {kind!r}")
        return cls(kind, items, connected, **budget)

    def _each(self, items, build) -> list[SimpleGraph]:
        graphs = []
        for item in items:
            try:
                graphs.append(build(item))
            except CapExceeded as exc:
                self.rejected.append(f"{item}: {exc}")
        return graphs

    def expand(self) -> list[SimpleGraph]:
        """Graphs of the corpus in source order; over-cap graphs go to ``rejected``."""
        self.rejected = []
        if self.source == "graph6":
            graphs = self._each(self.items, parse_graph6)
        elif self.source == "gen":
            graphs = self._each(self.items, from_dsl)
        elif self.source == "file":
            try:
                lines = Path(self.items[0]).read_text().splitlines()
            except OSError as exc:
                raise GraphError(f"cannot read corpus file: {exc}") from None
            lines = [ln.strip() for ln in lines if ln.strip() and not ln.lstrip().startswith("#")]
            graphs = self._each(lines, parse_graph6)
        elif self.source == "exhaustive":
            lo, _, hi = self.items[0].partition("-")
            lo_n, hi_n = int(lo), int(hi or lo)
            if hi_n > 6:
                raise GraphError("exhaustive enumeration is limited to n <= 6")
            graphs = [G for n in range(lo_n, hi_n + 1) for G in enumerate_graphs(n)]
        else:
            raise GraphError(f"unknown corpus source {self.source!r}")
        if self.connected:
            graphs = [G for G in graphs if G.is_connected()]
        return graphs


def _solve_row(args) -> ResultRow:
    g6, tasks, node_budget, time_budget = args
    G = parse_graph6(g6)
    delta = max_degree(G)
    row = ResultRow(canonical_key(G), g6, G.n, G.m, delta)
    start = time.monotonic()

    def run(name, fn):
        if time_budget is not None and time.monotonic() - start > time_budget:
            row.skipped.append(name)
            return None
        try:
            return fn()
        except BudgetExceeded:
            row.skipped.append(name)
            return None

    if "bounds" in tasks or "verify_activation" in tasks:
        row.dplus = min_max_outdegree_orientation(G).max_outdegree
        row.bound_obs1 = 2 * delta + 1
        row.bound_thm2 = delta + 3 * row.dplus + 1
    if "gcol_edge" in tasks:
        row.gcol_edge = run("gcol_edge", lambda: gcol(G, "edge", node_budget))
    if "gcol_total" in tasks:
        row.gcol_total = run("gcol_total", lambda: gcol(G, "total", node_budget))
    if "chi_g_total" in tasks:
        prof = run("chi_g_total", lambda: game_chromatic_profile(G, "total", node_budget))
        if prof is not None:
            row.chi_g_total = prof.value
            row.chi_g_profile = "".join(prof.wins[k].value[0] for k in sorted(prof.wins))
    if "verify_activation" in tasks:
        res = run("activation", lambda: verify_activation(G, node_budget=node_budget)[0])
        if res is not None:
            row.activation = "ok" if res.ok else (res.status if res.status != "ok" else "invariant")
            if res.status == "budget":
                row.skipped.append("activation")
                row.activation = SKIPPED
    if row.gcol_edge is not None and row.gcol_total is not None:
        row.conj_diff = row.gcol_total - row.gcol_edge
    return row


def run_corpus(
    spec: CorpusSpec,
    tasks=ALL_TASKS,
    cache: str | os.PathLike | None = None,
    jobs: int = 1,
    strict: bool = True,
) -> list[ResultRow]:
    """Solve every non-isomorphic graph of the corpus.

    Rows that violate a proven inequality raise :class:`InconsistencyError`
    when ``strict``; budget overruns leave fields ``None`` and list them in
    ``row.skipped``.
    """
    unknown = set(tasks) - set(ALL_TASKS)
    if unknown:
        raise ValueError(f"unknown tasks {sorted(unknown)}")
    tasks = tuple(t for t in ALL_TASKS if t in set(tasks))
    cached = cache_load(cache) if cache and Path(cache).exists() else {}
    order: list[str] = []
    graph6_of: dict[str, str] = {}
    for G in spec.expand():
        key = canonical_key(G)
        if key not in graph6_of:
            order.append(key)
            graph6_of[key] = to_graph6(G)

    def satisfied(row: ResultRow) -> bool:
        need = {"gcol_edge": "gcol_edge", "gcol_total": "gcol_total", "chi_g_total": "chi_g_total",
                "bounds": "dplus", "verify_activation": "activation"}
        return all(row.has(need[t]) and need[t] not in row.skipped for t in tasks)

    todo = [k for k in order if not (k in cached and satisfied(cached[k]))]
    jobs_args = [(graph6_of[k], tasks, spec.node_budget, spec.time_budget) for k in todo]
    if jobs > 1 and len(jobs_args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            fresh = list(pool.map(_solve_row, jobs_args))
    else:
        fresh = [_solve_row(a) for a in jobs_args]
    solved = {row.key: row for row in fresh}
    rows = []
    for key in order:
        row = solved.get(key) or cached[key]
        row = ResultRow(**{**asdict(row), "graph6": graph6_of[key]})
        rows.append(row)
        bad = row.violations()
        if bad and strict:
            raise InconsistencyError(f"graph {row.graph6}: " + "; ".join(bad))
    if cache:
        merged = dict(cached)
        merged.update(solved)
        cache_store(cache, list(merged.values()))
    log.info("corpus: %d graphs, %d solved, %d from cache", len(order), len(fresh), len(order) - len(fresh))
    return rows


# --------------------------------------------------------------------------
# conjecture report


@dataclass
class ConjectureReport:
    diffs: list[tuple[str, int]]
    histogram: dict[int, int]
    counterexamples: list[str]
    excluded: list[str]

    def to_text(self) -> str:
        lines = ["# gcol_total - gcol_edge per graph"]
        lines.extend(f"{g6}\t{d}" for g6, d in self.diffs)
        lines.append("# histogram")
        lines.extend(f"diff={d}\tcount={c}" for d, c in sorted(self.histogram.items()))
        if not self.diffs:
            lines.append("# no rows: report is vacuous")
        elif self.counterexamples:
            lines.append(f"# finding: diff != 2 for {len(self.counterexamples)} graph(s): " + " ".join(self.counterexamples))
        else:
            lines.append("# no counterexample")
        if self.excluded:
            lines.append("# excluded (missing gcol fields): " + " ".join(self.excluded))
        return "\n".join(lines) + "\n"


def check_conjecture(rows: list[ResultRow]) -> ConjectureReport:
    """Compare gcol_total with gcol_edge + 2; differences are findings, not errors."""
    diffs, excluded = [], []
    for row in rows:
        if row.gcol_edge is None or row.gcol_total is None:
            excluded.append(row.graph6)
            continue
        diffs.append((row.graph6, row.gcol_total - row.gcol_edge))
    hist = dict(sorted(Counter(d for _, d in diffs).items()))
    return ConjectureReport(diffs, hist, [g for g, d in diffs if d != 2], excluded)


# --------------------------------------------------------------------------
# persistence


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, list):
        return ";".join(value)
    return str(value)


def rows_to_csv(rows: list[ResultRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for row in rows:
        d = asdict(row)
        w.writerow([SKIPPED if name in row.skipped and d[name] is None else _cell(d[name]) for name in COLUMNS])
    return buf.getvalue()


def rows_from_csv(text: str) -> list[ResultRow]:
    reader = csv.DictReader(io.StringIO(text))
    missing = {"graph6", "gcol_edge", "gcol_total"} - set(reader.fieldnames or [])
    if missing:
        raise CacheError(f"CSV lacks columns {sorted(missing)}")
    rows = []
    for rec in reader:
        kw = {}
        for name in COLUMNS:
            raw = rec.get(name, "")
            if name == "skipped":
                kw[name] = [s for s in raw.split(";") if s]
            elif raw in ("", SKIPPED):
                kw[name] = None
            elif name in _INT_COLUMNS:
                kw[name] = int(raw)
            else:
                kw[name] = raw
        if kw.get("key") is None:
            kw["key"] = canonical_key(parse_graph6(kw["graph6"]))
        for name in ("n", "m", "delta"):
            kw[name] = kw[name] if kw[name] is not None else 0
        rows.append(ResultRow(**kw))
    return rows


def rows_to_json(rows: list[ResultRow]) -> str:
    return json.dumps([asdict(r) for r in rows], indent=1) + "\n"


def write_rows(path: str | os.PathLike, rows: list[ResultRow]) -> None:
    p = Path(path)
    text = rows_to_json(rows) if p.suffix == ".json" else rows_to_csv(rows)
    p.write_text(text)


def read_rows(path: str | os.PathLike) -> list[ResultRow]:
    p = Path(path)
    text = p.read_text()
    if p.suffix == ".json":
        return [ResultRow(**d) for d in json.loads(text)]
    return rows_from_csv(text)


def cache_store(path: str | os.PathLike, rows: list[ResultRow]) -> None:
    payload = {"schema": CACHE_SCHEMA, "rows": {r.key: asdict(r) for r in sorted(rows, key=lambda r: r.key)}}
    tmp = Path(str(path) + ".tmp")
    tmp.write_text(json.dumps(payload, indent=1, sort_keys=True))
    os.replace(tmp, path)


def cache_load(path: str | os.PathLike) -> dict[str, ResultRow]:
    """Rows keyed by canonical key; all-or-nothing on malformed files."""
    try:
        payload = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CacheError(f"unreadable cache {path}: {exc}") from None
    if not isinstance(payload, dict) or "schema" not in payload:
        raise CacheError(f"{path} is not a result cache")
    if payload["schema"] != CACHE_SCHEMA:
        raise CacheError(f"cache schema {payload['schema']} does not match {CACHE_SCHEMA}; delete or rebuild {path}")
    try:
        rows = {key: ResultRow(**rec) for key, rec in payload["rows"].items()}
    except (TypeError, AttributeError, KeyError) as exc:
        raise CacheError(f"corrupted cache {path}: {exc}") from None
    if any(k != r.key for k, r in rows.items()):
        raise CacheError(f"corrupted cache {path}: key mismatch")
    return rows


def lookup(cache: dict[str, ResultRow], G: SimpleGraph) -> ResultRow | None:
    return cache.get(canonical_key(G))
