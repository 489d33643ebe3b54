"""Command-line client.

Each subcommand builds a request model and hands it to the service handler,
in-process by default or over HTTP with ``--url``.

Exit codes: 0 success, 1 bad input, 2 a result contradicting a proven bound,
3 budget exhaustion (partial output still written).
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from pydantic import BaseModel

from .errors import BudgetExceeded, GGCError, InconsistencyError
from .lab import ResultRow, read_rows, rows_to_csv, rows_to_json
from .schemas import (
    ConjectureRequest,
    LabRequest,
    OrientRequest,
    ResultRowModel,
    SolveRequest,
    VerifyRequest,
)
from .service import HANDLERS, STATUS_BUDGET, STATUS_INVARIANT

EXIT_OK = 0
EXIT_BAD_INPUT = 1
EXIT_INVARIANT = 2
EXIT_BUDGET = 3


class RemoteError(Exception):
    def __init__(self, status: int, detail: str):
        self.status = status
        super().__init__(detail)


def call(name: str, req: BaseModel, url: str | None = None) -> BaseModel:
    handler, _, response_cls = HANDLERS[name]
    if url is None:
        return handler(req)
    import httpx

    resp = httpx.post(f"{url.rstrip('/')}/{name}", json=req.model_dump(mode="json"), timeout=None)
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail", resp.text)
        except ValueError:
            detail = resp.text
        raise RemoteError(resp.status_code, str(detail))
    return response_cls.model_validate(resp.json())


def _emit(resp: BaseModel, as_json: bool) -> bool:
    if as_json:
        print(resp.model_dump_json(indent=1))
    return as_json


def cmd_solve(args) -> int:
    resp = call("solve", SolveRequest(param=args.param, mode=args.mode, graph6=args.graph6, k=args.k,
                                      node_budget=args.node_budget), args.url)
    if _emit(resp, args.json):
        return EXIT_OK
    if resp.winner is not None:
        print(resp.winner)
        return EXIT_OK
    print(resp.value)
    wins = " ".join(f"{k}={w[0]}" for k, w in sorted(resp.wins.items()))
    print(f"# winners by k: {wins}")
    if resp.offline_chromatic is not None:
        print(f"# offline chromatic number: {resp.offline_chromatic}; greedy bound: {resp.upper_bound}")
    if resp.monotone is False:
        print("# note: Alice's wins are not monotone in k")
    return EXIT_OK


def cmd_orient(args) -> int:
    resp = call("orient", OrientRequest(graph6=args.graph6), args.url)
    if _emit(resp, args.json):
        return EXIT_OK
    print(resp.dplus)
    print(" ".join(resp.orientation))
    if resp.certificate:
        c = resp.certificate
        print(f"# optimal: H={c.vertices} spans {c.edges_within} > {c.k}*{len(c.vertices)} edges")
    return EXIT_OK


def cmd_verify(args) -> int:
    k = None if args.k in (None, "auto") else int(args.k)
    req = VerifyRequest(strategy=args.strategy, graph6=args.graph6, k=k, exhaustive=args.exhaustive,
                        strict_rule7=args.strict_rule7, seed=args.seed, node_budget=args.node_budget)
    resp = call("verify", req, args.url)
    if args.trace and resp.trace:
        Path(args.trace).write_text(resp.trace)
    if not _emit(resp, args.json):
        print(f"{resp.status} k={resp.k} delta={resp.delta} dplus={resp.dplus} nodes={resp.nodes} lines={resp.lines}")
        for msg in resp.invariant_failures:
            print(f"# invariant: {msg}")
        if resp.trace and resp.status != "ok" and not args.trace:
            sys.stdout.write(resp.trace)
    if resp.status == "budget":
        return EXIT_BUDGET
    # losing below delta + 3*dplus + 1 contradicts nothing
    at_bound = resp.k >= resp.delta + 3 * resp.dplus + 1
    return EXIT_INVARIANT if resp.status != "ok" and at_bound else EXIT_OK


def cmd_lab(args) -> int:
    tasks = [t.strip() for t in args.tasks.split(",") if t.strip()]
    req = LabRequest(corpus=args.corpus, tasks=tasks, jobs=args.jobs, cache=args.cache,
                     node_budget=args.node_budget, time_budget=args.time_budget)
    resp = call("lab", req, args.url)
    rows = [ResultRow(**r.model_dump()) for r in resp.rows]
    text = rows_to_json(rows) if args.out and args.out.endswith(".json") else rows_to_csv(rows)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    for msg in resp.rejected:
        print(f"rejected: {msg}", file=sys.stderr)
    if resp.skipped:
        print(f"{resp.skipped} row(s) exceeded their budget", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


def cmd_conjecture(args) -> int:
    rows = read_rows(args.input)
    resp = call("conjecture", ConjectureRequest(rows=[ResultRowModel(**r.__dict__) for r in rows]), args.url)
    if not _emit(resp, args.json):
        sys.stdout.write(resp.report)
    # differences are findings, never failures
    return EXIT_OK


def cmd_replay(args) -> int:
    from .strategies import MatchTrace

    trace = MatchTrace.from_text(Path(args.trace).read_text())
    ok = trace.replay()
    print("replay ok" if ok else "replay mismatch")
    return EXIT_OK if ok else EXIT_INVARIANT


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("ggc.service:app", host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ggc", description="Total coloring and marking games on small graphs.")
    p.add_argument("--url", help="send requests to a running ggc service instead of solving in-process")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="game chromatic number or game coloring number")
    s.add_argument("--param", choices=["chi-g", "gcol"], required=True)
    s.add_argument("--mode", choices=["vertex", "edge", "total"], default="total")
    s.add_argument("--graph6", required=True)
    s.add_argument("--k", type=int, help="solve only this number of colors / threshold")
    s.add_argument("--node-budget", type=int)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("orient", help="orientation with minimum max outdegree")
    s.add_argument("--graph6", required=True)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_orient)

    s = sub.add_parser("verify", help="check Alice's activation strategy")
    s.add_argument("--strategy", choices=["activation"], default="activation")
    s.add_argument("--graph6", required=True)
    s.add_argument("--k", default="auto", help="marking parameter, or 'auto' for delta + 3*dplus + 1")
    s.add_argument("--exhaustive", action="store_true", help="enumerate every Bob line (default: one random Bob)")
    s.add_argument("--strict-rule7", action="store_true", help="restart tours from the lowest edge even if marked")
    s.add_argument("--seed", type=int, default=1)
    s.add_argument("--node-budget", type=int, default=1_000_000)
    s.add_argument("--trace", help="write the match or counterexample trace here")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("lab", help="batch solve a corpus")
    s.add_argument("--corpus", required=True, help="graph6:..., file:..., gen:..., exhaustive:N[-M][:connected]")
    s.add_argument("--tasks", default="gcol_edge,gcol_total,chi_g_total,bounds")
    s.add_argument("--out", help="CSV (default) or .json output path")
    s.add_argument("--cache")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--node-budget", type=int, default=2_000_000)
    s.add_argument("--time-budget", type=float)
    s.set_defaults(func=cmd_lab)

    s = sub.add_parser("conjecture", help="report gcol_total - gcol_edge over a lab CSV")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_conjecture)

    s = sub.add_parser("replay", help="replay a trace file and check its snapshots")
    s.add_argument("trace")
    s.set_defaults(func=cmd_replay)

    s = sub.add_parser("serve", help="run the HTTP service")
    s.add_argument("--host", default="127.0.0.1")
    s.add_argument("--port", type=int, default=8000)
    s.set_defaults(func=cmd_serve)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except InconsistencyError as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except BudgetExceeded as exc:
        print(f"budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except RemoteError as exc:
        print(f"server: {exc}", file=sys.stderr)
        return {STATUS_INVARIANT: EXIT_INVARIANT, STATUS_BUDGET: EXIT_BUDGET}.get(exc.status, EXIT_BAD_INPUT)
    except (GGCError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
