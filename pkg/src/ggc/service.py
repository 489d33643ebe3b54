"""HTTP service over the solvers.

The handler functions are plain callables so the CLI can run them in-process;
``app`` wires the same handlers to FastAPI routes. Run it with
``uvicorn ggc.service:app`` or ``ggc serve``.
"""

from __future__ import annotations

from dataclasses import asdict

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__
from .coloring import coloring_profile, offline_chromatic, solve_coloring
from .errors import BudgetExceeded, GGCError, InconsistencyError
from .graph import conflict_graph, max_degree, parse_graph6, total_graph, to_graph6
from .lab import CorpusSpec, ResultRow, check_conjecture, run_corpus
from .marking import marking_profile, solve_marking
from .orientation import optimal_orientation
from .schemas import (
    Certificate,
    ConjectureRequest,
    ConjectureResponse,
    LabRequest,
    LabResponse,
    OrientRequest,
    OrientResponse,
    ResultRowModel,
    SolveRequest,
    SolveResponse,
    VerifyRequest,
    VerifyResponse,
)
from .strategies import MARKING, ActivationAlice, RandomStrategy, play_match, verify_activation

# HTTP status for each failure class; the CLI maps them back to exit codes
STATUS_INVARIANT = 409
STATUS_BUDGET = 503
STATUS_BAD_INPUT = 422


def solve(req: SolveRequest) -> SolveResponse:
    G = parse_graph6(req.graph6)
    c = conflict_graph(G, req.mode)
    out = SolveResponse(graph6=to_graph6(G), param=req.param, mode=req.mode, k=req.k, upper_bound=c.max_degree() + 1)
    if req.param == "chi-g":
        out.offline_chromatic = offline_chromatic(c)
        if req.k is not None:
            out.winner = solve_coloring(c, req.k, req.node_budget).value
            return out
        prof = coloring_profile(c, req.node_budget)
        out.value = prof.value
        out.wins = {k: w.value for k, w in prof.wins.items()}
        out.monotone = prof.monotone
        return out
    if req.k is not None:
        out.winner = solve_marking(c, req.k, req.node_budget).value
        return out
    prof = marking_profile(c, req.node_budget)
    out.value = max(prof)
    out.wins = {k: w.value for k, w in prof.items()}
    return out


def orient(req: OrientRequest) -> OrientResponse:
    G = parse_graph6(req.graph6)
    D, cert = optimal_orientation(G)
    return OrientResponse(
        graph6=to_graph6(G),
        dplus=D.max_outdegree,
        orientation=D.serialize(),
        certificate=Certificate(vertices=list(cert.vertices), edges_within=cert.edges_within, k=cert.k) if cert else None,
    )


def verify(req: VerifyRequest) -> VerifyResponse:
    G = parse_graph6(req.graph6)
    delta = max_degree(G)
    if req.exhaustive:
        res, k = verify_activation(G, req.k, strict_rule7=req.strict_rule7, node_budget=req.node_budget)
        return VerifyResponse(
            graph6=to_graph6(G),
            k=k,
            delta=delta,
            dplus=ActivationAlice(G).memory.orientation.max_outdegree,
            status=res.status if res.status != "ok" or not res.invariant_failures else "invariant",
            nodes=res.nodes,
            lines=res.lines,
            invariant_failures=res.invariant_failures,
            trace=res.trace.to_text() if res.trace else None,
        )
    alice = ActivationAlice(G, strict_rule7=req.strict_rule7)
    dplus = alice.memory.orientation.max_outdegree
    k = req.k if req.k is not None else delta + 3 * dplus + 1
    trace = play_match(MARKING, total_graph(G), k, alice, RandomStrategy(req.seed))
    return VerifyResponse(
        graph6=to_graph6(G),
        k=k,
        delta=delta,
        dplus=dplus,
        status="ok" if trace.winner.value == "Alice" and not trace.forfeit else "counterexample",
        nodes=len(trace.moves),
        lines=1,
        winner=trace.winner.value,
        trace=trace.to_text(),
    )


def lab(req: LabRequest) -> LabResponse:
    spec = CorpusSpec.parse(req.corpus, node_budget=req.node_budget, time_budget=req.time_budget)
    rows = run_corpus(spec, req.tasks, cache=req.cache, jobs=req.jobs)
    return LabResponse(
        rows=[ResultRowModel(**asdict(r)) for r in rows],
        rejected=spec.rejected,
        skipped=sum(1 for r in rows if r.skipped),
    )


def conjecture(req: ConjectureRequest) -> ConjectureResponse:
    rep = check_conjecture([ResultRow(**r.model_dump()) for r in req.rows])
    return ConjectureResponse(
        diffs=rep.diffs,
        histogram=rep.histogram,
        counterexamples=rep.counterexamples,
        excluded=rep.excluded,
        report=rep.to_text(),
    )


HANDLERS = {
    "solve": (solve, SolveRequest, SolveResponse),
    "orient": (orient, OrientRequest, OrientResponse),
    "verify": (verify, VerifyRequest, VerifyResponse),
    "lab": (lab, LabRequest, LabResponse),
    "conjecture": (conjecture, ConjectureRequest, ConjectureResponse),
}

app = FastAPI(title="ggc", version=__version__)


@app.exception_handler(GGCError)
async def _ggc_error(request: Request, exc: GGCError):
    if isinstance(exc, InconsistencyError):
        status = STATUS_INVARIANT
    elif isinstance(exc, BudgetExceeded):
        status = STATUS_BUDGET
    else:
        status = STATUS_BAD_INPUT
    return JSONResponse(status_code=status, content={"kind": type(exc).__name__, "detail": str(exc)})


@app.get("/health")
def health():
    return {"status": "ok", "version": __version__}


@app.post("/solve", response_model=SolveResponse)
def solve_route(req: SolveRequest):
    return solve(req)


@app.post("/orient", response_model=OrientResponse)
def orient_route(req: OrientRequest):
    return orient(req)


@app.post("/verify", response_model=VerifyResponse)
def verify_route(req: VerifyRequest):
    return verify(req)


@app.post("/lab", response_model=LabResponse)
def lab_route(req: LabRequest):
    return lab(req)


@app.post("/conjecture", response_model=ConjectureResponse)
def conjecture_route(req: ConjectureRequest):
    return conjecture(req)
