"""Request and response models shared by the HTTP service and the CLI."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

Mode = Literal["vertex", "edge", "total"]


class SolveRequest(BaseModel):
    param: Literal["chi-g", "gcol"]
    mode: Mode = "total"
    graph6: str
    k: Optional[int] = Field(default=None, ge=1)
    node_budget: Optional[int] = None


class SolveResponse(BaseModel):
    graph6: str
    param: str
    mode: str
    k: Optional[int] = None
    winner: Optional[str] = None
    value: Optional[int] = None
    wins: dict[int, str] = {}
    monotone: Optional[bool] = None
    upper_bound: int
    offline_chromatic: Optional[int] = None


class OrientRequest(BaseModel):
    graph6: str


class Certificate(BaseModel):
    vertices: list[int]
    edges_within: int
    k: int


class OrientResponse(BaseModel):
    graph6: str
    dplus: int
    orientation: list[str]
    certificate: Optional[Certificate] = None


class VerifyRequest(BaseModel):
    strategy: Literal["activation"] = "activation"
    graph6: str
    k: Optional[int] = Field(default=None, ge=1)
    exhaustive: bool = True
    strict_rule7: bool = False
    seed: int = 1
    node_budget: Optional[int] = 1_000_000


class VerifyResponse(BaseModel):
    graph6: str
    k: int
    delta: int
    dplus: int
    status: str
    nodes: int = 0
    lines: int = 0
    winner: Optional[str] = None
    invariant_failures: list[str] = []
    trace: Optional[str] = None


class ResultRowModel(BaseModel):
    key: str
    graph6: str
    n: int
    m: int
    delta: int
    dplus: Optional[int] = None
    gcol_edge: Optional[int] = None
    gcol_total: Optional[int] = None
    chi_g_total: Optional[int] = None
    bound_obs1: Optional[int] = None
    bound_thm2: Optional[int] = None
    conj_diff: Optional[int] = None
    chi_g_profile: Optional[str] = None
    activation: Optional[str] = None
    skipped: list[str] = []


class LabRequest(BaseModel):
    corpus: str
    tasks: list[str] = ["gcol_edge", "gcol_total", "chi_g_total", "bounds"]
    jobs: int = Field(default=1, ge=1)
    cache: Optional[str] = None
    node_budget: Optional[int] = 2_000_000
    time_budget: Optional[float] = None


class LabResponse(BaseModel):
    rows: list[ResultRowModel]
    rejected: list[str] = []
    skipped: int = 0


class ConjectureRequest(BaseModel):
    rows: list[ResultRowModel]


class ConjectureResponse(BaseModel):
    diffs: list[tuple[str, int]]
    histogram: dict[int, int]
    counterexamples: list[str]
    excluded: list[str]
    report: str


class ErrorBody(BaseModel):
    kind: str
    detail: str
