"""Pydantic request/response schemas shared by the API and the CLI.

Every numeric value crosses the wire as an exact fraction string;
decimal renderings are advisory (20 significant digits).  Responses are
deterministic for a fixed input and options.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field


class SolveSettings(BaseModel):
    trace: bool = False
    oracle2_cap: Optional[int] = Field(default=None, ge=1)
    seed_policy: Literal["first", "warmstart"] = "warmstart"
    dump_lp: bool = False
    max_iter: Optional[int] = Field(default=None, ge=1)
    widen_threshold: Optional[int] = Field(default=None, ge=1)


class SolveRequest(BaseModel):
    source: str
    options: SolveSettings = SolveSettings()


class CertificateModel(BaseModel):
    kind: Literal["radius_lt_one", "unit_radius", "inconclusive"]
    certificate_k: Optional[int] = None
    iterations: Optional[int] = None
    h: Optional[list[str]] = None


class ImprovementModel(BaseModel):
    kind: Literal["strict", "descent", "terminal"]
    h: Optional[list[str]] = None


class TraceStepModel(BaseModel):
    policy: list[int]
    value: list[str]
    improvement: ImprovementModel


class ValueModel(BaseModel):
    value: str
    decimal: str


class SolveResultModel(BaseModel):
    variables: dict[str, ValueModel]
    trace: list[TraceStepModel]
    certificate: CertificateModel
    lps: Optional[list[str]] = None


class ErrorModel(BaseModel):
    message: str
    line: Optional[int] = None
    col: Optional[int] = None


SolveStatus = Literal["ok", "no_finite_fixed_point", "unbounded_below", "undecidable"]


class SolveResponse(BaseModel):
    status: SolveStatus
    result: Optional[SolveResultModel] = None
    error: Optional[ErrorModel] = None


class IntervalModel(BaseModel):
    lo: str  # exact fraction or "-inf"/"+inf"
    hi: str


class PointModel(BaseModel):
    id: int
    vars: dict[str, IntervalModel]


class AnalyzeResultModel(BaseModel):
    points: list[PointModel]
    trace: list[TraceStepModel]
    certificate: Optional[CertificateModel] = None
    widened: list[str]
    eliminated: list[dict[str, str]] = []
    lps: Optional[list[str]] = None


class AnalyzeResponse(BaseModel):
    status: SolveStatus
    result: Optional[AnalyzeResultModel] = None
    error: Optional[ErrorModel] = None


class GameResultModel(BaseModel):
    values: dict[str, ValueModel]
    policy: Optional[dict[str, str]] = None  # state -> chosen action label
    trace: list[TraceStepModel]
    certificate: CertificateModel
    lps: Optional[list[str]] = None


class GameResponse(BaseModel):
    status: SolveStatus
    result: Optional[GameResultModel] = None
    error: Optional[ErrorModel] = None
