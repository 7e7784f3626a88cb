"""Pydantic request/response models for the norm-computation service.

Matrix payloads follow the documented JSON schemas (cells as row-major
d x d arrays of [re, im] pairs); precise validation of the numeric layout
happens in the core parsers, which report dotted field paths.
"""

from __future__ import annotations

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


class SupportModel(BaseModel):
    lo: int
    hi: int


class StepFunctionModel(BaseModel):
    dim: int
    depth: int
    support: SupportModel
    cells: List[Any]


class BasisModel(BaseModel):
    kind: str = "haar"
    delta_log2: int = 11
    radius: float = 32.0
    decay_m: int = 2


class AnalyzeRequest(BaseModel):
    function: StepFunctionModel
    basis: BasisModel = Field(default_factory=BasisModel)
    level_min: int = 0
    level_max: Optional[int] = None
    with_scaling: bool = True


class NormsRequest(BaseModel):
    function: StepFunctionModel
    basis: BasisModel = Field(default_factory=BasisModel)
    p_list: List[float] = Field(default_factory=lambda: [1.0, 1.5, 2.0, 3.0])
    seed: int = 0
    descent_starts: int = 8
    descent_iters: int = 500
    ascent_iters: int = 150


class NormsResponse(BaseModel):
    report: Dict[str, Any]
    elapsed_seconds: float


class PairRequest(BaseModel):
    phi: StepFunctionModel
    f: StepFunctionModel
    p: float = 1.5
    basis: BasisModel = Field(default_factory=BasisModel)


class PairResponse(BaseModel):
    reports: List[Dict[str, Any]]
    all_passed: bool


class CorpusRequest(BaseModel):
    config: Dict[str, Any] = Field(default_factory=dict)


class NamedFunction(BaseModel):
    name: str
    function: Dict[str, Any]


class CorpusResponse(BaseModel):
    functions: List[NamedFunction]


class VerifyRequest(BaseModel):
    config: Dict[str, Any] = Field(default_factory=dict)


class VerifyResponse(BaseModel):
    reports: List[Dict[str, Any]]
    all_passed: bool
    failed_checks: List[str]


class HealthResponse(BaseModel):
    status: str
    version: str
