"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

import datetime as dt
from typing import Literal, Optional, Union

from pydantic import BaseModel, Field

Family = Literal[
    "normal", "lognormal", "invgamma", "gamma", "weibull", "invgauss", "betaprime"
]
Mode = Literal["predicted", "preceding", "adjacent", "random"]
IndexName = Literal["vix", "vxo"]
Rescale = Literal["calendar", "none"]


class HealthResponse(BaseModel):
    status: str
    version: str


class FitConfigModel(BaseModel):
    max_iterations: int = Field(default=2000, gt=0)
    convergence_tol: float = Field(default=1e-10, gt=0)
    restarts: int = Field(default=3, ge=0)


class FitRequest(BaseModel):
    data: list[float] = Field(min_length=10)
    families: Optional[list[Family]] = None
    config: Optional[FitConfigModel] = None


class FitResultModel(BaseModel):
    family: Family
    label: str
    params: dict[str, float]
    params_display: list[float]
    loglik: float
    ks: float
    converged: bool


class FitResponse(BaseModel):
    results: list[FitResultModel]
    n: int
    ranked_by_ks: list[Family]


class OneSampleKSRequest(BaseModel):
    data: list[float] = Field(min_length=1)
    family: Family
    params: list[float]


class TwoSampleKSRequest(BaseModel):
    a: list[float] = Field(min_length=1)
    b: list[float] = Field(min_length=1)


class KSResponse(BaseModel):
    d: float
    n: Union[int, tuple[int, int]]


class PearsonRequest(BaseModel):
    x: list[float] = Field(min_length=2)
    y: list[float] = Field(min_length=2)


class PearsonResponse(BaseModel):
    r: float


class TableReportRequest(BaseModel):
    manifest_path: str
    index: IndexName = "vix"
    mode: Mode = "predicted"
    invert: bool = False
    scale: Optional[bool] = None  # None: per-mode default
    rescale: Rescale = "calendar"
    seed: int = 0
    date_from: Optional[dt.date] = None
    date_to: Optional[dt.date] = None
    config: Optional[FitConfigModel] = None


class TableRow(BaseModel):
    family: Family
    label: str
    primary: FitResultModel
    inverse: FitResultModel


class TableReportResponse(BaseModel):
    table: list[TableRow]
    histogram: dict[str, list[float]]
    fitted_curves: dict[str, list[float]]
    metadata: dict


class MatrixRequest(BaseModel):
    manifest_path: str
    index: IndexName = "vix"
    seed: int = 0
    rescale: Rescale = "calendar"
    date_from: Optional[dt.date] = None
    date_to: Optional[dt.date] = None


class MatrixResponse(BaseModel):
    labels: list[str]
    matrix: list[list[Optional[float]]]
    metadata: dict


class SyntheticRequest(BaseModel):
    family: Family
    params: list[float]
    n: int = Field(ge=1)
    seed: int = 0


class SyntheticResponse(BaseModel):
    family: Family
    params: list[float]
    n: int
    seed: int
    sample: list[float]
