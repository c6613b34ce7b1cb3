"""FastAPI service wrapping the core analysis package.

Every endpoint body is a plain function over the pydantic models, so the
CLI can invoke the same handlers in-process without a running server.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from .. import distributions as dist
from ..errors import VolratioError
from ..fitting import FitConfig, fit_all_families
from ..gof import ks_one_sample, ks_two_sample, pearson
from ..ingest import load_manifest
from ..report import make_synthetic, run_pcc, run_ksmatrix, run_table_report, _fit_payload
from . import models as m

app = FastAPI(
    title="volratio",
    version=__version__,
    description="Variance-ratio construction, distribution fitting and KS ranking",
)


@app.exception_handler(VolratioError)
async def _domain_error(request: Request, exc: VolratioError) -> JSONResponse:
    return JSONResponse(status_code=400, content={"detail": str(exc)})


@app.exception_handler(ValueError)
async def _value_error(request: Request, exc: ValueError) -> JSONResponse:
    return JSONResponse(status_code=400, content={"detail": str(exc)})


def _fit_config(model: m.FitConfigModel | None) -> FitConfig | None:
    if model is None:
        return None
    return FitConfig(
        max_iterations=model.max_iterations,
        convergence_tol=model.convergence_tol,
        restarts=model.restarts,
    )


@app.get("/health", response_model=m.HealthResponse)
def health() -> m.HealthResponse:
    return m.HealthResponse(status="ok", version=__version__)


@app.post("/fit", response_model=m.FitResponse)
def fit_sample(req: m.FitRequest) -> m.FitResponse:
    """Fit one sample by maximum likelihood and rank the families by KS."""
    families = req.families or list(dist.FAMILY_ORDER)
    results = fit_all_families(req.data, families=families, config=_fit_config(req.config))
    payloads = [m.FitResultModel(**_fit_payload(r)) for r in results]
    ranked = [p.family for p in sorted(payloads, key=lambda p: p.ks)]
    return m.FitResponse(results=payloads, n=len(req.data), ranked_by_ks=ranked)


@app.post("/gof/one-sample-ks", response_model=m.KSResponse)
def one_sample_ks(req: m.OneSampleKSRequest) -> m.KSResponse:
    spec = dist.make_spec(req.family, *req.params)
    stat = ks_one_sample(req.data, lambda v: dist.cdf(spec, v))
    return m.KSResponse(d=stat.d, n=stat.n)


@app.post("/gof/two-sample-ks", response_model=m.KSResponse)
def two_sample_ks(req: m.TwoSampleKSRequest) -> m.KSResponse:
    stat = ks_two_sample(req.a, req.b)
    return m.KSResponse(d=stat.d, n=stat.n)


@app.post("/gof/pearson", response_model=m.PearsonResponse)
def pearson_corr(req: m.PearsonRequest) -> m.PearsonResponse:
    return m.PearsonResponse(r=pearson(req.x, req.y))


@app.post("/report/table", response_model=m.TableReportResponse)
def table_report(req: m.TableReportRequest) -> m.TableReportResponse:
    """Full pipeline: ingest, ratio construction, seven-family MLE, KS."""
    manifest = load_manifest(req.manifest_path)
    bundle = run_table_report(
        manifest,
        index=req.index,
        mode=req.mode,
        invert=req.invert,
        scale=req.scale,
        rescale=req.rescale,
        seed=req.seed,
        config=_fit_config(req.config),
        date_from=req.date_from,
        date_to=req.date_to,
    )
    return m.TableReportResponse(**bundle.to_dict())


@app.post("/report/pcc", response_model=m.MatrixResponse)
def pcc_matrix(req: m.MatrixRequest) -> m.MatrixResponse:
    manifest = load_manifest(req.manifest_path)
    result = run_pcc(
        manifest,
        index=req.index,
        seed=req.seed,
        rescale=req.rescale,
        date_from=req.date_from,
        date_to=req.date_to,
    )
    return m.MatrixResponse(**result)


@app.post("/report/ksmatrix", response_model=m.MatrixResponse)
def ks_matrix(req: m.MatrixRequest) -> m.MatrixResponse:
    manifest = load_manifest(req.manifest_path)
    result = run_ksmatrix(
        manifest,
        index=req.index,
        seed=req.seed,
        rescale=req.rescale,
        date_from=req.date_from,
        date_to=req.date_to,
    )
    return m.MatrixResponse(**result)


@app.post("/synthetic", response_model=m.SyntheticResponse)
def synthetic(req: m.SyntheticRequest) -> m.SyntheticResponse:
    result = make_synthetic(req.family, req.params, req.n, req.seed)
    return m.SyntheticResponse(**result)
