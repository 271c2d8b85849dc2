"""FastAPI service exposing the comparison harness.

Run with:  uvicorn moyal_qmm.service.app:app

Verdict failures are still HTTP 200 (the report carries them); only
configuration problems map to 4xx.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import REPORT_SCHEMA, __version__
from ..harness import (
    ComparisonConfig,
    ConfigError,
    PolytopeStudyConfig,
    polytope_volume_records,
    run_comparison,
    run_polytope_study,
)
from ..polytopes import DiagonalMarginal, InfeasibleMarginalError
from .schemas import (
    CompareRequest,
    HealthResponse,
    PolytopeStudyRequest,
    PolytopeVolumeRequest,
    RouteRequest,
    RouteResponse,
)

app = FastAPI(
    title="moyal-qmm",
    version=__version__,
    description="Quartic Hermitian matrix-model partition function, by several cross-validated routes.",
)


@app.get("/v1/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__, report_schema=REPORT_SCHEMA)


def compare_handler(req: CompareRequest) -> dict:
    try:
        config = ComparisonConfig.from_dict(req.to_doc())
        return run_comparison(config).to_dict()
    except ConfigError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


@app.post("/v1/compare")
def compare(req: CompareRequest) -> dict:
    return compare_handler(req)


def route_handler(req: RouteRequest) -> dict:
    from ..harness import _route_runner  # single source of route semantics

    doc = req.spectrum.to_doc()
    doc.update(
        routes=[req.route],
        g=req.g,
        samples=req.samples,
        seed=req.seed,
        nodes_per_dim=req.nodes_per_dim,
        expansion_order=req.expansion_order,
        meijer_factor=req.meijer_factor,
    )
    try:
        config = ComparisonConfig.from_dict(doc)
        value, se, extra = _route_runner(req.route, config)
    except (ConfigError, ValueError) as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    params = {"n": config.spectrum.n, "g": config.g}
    params.update(extra)
    return {
        "schema": REPORT_SCHEMA,
        "route": req.route,
        "log_z": {"sign": value.sign, "log_mag": value.log_mag},
        "std_error": se,
        "params": params,
    }


@app.post("/v1/routes", response_model=RouteResponse)
def route(req: RouteRequest) -> dict:
    return route_handler(req)


def polytope_volume_handler(req: PolytopeVolumeRequest) -> dict:
    try:
        marginal = DiagonalMarginal(req.u)
        records = polytope_volume_records(
            marginal, tuple(req.methods), samples=req.samples, seed=req.seed
        )
    except (ConfigError, InfeasibleMarginalError, ValueError) as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    return {"schema": REPORT_SCHEMA, "records": records}


@app.post("/v1/polytope/volume")
def polytope_volume(req: PolytopeVolumeRequest) -> dict:
    return polytope_volume_handler(req)


def polytope_study_handler(req: PolytopeStudyRequest) -> dict:
    try:
        config = PolytopeStudyConfig.from_dict(req.model_dump())
        return run_polytope_study(config)
    except ConfigError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


@app.post("/v1/polytope/study")
def polytope_study(req: PolytopeStudyRequest) -> dict:
    return polytope_study_handler(req)
