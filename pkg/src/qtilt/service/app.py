"""FastAPI service exposing the verification pipeline.

The core package does all the work; this layer maps requests onto RunConfig,
runs the report builders, and converts package errors into structured JSON
errors (code "parse" for bad input, "bounds" for exceeded search bounds,
"math-check" for falsified postconditions).
"""

from __future__ import annotations

from fastapi import FastAPI
from fastapi.responses import JSONResponse

from .. import SCHEMA_VERSION, __version__
from ..errors import (
    CatalogError,
    MathCheckError,
    NotRepFiniteError,
    QuiverParseError,
    SearchSpaceError,
)
from ..verify import (
    RunConfig,
    resolve_quiver,
    run_catalog,
    run_classify,
    run_heart,
    run_reduce,
)
from .models import (
    CatalogRequest,
    ClassifyRequest,
    HealthResponse,
    QuiverIn,
    RunOptions,
    TorsionIdRequest,
)


def _config(quiver: QuiverIn, options: RunOptions, **extra) -> RunConfig:
    q = resolve_quiver(preset=quiver.preset, text=quiver.text)
    return RunConfig(
        quiver=q,
        p=options.field_prime,
        max_ind=options.max_ind,
        max_subdim=options.max_subdim,
        heart_bound=options.heart_bound,
        jobs=options.jobs,
        cache_dir=options.cache_dir,
        **extra,
    )


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status,
                        content={"error": {"code": code, "message": message}})


def create_app() -> FastAPI:
    app = FastAPI(title="qtilt", version=__version__)

    @app.exception_handler(QuiverParseError)
    async def _parse_error(_, exc):
        return _error(422, "parse", str(exc))

    @app.exception_handler(SearchSpaceError)
    async def _bounds_error(_, exc):
        return _error(422, "bounds", str(exc))

    @app.exception_handler(NotRepFiniteError)
    async def _repfinite_error(_, exc):
        return _error(422, "bounds", str(exc))

    @app.exception_handler(CatalogError)
    async def _catalog_error(_, exc):
        return _error(500, "math-check", str(exc))

    @app.exception_handler(MathCheckError)
    async def _math_error(_, exc):
        return _error(500, "math-check", str(exc))

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__,
                              schema_version=SCHEMA_VERSION)

    @app.post("/v1/catalog")
    def catalog(req: CatalogRequest) -> dict:
        return run_catalog(_config(req.quiver, req.options))

    @app.post("/v1/classify")
    def classify(req: ClassifyRequest) -> dict:
        cfg = _config(req.quiver, req.options,
                      with_cond4=req.with_cond4, with_chains=req.with_chains)
        return run_classify(cfg)

    @app.post("/v1/reduce")
    def reduce_(req: TorsionIdRequest) -> dict:
        return run_reduce(_config(req.quiver, req.options), req.torsion_id)

    @app.post("/v1/heart")
    def heart_(req: TorsionIdRequest) -> dict:
        return run_heart(_config(req.quiver, req.options), req.torsion_id)

    return app


app = create_app()
