"""FastAPI front end over the service layer."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from . import api
from .schemas import (CompareRequest, CompareResponse, DualRequest, DualResponse,
                      FunctionInfo, SolveRequest, SolveResponse, SweepRequest,
                      SweepResponse)


def create_app() -> FastAPI:
    app = FastAPI(title="halving-opt", version=__version__,
                  description="2D convex minimization by gradient-direction halving, "
                              "with ellipsoid and gradient-descent baselines and a "
                              "certified Lagrange dual solver.")

    @app.exception_handler(ValueError)
    async def _value_error(request: Request, exc: ValueError) -> JSONResponse:
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok", "version": __version__}

    @app.get("/functions", response_model=list[FunctionInfo])
    def functions() -> list[FunctionInfo]:
        return api.list_functions()

    @app.post("/solve", response_model=SolveResponse)
    def solve(req: SolveRequest) -> SolveResponse:
        return api.run_solve(req)

    @app.post("/compare", response_model=CompareResponse)
    def compare(req: CompareRequest) -> CompareResponse:
        return api.run_compare(req)

    @app.post("/dual", response_model=DualResponse)
    def dual(req: DualRequest) -> DualResponse:
        return api.run_dual(req)

    @app.post("/sweep", response_model=SweepResponse)
    def sweep(req: SweepRequest) -> SweepResponse:
        return api.run_sweep(req)

    return app


app = create_app()
