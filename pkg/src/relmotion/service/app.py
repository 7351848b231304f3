"""FastAPI service wrapping the simulator.

Each endpoint takes a validated configuration and returns plain JSON series
and reports; file output stays with the client (the CLI writes CSV/JSON
locally from the response).
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from ..harness import (reproduce_fig3, reproduce_fig4, run_perturbative,
                       run_simulate, sweep, truncation_convergence,
                       uniform_accel_experiment)
from .schemas import (AccelRequest, ConvergeRequest, Fig3Request, Fig4Request,
                      PerturbativeModel, PerturbativeRequest,
                      PerturbativeResponse, ReportModel, SimSeries,
                      SimulateRequest, SimulateResponse, SweepRequest,
                      SweepResponse)

app = FastAPI(title="relmotion",
              description="Simulated relativistic qubit motion in circuit QED")


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/simulate", response_model=SimulateResponse)
def simulate(req: SimulateRequest) -> SimulateResponse:
    try:
        res = run_simulate(req.config)
    except (ValueError, RuntimeError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    return SimulateResponse(config=req.config.model_dump(),
                            series=SimSeries.from_result(res))


@app.post("/perturbative", response_model=PerturbativeResponse)
def perturbative(req: PerturbativeRequest) -> PerturbativeResponse:
    try:
        res = run_perturbative(req.config)
    except (ValueError, RuntimeError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    return PerturbativeResponse(config=req.config.model_dump(),
                                result=PerturbativeModel.from_result(res))


@app.post("/reproduce/fig3", response_model=ReportModel)
def fig3(req: Fig3Request) -> ReportModel:
    if not (req.unitary or req.dissipative):
        raise HTTPException(status_code=422,
                            detail="enable at least one of unitary/dissipative")
    return ReportModel.from_report(
        reproduce_fig3(unitary=req.unitary, dissipative=req.dissipative))


@app.post("/reproduce/fig4", response_model=ReportModel)
def fig4(req: Fig4Request) -> ReportModel:
    try:
        rep = reproduce_fig4(req.delta_f_rad, gamma_khz=req.gamma_khz,
                             n_max=req.n_max,
                             check_truncation=req.check_truncation)
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    return ReportModel.from_report(rep)


@app.post("/reproduce/accel", response_model=ReportModel)
def accel(req: AccelRequest) -> ReportModel:
    return ReportModel.from_report(
        uniform_accel_experiment(accel=req.accel_m_s2,
                                 duration_ns=req.duration_ns))


@app.post("/sweep", response_model=SweepResponse)
def run_sweep(req: SweepRequest) -> SweepResponse:
    try:
        rows = sweep(req.config, req.axis, req.values, kind=req.kind)
    except KeyError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    return SweepResponse(rows=[ReportModel.from_report(r) for r in rows])


@app.post("/converge", response_model=ReportModel)
def converge(req: ConvergeRequest) -> ReportModel:
    try:
        rep = truncation_convergence(req.config, req.n_max_list)
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    return ReportModel.from_report(rep)
