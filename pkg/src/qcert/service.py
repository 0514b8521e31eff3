"""HTTP facade over the planners, simulators, and tables.

Handlers are plain functions on pydantic models so the CLI can call them
in process; the FastAPI app binds them to routes.  Domain validation
errors surface as HTTP 400 with the underlying message, while request
shape errors are pydantic's usual 422.
"""

from __future__ import annotations

from typing import Literal, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, ConfigDict, Field

from .equality import TesterMode, plan_for_mode
from .experiments import (
    build_membership_instance,
    build_unitary_instance,
    bounds_table,
    membership_plan_record,
    run_bounds_experiment,
    run_membership_experiment,
    run_oracle_experiment,
    run_unitary_experiment,
    unitary_plan_record,
)
from .membership import plan_membership

UNITARY_MODES = ("qubit-known", "qubit-swap", "qudit-known", "qudit-swap")


class _Request(BaseModel):
    model_config = ConfigDict(extra="forbid")


class PlanRequest(_Request):
    mode: Literal["membership", "qubit-known", "qubit-swap", "qudit-known", "qudit-swap"]
    epsilon: float
    dimension: int = 2
    set_size: Optional[int] = None
    l2_constant: float = Field(default=1.0, gt=0.0)


class PlanResponse(BaseModel):
    plan: dict


class SimulateStateSetRequest(_Request):
    dimension: int
    epsilon: float
    set_size: int
    trials: int = Field(default=10_000, ge=1)
    seed: int
    variant: Literal["member", "far"] = "member"
    instance: Optional[dict] = None


class SimulateUnitaryRequest(_Request):
    mode: Literal["qubit-known", "qubit-swap", "qudit-known", "qudit-swap"]
    dimension: int = 2
    epsilon: float
    trials: int = Field(default=10_000, ge=1)
    seed: int
    variant: Literal["equal", "far"] = "equal"
    instance: Optional[dict] = None


class OracleVerifyRequest(_Request):
    seed: int = 7


class BoundsTableRequest(_Request):
    eps_grid: list[float]
    d_grid: list[int] = [2, 3]
    set_sizes: list[int] = [8]
    delta_grid: list[float] = [0.01]
    judge: bool = True


class GenInstancesRequest(_Request):
    kind: Literal["state-set-membership", "unitary-equality"]
    dimension: int
    epsilon: float
    seed: int
    set_size: int = 8
    min_distance: Optional[float] = None


class ReportResponse(BaseModel):
    report: dict
    passed: bool


class InstanceResponse(BaseModel):
    instance: dict


class TableResponse(BaseModel):
    table: dict


def handle_plan(req: PlanRequest) -> dict:
    if req.mode == "membership":
        if req.set_size is None:
            raise ValueError("membership planning requires set_size")
        record = membership_plan_record(
            plan_membership(req.epsilon, req.set_size), l2_constant=req.l2_constant
        )
        return {"kind": "membership", **record}
    plan = plan_for_mode(TesterMode(req.mode), req.dimension, req.epsilon)
    return {"kind": "unitary", **unitary_plan_record(plan)}


def handle_simulate_state_set(req: SimulateStateSetRequest) -> ReportResponse:
    report = run_membership_experiment(
        dimension=req.dimension,
        epsilon=req.epsilon,
        set_size=req.set_size,
        trials=req.trials,
        seed=req.seed,
        variant=req.variant,
        instance=req.instance,
    )
    return ReportResponse(report=report.to_dict(), passed=report.passed)


def handle_simulate_unitary(req: SimulateUnitaryRequest) -> ReportResponse:
    report = run_unitary_experiment(
        mode=req.mode,
        dimension=req.dimension,
        epsilon=req.epsilon,
        trials=req.trials,
        seed=req.seed,
        variant=req.variant,
        instance=req.instance,
    )
    return ReportResponse(report=report.to_dict(), passed=report.passed)


def handle_oracle_verify(req: OracleVerifyRequest) -> ReportResponse:
    report = run_oracle_experiment(req.seed)
    return ReportResponse(report=report.to_dict(), passed=report.passed)


def handle_bounds_table(req: BoundsTableRequest) -> ReportResponse:
    if req.judge:
        report = run_bounds_experiment(req.eps_grid, req.d_grid, req.set_sizes, req.delta_grid)
        return ReportResponse(report=report.to_dict(), passed=report.passed)
    table = bounds_table(req.eps_grid, req.d_grid, req.set_sizes, req.delta_grid)
    return ReportResponse(report={"detail": table}, passed=True)


def handle_gen_instances(req: GenInstancesRequest) -> InstanceResponse:
    if req.kind == "state-set-membership":
        instance = build_membership_instance(
            req.dimension, req.set_size, req.epsilon, req.seed, req.min_distance
        )
    else:
        instance = build_unitary_instance(req.dimension, req.epsilon, req.seed)
    return InstanceResponse(instance=instance)


app = FastAPI(
    title="qcert",
    version="0.1.0",
    description="Planning and seeded simulation of certification testers for "
    "pure-state membership and unitary equality.",
)


def _guard(fn, *args):
    try:
        return fn(*args)
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/plan", response_model=PlanResponse)
def plan_route(req: PlanRequest) -> PlanResponse:
    return PlanResponse(plan=_guard(handle_plan, req))


@app.post("/simulate/state-set", response_model=ReportResponse)
def simulate_state_set_route(req: SimulateStateSetRequest) -> ReportResponse:
    return _guard(handle_simulate_state_set, req)


@app.post("/simulate/unitary", response_model=ReportResponse)
def simulate_unitary_route(req: SimulateUnitaryRequest) -> ReportResponse:
    return _guard(handle_simulate_unitary, req)


@app.post("/oracle/verify", response_model=ReportResponse)
def oracle_verify_route(req: OracleVerifyRequest) -> ReportResponse:
    return _guard(handle_oracle_verify, req)


@app.post("/bounds/table", response_model=ReportResponse)
def bounds_table_route(req: BoundsTableRequest) -> ReportResponse:
    return _guard(handle_bounds_table, req)


@app.post("/instances/generate", response_model=InstanceResponse)
def gen_instances_route(req: GenInstancesRequest) -> InstanceResponse:
    return _guard(handle_gen_instances, req)
