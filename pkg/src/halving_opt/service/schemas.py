"""Request and response models shared by the HTTP service and the CLI."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

from ..dual import ProblemSpec

Method = Literal["halving", "ellipsoid", "gd"]
Domain = Literal["square", "triangle"]


class PerturbationModel(BaseModel):
    mode: Literal["random", "adversarial"] = "random"
    delta_cap: float = Field(ge=0)
    seed: int = 0


class SolveRequest(BaseModel):
    function: Optional[str] = None
    problem: Optional[ProblemSpec] = None  # solve this spec's objective instead
    method: Method = "halving"
    eps: float = Field(gt=0)
    domain: Domain = "square"
    inner_delta: Optional[float] = Field(default=None, gt=0)
    iterations: Optional[int] = Field(default=None, ge=0)
    small_grad_stop: bool = True
    perturbation: Optional[PerturbationModel] = None
    collect_trace: bool = False

    @model_validator(mode="after")
    def _one_target(self):
        if (self.function is None) == (self.problem is None):
            raise ValueError("give exactly one of function or problem")
        return self


class CountersModel(BaseModel):
    value_calls: int
    direction_calls: int
    full_grad_calls: int


class BudgetModel(BaseModel):
    epsilon: float
    iterations: int
    inner_delta: Optional[float] = None  # None encodes an unbounded 1D tolerance
    grad_error_cap: float = 0.0
    inexact_ok: Optional[bool] = None


class SolveResponse(BaseModel):
    function: str
    method: str
    domain: str
    eps: float
    point: tuple[float, float]
    value: float
    gap: Optional[float] = None
    region_best_value: Optional[float] = None
    region_best_gap: Optional[float] = None
    iterations: int
    stop_reason: str
    counters: CountersModel
    budget: Optional[BudgetModel] = None
    region: Optional[dict] = None
    extras: dict = {}
    trace: Optional[list[dict]] = None
    wall_ms: float


class CompareRequest(BaseModel):
    function: str
    eps: float = Field(gt=0)
    methods: list[Method] = ["halving", "ellipsoid", "gd"]

    @model_validator(mode="after")
    def _nonempty(self):
        if not self.methods:
            raise ValueError("methods must not be empty")
        return self


class MethodSkip(BaseModel):
    method: str
    reason: str


class CompareResponse(BaseModel):
    function: str
    eps: float
    results: list[SolveResponse]
    skipped: list[MethodSkip] = []


class DualRequest(BaseModel):
    problem: ProblemSpec
    eps: Optional[float] = Field(default=None, gt=0)
    domain: Optional[Domain] = None
    inner_fn_accuracy: Optional[float] = Field(default=None, gt=0)
    dual_bound: Optional[float] = Field(default=None, gt=0)


class DualResponse(BaseModel):
    name: str
    lam: tuple[float, float]
    primal: list[float]
    primal_value: float
    dual_value: float
    complementarity: float
    max_constraint: float
    certified: bool
    eps: float
    inner_fn_accuracy: float
    grad_error_cap: float
    dual_bound: float
    domain: str
    stop_reason: str
    inner_solves: int
    pgd_steps: int
    outer_iterations: Optional[int] = None
    wall_ms: float


class SweepRequest(BaseModel):
    functions: list[str]
    eps_values: list[float]
    methods: list[Method] = ["halving"]
    domain: Domain = "square"

    @model_validator(mode="after")
    def _nonempty(self):
        if not self.functions or not self.eps_values or not self.methods:
            raise ValueError("functions, eps_values and methods must all be nonempty")
        if any(e <= 0 for e in self.eps_values):
            raise ValueError("eps values must be positive")
        return self


class SweepRow(BaseModel):
    method: str
    function: str
    eps: float
    iterations: int
    value_calls: int
    direction_calls: int
    full_grad_calls: int
    wall_ms: float
    final_gap: Optional[float] = None


class SweepResponse(BaseModel):
    rows: list[SweepRow]


class FunctionInfo(BaseModel):
    name: str
    summary: str
    bounds: tuple[float, float, float, float]
    lipschitz_L: float
    grad_lipschitz_M: Optional[float] = None
    min_value: float
    min_point: Optional[tuple[float, float]] = None
    inner_delta: Optional[float] = None
    smooth: bool
