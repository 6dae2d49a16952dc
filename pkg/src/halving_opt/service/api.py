"""Service-layer entry points. The HTTP app and the CLI both call these."""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import numpy as np

from .. import halving
from ..baselines import ellipsoid_solve, gradient_descent_solve
from ..dual import DualProblem, ProblemSpec, dual_solve, primal_objective_oracle
from ..geometry import AxisBox, Point2, RightTriangle
from ..oracle import CorpusEntry, PerturbedOracle, corpus
from ..triangle import solve_triangle
from .schemas import (BudgetModel, CompareRequest, CompareResponse, CountersModel,
                      DualRequest, DualResponse, FunctionInfo, MethodSkip,
                      SolveRequest, SolveResponse, SweepRequest, SweepResponse, SweepRow)


def list_functions() -> list[FunctionInfo]:
    return [FunctionInfo(name=e.name, summary=e.summary, bounds=e.square.bounds,
                         lipschitz_L=e.oracle.lipschitz_L,
                         grad_lipschitz_M=e.oracle.grad_lipschitz_M,
                         min_value=e.min_value, min_point=e.min_point,
                         inner_delta=e.inner_delta, smooth=e.smooth)
            for e in corpus().values()]


def _entry(name: str) -> CorpusEntry:
    table = corpus()
    if name not in table:
        known = ", ".join(sorted(table))
        raise ValueError(f"unknown function {name!r}; available: {known}")
    return table[name]


def _problem_entry(spec: ProblemSpec) -> CorpusEntry:
    """Wrap a problem file's objective so the solvers treat it like a corpus entry."""
    oracle, box = primal_objective_oracle(DualProblem(spec))
    return CorpusEntry(name=spec.name or "problem", oracle=oracle, square=box,
                       min_value=None, min_point=None,
                       summary="objective of a problem file, constraints ignored")


def _lower_left_triangle(square: AxisBox) -> RightTriangle:
    lo1, hi1, lo2, hi2 = square.bounds
    return RightTriangle(Point2(lo1, lo2), hi1 - lo1, (1, 1))


def _finite_or_none(x: Optional[float]) -> Optional[float]:
    return None if x is None or not math.isfinite(x) else x


def _json_safe(obj):
    """Replace non-finite floats with None so payloads stay strict JSON."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj


def _budget_model(b: Optional[halving.Budget]) -> Optional[BudgetModel]:
    if b is None:
        return None
    return BudgetModel(epsilon=b.epsilon, iterations=b.iterations,
                       inner_delta=_finite_or_none(b.inner_delta),
                       grad_error_cap=b.grad_error_cap, inexact_ok=b.inexact_ok)


def _region_best(entry: CorpusEntry, region, samples: int = 33) -> Optional[float]:
    """Smallest exact objective value over a sample grid of a final region."""
    vals = []
    if isinstance(region, AxisBox):
        lo1, hi1, lo2, hi2 = region.bounds
        for u in np.linspace(lo1, hi1, samples):
            for w in np.linspace(lo2, hi2, samples):
                vals.append(entry.oracle.value(Point2(float(u), float(w))))
    elif isinstance(region, RightTriangle):
        xs = [p.x1 for p in region.vertices]
        ys = [p.x2 for p in region.vertices]
        for u in np.linspace(min(xs), max(xs), samples):
            for w in np.linspace(min(ys), max(ys), samples):
                p = Point2(float(u), float(w))
                if region.contains(p):
                    vals.append(entry.oracle.value(p))
    else:
        return None
    return min(vals) if vals else None


def run_solve(req: SolveRequest) -> SolveResponse:
    entry = _problem_entry(req.problem) if req.problem is not None else _entry(req.function)
    oracle = entry.oracle
    if req.perturbation is not None and req.perturbation.delta_cap > 0:
        oracle = PerturbedOracle(entry.oracle, req.perturbation.delta_cap,
                                 req.perturbation.mode, req.perturbation.seed)
    # Precedence for the 1D tolerance: request, then the function's
    # documented default, then the accuracy formula inside the solver.
    inner_delta = req.inner_delta if req.inner_delta is not None else entry.inner_delta

    t0 = time.perf_counter()
    gap_known = entry.min_value is not None
    if req.domain == "triangle":
        if req.method != "halving":
            raise ValueError("the triangle domain supports the halving method only")
        tri = _lower_left_triangle(entry.square)
        sol = solve_triangle(oracle, tri, req.eps, inner_delta=inner_delta,
                             iterations=req.iterations, small_grad_stop=req.small_grad_stop,
                             collect_trace=req.collect_trace)
        gap_known = (gap_known and entry.min_point is not None
                     and tri.contains(Point2(*entry.min_point)))
    elif req.method == "halving":
        sol = halving.solve(oracle, entry.square, req.eps, inner_delta=inner_delta,
                            iterations=req.iterations, small_grad_stop=req.small_grad_stop,
                            collect_trace=req.collect_trace)
    elif req.method == "ellipsoid":
        sol = ellipsoid_solve(oracle, entry.square, req.eps, known_min=entry.min_value,
                              collect_trace=req.collect_trace)
    else:
        sol = gradient_descent_solve(oracle, entry.square, req.eps, known_min=entry.min_value)
    wall_ms = (time.perf_counter() - t0) * 1000.0

    gap = sol.value - entry.min_value if gap_known else None
    best = _region_best(entry, sol.region) if req.method == "halving" else None
    best_gap = best - entry.min_value if best is not None and gap_known else None
    trace = [r.as_dict() for r in sol.trace] if req.collect_trace and sol.trace else None
    return SolveResponse(function=entry.name, method=sol.method, domain=req.domain,
                         eps=req.eps, point=sol.point, value=sol.value, gap=gap,
                         region_best_value=best, region_best_gap=best_gap,
                         iterations=sol.iterations, stop_reason=sol.stop_reason,
                         counters=CountersModel(**sol.counters.as_dict()),
                         budget=_budget_model(sol.budget),
                         region=halving.region_descriptor(sol.region),
                         extras=_json_safe(sol.extras), trace=trace, wall_ms=wall_ms)


def _gd_skip_reason(entry: CorpusEntry) -> Optional[str]:
    M = entry.oracle.grad_lipschitz_M
    if M is None:
        return "no gradient-Lipschitz constant (nonsmooth objective)"
    if M == 0:
        return "constant gradient, step 1/M undefined"
    return None


def run_compare(req: CompareRequest) -> CompareResponse:
    entry = _entry(req.function)
    results: list[SolveResponse] = []
    skipped: list[MethodSkip] = []
    for method in req.methods:
        reason = _gd_skip_reason(entry) if method == "gd" else None
        if reason is not None:
            skipped.append(MethodSkip(method=method, reason=reason))
            continue
        results.append(run_solve(SolveRequest(function=req.function, method=method,
                                              eps=req.eps)))
    return CompareResponse(function=req.function, eps=req.eps,
                           results=results, skipped=skipped)


def run_dual(req: DualRequest) -> DualResponse:
    problem = DualProblem(req.problem)
    eps = req.eps if req.eps is not None else req.problem.eps
    if eps is None or eps <= 0:
        raise ValueError("a positive eps must come from the request or the problem spec")
    domain = req.domain or req.problem.domain or "square"
    t0 = time.perf_counter()
    sol = dual_solve(problem, eps, domain, inner_fn_accuracy=req.inner_fn_accuracy,
                     dual_bound=req.dual_bound)
    wall_ms = (time.perf_counter() - t0) * 1000.0
    return DualResponse(name=req.problem.name, lam=sol.lam, primal=list(sol.primal),
                        primal_value=sol.primal_value, dual_value=sol.dual_value,
                        complementarity=sol.complementarity,
                        max_constraint=sol.max_constraint, certified=sol.certified,
                        eps=sol.eps, inner_fn_accuracy=sol.inner_fn_accuracy,
                        grad_error_cap=sol.grad_error_cap, dual_bound=sol.dual_bound,
                        domain=sol.domain, stop_reason=sol.stop_reason,
                        inner_solves=sol.inner_solves, pgd_steps=sol.pgd_steps,
                        outer_iterations=sol.outer.iterations if sol.outer else None,
                        wall_ms=wall_ms)


def run_sweep(req: SweepRequest) -> SweepResponse:
    jobs: list[SolveRequest] = []
    for name in req.functions:
        entry = _entry(name)
        for eps in req.eps_values:
            for method in req.methods:
                if method == "gd" and _gd_skip_reason(entry) is not None:
                    continue
                jobs.append(SolveRequest(function=name, method=method, eps=eps,
                                         domain=req.domain))
    workers = int(os.environ.get("HALVING_OPT_THREADS", "1"))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            responses = list(pool.map(run_solve, jobs))
    else:
        responses = [run_solve(j) for j in jobs]
    rows = [SweepRow(method=r.method, function=r.function, eps=r.eps,
                     iterations=r.iterations, value_calls=r.counters.value_calls,
                     direction_calls=r.counters.direction_calls,
                     full_grad_calls=r.counters.full_grad_calls,
                     wall_ms=r.wall_ms, final_gap=r.gap)
            for r in responses]
    return SweepResponse(rows=rows)
