"""Halving on a right-triangle domain with axis-parallel legs.

An iteration cuts the triangle by the midline joining the midpoint of the
x1-parallel leg to the hypotenuse midpoint (the cut itself runs parallel to
the x2-axis). If the gradient at the 1D solution points into the half-leg
triangle beyond the cut, that triangle is discarded and the surviving
trapezoid is cut again by the other midline; the survivor of the second cut
is either the other half-leg triangle or the inscribed square. Triangles
recurse; a square hands over to the square method with the remaining
iteration budget. Linear sizes halve either way, so the total budget
matches the square case with R replaced by the leg length.
"""

from __future__ import annotations

import math
from typing import Optional

from .geometry import AxisBox, Point2, RightTriangle, triangle_midline_cuts, triangle_split
from .halving import (Budget, CutRecord, IterationRecord, Solution, StopRule, _axis_deltas,
                      _solve_on_segment, inexact_budget_ok, make_stop_rule, region_descriptor,
                      required_iterations, step)
from .oracle import RunOracle, Side

_SQRT2 = math.sqrt(2)


def _stop_solution(run: RunOracle, p: Point2, reason: str, region, budget, trace, executed,
                   extras) -> Solution:
    return Solution(point=p.as_tuple(), value=run.value(p), iterations=executed,
                    stop_reason=reason, counters=run.counters, region=region,
                    budget=budget, trace=trace, method="triangle", extras=extras)


def solve_triangle(oracle, tri: RightTriangle, eps: float, *, inner_delta: Optional[float] = None,
                   iterations: Optional[int] = None, small_grad_stop: bool = True,
                   collect_trace: bool = True, zero_tol: float = 1e-12) -> Solution:
    """Localize the minimum of a convex function over a right triangle."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    A = tri.leg
    n_total = required_iterations(oracle.lipschitz_L, A, eps) if iterations is None else iterations
    scalar_delta, dh, dv = _axis_deltas(oracle, A, eps, inner_delta)
    cap = getattr(oracle, "delta_cap", 0.0)
    M = oracle.grad_lipschitz_M
    inexact_ok = None
    if M is not None and eps < oracle.lipschitz_L * A * _SQRT2:
        inexact_ok = inexact_budget_ok(M, oracle.lipschitz_L, A, eps, scalar_delta, cap)
    budget = Budget(eps, n_total, scalar_delta, cap, inexact_ok)
    stop = make_stop_rule(oracle, A, eps, scalar_delta, small_grad_stop, zero_tol)

    run = RunOracle(oracle)
    trace: Optional[list[IterationRecord]] = [] if collect_trace else None
    region = tri
    square: Optional[AxisBox] = None
    tri_iters = 0

    for k in range(n_total):
        first_seg, second_seg = triangle_midline_cuts(region)
        rec = IterationRecord(index=k, region=region_descriptor(region))
        kept = None
        # First cut runs parallel to x2, so its 1D solve moves along x2.
        for seg, delta in ((first_seg, dv), (second_seg, dh)):
            x = _solve_on_segment(run, seg, delta)
            side, norm = run.direction(x, seg, stop.tol)
            cut = CutRecord(axis=seg.axis, segment=(seg.a.as_tuple(), seg.b.as_tuple()),
                            x_delta=x.as_tuple(), decision=side.value, grad_norm=norm)
            rec.cuts.append(cut)
            if side == Side.ZERO:
                if trace is not None:
                    trace.append(rec)
                extras = {"triangle_iterations": k + 1, "square_iterations": 0,
                          "axis_deltas": [dh, dv]}
                return _stop_solution(run, x, stop.reason(norm), region, budget, trace, k + 1,
                                      extras)
            pieces = triangle_split(region, seg)
            kept = pieces[0] if side in (Side.SECOND, Side.ALONG) else pieces[1]
            cut.kept = region_descriptor(kept)
            if isinstance(kept, (RightTriangle, AxisBox)):
                break  # iteration settled; a trapezoid means take the second cut
        if trace is not None:
            trace.append(rec)
        tri_iters = k + 1
        if isinstance(kept, AxisBox):
            square = kept
            break
        region = kept

    extras = {"triangle_iterations": tri_iters, "axis_deltas": [dh, dv]}
    if square is None:
        # Budget spent entirely on triangle iterations.
        extras["square_iterations"] = 0
        p = region.centroid
        return Solution(point=p.as_tuple(), value=run.value(p), iterations=tri_iters,
                        stop_reason="iteration_budget", counters=run.counters, region=region,
                        budget=budget, trace=trace, method="triangle", extras=extras)

    remaining = n_total - tri_iters
    extras["square_iterations"] = remaining
    box = square
    for k in range(remaining):
        outcome = step(run, box, (dh, dv), stop)
        if trace is not None:
            trace.append(IterationRecord(index=tri_iters + k, region=region_descriptor(box),
                                         cuts=outcome.cuts))
        if outcome.box is None:
            extras["square_iterations"] = k + 1
            return _stop_solution(run, outcome.stop_point, outcome.stop_reason, box, budget,
                                  trace, tri_iters + k + 1, extras)
        box = outcome.box
    p = box.center
    return Solution(point=p.as_tuple(), value=run.value(p), iterations=n_total,
                    stop_reason="iteration_budget", counters=run.counters, region=box,
                    budget=budget, trace=trace, method="triangle", extras=extras)
