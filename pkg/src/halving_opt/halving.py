"""Minimization on a square by halving along gradient directions.

Each iteration cuts the current square through its center, first with a
horizontal line, then with a vertical one. On every cut segment a 1D solve
locates the restricted minimizer to argument accuracy delta, a single
direction query classifies the (sub)gradient there, and the half the
gradient points into is discarded: the minimizer of the restriction sits on
the cut, so the downhill half must still contain a near-optimal point.
Linear sizes halve every iteration, which pins the iteration budget at
n = ceil(log2(2*L*R*sqrt(2)/eps)) for accuracy eps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .geometry import AxisBox, HORIZONTAL, Point2, Segment, VERTICAL, horizontal_cut, split, vertical_cut
from .oned import LineProblem, golden_section
from .oracle import CallCounters, RunOracle, Side

_SQRT2 = math.sqrt(2)
_GEOM = math.sqrt(2) + math.sqrt(5)  # accumulated-error geometry constant


def required_iterations(L: float, R: float, eps: float) -> int:
    """Iterations needed so every point of the final square is eps-optimal."""
    if L <= 0 or R <= 0 or eps <= 0:
        raise ValueError("L, R and eps must be positive")
    ratio = 2 * L * R * _SQRT2 / eps
    if ratio <= 1.0:
        return 0
    # The 1e-12 guard absorbs 1-ulp slop when the ratio is an exact power of 2.
    return max(0, math.ceil(math.log2(ratio) - 1e-12))


def required_delta(M: float, L: float, R: float, eps: float) -> float:
    """1D argument accuracy that keeps the accumulated cut error within eps.

    M = 0 means the gradient is constant along segments, any point of a cut
    segment works, and the budget is unconstrained (+inf).
    """
    if M < 0 or L <= 0 or R <= 0 or eps <= 0:
        raise ValueError("constants must be positive (M may be zero)")
    if eps >= L * R * _SQRT2:
        raise ValueError("eps >= L*R*sqrt(2): accuracy budget is undefined")
    if M == 0:
        return math.inf
    return eps / (2 * M * R * _GEOM * (1 - eps / (L * R * _SQRT2)))


def inexact_budget_ok(M: float, L: float, R: float, eps: float,
                      inner_delta: float, grad_cap: float) -> bool:
    """Whether a (delta, Delta) pair keeps the eps guarantee under gradient
    error of norm <= Delta: 2*Delta + M*delta must fit the cut-error budget."""
    if eps >= L * R * _SQRT2:
        raise ValueError("eps >= L*R*sqrt(2): accuracy budget is undefined")
    rhs = eps / (2 * R * _GEOM * (1 - eps / (L * R * _SQRT2)))
    m_term = 0.0 if M == 0 else M * inner_delta
    # a few ulps of slack so delta = required_delta(...) pairs with Delta = 0
    return 2 * grad_cap + m_term <= rhs + 4 * math.ulp(rhs)


@dataclass(frozen=True)
class Budget:
    epsilon: float
    iterations: int
    inner_delta: float      # may be +inf when the gradient is constant along cuts
    grad_error_cap: float   # Delta
    inexact_ok: Optional[bool]  # None when no smoothness constant is declared

    def as_dict(self) -> dict:
        return {"epsilon": self.epsilon, "iterations": self.iterations,
                "inner_delta": self.inner_delta, "grad_error_cap": self.grad_error_cap,
                "inexact_ok": self.inexact_ok}


@dataclass
class CutRecord:
    axis: str
    segment: tuple[tuple[float, float], tuple[float, float]]
    x_delta: tuple[float, float]
    decision: str
    grad_norm: float
    kept: Optional[dict] = None

    def as_dict(self) -> dict:
        return {"axis": self.axis, "segment": [list(self.segment[0]), list(self.segment[1])],
                "x_delta": list(self.x_delta), "decision": self.decision,
                "grad_norm": self.grad_norm, "kept": self.kept}


@dataclass
class IterationRecord:
    index: int
    region: dict
    cuts: list[CutRecord] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"index": self.index, "region": self.region,
                "cuts": [c.as_dict() for c in self.cuts]}


@dataclass
class Solution:
    point: tuple[float, float]
    value: float
    iterations: int
    stop_reason: str
    counters: CallCounters
    region: object = None
    budget: Optional[Budget] = None
    trace: Optional[list[IterationRecord]] = None
    method: str = "halving"
    extras: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"method": self.method, "point": list(self.point), "value": self.value,
                "iterations": self.iterations, "stop_reason": self.stop_reason,
                "counters": self.counters.as_dict(),
                "region": region_descriptor(self.region),
                "budget": self.budget.as_dict() if self.budget else None,
                "trace": [r.as_dict() for r in self.trace] if self.trace is not None else None,
                "extras": self.extras}


def region_descriptor(region) -> Optional[dict]:
    """Plain-dict view of a localization region for traces."""
    if region is None:
        return None
    if isinstance(region, AxisBox):
        kind = "square" if region.is_square else "rect"
        return {"kind": kind, "center": [region.center.x1, region.center.x2],
                "half": [region.half_w, region.half_h]}
    from .geometry import RightTriangle, Trapezoid
    if isinstance(region, RightTriangle):
        return {"kind": "triangle", "vertex": [region.vertex.x1, region.vertex.x2],
                "leg": region.leg, "orient": list(region.orient)}
    if isinstance(region, Trapezoid):
        return {"kind": "trapezoid",
                "vertices": [[p.x1, p.x2] for p in region.vertices]}
    raise TypeError(f"unknown region type {type(region)!r}")


@dataclass(frozen=True)
class StopRule:
    """Direction-query tolerance plus how to label a stop.

    Norms at or below `hard_zero` read as an exact stationary point; norms
    between `hard_zero` and `tol` fire the certified small-gradient stop
    (only when the latter is enabled, i.e. tol > hard_zero).
    """

    tol: float
    hard_zero: float

    def reason(self, norm: float) -> str:
        return "zero_gradient" if norm <= self.hard_zero else "small_gradient_norm"


@dataclass
class StepOutcome:
    box: Optional[AxisBox]
    cuts: list[CutRecord]
    stop_point: Optional[Point2] = None
    stop_reason: Optional[str] = None


def _solve_on_segment(run: RunOracle, seg: Segment, delta: float) -> Point2:
    if not math.isfinite(delta):
        # Gradient constant along the segment: any point serves as x_delta.
        return seg.midpoint
    prob = LineProblem(seg, lambda t: run.value(seg.point_at(t)))
    return golden_section(prob, delta)


def step(run: RunOracle, box: AxisBox, deltas: tuple[float, float],
         stop: StopRule = StopRule(1e-12, 1e-12)) -> StepOutcome:
    """One full iteration: horizontal cut then vertical cut.

    deltas = (delta for horizontal-cut solves, delta for vertical-cut ones).
    The half whose open half-plane the gradient points into is discarded;
    a gradient along the cut discards the upper (resp. right) half.
    """
    cuts: list[CutRecord] = []
    current = box
    for axis, delta in ((HORIZONTAL, deltas[0]), (VERTICAL, deltas[1])):
        seg = horizontal_cut(current) if axis == HORIZONTAL else vertical_cut(current)
        x = _solve_on_segment(run, seg, delta)
        side, norm = run.direction(x, seg, stop.tol)
        rec = CutRecord(axis=axis,
                        segment=(seg.a.as_tuple(), seg.b.as_tuple()),
                        x_delta=x.as_tuple(), decision=side.value, grad_norm=norm)
        cuts.append(rec)
        if side == Side.ZERO:
            return StepOutcome(box=None, cuts=cuts, stop_point=x, stop_reason=stop.reason(norm))
        first, second = split(current, seg)
        current = first if side in (Side.SECOND, Side.ALONG) else second
        rec.kept = region_descriptor(current)
    return StepOutcome(box=current, cuts=cuts)


def resolve_inner_delta(oracle, R: float, eps: float) -> float:
    """Default 1D accuracy: the theory value when a gradient-Lipschitz
    constant is declared, otherwise an eps-proportional fallback (for
    nonsmooth oracles, or when eps is too coarse for the theory formula)."""
    M = oracle.grad_lipschitz_M
    L = oracle.lipschitz_L
    if M == 0:
        return math.inf
    if M is not None and eps < L * R * _SQRT2:
        return required_delta(M, L, R, eps)
    return eps / (2 * L * _GEOM)


def make_stop_rule(oracle, R: float, eps: float, inner_delta: float,
                   small_grad_stop: bool, zero_tol: float = 1e-12) -> StopRule:
    """Certified small-gradient stopping needs L >= eps/(1.6*R) and a
    declared smoothness constant; the threshold is M*delta + Delta."""
    M = oracle.grad_lipschitz_M
    cap = getattr(oracle, "delta_cap", 0.0)
    enabled = small_grad_stop and M is not None and oracle.lipschitz_L >= eps / (1.6 * R)
    if not enabled:
        return StopRule(tol=zero_tol, hard_zero=zero_tol)
    m_term = M * inner_delta if (M > 0 and math.isfinite(inner_delta)) else 0.0
    return StopRule(tol=max(zero_tol, m_term + cap), hard_zero=zero_tol)


def _axis_deltas(oracle, R: float, eps: float, inner_delta: Optional[float]) -> tuple[float, float, float]:
    """(scalar budget delta, horizontal-solve delta, vertical-solve delta)."""
    if inner_delta is not None:
        if inner_delta <= 0:
            raise ValueError("inner_delta must be positive")
        return inner_delta, inner_delta, inner_delta
    scalar = resolve_inner_delta(oracle, R, eps)
    L = oracle.lipschitz_L
    if oracle.per_axis_M is not None and eps < L * R * _SQRT2:
        dh, dv = (required_delta(m, L, R, eps) for m in oracle.per_axis_M)
        return scalar, dh, dv
    return scalar, scalar, scalar


def solve(oracle, square: AxisBox, eps: float, *, inner_delta: Optional[float] = None,
          iterations: Optional[int] = None, small_grad_stop: bool = True,
          collect_trace: bool = True, zero_tol: float = 1e-12) -> Solution:
    """Run the halving method on a square until the iteration budget or an
    early gradient stop. The returned point is the final square's center,
    or x_delta itself when a stop fired there."""
    if not square.is_square:
        raise ValueError("halving requires a square region")
    R = square.width
    if eps <= 0:
        raise ValueError("eps must be positive")
    n = required_iterations(oracle.lipschitz_L, R, eps) if iterations is None else iterations
    scalar_delta, dh, dv = _axis_deltas(oracle, R, eps, inner_delta)
    cap = getattr(oracle, "delta_cap", 0.0)
    M = oracle.grad_lipschitz_M
    inexact_ok = None
    if M is not None and eps < oracle.lipschitz_L * R * _SQRT2:
        inexact_ok = inexact_budget_ok(M, oracle.lipschitz_L, R, eps, scalar_delta, cap)
    budget = Budget(eps, n, scalar_delta, cap, inexact_ok)
    stop = make_stop_rule(oracle, R, eps, scalar_delta, small_grad_stop, zero_tol)

    run = RunOracle(oracle)
    trace: Optional[list[IterationRecord]] = [] if collect_trace else None
    box = square
    executed = 0
    for k in range(n):
        outcome = step(run, box, (dh, dv), stop)
        executed = k + 1
        if trace is not None:
            trace.append(IterationRecord(index=k, region=region_descriptor(box), cuts=outcome.cuts))
        if outcome.box is None:
            p = outcome.stop_point
            return Solution(point=p.as_tuple(), value=run.value(p), iterations=executed,
                            stop_reason=outcome.stop_reason, counters=run.counters,
                            region=box, budget=budget, trace=trace,
                            extras={"axis_deltas": [dh, dv]})
        box = outcome.box
    center = box.center
    return Solution(point=center.as_tuple(), value=run.value(center), iterations=executed,
                    stop_reason="iteration_budget", counters=run.counters, region=box,
                    budget=budget, trace=trace, extras={"axis_deltas": [dh, dv]})
