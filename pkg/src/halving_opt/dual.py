"""Certified solves of box-constrained strongly convex programs via the dual.

The primal is min f(x) over a box Q subject to g1(x) <= 0, g2(x) <= 0 with f
mu-strongly convex and each g_i convex and M_i-Lipschitz. The dual function
phi(lam) = min_{x in Q} f(x) + lam . g(x) is concave, its gradient at lam is
g(x(lam)) at the inner minimizer, and that gradient is Lipschitz with
constant (M1^2 + M2^2)/mu. Since the dual lives in 2D it can be maximized
with the halving methods over [0, A]^2 or over the simplex-like triangle
{lam >= 0, lam1 + lam2 <= A}, where A bounds the optimal multipliers (from a
Slater point if not given). Inner minimizations run projected gradient
descent to function accuracy delta_fn, which caps the dual gradient error at
Delta = M * sqrt(2*delta_fn/mu). A run stops as soon as any visited lam
satisfies the complementarity certificate |lam . g(x)| <= eps with x
feasible to eps; the primal value at that x is then within eps + delta_fn of
the constrained optimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import numpy as np
from pydantic import BaseModel, Field, model_validator

from . import halving
from .geometry import AxisBox, Point2, RightTriangle, Segment
from .triangle import solve_triangle

_GEOM = math.sqrt(2) + math.sqrt(5)
_SQRT2 = math.sqrt(2)


class FunctionTerms(BaseModel):
    """Sum of quadratic, linear, constant and single-variable exponential terms.

    quad entries (c, i, j) mean c*x_i*x_j; linear entries (c, i) mean c*x_i;
    exp entries (c, a, i, b) mean c*exp(a*x_i + b) with c >= 0.
    """

    quad: list[tuple[float, int, int]] = []
    linear: list[tuple[float, int]] = []
    const: float = 0.0
    exp: list[tuple[float, float, int, float]] = []


class ProblemSpec(BaseModel):
    dim: int = Field(ge=1)
    lower: list[float]
    upper: list[float]
    objective: FunctionTerms
    constraints: list[FunctionTerms]
    mu: float = Field(gt=0)
    constraint_lipschitz: list[float]
    slater: Optional[list[float]] = None
    dual_bound: Optional[float] = None
    eps: Optional[float] = None
    domain: Optional[str] = None
    name: str = ""

    @model_validator(mode="after")
    def _check_shapes(self):
        if len(self.lower) != self.dim or len(self.upper) != self.dim:
            raise ValueError("box bounds must have length dim")
        if any(lo >= hi for lo, hi in zip(self.lower, self.upper)):
            raise ValueError("box must have positive extent in every coordinate")
        if len(self.constraints) != 2:
            raise ValueError("exactly two inequality constraints are supported")
        if len(self.constraint_lipschitz) != 2 or any(m < 0 for m in self.constraint_lipschitz):
            raise ValueError("constraint_lipschitz must hold two nonnegative constants")
        if self.slater is not None and len(self.slater) != self.dim:
            raise ValueError("slater point must have length dim")
        if self.domain not in (None, "square", "triangle"):
            raise ValueError("domain must be 'square' or 'triangle'")
        for terms in [self.objective, *self.constraints]:
            for c, _, i, _ in terms.exp:
                if c < 0:
                    raise ValueError("exp terms need nonnegative coefficients for convexity")
                if not 0 <= i < self.dim:
                    raise ValueError("exp term index out of range")
            for c, i, j in terms.quad:
                if not (0 <= i < self.dim and 0 <= j < self.dim):
                    raise ValueError("quad term index out of range")
            for c, i in terms.linear:
                if not 0 <= i < self.dim:
                    raise ValueError("linear term index out of range")
        return self


class _Terms:
    """Compiled evaluator for one FunctionTerms expression."""

    def __init__(self, spec: FunctionTerms, dim: int, lower: np.ndarray, upper: np.ndarray):
        H = np.zeros((dim, dim))
        for c, i, j in spec.quad:
            if i == j:
                H[i, i] += 2 * c
            else:
                H[i, j] += c
                H[j, i] += c
        self.H = H
        lin = np.zeros(dim)
        for c, i in spec.linear:
            lin[i] += c
        self.lin = lin
        self.const = spec.const
        self.exp = [tuple(map(float, t[:2])) + (int(t[2]), float(t[3])) for t in spec.exp]
        hess = float(np.max(np.abs(np.linalg.eigvalsh(H)))) if dim else 0.0
        for c, a, i, b in self.exp:
            peak = upper[i] if a > 0 else lower[i]
            hess += abs(c) * a * a * math.exp(a * peak + b)
        self.hess_bound = hess

    def value(self, x: np.ndarray) -> float:
        v = 0.5 * float(x @ self.H @ x) + float(self.lin @ x) + self.const
        for c, a, i, b in self.exp:
            v += c * math.exp(a * x[i] + b)
        return v

    def grad(self, x: np.ndarray) -> np.ndarray:
        g = self.H @ x + self.lin
        for c, a, i, b in self.exp:
            g[i] += c * a * math.exp(a * x[i] + b)
        return g


class DualProblem:
    def __init__(self, spec: ProblemSpec):
        self.spec = spec
        self.lower = np.array(spec.lower, dtype=float)
        self.upper = np.array(spec.upper, dtype=float)
        self.f = _Terms(spec.objective, spec.dim, self.lower, self.upper)
        self.g = [_Terms(c, spec.dim, self.lower, self.upper) for c in spec.constraints]
        self.mu = spec.mu
        self.m = np.array(spec.constraint_lipschitz, dtype=float)

    @property
    def dim(self) -> int:
        return self.spec.dim

    def clip(self, x: np.ndarray) -> np.ndarray:
        return np.clip(x, self.lower, self.upper)

    def constraint_values(self, x: np.ndarray) -> np.ndarray:
        return np.array([gi.value(x) for gi in self.g])

    def lagrangian_value(self, x: np.ndarray, lam: np.ndarray) -> float:
        return self.f.value(x) + float(lam @ self.constraint_values(x))

    def grad_lipschitz_dual(self) -> float:
        return float(self.m @ self.m) / self.mu

    def lipschitz_dual(self) -> float:
        """Upper bound on |grad phi| = |g(x(lam))| over the box."""
        center = (self.lower + self.upper) / 2
        radius = float(np.linalg.norm((self.upper - self.lower) / 2))
        comps = [abs(gi.value(center)) + mi * radius for gi, mi in zip(self.g, self.m)]
        return math.hypot(*comps)


class InnerSolveError(RuntimeError):
    """Projected gradient ran out of iterations; the problem is likely
    ill-conditioned or the declared constants are wrong."""


def _reduced_grad(g: np.ndarray, x: np.ndarray, lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
    r = g.copy()
    r[(x <= lower) & (g > 0)] = 0.0
    r[(x >= upper) & (g < 0)] = 0.0
    return r


def inner_solve(problem: DualProblem, lam, delta_fn: float, x0: Optional[np.ndarray] = None,
                max_iter: int = 200_000) -> tuple[np.ndarray, int]:
    """Minimize f + lam . g over the box to function accuracy delta_fn.

    Projected gradient with step 1/L_F; stopping is certified by strong
    convexity: F(x) - F* <= |r|^2 / (2*mu) for the reduced gradient r,
    whose components vanish where an active bound blocks descent.
    """
    if delta_fn <= 0:
        raise ValueError("delta_fn must be positive")
    lam = np.asarray(lam, dtype=float)
    if lam.shape != (2,) or np.any(lam < 0):
        raise ValueError("lam must be two nonnegative multipliers")
    LF = max(problem.f.hess_bound + float(lam @ [g.hess_bound for g in problem.g]), problem.mu)
    step = 1.0 / LF
    x = problem.clip(x0.astype(float) if x0 is not None else (problem.lower + problem.upper) / 2)
    target = 2 * problem.mu * delta_fn
    for k in range(max_iter):
        g = problem.f.grad(x) + lam[0] * problem.g[0].grad(x) + lam[1] * problem.g[1].grad(x)
        r = _reduced_grad(g, x, problem.lower, problem.upper)
        if float(r @ r) <= target:
            return x, k
        x = problem.clip(x - step * g)
    raise InnerSolveError(f"no certificate after {max_iter} projected gradient steps")


def certificate_residuals(problem: DualProblem, lam: np.ndarray, x: np.ndarray) -> tuple[float, float]:
    """(|lam . g(x)|, max_i g_i(x)) at an inner solution."""
    gv = problem.constraint_values(x)
    return abs(float(lam @ gv)), float(np.max(gv))


def dual_value_and_grad(problem: DualProblem, lam, delta_fn: float,
                        x0: Optional[np.ndarray] = None) -> tuple[float, tuple[float, float], np.ndarray]:
    """Inexact dual value and gradient at lam.

    The value is phi(lam) up to delta_fn and the gradient g(x_delta(lam))
    differs from grad phi(lam) by at most M*sqrt(2*delta_fn/mu) in norm.
    """
    x, _ = inner_solve(problem, lam, delta_fn, x0=x0)
    lam = np.asarray(lam, dtype=float)
    gv = problem.constraint_values(x)
    return problem.f.value(x) + float(lam @ gv), (float(gv[0]), float(gv[1])), x


class _Certified(Exception):
    def __init__(self, lam: np.ndarray, x: np.ndarray):
        self.lam = lam
        self.x = x


class _DualObjective:
    """2D oracle for -phi, suitable for the localization solvers.

    Every evaluation runs one inner solve (warm-started from the previous
    one) and, when certificate_eps is set, raises _Certified as soon as a
    visited multiplier passes the complementarity-plus-feasibility test.
    """

    def __init__(self, problem: DualProblem, delta_fn: float, certificate_eps: Optional[float],
                 lipschitz_L: float, grad_lipschitz_M: float, delta_cap: float):
        self.problem = problem
        self.delta_fn = delta_fn
        self.certificate_eps = certificate_eps
        self.lipschitz_L = lipschitz_L
        self.grad_lipschitz_M = grad_lipschitz_M
        self.per_axis_M = None
        self.delta_cap = delta_cap
        self.inner_solves = 0
        self.pgd_steps = 0
        self._warm: Optional[np.ndarray] = None

    def _solve_at(self, p: Point2) -> tuple[np.ndarray, np.ndarray]:
        lam = np.array([max(p.x1, 0.0), max(p.x2, 0.0)])
        x, steps = inner_solve(self.problem, lam, self.delta_fn, x0=self._warm)
        self.inner_solves += 1
        self.pgd_steps += steps
        self._warm = x
        if self.certificate_eps is not None:
            comp, feas = certificate_residuals(self.problem, lam, x)
            if comp <= self.certificate_eps and feas <= self.certificate_eps:
                raise _Certified(lam, x)
        return lam, x

    def value(self, p: Point2) -> float:
        lam, x = self._solve_at(p)
        return -self.problem.lagrangian_value(x, lam)

    def grad(self, p: Point2) -> tuple[float, float]:
        lam, x = self._solve_at(p)
        gv = self.problem.constraint_values(x)
        return (-float(gv[0]), -float(gv[1]))

    def direction_vector(self, p: Point2, seg: Optional[Segment] = None) -> tuple[float, float]:
        return self.grad(p)


@dataclass
class DualSolution:
    lam: tuple[float, float]
    primal: tuple[float, ...]
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
    outer: Optional[halving.Solution] = None
    extras: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"lam": list(self.lam), "primal": list(self.primal),
                "primal_value": self.primal_value, "dual_value": self.dual_value,
                "complementarity": self.complementarity, "max_constraint": self.max_constraint,
                "certified": self.certified, "eps": self.eps,
                "inner_fn_accuracy": self.inner_fn_accuracy,
                "grad_error_cap": self.grad_error_cap, "dual_bound": self.dual_bound,
                "domain": self.domain, "stop_reason": self.stop_reason,
                "inner_solves": self.inner_solves, "pgd_steps": self.pgd_steps,
                "extras": self.extras}


def load_problem(source: Union[str, Path, dict]) -> DualProblem:
    """Build a DualProblem from a JSON file path or an equivalent dict."""
    if isinstance(source, (str, Path)):
        spec = ProblemSpec.model_validate_json(Path(source).read_text())
    else:
        spec = ProblemSpec.model_validate(source)
    return DualProblem(spec)


def derive_dual_bound(problem: DualProblem, lower_bound: float) -> float:
    """Multiplier bound from a strictly feasible point: any optimal lam has
    lam1 + lam2 <= (f(slater) - lower_bound) / min_i(-g_i(slater))."""
    if problem.spec.slater is None:
        raise ValueError("problem declares neither a Slater point nor a dual_bound")
    xb = problem.clip(np.array(problem.spec.slater, dtype=float))
    gv = problem.constraint_values(xb)
    margin = float(np.min(-gv))
    if margin <= 0:
        raise ValueError("Slater point must satisfy both constraints strictly")
    return max((problem.f.value(xb) - lower_bound) / margin, 1e-12)


def _dual_budgets(problem: DualProblem, A: float, eps: float,
                  inner_fn_accuracy: Optional[float]) -> tuple[float, float, float, float, float]:
    """(L_dual, M_dual, delta_arg, delta_fn, Delta) for the 2D dual solve.

    The eps budget is split evenly: half to the 1D argument accuracy via the
    usual delta formula, half to the gradient error cap 2*Delta.
    """
    L = problem.lipschitz_dual()
    M = problem.grad_lipschitz_dual()
    if eps < L * A * _SQRT2:
        delta_arg = halving.required_delta(M, L, A, eps) / 2 if M > 0 else math.inf
        rhs = eps / (2 * A * _GEOM * (1 - eps / (L * A * _SQRT2)))
    else:
        delta_arg = A * 1e-3
        rhs = eps / (2 * A * _GEOM)
    delta_target = rhs / 4
    msq = float(problem.m @ problem.m)
    if inner_fn_accuracy is not None:
        delta_fn = inner_fn_accuracy
    elif msq > 0:
        delta_fn = min(eps, problem.mu * delta_target ** 2 / (2 * msq))
    else:
        delta_fn = eps
    delta_cap = math.sqrt(msq * 2 * delta_fn / problem.mu)
    return L, M, delta_arg, delta_fn, delta_cap


def dual_solve(problem: DualProblem, eps: float, domain: str = "square", *,
               inner_fn_accuracy: Optional[float] = None, dual_bound: Optional[float] = None,
               collect_trace: bool = False) -> DualSolution:
    """Maximize the dual over [0,A]^2 (or the triangle lam1+lam2 <= A) until
    some visited multiplier certifies an eps-optimal, eps-feasible primal."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    if domain not in ("square", "triangle"):
        raise ValueError("domain must be 'square' or 'triangle'")

    # Multiplier zero doubles as the Slater lower-bound solve and as the
    # immediate certificate when the unconstrained minimizer is feasible.
    delta0 = min(eps, 1e-3)
    x0, _ = inner_solve(problem, (0.0, 0.0), delta0)
    comp0, feas0 = certificate_residuals(problem, np.zeros(2), x0)
    A = dual_bound if dual_bound is not None else problem.spec.dual_bound
    if A is None:
        A = derive_dual_bound(problem, problem.f.value(x0) - delta0)
    if A <= 0:
        raise ValueError("dual_bound must be positive")
    L, M, delta_arg, delta_fn, delta_cap = _dual_budgets(problem, A, eps, inner_fn_accuracy)

    if feas0 <= eps:
        gv = problem.constraint_values(x0)
        return DualSolution(lam=(0.0, 0.0), primal=tuple(map(float, x0)),
                            primal_value=problem.f.value(x0),
                            dual_value=problem.f.value(x0),
                            complementarity=comp0, max_constraint=float(np.max(gv)),
                            certified=True, eps=eps, inner_fn_accuracy=delta0,
                            grad_error_cap=delta_cap, dual_bound=A, domain=domain,
                            stop_reason="certificate_at_zero", inner_solves=1, pgd_steps=0)

    oracle = _DualObjective(problem, delta_fn, eps, L, M, delta_cap)
    outer: Optional[halving.Solution] = None
    try:
        if domain == "square":
            box = AxisBox.from_bounds(0.0, A, 0.0, A)
            outer = halving.solve(oracle, box, eps, inner_delta=delta_arg,
                                  small_grad_stop=False, collect_trace=collect_trace)
        else:
            tri = RightTriangle(Point2(0.0, 0.0), A, (1, 1))
            outer = solve_triangle(oracle, tri, eps, inner_delta=delta_arg,
                                   small_grad_stop=False, collect_trace=collect_trace)
    except _Certified as hit:
        lam, x = hit.lam, hit.x
        comp, feas = certificate_residuals(problem, lam, x)
        return DualSolution(lam=(float(lam[0]), float(lam[1])), primal=tuple(map(float, x)),
                            primal_value=problem.f.value(x),
                            dual_value=problem.lagrangian_value(x, lam),
                            complementarity=comp, max_constraint=feas, certified=True,
                            eps=eps, inner_fn_accuracy=delta_fn, grad_error_cap=delta_cap,
                            dual_bound=A, domain=domain, stop_reason="certificate",
                            inner_solves=oracle.inner_solves + 1, pgd_steps=oracle.pgd_steps)

    # Budget exhausted without a certificate: report the final multiplier
    # with its measured residuals.
    oracle.certificate_eps = None
    lam = np.array(outer.point)
    x, _ = inner_solve(problem, np.maximum(lam, 0.0), delta_fn, x0=None)
    comp, feas = certificate_residuals(problem, lam, x)
    return DualSolution(lam=(float(lam[0]), float(lam[1])), primal=tuple(map(float, x)),
                        primal_value=problem.f.value(x),
                        dual_value=problem.lagrangian_value(x, lam),
                        complementarity=comp, max_constraint=feas,
                        certified=bool(comp <= eps and feas <= eps), eps=eps,
                        inner_fn_accuracy=delta_fn, grad_error_cap=delta_cap, dual_bound=A,
                        domain=domain, stop_reason=outer.stop_reason,
                        inner_solves=oracle.inner_solves + 2, pgd_steps=oracle.pgd_steps,
                        outer=outer)


def dual_objective_oracle(problem: DualProblem, eps: float,
                          dual_bound: Optional[float] = None):
    """(-phi) as a plain 2D oracle plus its square and triangle domains.

    Used to point the generic 2D solvers at a dual function without the
    certificate machinery.
    """
    delta0 = min(eps, 1e-3)
    x0, _ = inner_solve(problem, (0.0, 0.0), delta0)
    A = dual_bound if dual_bound is not None else problem.spec.dual_bound
    if A is None:
        A = derive_dual_bound(problem, problem.f.value(x0) - delta0)
    L, M, delta_arg, delta_fn, delta_cap = _dual_budgets(problem, A, eps, None)
    oracle = _DualObjective(problem, delta_fn, None, L, M, delta_cap)
    box = AxisBox.from_bounds(0.0, A, 0.0, A)
    tri = RightTriangle(Point2(0.0, 0.0), A, (1, 1))
    return oracle, box, tri, {"dual_bound": A, "inner_delta": delta_arg,
                              "inner_fn_accuracy": delta_fn, "grad_error_cap": delta_cap}


def primal_objective_oracle(problem: DualProblem):
    """The objective f alone as a 2D oracle over the problem box.

    Lets the localization solvers run directly on a problem file's
    objective, ignoring its constraints. Only 2D problems map onto the
    geometric domains.
    """
    from .oracle import Oracle

    if problem.dim != 2:
        raise ValueError("the geometric solvers need a 2D problem")
    box = AxisBox.from_bounds(float(problem.lower[0]), float(problem.upper[0]),
                              float(problem.lower[1]), float(problem.upper[1]))
    center = np.array(box.center.as_tuple())
    L = float(np.linalg.norm(problem.f.grad(center))) + problem.f.hess_bound * box.circumradius

    def value(p: Point2) -> float:
        return problem.f.value(np.array([p.x1, p.x2]))

    def grad(p: Point2) -> tuple:
        g = problem.f.grad(np.array([p.x1, p.x2]))
        return (float(g[0]), float(g[1]))

    return Oracle(value, grad, lipschitz_L=L, grad_lipschitz_M=problem.f.hess_bound), box
