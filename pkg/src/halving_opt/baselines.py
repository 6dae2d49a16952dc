"""Reference solvers that pay for full gradient vectors every iteration.

Both exist for cost comparisons against the halving method, which only ever
asks for values and gradient directions. The ellipsoid method runs central
subgradient cuts starting from the disk circumscribing the square; the
projected gradient method takes 1/M steps clipped back to the square.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .geometry import AxisBox, Point2
from .halving import Solution
from .oracle import RunOracle

_VOL_DECAY = 4.0 / (3.0 * math.sqrt(3.0))  # per-cut area factor in 2D, < e^{-1/4}


def _feasibility_normal(box: AxisBox, c: np.ndarray) -> np.ndarray:
    """Outward unit normal of the most violated box constraint at c."""
    lo1, hi1, lo2, hi2 = box.bounds
    gaps = np.array([lo1 - c[0], c[0] - hi1, lo2 - c[1], c[1] - hi2])
    worst = int(np.argmax(gaps))
    return np.array([[-1.0, 0.0], [1.0, 0.0], [0.0, -1.0], [0.0, 1.0]][worst])


def ellipsoid_solve(oracle, square: AxisBox, eps: float, *, known_min: Optional[float] = None,
                    max_cuts: Optional[int] = None, collect_trace: bool = False) -> Solution:
    """Central-cut ellipsoid method over a square.

    Iterations where the center leaves the square use a feasibility cut and
    cost no oracle calls; `iterations` in the result counts the objective
    cuts, each of which pulls one value and one full gradient. The reported
    point is the best feasible center seen.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    run = RunOracle(oracle)
    center0 = np.array(square.center.as_tuple())
    r0 = square.circumradius
    c = center0.copy()
    P = np.eye(2) * r0 ** 2
    if max_cuts is None:
        # Standard 2D volume-shrink budget, 2*d*(d+1)*ln(r0*L/eps).
        max_cuts = max(16, math.ceil(12.0 * math.log(max(r0 * oracle.lipschitz_L / eps, 2.0))))

    best_point: Optional[np.ndarray] = None
    best_value = math.inf
    obj_cuts = 0
    feas_cuts = 0
    resets = 0
    volumes = [math.pi * math.sqrt(float(np.linalg.det(P)))] if collect_trace else None
    reason = "iteration_budget"

    for _ in range(max_cuts):
        p = Point2(c[0], c[1])
        if square.contains(p, tol=1e-12):
            val = run.value(p)
            g = np.array(run.full_grad(p))
            obj_cuts += 1
            if val < best_value:
                best_value, best_point = val, c.copy()
            if known_min is not None and best_value - known_min <= eps:
                reason = "gap_reached"
                break
            if math.hypot(g[0], g[1]) <= 1e-12:
                reason = "zero_gradient"
                break
            a = g
        else:
            a = _feasibility_normal(square, c)
            feas_cuts += 1
        Pa = P @ a
        s = float(a @ Pa)
        bad = not math.isfinite(s) or s <= 0
        if not bad:
            c = c - Pa / (3.0 * math.sqrt(s))
            P = (4.0 / 3.0) * (P - (2.0 / 3.0) * np.outer(Pa, Pa) / s)
            bad = (not np.all(np.isfinite(P)) or P[0, 0] <= 0 or P[1, 1] <= 0
                   or float(np.linalg.det(P)) <= 0)
        if bad:
            # Silent loss of positive definiteness; restart from the initial disk.
            c = center0.copy()
            P = np.eye(2) * r0 ** 2
            resets += 1
            if resets > 3:
                reason = "numerical_failure"
                break
        if volumes is not None:
            volumes.append(math.pi * math.sqrt(float(np.linalg.det(P))))

    if best_point is None:
        best_point = center0
        best_value = run.value(Point2(*center0))
    extras = {"objective_cuts": obj_cuts, "feasibility_cuts": feas_cuts, "resets": resets,
              "final_center": [float(c[0]), float(c[1])],
              "final_shape": [[float(P[0, 0]), float(P[0, 1])],
                              [float(P[1, 0]), float(P[1, 1])]]}
    if volumes is not None:
        extras["volumes"] = volumes
    return Solution(point=(float(best_point[0]), float(best_point[1])), value=best_value,
                    iterations=obj_cuts, stop_reason=reason, counters=run.counters,
                    region=None, budget=None, trace=None, method="ellipsoid", extras=extras)


def gradient_descent_solve(oracle, square: AxisBox, eps: float, *,
                           known_min: Optional[float] = None,
                           max_iterations: Optional[int] = None) -> Solution:
    """Projected gradient descent with step 1/M from the square center."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    M = oracle.grad_lipschitz_M
    if M is None or M <= 0:
        raise ValueError("gradient descent needs a positive gradient-Lipschitz constant")
    if max_iterations is None:
        # Smooth convex O(1/k) bound with the diameter as distance estimate.
        R = square.width
        max_iterations = min(500_000, math.ceil(M * (2 * R * math.sqrt(2)) ** 2 / (2 * eps)))
    run = RunOracle(oracle)
    x = square.center
    step = 1.0 / M
    best_point, best_value = x, math.inf
    reason = "iteration_budget"
    iters = 0
    for _ in range(max_iterations):
        val = run.value(x)
        g = run.full_grad(x)
        iters += 1
        if val < best_value:
            best_value, best_point = val, x
        if known_min is not None and best_value - known_min <= eps:
            reason = "gap_reached"
            break
        nxt = square.clamp(Point2(x.x1 - step * g[0], x.x2 - step * g[1]))
        if nxt == x:
            reason = "stationary_point"
            break
        x = nxt
    return Solution(point=best_point.as_tuple(), value=best_value, iterations=iters,
                    stop_reason=reason, counters=run.counters, region=None, budget=None,
                    trace=None, method="gd", extras={"step": step})
