"""Golden-section line search on a cut segment.

The localization solvers need the 1D minimizer of a convex restriction to
a prescribed argument accuracy delta. The search only compares function
values; it never looks at gradients. It stops as soon as the bracket is no
longer than 2*delta and returns the bracket midpoint, which is then within
delta of the true 1D minimizer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .geometry import Point2, Segment

# Bracket shrink factor per probe, (sqrt(5)-1)/2.
SHRINK = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class LineProblem:
    """Restriction of a 2D function to a segment, parameterized by t in [0, 1]."""

    seg: Segment
    eval_fn: Callable[[float], float]


@dataclass(frozen=True)
class Bracket:
    a: float
    b: float
    c: float
    d: float
    fc: float
    fd: float


def initial_bracket(eval_fn: Callable[[float], float], a: float = 0.0, b: float = 1.0) -> Bracket:
    c = b - SHRINK * (b - a)
    d = a + SHRINK * (b - a)
    return Bracket(a, b, c, d, eval_fn(c), eval_fn(d))


def bracket_shrink_step(br: Bracket, eval_fn: Callable[[float], float]) -> Bracket:
    """One golden-section step: costs exactly one new evaluation and
    shrinks the bracket by the factor SHRINK."""
    if br.fc < br.fd:
        a, b = br.a, br.d
        d, fd = br.c, br.fc
        c = b - SHRINK * (b - a)
        fc = eval_fn(c)
    else:
        a, b = br.c, br.b
        c, fc = br.d, br.fd
        d = a + SHRINK * (b - a)
        fd = eval_fn(d)
    return Bracket(a, b, c, d, fc, fd)


def golden_section(prob: LineProblem, delta_arg: float) -> Point2:
    """Minimize the restriction to within delta_arg of the 1D minimizer.

    When delta_arg is infinite or at least half the segment length the
    midpoint already qualifies and no evaluations are spent.
    """
    if delta_arg <= 0:
        raise ValueError("delta_arg must be positive")
    length = prob.seg.length
    if not math.isfinite(delta_arg) or 2 * delta_arg >= length:
        return prob.seg.midpoint

    def checked(t: float) -> float:
        v = prob.eval_fn(t)
        if not math.isfinite(v):
            raise ValueError(f"non-finite value {v!r} at t={t!r} in line search")
        return v

    tol = 2 * delta_arg / length
    br = initial_bracket(checked)
    while (br.b - br.a) > tol:
        br = bracket_shrink_step(br, checked)
    return prob.seg.point_at(0.5 * (br.a + br.b))
