"""First-order oracles, direction queries, and the reference function set.

A solver run talks to an oracle through three kinds of queries, counted
separately: function values (for line searches), direction queries (which
side of a cut the gradient points to), and full gradient vectors (used only
by the baselines). The halving solvers are the whole point of the counter
split: they never request a full gradient.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence

from .geometry import AxisBox, HORIZONTAL, Point2, Segment


class Side(Enum):
    """Where a (sub)gradient points relative to a cut segment."""

    FIRST = "first_side"    # lower half-plane for horizontal cuts, left for vertical
    SECOND = "second_side"  # upper / right
    ALONG = "along_segment"
    ZERO = "zero"


@dataclass
class CallCounters:
    value_calls: int = 0
    direction_calls: int = 0
    full_grad_calls: int = 0

    def as_dict(self) -> dict:
        return {"value_calls": self.value_calls,
                "direction_calls": self.direction_calls,
                "full_grad_calls": self.full_grad_calls}


@dataclass(frozen=True)
class Oracle:
    """Exact first-order oracle for a 2D convex function.

    lipschitz_L bounds |f(x)-f(y)| / |x-y| on the working region.
    grad_lipschitz_M bounds the gradient's Lipschitz constant there; 0 means
    the gradient is constant along any segment, None means no such constant
    exists (nonsmooth functions, where grad returns a chosen subgradient).
    per_axis_M optionally refines M for 1D solves along x1 / along x2.
    """

    value: Callable[[Point2], float]
    grad: Callable[[Point2], tuple[float, float]]
    lipschitz_L: float
    grad_lipschitz_M: Optional[float] = None
    per_axis_M: Optional[tuple[float, float]] = None

    def direction_vector(self, p: Point2, seg: Optional[Segment] = None) -> tuple[float, float]:
        return self.grad(p)


@dataclass(frozen=True)
class PerturbedOracle:
    """Oracle whose gradient reports carry an error of norm <= delta_cap.

    mode "random" adds a seeded pseudo-random vector that depends only on
    (seed, query point), so runs are reproducible. mode "adversarial" pushes
    the component perpendicular to the current cut segment toward the wrong
    half-plane by the full delta_cap, the worst case the accuracy analysis
    allows. Values are reported exactly; only gradients are corrupted.
    """

    inner: Oracle
    delta_cap: float
    mode: str = "random"
    seed: int = 0

    def __post_init__(self):
        if self.delta_cap < 0:
            raise ValueError("delta_cap must be nonnegative")
        if self.mode not in ("random", "adversarial"):
            raise ValueError(f"unknown perturbation mode {self.mode!r}")

    @property
    def lipschitz_L(self) -> float:
        return self.inner.lipschitz_L

    @property
    def grad_lipschitz_M(self) -> Optional[float]:
        return self.inner.grad_lipschitz_M

    @property
    def per_axis_M(self) -> Optional[tuple[float, float]]:
        return self.inner.per_axis_M

    def value(self, p: Point2) -> float:
        return self.inner.value(p)

    def _random_noise(self, p: Point2) -> tuple[float, float]:
        rng = random.Random(hash((self.seed, p.x1, p.x2)))
        angle = rng.uniform(0.0, 2 * math.pi)
        mag = self.delta_cap * rng.uniform(0.0, 1.0)
        return (mag * math.cos(angle), mag * math.sin(angle))

    def grad(self, p: Point2) -> tuple[float, float]:
        g1, g2 = self.inner.grad(p)
        n1, n2 = self._random_noise(p)
        return (g1 + n1, g2 + n2)

    def direction_vector(self, p: Point2, seg: Optional[Segment] = None) -> tuple[float, float]:
        g1, g2 = self.inner.grad(p)
        if self.mode == "random" or seg is None:
            n1, n2 = self._random_noise(p)
            return (g1 + n1, g2 + n2)
        # Adversarial: spend the whole error budget on the perpendicular
        # component, signed toward flipping the side decision.
        if seg.axis == HORIZONTAL:
            push = self.delta_cap if g2 <= 0 else -self.delta_cap
            return (g1, g2 + push)
        push = self.delta_cap if g1 <= 0 else -self.delta_cap
        return (g1 + push, g2)


def classify_direction(v: tuple[float, float], seg: Segment, zero_tol: float = 1e-12) -> Side:
    """Classify a gradient vector relative to the line through seg."""
    g1, g2 = v
    if math.hypot(g1, g2) <= zero_tol:
        return Side.ZERO
    perp = g2 if seg.axis == HORIZONTAL else g1
    if abs(perp) <= zero_tol:
        return Side.ALONG
    return Side.FIRST if perp < 0 else Side.SECOND


def direction_side(oracle, p: Point2, seg: Segment, zero_tol: float = 1e-12,
                   counters: Optional[CallCounters] = None) -> Side:
    """One direction query: fetch the (possibly perturbed) gradient at p and
    classify it against seg. Increments direction_calls only."""
    v = oracle.direction_vector(p, seg)
    if counters is not None:
        counters.direction_calls += 1
    return classify_direction(v, seg, zero_tol)


class RunOracle:
    """Counting view of an oracle, one per solver run."""

    def __init__(self, oracle):
        self.oracle = oracle
        self.counters = CallCounters()

    def value(self, p: Point2) -> float:
        self.counters.value_calls += 1
        return self.oracle.value(p)

    def direction(self, p: Point2, seg: Segment, zero_tol: float) -> tuple[Side, float]:
        """Side classification plus the norm of the reported vector."""
        self.counters.direction_calls += 1
        v = self.oracle.direction_vector(p, seg)
        return classify_direction(v, seg, zero_tol), math.hypot(v[0], v[1])

    def full_grad(self, p: Point2) -> tuple[float, float]:
        self.counters.full_grad_calls += 1
        return self.oracle.grad(p)


def max_affine(pieces: Sequence[tuple[float, float, float]], lipschitz_L: Optional[float] = None,
               select: str = "first") -> Oracle:
    """Oracle for f(x) = max_i (a_i*x1 + b_i*x2 + c_i).

    The subgradient at a point where several pieces tie is the gradient of
    one maximizing piece; `select` picks which ("first" or "last" in
    declaration order). The choice is observable and part of the contract:
    the documented failure example relies on "first".
    """
    if select not in ("first", "last"):
        raise ValueError(f"unknown selection rule {select!r}")
    pieces = [tuple(map(float, p)) for p in pieces]
    if lipschitz_L is None:
        lipschitz_L = max(math.hypot(a, b) for a, b, _ in pieces)

    def value(p: Point2) -> float:
        return max(a * p.x1 + b * p.x2 + c for a, b, c in pieces)

    def grad(p: Point2) -> tuple[float, float]:
        vals = [a * p.x1 + b * p.x2 + c for a, b, c in pieces]
        m = max(vals)
        idx = [i for i, v in enumerate(vals) if v == m]
        a, b, _ = pieces[idx[0] if select == "first" else idx[-1]]
        return (a, b)

    return Oracle(value=value, grad=grad, lipschitz_L=lipschitz_L, grad_lipschitz_M=None)


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    oracle: Oracle
    square: AxisBox
    min_value: Optional[float]
    min_point: Optional[tuple[float, float]]
    inner_delta: Optional[float] = None  # documented 1D accuracy for nonsmooth entries
    summary: str = ""

    @property
    def smooth(self) -> bool:
        return self.oracle.grad_lipschitz_M is not None


def _quartic() -> CorpusEntry:
    def value(p: Point2) -> float:
        return (p.x1 - 1.0) ** 2 + p.x2 ** 4

    def grad(p: Point2) -> tuple[float, float]:
        return (2.0 * (p.x1 - 1.0), 4.0 * p.x2 ** 3)

    # sup |grad| on [-3,1]^2 is attained at (-3,-3); max Hessian eigenvalue
    # is 12*x2^2 <= 108.
    oracle = Oracle(value, grad, lipschitz_L=math.hypot(8.0, 108.0), grad_lipschitz_M=108.0,
                    per_axis_M=(2.0, 108.0))
    return CorpusEntry("quartic", oracle, AxisBox.from_bounds(-3, 1, -3, 1),
                       min_value=0.0, min_point=(1.0, 0.0),
                       summary="(x1-1)^2 + x2^4 on [-3,1]^2, smooth, minimum on the boundary")


def _maxaffine() -> CorpusEntry:
    oracle = max_affine([(2, 0, 6), (-1, 0, 0), (0, 1, 3), (0, -2, 0)])
    return CorpusEntry("maxaffine", oracle, AxisBox.from_bounds(-4, 0, -4, 0),
                       min_value=2.0, min_point=(-2.0, -1.0), inner_delta=1e-4,
                       summary="max{2x1+6, -x1, x2+3, -2x2} on [-4,0]^2, nonsmooth, "
                               "localization still succeeds")


def _tilted_linear() -> CorpusEntry:
    def value(p: Point2) -> float:
        return p.x1 - 0.001 * p.x2

    def grad(p: Point2) -> tuple[float, float]:
        return (1.0, -0.001)

    oracle = Oracle(value, grad, lipschitz_L=math.hypot(1.0, 0.001), grad_lipschitz_M=0.0,
                    per_axis_M=(0.0, 0.0))
    return CorpusEntry("tilted-linear", oracle, AxisBox.from_bounds(0, 1, 0, 1),
                       min_value=-0.001, min_point=(0.0, 1.0),
                       summary="x1 - 0.001*x2 on [0,1]^2; tiny perpendicular gradient "
                               "component, fragile under gradient error")


def _absdiff() -> CorpusEntry:
    # f(x) = |x1-x2| + 0.9*x1 = max(1.9*x1 - x2, -0.1*x1 + x2). The
    # subgradient picks the first branch on ties (x1 == x2), which makes the
    # documented first-cut divergence on [0,1]^2 reproducible.
    def value(p: Point2) -> float:
        return abs(p.x1 - p.x2) + 0.9 * p.x1

    def grad(p: Point2) -> tuple[float, float]:
        if p.x1 >= p.x2:
            return (1.9, -1.0)
        return (-0.1, 1.0)

    oracle = Oracle(value, grad, lipschitz_L=math.hypot(1.9, 1.0), grad_lipschitz_M=None)
    return CorpusEntry("absdiff", oracle, AxisBox.from_bounds(0, 1, 0, 1),
                       min_value=0.0, min_point=(0.0, 0.0), inner_delta=1e-4,
                       summary="|x1-x2| + 0.9*x1 on [0,1]^2; known argument-divergence "
                               "case for the halving method")


def _exp_sum() -> CorpusEntry:
    def value(p: Point2) -> float:
        return (p.x1 + 1.0) ** 2 + p.x2 ** 2 - p.x1 + math.exp(p.x1) + math.exp(p.x2 + 1.0)

    def grad(p: Point2) -> tuple[float, float]:
        return (2.0 * p.x1 + 1.0 + math.exp(p.x1), 2.0 * p.x2 + math.exp(p.x2 + 1.0))

    # Gradient components are increasing in each variable, so sup |grad| on
    # [-3,1]^2 sits at (1,1); Hessian is diag(2+e^x1, 2+e^(x2+1)).
    oracle = Oracle(value, grad,
                    lipschitz_L=math.hypot(3.0 + math.e, 2.0 + math.exp(2.0)),
                    grad_lipschitz_M=2.0 + math.exp(2.0),
                    per_axis_M=(2.0 + math.e, 2.0 + math.exp(2.0)))
    # Interior stationary point: 2*x1 + 1 + e^x1 = 0 and 2*x2 + e^(x2+1) = 0,
    # solved by bisection (the test suite re-derives these).
    x_star = (-0.7388350311316079, -0.6850769421545939)
    return CorpusEntry("exp-sum", oracle, AxisBox.from_bounds(-3, 1, -3, 1),
                       min_value=3.1241965353399284, min_point=x_star,
                       summary="(x1+1)^2 + x2^2 - x1 + e^x1 + e^(x2+1) on [-3,1]^2, "
                               "smooth with interior minimum")


def corpus() -> dict[str, CorpusEntry]:
    """Reference functions with documented constants on their squares."""
    entries = [_quartic(), _maxaffine(), _tilted_linear(), _absdiff(), _exp_sum()]
    return {e.name: e for e in entries}


def finite_difference_check(oracle: Oracle, points: Sequence[Point2], h: float = 1e-6) -> float:
    """Max norm gap between central differences and the reported gradient."""
    worst = 0.0
    for p in points:
        fd1 = (oracle.value(Point2(p.x1 + h, p.x2)) - oracle.value(Point2(p.x1 - h, p.x2))) / (2 * h)
        fd2 = (oracle.value(Point2(p.x1, p.x2 + h)) - oracle.value(Point2(p.x1, p.x2 - h))) / (2 * h)
        g1, g2 = oracle.grad(p)
        worst = max(worst, math.hypot(fd1 - g1, fd2 - g2))
    return worst
