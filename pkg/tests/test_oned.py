import math
import random

import pytest

from halving_opt.geometry import Point2, Segment
from halving_opt.oned import (SHRINK, LineProblem, bracket_shrink_step, golden_section,
                              initial_bracket)
from referee import line_grid_argmin

UNIT = Segment(Point2(0, 0), Point2(1, 0))


def test_shrink_factor_value():
    assert math.isclose(SHRINK, (math.sqrt(5) - 1) / 2, rel_tol=0, abs_tol=1e-15)


def test_bracket_step_shrinks_by_golden_ratio():
    br = initial_bracket(lambda t: (t - 0.3) ** 2)
    for _ in range(20):
        nxt = bracket_shrink_step(br, lambda t: (t - 0.3) ** 2)
        assert math.isclose(nxt.b - nxt.a, SHRINK * (br.b - br.a), rel_tol=1e-12)
        br = nxt


def test_bracket_step_costs_one_evaluation():
    calls = [0]

    def f(t):
        calls[0] += 1
        return (t - 0.7) ** 2

    br = initial_bracket(f)
    assert calls[0] == 2
    for k in range(10):
        br = bracket_shrink_step(br, f)
        assert calls[0] == 2 + (k + 1)


def test_golden_section_accuracy_simple():
    for t_star in (0.0, 0.17, 0.5, 0.83, 1.0):
        prob = LineProblem(UNIT, lambda t, t0=t_star: (t - t0) ** 2)
        for delta in (1e-2, 1e-4, 1e-7):
            p = golden_section(prob, delta)
            assert abs(p.x1 - t_star) <= delta + 1e-12


def test_golden_section_on_vertical_segment():
    seg = Segment(Point2(2, -1), Point2(2, 3))
    prob = LineProblem(seg, lambda t: abs(t - 0.25))
    p = golden_section(prob, 1e-6)
    assert p.x1 == 2.0
    assert abs(p.x2 - 0.0) <= 4 * 1e-6  # t=0.25 maps to x2 = -1 + 0.25*4


def test_midpoint_shortcut_spends_no_evaluations():
    calls = [0]

    def f(t):
        calls[0] += 1
        return t

    prob = LineProblem(UNIT, f)
    assert golden_section(prob, math.inf) == UNIT.midpoint
    assert golden_section(prob, 0.5) == UNIT.midpoint
    assert calls[0] == 0


def test_evaluation_count_is_logarithmic():
    calls = [0]

    def f(t):
        calls[0] += 1
        return (t - 0.4) ** 2

    golden_section(LineProblem(UNIT, f), 1e-8)
    # 2 initial probes plus one per shrink; bracket needs log(2e-8)/log(SHRINK)
    expected = 2 + math.ceil(math.log(2e-8) / math.log(SHRINK))
    assert calls[0] <= expected + 1


def test_rejects_bad_delta_and_nonfinite_values():
    prob = LineProblem(UNIT, lambda t: t)
    with pytest.raises(ValueError):
        golden_section(prob, 0.0)
    with pytest.raises(ValueError):
        golden_section(LineProblem(UNIT, lambda t: math.nan), 1e-3)


def test_random_convex_restrictions_against_grid():
    # quadratics a*(t-t0)^2 + b*t with random tilt, argmin checked against a
    # dense grid referee
    rng = random.Random(20240814)
    delta = 1e-5
    for _ in range(100):
        a = rng.uniform(0.5, 50.0)
        t0 = rng.uniform(-0.3, 1.3)
        b = rng.uniform(-1.0, 1.0)

        def f(t):
            return a * (t - t0) ** 2 + b * t

        t_ref, step = line_grid_argmin(f, n=10_001)
        p = golden_section(LineProblem(UNIT, f), delta)
        assert abs(p.x1 - t_ref) <= delta + step
