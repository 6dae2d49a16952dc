import math

import pytest

from halving_opt.baselines import _VOL_DECAY, ellipsoid_solve, gradient_descent_solve
from halving_opt.geometry import AxisBox, Point2
from halving_opt.oracle import Oracle, corpus

SMOOTH = ("quartic", "exp-sum")


def test_ellipsoid_reaches_gap_on_whole_corpus():
    for name, entry in corpus().items():
        sol = ellipsoid_solve(entry.oracle, entry.square, 1e-3, known_min=entry.min_value)
        assert sol.stop_reason == "gap_reached", name
        assert sol.value - entry.min_value <= 1e-3, name
        assert entry.square.contains(Point2(*sol.point))


def test_ellipsoid_objective_cuts_pull_one_value_and_one_gradient():
    entry = corpus()["tilted-linear"]
    sol = ellipsoid_solve(entry.oracle, entry.square, 1e-4, known_min=entry.min_value)
    assert sol.counters.value_calls == sol.iterations == sol.extras["objective_cuts"]
    assert sol.counters.full_grad_calls == sol.iterations
    assert sol.counters.direction_calls == 0
    # centers chasing the corner leave the square, and those cuts are free
    assert sol.extras["feasibility_cuts"] > 0


def test_ellipsoid_volume_decays_by_constant_factor():
    entry = corpus()["exp-sum"]
    sol = ellipsoid_solve(entry.oracle, entry.square, 1e-6, known_min=entry.min_value,
                          collect_trace=True)
    vols = sol.extras["volumes"]
    assert sol.extras["resets"] == 0
    assert len(vols) >= 10
    for prev, cur in zip(vols, vols[1:]):
        assert cur / prev == pytest.approx(_VOL_DECAY, rel=1e-9)
    assert _VOL_DECAY < math.exp(-0.25)


def test_ellipsoid_zero_gradient_stop():
    sq = AxisBox.from_bounds(-1, 1, -1, 1)
    o = Oracle(lambda p: p.x1 ** 2 + p.x2 ** 2, lambda p: (2 * p.x1, 2 * p.x2),
               lipschitz_L=2 * math.sqrt(2), grad_lipschitz_M=2.0)
    sol = ellipsoid_solve(o, sq, 1e-6)
    assert sol.stop_reason == "zero_gradient"
    assert sol.iterations == 1
    assert sol.point == (0.0, 0.0)


def test_ellipsoid_default_budget():
    entry = corpus()["quartic"]
    r0 = entry.square.circumradius
    expect = max(16, math.ceil(12.0 * math.log(r0 * entry.oracle.lipschitz_L / 1e-3)))
    sol = ellipsoid_solve(entry.oracle, entry.square, 1e-3)
    assert sol.iterations + sol.extras["feasibility_cuts"] <= expect


def test_ellipsoid_rejects_bad_eps():
    entry = corpus()["quartic"]
    with pytest.raises(ValueError):
        ellipsoid_solve(entry.oracle, entry.square, -1.0)


def test_gd_reaches_gap_on_smooth_entries():
    for name in SMOOTH:
        entry = corpus()[name]
        sol = gradient_descent_solve(entry.oracle, entry.square, 1e-3,
                                     known_min=entry.min_value)
        assert sol.stop_reason == "gap_reached", name
        assert sol.value - entry.min_value <= 1e-3, name
        assert sol.counters.value_calls == sol.counters.full_grad_calls == sol.iterations


def test_gd_requires_positive_curvature_constant():
    for name in ("maxaffine", "absdiff", "tilted-linear"):
        entry = corpus()[name]
        with pytest.raises(ValueError):
            gradient_descent_solve(entry.oracle, entry.square, 1e-3)


def test_gd_stationary_stop_at_center():
    sq = AxisBox.from_bounds(-1, 1, -1, 1)
    o = Oracle(lambda p: p.x1 ** 2 + p.x2 ** 2, lambda p: (2 * p.x1, 2 * p.x2),
               lipschitz_L=2 * math.sqrt(2), grad_lipschitz_M=2.0)
    sol = gradient_descent_solve(o, sq, 1e-9)
    assert sol.stop_reason == "stationary_point"
    assert sol.iterations == 1
    assert sol.value == 0.0


def test_gd_iterates_stay_inside_square():
    # steep slope pushing out of the box exercises the projection
    sq = AxisBox.from_bounds(0, 1, 0, 1)
    o = Oracle(lambda p: 50 * p.x1 + p.x2 ** 2, lambda p: (50.0, 2 * p.x2),
               lipschitz_L=math.hypot(50, 2), grad_lipschitz_M=2.0)
    sol = gradient_descent_solve(o, sq, 1e-6, known_min=0.0, max_iterations=40)
    assert 0.0 <= sol.point[0] <= 1.0 and 0.0 <= sol.point[1] <= 1.0
    assert sol.stop_reason in ("gap_reached", "stationary_point")


def test_gd_rejects_bad_eps():
    entry = corpus()["quartic"]
    with pytest.raises(ValueError):
        gradient_descent_solve(entry.oracle, entry.square, 0.0)
