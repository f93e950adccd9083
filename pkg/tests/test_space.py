import math

import numpy as np
import pytest

from biait.space import (
    Bounds, Obstacle, ProblemDef, euclid_cost, heuristic_bounds, motion_valid,
    path_cost, state_valid,
)

from conftest import dense_motion_oracle, segment_clearance


def test_state_valid_examples(wallgap):
    assert state_valid(wallgap, [1.0, 5.0]) is True
    assert state_valid(wallgap, [5.0, 4.0]) is False  # inside the wall
    assert state_valid(wallgap, [5.0, 9.0]) is True   # above the wall top


def test_state_valid_closed_boundary(wallgap):
    # obstacles are closed: the boundary collides
    assert not state_valid(wallgap, [4.8, 5.0])
    assert not state_valid(wallgap, [5.0, 8.0])
    # bounds are inclusive
    assert state_valid(wallgap, [0.0, 0.0])


def test_state_valid_dimension_mismatch(wallgap):
    with pytest.raises(ValueError):
        state_valid(wallgap, [1.0, 2.0, 3.0])


def test_motion_valid_examples(wallgap):
    assert motion_valid(wallgap, [1.0, 5.0], [9.0, 5.0]) is False  # crosses wall
    assert motion_valid(wallgap, [1.0, 5.0], [5.0, 9.0]) is True   # passes above
    assert motion_valid(wallgap, [1.0, 5.0], [1.0, 5.0]) is True   # zero length


def test_motion_valid_against_dense_oracle(wallgap):
    assert dense_motion_oracle(wallgap, [1.0, 5.0], [5.0, 9.0])
    assert not dense_motion_oracle(wallgap, [1.0, 5.0], [9.0, 5.0])


def test_motion_valid_agrees_with_dense_oracle_random(wallgap, empty2d):
    rng = np.random.default_rng(42)
    for p in (wallgap, empty2d):
        checked = excluded = 0
        for _ in range(1000):
            a = rng.uniform([0, 0], [10, 10])
            b = rng.uniform([0, 0], [10, 10])
            if not (state_valid(p, a) and state_valid(p, b)):
                continue
            coarse = motion_valid(p, a, b)
            fine = dense_motion_oracle(p, a, b)
            if coarse == fine:
                checked += 1
                continue
            # disagreements are only tolerated for resolution-limited cases
            clearance = segment_clearance(p, a, b)
            limit = p.resolution * euclid_cost(a, b)
            assert clearance < limit, (
                f"motion_valid disagreed with the oracle on a well-separated "
                f"segment: clearance={clearance}, limit={limit}")
            excluded += 1
        assert checked > 800


def test_motion_implies_endpoint_validity(wallgap):
    rng = np.random.default_rng(7)
    for _ in range(200):
        a = rng.uniform([0, 0], [10, 10])
        b = rng.uniform([0, 0], [10, 10])
        if motion_valid(wallgap, a, b):
            assert state_valid(wallgap, a) and state_valid(wallgap, b)


def test_euclid_cost_examples():
    assert euclid_cost([1, 5], [5, 8]) == pytest.approx(5.0)
    assert euclid_cost([0, 0], [0, 0]) == 0.0
    assert euclid_cost([1, 5], [9, 5]) == pytest.approx(8.0)


def test_euclid_triangle_inequality_and_symmetry():
    rng = np.random.default_rng(11)
    for _ in range(500):
        a, b, c = rng.normal(size=(3, 4)) * 10
        ab, ba = euclid_cost(a, b), euclid_cost(b, a)
        assert ab == pytest.approx(ba, rel=1e-12)
        assert euclid_cost(a, c) <= ab + euclid_cost(b, c) + 1e-12


def test_heuristic_bounds_examples(wallgap):
    assert heuristic_bounds(wallgap, [5.0, 8.0]) == pytest.approx((5.0, 5.0))
    assert heuristic_bounds(wallgap, [1.0, 5.0]) == pytest.approx((0.0, 8.0))
    assert heuristic_bounds(wallgap, [9.0, 5.0]) == pytest.approx((8.0, 0.0))


def test_heuristic_bounds_multi_goal():
    p = ProblemDef(dim=2, bounds=Bounds([0, 0], [10, 10]), start=[1, 1],
                   goals=[[9, 1], [1, 9]], obstacles=[])
    assert heuristic_bounds(p, [1.0, 8.0])[1] == pytest.approx(1.0)


def test_path_cost_examples():
    assert path_cost([[1, 5], [5, 8], [9, 5]]) == pytest.approx(10.0)
    assert path_cost([[0, 0]]) == 0.0
    assert path_cost([[0, 0], [3, 4]]) == pytest.approx(5.0)
    with pytest.raises(ValueError):
        path_cost([])


def test_problem_validation():
    with pytest.raises(ValueError):
        Bounds([0, 0], [0, 10])  # lo not strictly below hi
    with pytest.raises(ValueError):
        Obstacle.sphere([0, 0], -1.0)
    with pytest.raises(ValueError):
        ProblemDef(dim=2, bounds=Bounds([0, 0], [10, 10]), start=[5.0, 4.0],
                   goals=[[9, 5]], obstacles=[Obstacle.box([4.8, 0], [5.2, 8])])
    with pytest.raises(ValueError):
        ProblemDef(dim=2, bounds=Bounds([0, 0], [10, 10]), start=[1, 5],
                   goals=[[9, 5]], resolution=0.0)


def test_sphere_obstacle():
    p = ProblemDef(dim=3, bounds=Bounds([0, 0, 0], [10, 10, 10]),
                   start=[1, 1, 1], goals=[[9, 9, 9]],
                   obstacles=[Obstacle.sphere([5, 5, 5], 2.0)])
    assert not state_valid(p, [5.0, 5.0, 5.0])
    assert not state_valid(p, [5.0, 5.0, 7.0])  # on the closed boundary
    assert state_valid(p, [5.0, 5.0, 7.001])
    assert not motion_valid(p, [1, 1, 1], [9, 9, 9])
    assert motion_valid(p, [1, 1, 1], [1, 9, 1])


def test_lower_bound_dominates_planner_paths(wallgap):
    # any collision-free path from x to the goal costs at least ghat_to_goal
    from biait import Planner, PlannerConfig, SamplerConfig, Termination

    cfg = PlannerConfig(sampler=SamplerConfig(batch_size=50, seed=5),
                        termination=Termination(time_budget_ms=3000,
                                                target_cost=float("inf")))
    pl = Planner(wallgap, cfg)
    rep = pl.solve()
    assert rep["status"] == "solved"
    path = rep["solutions"][-1].path
    for i, x in enumerate(path):
        tail = path_cost(path[i:])
        assert tail >= heuristic_bounds(wallgap, x)[1] - 1e-9
