import math

import numpy as np
import pytest

from biait.sampling import (
    SamplerConfig, SpaceSaturatedError, VariationalSchedule, batch_schedule,
    in_informed_set, make_rng, sample_batch, sample_informed, sample_near_path,
    sample_uniform,
)
from biait.space import Bounds, ProblemDef, Obstacle, heuristic_bounds, state_valid


def polyline_distance(path, x):
    best = math.inf
    for a, b in zip(path, path[1:]):
        a, b, x0 = np.asarray(a, float), np.asarray(b, float), np.asarray(x, float)
        ab = b - a
        t = 0.0 if not ab.any() else np.clip(np.dot(x0 - a, ab) / np.dot(ab, ab), 0, 1)
        best = min(best, float(np.linalg.norm(x0 - (a + t * ab))))
    return best


def test_uniform_validity_and_determinism(wallgap):
    r1, r2 = make_rng(1), make_rng(1)
    xs1 = [sample_uniform(wallgap, r1) for _ in range(50)]
    xs2 = [sample_uniform(wallgap, r2) for _ in range(50)]
    assert all(state_valid(wallgap, x) for x in xs1)
    assert np.allclose(np.array(xs1), np.array(xs2))


def test_uniform_saturated_error():
    p = ProblemDef.__new__(ProblemDef)  # bypass start/goal validation
    p.dim = 2
    p.bounds = Bounds([0, 0], [1, 1])
    p.resolution = 0.001
    import numpy as _np
    p._box_lo = _np.array([[-1.0, -1.0]])
    p._box_hi = _np.array([[2.0, 2.0]])
    p._sph_c = _np.empty((0, 2))
    p._sph_r = _np.empty((0,))
    with pytest.raises(SpaceSaturatedError):
        sample_uniform(p, make_rng(0))


def test_uniform_left_half_fraction(wallgap):
    # wall is symmetric about x=5, so free area splits exactly in half;
    # binomial 4 sigma for n=10^4 is ~0.02
    rng = make_rng(123)
    n = 10_000
    left = sum(sample_uniform(wallgap, rng)[0] < 5.0 for _ in range(n))
    assert 0.46 <= left / n <= 0.54


def test_informed_geometry_bound():
    p = ProblemDef(dim=2, bounds=Bounds([-5, -5], [10, 10]), start=[0, 0],
                   goals=[[4, 0]], obstacles=[])
    rng = make_rng(2)
    for _ in range(10_000):
        x = sample_informed(p, 5.0, rng)
        gf, gr = heuristic_bounds(p, x)
        assert gf + gr <= 5.0 + 1e-9


def test_informed_delegates_to_uniform_at_inf(wallgap):
    xs1 = [sample_informed(wallgap, math.inf, make_rng(9)) for _ in range(1)]
    xs2 = [sample_uniform(wallgap, make_rng(9)) for _ in range(1)]
    assert np.allclose(xs1, xs2)


def test_informed_degenerate_slab():
    p = ProblemDef(dim=2, bounds=Bounds([-5, -5], [10, 10]), start=[0, 0],
                   goals=[[4, 0]], obstacles=[])
    rng = make_rng(3)
    b = math.sqrt(4.0001**2 - 16.0) / 2.0
    for _ in range(2000):
        x = sample_informed(p, 4.0001, rng)
        assert abs(x[1]) <= b + 1e-12
        assert abs(x[1]) <= 0.02


def test_informed_tightness():
    # empirical max of the sum approaches c_cur within 1%
    p = ProblemDef(dim=2, bounds=Bounds([-5, -5], [10, 10]), start=[0, 0],
                   goals=[[4, 0]], obstacles=[])
    rng = make_rng(4)
    best = 0.0
    for _ in range(100_000):
        x = sample_informed(p, 5.0, rng)
        gf, gr = heuristic_bounds(p, x)
        best = max(best, gf + gr)
    assert best >= 5.0 * 0.99


def test_informed_multi_goal_rejection():
    p = ProblemDef(dim=2, bounds=Bounds([0, 0], [10, 10]), start=[1, 1],
                   goals=[[9, 1], [1, 9]], obstacles=[])
    rng = make_rng(5)
    for _ in range(2000):
        x = sample_informed(p, 9.0, rng)
        gf, gr = heuristic_bounds(p, x)
        assert gf + gr <= 9.0 + 1e-9


def test_near_path_tail_fraction(wallgap):
    path = [np.array([1.0, 5.0]), np.array([5.0, 8.0]), np.array([9.0, 5.0])]
    rng = make_rng(6)
    n = 10_000
    hits = 0
    for _ in range(n):
        x = sample_near_path(wallgap, path, 10.0, rng, near_sigma_frac=0.05)
        assert in_informed_set(wallgap, x, 10.0)
        assert state_valid(wallgap, x)
        if polyline_distance(path, x) <= 0.5:  # 2 sigma
            hits += 1
    assert 0.93 <= hits / n <= 0.97


def test_near_path_degenerate_sigma(wallgap):
    path = [np.array([1.0, 5.0]), np.array([5.0, 8.0]), np.array([9.0, 5.0])]
    rng = make_rng(7)
    for _ in range(500):
        x = sample_near_path(wallgap, path, 10.0, rng, near_sigma_frac=1e-9)
        assert polyline_distance(path, x) <= 1e-6


def test_near_path_single_point(wallgap):
    rng = make_rng(8)
    xs = [sample_near_path(wallgap, [wallgap.start], 10.0, rng, 0.05)
          for _ in range(200)]
    d = np.linalg.norm(np.array(xs) - wallgap.start, axis=1)
    assert np.all(d <= 4 * 0.05 * 5.0)  # 4 sigma of the perturbation


def test_batch_schedule_values():
    cfg = SamplerConfig(batch_size=300, variational=VariationalSchedule(10, 1.5))
    assert batch_schedule(cfg, 0) == 10
    assert batch_schedule(cfg, 1) == 25
    assert batch_schedule(cfg, 2) == 63   # 62.5 rounds half-up
    assert batch_schedule(cfg, 3) == 156  # 156.25 rounds down

    const = SamplerConfig(batch_size=300)
    assert all(batch_schedule(const, n) == 300 for n in range(5))

    capped = SamplerConfig(batch_size=1, variational=VariationalSchedule(10, 1.5, cap=50))
    assert batch_schedule(capped, 5) == 50


def test_sample_batch_uniform_composition(wallgap):
    cfg = SamplerConfig(batch_size=100, p_near=0.0, seed=1)
    out = sample_batch(wallgap, cfg, 0, math.inf, None, make_rng(1))
    assert len(out) == 100
    assert all(state_valid(wallgap, x) for x in out)


def test_sample_batch_near_fraction(wallgap):
    cfg = SamplerConfig(batch_size=10_000, p_near=0.5, near_sigma_frac=0.05, seed=2)
    path = [np.array([1.0, 5.0]), np.array([5.0, 8.0]), np.array([9.0, 5.0])]
    stats = {}
    out = sample_batch(wallgap, cfg, 0, 10.5, path, make_rng(2), stats)
    assert len(out) == 10_000
    assert 0.47 <= stats["near"] / 10_000 <= 0.53


def test_sample_batch_variational_sizes(wallgap):
    cfg = SamplerConfig(batch_size=1, variational=VariationalSchedule(10, 1.5), seed=3)
    rng = make_rng(3)
    sizes = [len(sample_batch(wallgap, cfg, n, math.inf, None, rng)) for n in range(4)]
    assert sizes == [10, 25, 63, 156]


def test_identical_seeds_identical_batches(wallgap):
    cfg = SamplerConfig(batch_size=64, p_near=0.3, seed=11)
    path = [np.array([1.0, 5.0]), np.array([9.0, 5.0])]
    a = sample_batch(wallgap, cfg, 0, 12.0, path, make_rng(11))
    b = sample_batch(wallgap, cfg, 0, 12.0, path, make_rng(11))
    assert np.allclose(np.array(a), np.array(b))


def test_sampler_config_validation():
    with pytest.raises(ValueError):
        SamplerConfig(batch_size=0)
    with pytest.raises(ValueError):
        SamplerConfig(p_near=1.0)
    with pytest.raises(ValueError):
        VariationalSchedule(0, 1.5)
