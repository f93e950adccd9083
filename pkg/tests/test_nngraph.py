import numpy as np
import pytest

from biait.nngraph import NeighborIndex, rgg_k


def brute_force_knn(pts: dict, vid: int, k: int):
    """(distance, id)-sorted k nearest, the correctness oracle."""
    ref = pts[vid]
    others = sorted(
        (float(np.linalg.norm(pts[u] - ref)), u) for u in pts if u != vid)
    return tuple(u for _, u in others[:k])


def test_rgg_k_examples():
    assert rgg_k(100, 2, 1.001) == 19
    assert rgg_k(2, 2, 1.001) == 3
    assert rgg_k(1000, 7, 1.001) == 22


def test_rgg_k_floor_and_monotone():
    assert rgg_k(2, 9, 1.001) == 10  # floored at d + 1
    ks = [rgg_k(n, 3, 1.001) for n in range(2, 2000, 50)]
    assert all(b >= a for a, b in zip(ks, ks[1:]))
    with pytest.raises(ValueError):
        rgg_k(1, 2)


def test_insert_query_cardinality():
    rng = np.random.default_rng(0)
    idx = NeighborIndex(dim=2)
    pts = {i: rng.uniform(0, 10, 2) for i in range(100)}
    idx.insert_batch(sorted(pts.items()))
    k = rgg_k(100, 2, 1.001)
    for vid in (0, 17, 99):
        assert len(idx.neighbors(vid)) == k


def test_duplicate_id_rejected():
    idx = NeighborIndex(dim=2)
    idx.insert_batch([(0, np.zeros(2))])
    with pytest.raises(ValueError):
        idx.insert_batch([(0, np.ones(2))])


def test_removed_id_queries_error():
    rng = np.random.default_rng(1)
    idx = NeighborIndex(dim=2)
    idx.insert_batch([(i, rng.uniform(0, 1, 2)) for i in range(10)])
    idx.remove([3])
    with pytest.raises(KeyError):
        idx.neighbors(3)
    assert 3 not in idx
    assert all(3 not in idx.neighbors(v) for v in idx._pts)


def test_epoch_semantics_two_inserts():
    rng = np.random.default_rng(2)
    pts = {i: rng.uniform(0, 10, 2) for i in range(100)}
    idx = NeighborIndex(dim=2)
    idx.insert_batch([(i, pts[i]) for i in range(50)])
    e1 = idx.epoch
    _ = idx.neighbors(0)
    idx.insert_batch([(i, pts[i]) for i in range(50, 100)])
    assert idx.epoch == e1 + 1
    k = rgg_k(100, 2, 1.001)
    for vid in range(0, 100, 9):
        assert idx.neighbors(vid) == brute_force_knn(pts, vid, k)


def test_three_collinear_points():
    idx = NeighborIndex(dim=2)
    pts = {0: np.array([0.0, 0.0]), 1: np.array([1.0, 0.0]), 2: np.array([3.0, 0.0])}
    idx.insert_batch(sorted(pts.items()))
    # k floors at d+1=3, capped at n-1=2: every query returns the other two
    assert idx.neighbors(0) == (1, 2)
    assert idx.neighbors(1) == (0, 2)
    assert idx.neighbors(2) == (1, 0)  # ordered by distance


def test_tie_breaks_toward_lower_id():
    idx = NeighborIndex(dim=2)
    idx.insert_batch([(5, np.array([0.0, 0.0])),
                      (7, np.array([1.0, 0.0])),
                      (2, np.array([-1.0, 0.0]))])
    # from (0,0) both others are at distance 1; lower id (2) first
    assert idx.neighbors(5)[0] == 2


@pytest.mark.parametrize("n,dim,seed", [(200, 2, 3), (500, 3, 4), (300, 7, 5)])
def test_oracle_equivalence(n, dim, seed):
    rng = np.random.default_rng(seed)
    pts = {i: rng.uniform(0, 10, dim) for i in range(n)}
    idx = NeighborIndex(dim=dim)
    idx.insert_batch(sorted(pts.items()))
    k = min(rgg_k(n, dim, 1.001), n - 1)
    for vid in range(n):
        assert idx.neighbors(vid) == brute_force_knn(pts, vid, k), f"id {vid}"


def test_oracle_equivalence_above_linear_threshold():
    # n > 256 exercises the tree-backed path
    rng = np.random.default_rng(6)
    n = 400
    pts = {i: rng.uniform(0, 10, 2) for i in range(n)}
    idx = NeighborIndex(dim=2)
    idx.insert_batch(sorted(pts.items()))
    k = rgg_k(n, 2, 1.001)
    for vid in range(0, n, 7):
        assert idx.neighbors(vid) == brute_force_knn(pts, vid, k)


def test_tree_path_with_duplicate_coordinates():
    # exact ties on a grid force the boundary-tie fallback in the tree path
    idx = NeighborIndex(dim=2)
    pts = {}
    vid = 0
    for x in range(17):
        for y in range(17):
            pts[vid] = np.array([float(x), float(y)])
            vid += 1
    idx.insert_batch(sorted(pts.items()))
    k = min(rgg_k(len(pts), 2, 1.001), len(pts) - 1)
    for probe in (0, 8 * 17 + 8, 16 * 17 + 16, 5, 140):
        assert idx.neighbors(probe) == brute_force_knn(pts, probe, k)


def test_reverse_neighbors_consistency():
    rng = np.random.default_rng(8)
    idx = NeighborIndex(dim=2)
    idx.insert_batch([(i, rng.uniform(0, 10, 2)) for i in range(120)])
    for vid in range(120):
        for u in idx.neighbors(vid):
            assert vid in idx.reverse_neighbors(u)
