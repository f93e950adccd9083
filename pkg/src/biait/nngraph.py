"""Implicit random-geometric-graph neighborhood over the sample set.

The connection rule is k-nearest with k from the RGG bound
k = ceil(eta * e * (1 + 1/d) * ln n), floored at d + 1. Neighbor lists are
directed; callers symmetrize. Correctness is defined by equivalence with a
brute-force (distance, id)-sorted oracle, so ties break toward lower ids.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.spatial import cKDTree

# below this point count a vectorized full sort is cheaper than tree upkeep
LINEAR_SCAN_MAX = 256


def rgg_k(n: int, d: int, eta: float = 1.001) -> int:
    if n < 2:
        raise ValueError("rgg_k needs at least two samples")
    k = math.ceil(eta * math.e * (1.0 + 1.0 / d) * math.log(n))
    return max(k, d + 1)


class NeighborIndex:
    """id-addressed point set answering k-nearest queries.

    Mutations (insert/remove) bump `epoch`; per-id query results are cached
    per epoch and recomputed lazily after any change.
    """

    def __init__(self, dim: int, eta: float = 1.001):
        self.dim = dim
        self.eta = eta
        self.epoch = 0
        self._pts: dict[int, np.ndarray] = {}
        self._cache_epoch = -1
        self._lists: dict[int, tuple[int, ...]] = {}
        self._reverse: dict[int, tuple[int, ...]] = {}

    def __len__(self) -> int:
        return len(self._pts)

    def __contains__(self, vid: int) -> bool:
        return vid in self._pts

    @property
    def k(self) -> int:
        n = len(self._pts)
        return 0 if n < 2 else min(rgg_k(n, self.dim, self.eta), n - 1)

    def insert_batch(self, pts: list[tuple[int, np.ndarray]]) -> None:
        for vid, p in pts:
            if vid in self._pts:
                raise ValueError(f"duplicate id {vid}")
            self._pts[vid] = np.asarray(p, dtype=np.float64)
        if pts:
            self.epoch += 1

    def remove(self, ids) -> None:
        removed = False
        for vid in ids:
            if self._pts.pop(vid, None) is not None:
                removed = True
        if removed:
            self.epoch += 1

    def neighbors(self, vid: int) -> tuple[int, ...]:
        """The k nearest other ids, ordered by (distance, id)."""
        if vid not in self._pts:
            raise KeyError(f"unknown id {vid}")
        self._ensure_lists()
        return self._lists[vid]

    def reverse_neighbors(self, vid: int) -> tuple[int, ...]:
        """ids whose neighbor list contains vid (for symmetrized adjacency)."""
        if vid not in self._pts:
            raise KeyError(f"unknown id {vid}")
        self._ensure_lists()
        return self._reverse.get(vid, ())

    def _ensure_lists(self) -> None:
        if self._cache_epoch == self.epoch:
            return
        ids = np.fromiter(self._pts.keys(), dtype=np.int64, count=len(self._pts))
        order = np.argsort(ids)
        ids = ids[order]
        pts = np.stack([self._pts[int(i)] for i in ids]) if len(ids) else np.empty((0, self.dim))
        n, k = len(ids), self.k
        lists: dict[int, tuple[int, ...]] = {}
        if k == 0:
            lists = {int(i): () for i in ids}
        elif n <= LINEAR_SCAN_MAX:
            d2 = np.sum((pts[:, None, :] - pts[None, :, :]) ** 2, axis=2)
            np.fill_diagonal(d2, np.inf)
            for row, vid in enumerate(ids):
                # lexsort: primary distance, secondary id
                near = np.lexsort((ids, d2[row]))[:k]
                lists[int(vid)] = tuple(int(ids[j]) for j in near)
        else:
            tree = cKDTree(pts)
            kq = min(n, k + 17)
            dist, idx = tree.query(pts, k=kq)
            for row, vid in enumerate(ids):
                drow, irow = dist[row], idx[row]
                keep = irow != row
                drow, irow = drow[keep], irow[keep]
                if len(drow) > k and drow[k - 1] == drow[-1]:
                    # unresolved tie at the cutoff: fall back to a full sort
                    full = np.sqrt(np.sum((pts - pts[row]) ** 2, axis=1))
                    full[row] = np.inf
                    near = np.lexsort((ids, full))[:k]
                    lists[int(vid)] = tuple(int(ids[j]) for j in near)
                    continue
                sub_ids = ids[irow]
                near = np.lexsort((sub_ids, drow))[:k]
                lists[int(vid)] = tuple(int(sub_ids[j]) for j in near)
        reverse: dict[int, list[int]] = {int(i): [] for i in ids}
        for vid, lst in lists.items():
            for u in lst:
                reverse[u].append(vid)
        self._lists = lists
        self._reverse = {vid: tuple(sorted(lst)) for vid, lst in reverse.items()}
        self._cache_epoch = self.epoch
