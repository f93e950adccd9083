"""Addressable lexicographic priority queues and the search-queue key rules.

Keys are tuples of floats (1 to 3 components, +inf allowed, NaN rejected)
compared lexicographically. Exactly-equal keys pop in the order of their
most recent push/update (FIFO by event sequence), which makes every queue
interleaving deterministic.
"""

from __future__ import annotations

import math
from typing import Hashable, Iterable

INF = float("inf")

LexKey = tuple[float, ...]


def check_key(key: LexKey) -> LexKey:
    for c in key:
        if math.isnan(c):
            raise ValueError("NaN is not a legal key component")
    return key


class AddressablePQ:
    """Binary min-heap with an entry -> slot map (push, pop, update, remove).

    Entries are hashable and unique; pushing an existing entry replaces its
    key. Heap order is (key, seq) so equal keys resolve by update recency.
    """

    def __init__(self):
        self._heap: list[tuple[LexKey, int, Hashable]] = []
        self._pos: dict[Hashable, int] = {}
        self._seq = 0

    def __len__(self) -> int:
        return len(self._heap)

    def __contains__(self, entry: Hashable) -> bool:
        return entry in self._pos

    def clear(self) -> None:
        self._heap.clear()
        self._pos.clear()

    def entries(self) -> Iterable[Hashable]:
        return list(self._pos.keys())

    def key_of(self, entry: Hashable):
        pos = self._pos.get(entry)
        return None if pos is None else self._heap[pos][0]

    def push_or_update(self, entry: Hashable, key: LexKey) -> None:
        check_key(key)
        self._seq += 1
        item = (tuple(key), self._seq, entry)
        pos = self._pos.get(entry)
        if pos is None:
            self._heap.append(item)
            self._pos[entry] = len(self._heap) - 1
            self._sift_up(len(self._heap) - 1)
        else:
            old = self._heap[pos]
            self._heap[pos] = item
            if item[:2] < old[:2]:
                self._sift_up(pos)
            else:
                self._sift_down(pos)

    def peek(self):
        if not self._heap:
            return None
        key, _, entry = self._heap[0]
        return entry, key

    def peek_key(self):
        return self._heap[0][0] if self._heap else None

    def pop_best(self):
        if not self._heap:
            raise IndexError("pop from an empty priority queue")
        key, _, entry = self._heap[0]
        self._delete_at(0)
        return entry, key

    def remove(self, entry: Hashable) -> bool:
        pos = self._pos.get(entry)
        if pos is None:
            return False
        self._delete_at(pos)
        return True

    def _delete_at(self, pos: int) -> None:
        last = self._heap.pop()
        del self._pos[self._heap[pos][2] if pos < len(self._heap) else last[2]]
        if pos < len(self._heap):
            self._heap[pos] = last
            self._pos[last[2]] = pos
            self._sift_down(pos)
            self._sift_up(pos)

    def _sift_up(self, pos: int) -> None:
        item = self._heap[pos]
        while pos > 0:
            parent = (pos - 1) >> 1
            if item[:2] < self._heap[parent][:2]:
                self._heap[pos] = self._heap[parent]
                self._pos[self._heap[pos][2]] = pos
                pos = parent
            else:
                break
        self._heap[pos] = item
        self._pos[item[2]] = pos

    def _sift_down(self, pos: int) -> None:
        n = len(self._heap)
        item = self._heap[pos]
        while True:
            child = 2 * pos + 1
            if child >= n:
                break
            right = child + 1
            if right < n and self._heap[right][:2] < self._heap[child][:2]:
                child = right
            if self._heap[child][:2] < item[:2]:
                self._heap[pos] = self._heap[child]
                self._pos[self._heap[pos][2]] = pos
                pos = child
            else:
                break
        self._heap[pos] = item
        self._pos[item[2]] = pos


# ---------------------------------------------------------------------------
# key rules
#
# Lazy-vertex queues sort by (min(h_g, h_rhs) + ghat_opp, min(h_g, h_rhs));
# edge queues by (g(parent) + chat + h_opp(child), g(parent) + chat,
# g(parent)); meet sets by the single summed component. The "opp" values are
# the opposing role's quantities (the forward search is guided by the
# reverse heuristic and vice versa).


def lazy_vertex_key(min_g_rhs: float, ghat_opp: float) -> LexKey:
    return (min_g_rhs + ghat_opp, min_g_rhs)


def edge_key(g_parent: float, chat: float, h_opp_child: float) -> LexKey:
    reach = g_parent + chat
    return (reach + h_opp_child, reach, g_parent)


def meet_key(g_or_h_1: float, cost: float, g_or_h_2: float) -> LexKey:
    return (g_or_h_1 + cost + g_or_h_2,)
