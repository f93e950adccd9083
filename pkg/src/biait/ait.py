"""Unidirectional baseline: one valid tree from the start, guided by a
single lazy-reverse search rooted at the goal set.

Shares the neighbor rule, samplers, queues, collision cache, and repair
helper with the bidirectional planner so counter comparisons isolate the
algorithmic difference. Differences: the lazy-reverse search relaxes every
sample (only goal roots are excluded, no meet machinery), the whole lazy
tree is discarded and rebuilt each batch with no valid-tree copy, and a
collision invalidates the entire lazy subtree under the collided edge.
"""

from __future__ import annotations

from typing import Iterator

from .planner import A, B, Planner, Solution
from .sampling import SpaceSaturatedError


class AitPlanner(Planner):
    name = "ait"
    bidirectional = False

    def plan(self) -> Iterator[Solution]:
        import time

        self._t0 = time.perf_counter()
        emitted = 0

        def pending():
            nonlocal emitted
            while emitted < len(self.solutions):
                yield self.solutions[emitted]
                emitted += 1

        while not self._terminate():
            self.iterations += 1
            try:
                self.take_batch()
            except SpaceSaturatedError:
                self._stop_reason = "saturated"
                break
            self._run_reverse_lazy()
            while not self._terminate() and self.forward_search_may_improve(A):
                self.iterations += 1
                repairs = self.counters["n_repair_events"]
                self.forward_search_step(A)
                if self.counters["n_repair_events"] != repairs:
                    self._run_reverse_lazy()
                yield from pending()
            yield from pending()

    def _run_reverse_lazy(self) -> None:
        while not self._terminate() and not self.lazy_search_terminate(B):
            self.iterations += 1
            self.lazy_search_step(B)
            self._note_edge_progress()
