"""Planning instances: R^d boxes with geometric obstacles, validity and cost.

States are 1-D float64 numpy arrays. Obstacles are closed sets, so a state
on an obstacle boundary counts as colliding; this keeps planned paths from
grazing surfaces within numerical noise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

StateVec = np.ndarray


def as_state(x: Sequence[float]) -> StateVec:
    s = np.asarray(x, dtype=np.float64)
    if s.ndim != 1:
        raise ValueError("state must be a flat coordinate sequence")
    if not np.all(np.isfinite(s)):
        raise ValueError("state coordinates must be finite")
    return s


@dataclass(frozen=True)
class Bounds:
    lo: StateVec
    hi: StateVec

    def __post_init__(self):
        object.__setattr__(self, "lo", as_state(self.lo))
        object.__setattr__(self, "hi", as_state(self.hi))
        if self.lo.shape != self.hi.shape:
            raise ValueError("bounds lo/hi dimension mismatch")
        if not np.all(self.lo < self.hi):
            raise ValueError("bounds require lo[i] < hi[i] for all i")


@dataclass(frozen=True)
class Obstacle:
    """Axis-aligned box ('aabb') or ball ('sphere'); both closed sets."""

    kind: str
    aabb_min: StateVec | None = None
    aabb_max: StateVec | None = None
    center: StateVec | None = None
    radius: float = 0.0

    @staticmethod
    def box(lo: Sequence[float], hi: Sequence[float]) -> "Obstacle":
        lo, hi = as_state(lo), as_state(hi)
        if lo.shape != hi.shape or not np.all(lo <= hi):
            raise ValueError("aabb requires min[i] <= max[i]")
        return Obstacle("aabb", aabb_min=lo, aabb_max=hi)

    @staticmethod
    def sphere(center: Sequence[float], radius: float) -> "Obstacle":
        if radius <= 0:
            raise ValueError("sphere radius must be positive")
        return Obstacle("sphere", center=as_state(center), radius=float(radius))


@dataclass
class ProblemDef:
    """One planning instance: bounds, start, goal set, obstacles, resolution.

    `resolution` is the motion-check step in edge parameter space (fraction
    of the segment, not a distance).
    """

    dim: int
    bounds: Bounds
    start: StateVec
    goals: list[StateVec]
    obstacles: list[Obstacle] = field(default_factory=list)
    resolution: float = 0.001

    # stacked obstacle geometry for vectorized checks
    _box_lo: np.ndarray = field(init=False, repr=False)
    _box_hi: np.ndarray = field(init=False, repr=False)
    _sph_c: np.ndarray = field(init=False, repr=False)
    _sph_r: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.start = as_state(self.start)
        self.goals = [as_state(g) for g in self.goals]
        if not self.goals:
            raise ValueError("goals must be non-empty")
        if not (0.0 < self.resolution <= 1.0):
            raise ValueError("resolution must be in (0, 1]")
        for name, s in [("start", self.start)] + [("goal", g) for g in self.goals]:
            if s.shape != (self.dim,):
                raise ValueError(f"{name} has wrong dimension")
        if self.bounds.lo.shape != (self.dim,):
            raise ValueError("bounds have wrong dimension")

        boxes = [o for o in self.obstacles if o.kind == "aabb"]
        spheres = [o for o in self.obstacles if o.kind == "sphere"]
        self._box_lo = np.stack([o.aabb_min for o in boxes]) if boxes else np.empty((0, self.dim))
        self._box_hi = np.stack([o.aabb_max for o in boxes]) if boxes else np.empty((0, self.dim))
        self._sph_c = np.stack([o.center for o in spheres]) if spheres else np.empty((0, self.dim))
        self._sph_r = np.array([o.radius for o in spheres]) if spheres else np.empty((0,))

        for name, s in [("start", self.start)] + [("goal", g) for g in self.goals]:
            if not state_valid(self, s):
                raise ValueError(f"{name} is out of bounds or in collision")

    def states_valid(self, pts: np.ndarray) -> np.ndarray:
        """Vectorized validity for an (n, dim) array of states."""
        ok = np.all(pts >= self.bounds.lo, axis=1) & np.all(pts <= self.bounds.hi, axis=1)
        if len(self._box_lo):
            # closed boxes: touching a face collides
            inside = np.all(
                (pts[:, None, :] >= self._box_lo[None]) & (pts[:, None, :] <= self._box_hi[None]),
                axis=2,
            )
            ok &= ~np.any(inside, axis=1)
        if len(self._sph_c):
            d2 = np.sum((pts[:, None, :] - self._sph_c[None]) ** 2, axis=2)
            ok &= ~np.any(d2 <= self._sph_r[None] ** 2, axis=1)
        return ok


def state_valid(p: ProblemDef, x: StateVec) -> bool:
    """True iff x lies inside the bounds and outside every (closed) obstacle."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (p.dim,):
        raise ValueError("state has wrong dimension")
    return bool(p.states_valid(x[None, :])[0])


def motion_param_grid(resolution: float) -> np.ndarray:
    """t in {0, res, 2*res, ...} plus the exact endpoint 1."""
    ts = np.arange(0.0, 1.0, resolution)
    return np.append(ts, 1.0)


def motion_valid(p: ProblemDef, a: StateVec, b: StateVec) -> bool:
    """Discretized straight-line motion check at the instance's resolution.

    Every interpolated state a + t(b-a), t on the fixed parameter grid,
    must be valid. Deterministic; no adaptive bisection.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != (p.dim,) or b.shape != (p.dim,):
        raise ValueError("state has wrong dimension")
    ts = motion_param_grid(p.resolution)
    pts = a[None, :] + ts[:, None] * (b - a)[None, :]
    return bool(np.all(p.states_valid(pts)))


def euclid_cost(a: StateVec, b: StateVec) -> float:
    """Euclidean edge cost; also used as the admissible edge estimate."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError("state dimension mismatch")
    return float(np.linalg.norm(b - a))


def heuristic_bounds(p: ProblemDef, x: StateVec) -> tuple[float, float]:
    """(straight-line distance to start, min straight-line distance to a goal)."""
    x = np.asarray(x, dtype=np.float64)
    to_start = float(np.linalg.norm(x - p.start))
    to_goal = min(float(np.linalg.norm(x - g)) for g in p.goals)
    return to_start, to_goal


def path_cost(path: Iterable[StateVec]) -> float:
    pts = [np.asarray(x, dtype=np.float64) for x in path]
    if not pts:
        raise ValueError("path must contain at least one state")
    return float(sum(np.linalg.norm(b - a) for a, b in zip(pts, pts[1:])))
