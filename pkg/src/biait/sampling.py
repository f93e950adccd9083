"""Valid-state samplers: uniform, informed (prolate hyperspheroid), near-path.

All samplers draw from a caller-owned numpy Generator so that identical
seeds reproduce identical sample streams. Rejection loops are capped; a
saturated cap signals a mis-specified problem instead of hanging.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .space import ProblemDef, StateVec, euclid_cost, heuristic_bounds, state_valid

REJECTION_CAP = 10_000

# slack applied when testing informed-set membership, matching the
# soundness tolerance ghat_F + ghat_R <= c_cur + 1e-9
INFORMED_EPS = 1e-9


class SpaceSaturatedError(RuntimeError):
    """Raised when a rejection sampler exceeds its cap without a valid draw."""


@dataclass(frozen=True)
class VariationalSchedule:
    """Batch sizes grow as init * (1 + alpha)^n, capped."""

    init: int
    alpha: float
    cap: int = 100_000

    def __post_init__(self):
        if self.init <= 0 or self.alpha <= 0 or self.cap <= 0:
            raise ValueError("variational schedule needs positive init, alpha, cap")


@dataclass(frozen=True)
class SamplerConfig:
    batch_size: int = 100
    variational: Optional[VariationalSchedule] = None
    p_near: float = 0.0
    near_sigma_frac: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if self.batch_size <= 0:
            raise ValueError("batch_size must be positive")
        if not (0.0 <= self.p_near < 1.0):
            raise ValueError("p_near must lie in [0, 1)")
        if self.near_sigma_frac <= 0:
            raise ValueError("near_sigma_frac must be positive")


def make_rng(seed: int) -> np.random.Generator:
    """Deterministic stream; one owner per planner instance."""
    return np.random.Generator(np.random.PCG64(seed))


def sample_uniform(p: ProblemDef, rng: np.random.Generator) -> StateVec:
    lo, hi = p.bounds.lo, p.bounds.hi
    for _ in range(REJECTION_CAP):
        x = rng.uniform(lo, hi)
        if state_valid(p, x):
            return x
    raise SpaceSaturatedError("space saturated: no valid uniform sample found")


def _rotation_to_segment(axis_unit: np.ndarray) -> np.ndarray:
    """Rotation C with C @ e1 = axis_unit, via SVD of the outer product."""
    d = axis_unit.shape[0]
    e1 = np.zeros(d)
    e1[0] = 1.0
    u, _, vt = np.linalg.svd(np.outer(axis_unit, e1))
    diag = np.ones(d)
    diag[-1] = np.linalg.det(u) * np.linalg.det(vt)
    return u @ np.diag(diag) @ vt


def _ball_sample(d: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform on the unit d-ball (gaussian direction, radius u^(1/d))."""
    v = rng.standard_normal(d)
    n = np.linalg.norm(v)
    while n == 0.0:
        v = rng.standard_normal(d)
        n = np.linalg.norm(v)
    r = rng.random() ** (1.0 / d)
    return v * (r / n)


def in_informed_set(p: ProblemDef, x: StateVec, c_cur: float) -> bool:
    gf, gr = heuristic_bounds(p, x)
    return gf + gr <= c_cur + INFORMED_EPS


def sample_informed(p: ProblemDef, c_cur: float, rng: np.random.Generator) -> StateVec:
    """Valid state with ghat_F + ghat_R <= c_cur.

    Single goal: direct hyperspheroid sampling (unit ball stretched by
    diag(a, b, ..., b), rotated onto the focal axis). Multiple goals: the
    union-of-spheroids sampler is out of scope, so rejection on the min-sum
    bound is used instead. c_cur = inf delegates to sample_uniform.
    """
    if math.isinf(c_cur):
        return sample_uniform(p, rng)

    if len(p.goals) != 1:
        for _ in range(REJECTION_CAP):
            x = rng.uniform(p.bounds.lo, p.bounds.hi)
            if in_informed_set(p, x, c_cur) and state_valid(p, x):
                return x
        raise SpaceSaturatedError("space saturated: informed rejection cap hit")

    start, goal = p.start, p.goals[0]
    c_min = euclid_cost(start, goal)
    centre = (start + goal) / 2.0

    if c_cur <= c_min:
        # degenerate informed set: sample along the focal segment
        for _ in range(REJECTION_CAP):
            x = start + rng.random() * (goal - start)
            if state_valid(p, x):
                return x
        raise SpaceSaturatedError("space saturated: focal segment blocked")

    a = c_cur / 2.0
    b = math.sqrt(c_cur * c_cur - c_min * c_min) / 2.0
    radii = np.full(p.dim, b)
    radii[0] = a
    rot = _rotation_to_segment((goal - start) / c_min)

    lo, hi = p.bounds.lo, p.bounds.hi
    for _ in range(REJECTION_CAP):
        x = centre + rot @ (radii * _ball_sample(p.dim, rng))
        if np.all(x >= lo) and np.all(x <= hi) and state_valid(p, x):
            return x
    raise SpaceSaturatedError("space saturated: informed rejection cap hit")


def _point_along_path(path: Sequence[StateVec], u: float) -> np.ndarray:
    """Point at arc-length fraction u of the polyline."""
    pts = np.asarray(path, dtype=np.float64)
    if len(pts) == 1:
        return pts[0].copy()
    seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    total = float(seg.sum())
    if total == 0.0:
        return pts[0].copy()
    cum = np.cumsum(seg)
    i = min(int(np.searchsorted(cum, u * total, side="left")), len(seg) - 1)
    prev = cum[i] - seg[i]
    t = 0.0 if seg[i] == 0.0 else min(1.0, (u * total - prev) / seg[i])
    return pts[i] + t * (pts[i + 1] - pts[i])


def sample_near_path(
    p: ProblemDef,
    path: Sequence[StateVec],
    c_cur: float,
    rng: np.random.Generator,
    near_sigma_frac: float = 0.05,
) -> StateVec:
    """Gaussian perturbation of a uniformly-chosen point on the current path.

    sigma = near_sigma_frac * (c_cur / 2). Draws are rejected until valid
    and inside the informed set (keeps the pruning invariant sound); on cap
    exhaustion falls back to the informed sampler.
    """
    if not len(path):
        raise ValueError("path must be non-empty")
    if math.isinf(c_cur):
        raise ValueError("near-path sampling needs a finite current cost")
    sigma = near_sigma_frac * (c_cur / 2.0)
    for _ in range(REJECTION_CAP):
        anchor = _point_along_path(path, rng.random())
        x = anchor + sigma * rng.standard_normal(p.dim)
        if (
            np.all(x >= p.bounds.lo)
            and np.all(x <= p.bounds.hi)
            and in_informed_set(p, x, c_cur)
            and state_valid(p, x)
        ):
            return x
    return sample_informed(p, c_cur, rng)


def batch_schedule(cfg: SamplerConfig, n: int) -> int:
    """Size of batch n: constant, or the variational schedule when set."""
    if cfg.variational is None:
        return cfg.batch_size
    v = cfg.variational
    raw = v.init * (1.0 + v.alpha) ** n
    return min(v.cap, int(math.floor(raw + 0.5)))


def sample_batch(
    p: ProblemDef,
    cfg: SamplerConfig,
    n: int,
    c_cur: float,
    current_path: Optional[Sequence[StateVec]],
    rng: np.random.Generator,
    stats: Optional[dict] = None,
) -> list[StateVec]:
    """Draw one batch; each draw is near-path with probability p_near when a
    path exists, otherwise informed (which is uniform while c_cur = inf)."""
    size = batch_schedule(cfg, n)
    out = []
    n_near = 0
    use_near_possible = current_path is not None and cfg.p_near > 0.0 and math.isfinite(c_cur)
    for _ in range(size):
        if use_near_possible and rng.random() < cfg.p_near:
            out.append(sample_near_path(p, current_path, c_cur, rng, cfg.near_sigma_frac))
            n_near += 1
        else:
            out.append(sample_informed(p, c_cur, rng))
    if stats is not None:
        stats["near"] = n_near
        stats["informed"] = size - n_near
    return out
