"""Scenario files, seeded trials, metrics aggregation, CSV emission.

Scenario file format (single UTF-8 JSON document):

    {"name": ..., "dim": d, "bounds": {"lo": [...], "hi": [...]},
     "start": [...], "goals": [[...], ...],
     "obstacles": [{"type": "aabb", "min": [...], "max": [...]} |
                   {"type": "sphere", "center": [...], "radius": r}],
     "resolution": 0.001, "planner": {...optional overrides...}}

CSV columns (exact order):
planner,world,seed,batch_size,t_init_ms,c_init,t_best_ms,c_best,
n_collision_checks,n_lazy_pops_a,n_lazy_pops_b,n_edge_pops,n_samples,
n_repair_events,repair_footprint_total,status
"""

from __future__ import annotations

import csv
import json
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from typing import Optional

from .ait import AitPlanner
from .planner import Planner, PlannerConfig, Termination
from .sampling import SamplerConfig, VariationalSchedule
from .space import Bounds, Obstacle, ProblemDef

PLANNERS = {"biait": Planner, "ait": AitPlanner}

CSV_COLUMNS = [
    "planner", "world", "seed", "batch_size", "t_init_ms", "c_init",
    "t_best_ms", "c_best", "n_collision_checks", "n_lazy_pops_a",
    "n_lazy_pops_b", "n_edge_pops", "n_samples", "n_repair_events",
    "repair_footprint_total", "status",
]


class ScenarioError(ValueError):
    """Scenario file failed to parse or validate; message names the field."""


@dataclass
class Scenario:
    name: str
    problem: ProblemDef
    planner_overrides: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        obs = []
        for o in self.problem.obstacles:
            if o.kind == "aabb":
                obs.append({"type": "aabb", "min": list(o.aabb_min), "max": list(o.aabb_max)})
            else:
                obs.append({"type": "sphere", "center": list(o.center), "radius": o.radius})
        doc = {
            "name": self.name,
            "dim": self.problem.dim,
            "bounds": {"lo": list(self.problem.bounds.lo), "hi": list(self.problem.bounds.hi)},
            "start": list(self.problem.start),
            "goals": [list(g) for g in self.problem.goals],
            "obstacles": obs,
            "resolution": self.problem.resolution,
        }
        if self.planner_overrides:
            doc["planner"] = self.planner_overrides
        return doc

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, indent=2)
            f.write("\n")


def scenario_from_dict(doc: dict) -> Scenario:
    def need(key):
        if key not in doc:
            raise ScenarioError(f"missing field {key!r}")
        return doc[key]

    name = need("name")
    dim = need("dim")
    bounds_doc = need("bounds")
    for key in ("lo", "hi"):
        if key not in bounds_doc:
            raise ScenarioError(f"missing field 'bounds.{key}'")
    obstacles = []
    for i, ob in enumerate(doc.get("obstacles", [])):
        kind = ob.get("type")
        try:
            if kind == "aabb":
                obstacles.append(Obstacle.box(ob["min"], ob["max"]))
            elif kind == "sphere":
                obstacles.append(Obstacle.sphere(ob["center"], ob["radius"]))
            else:
                raise ScenarioError(f"obstacles[{i}].type must be 'aabb' or 'sphere'")
        except KeyError as e:
            raise ScenarioError(f"obstacles[{i}] missing field {e.args[0]!r}") from None
        except ValueError as e:
            raise ScenarioError(f"obstacles[{i}]: {e}") from None
    try:
        problem = ProblemDef(
            dim=int(dim),
            bounds=Bounds(bounds_doc["lo"], bounds_doc["hi"]),
            start=need("start"),
            goals=need("goals"),
            obstacles=obstacles,
            resolution=float(doc.get("resolution", 0.001)),
        )
    except ValueError as e:
        raise ScenarioError(str(e)) from None
    return Scenario(str(name), problem, dict(doc.get("planner", {})))


def load_scenario(path: str) -> Scenario:
    try:
        with open(path, encoding="utf-8") as f:
            doc = json.load(f)
    except json.JSONDecodeError as e:
        raise ScenarioError(f"parse error in {path}: line {e.lineno}: {e.msg}") from None
    if not isinstance(doc, dict):
        raise ScenarioError("scenario document must be a JSON object")
    return scenario_from_dict(doc)


@dataclass
class TrialMetrics:
    planner: str
    world: str
    seed: int
    batch_size: int
    t_init_ms: Optional[float]
    c_init: Optional[float]
    t_best_ms: Optional[float]
    c_best: Optional[float]
    n_collision_checks: int
    n_lazy_pops_a: int
    n_lazy_pops_b: int
    n_edge_pops: int
    n_samples: int
    n_repair_events: int
    repair_footprint_total: int
    status: str
    # not part of the CSV schema
    lazy_pops_at_first_finite_edge: Optional[int] = None

    def row(self) -> list[str]:
        out = []
        for col in CSV_COLUMNS:
            v = getattr(self, col)
            if v is None:
                out.append("")
            elif isinstance(v, float):
                out.append(repr(v))
            else:
                out.append(str(v))
        return out

    @staticmethod
    def from_row(row: list[str]) -> "TrialMetrics":
        kw = {}
        types = {f.name: f.type for f in fields(TrialMetrics)}
        for col, raw in zip(CSV_COLUMNS, row):
            if raw == "":
                kw[col] = None
            elif "int" in str(types[col]) and "float" not in str(types[col]):
                kw[col] = int(raw)
            elif "float" in str(types[col]):
                kw[col] = float(raw)
            else:
                kw[col] = raw
        return TrialMetrics(**kw)


def build_config(scenario: Scenario, seed: int, time_budget_ms: Optional[float] = None,
                 target_cost: Optional[float] = None, max_iterations: Optional[int] = None,
                 batch_size: Optional[int] = None, variational: Optional[tuple] = None,
                 p_near: Optional[float] = None, eta: Optional[float] = None) -> PlannerConfig:
    ov = scenario.planner_overrides
    bs = batch_size if batch_size is not None else int(ov.get("batch_size", 100))
    if variational is None and "variational" in ov:
        variational = tuple(ov["variational"])
    sampler = SamplerConfig(
        batch_size=bs,
        variational=VariationalSchedule(int(variational[0]), float(variational[1]))
        if variational else None,
        p_near=p_near if p_near is not None else float(ov.get("p_near", 0.0)),
        seed=seed,
    )
    return PlannerConfig(
        sampler=sampler,
        eta=eta if eta is not None else float(ov.get("eta", 1.001)),
        termination=Termination(
            time_budget_ms=time_budget_ms,
            target_cost=target_cost,
            max_iterations=max_iterations,
        ),
    )


def run_trial(scenario: Scenario, planner_name: str, cfg: PlannerConfig,
              seed: Optional[int] = None) -> tuple[TrialMetrics, dict]:
    """Execute one seeded trial; returns its metrics and the full trace."""
    if planner_name not in PLANNERS:
        raise ValueError(f"unknown planner {planner_name!r}")
    if seed is not None and cfg.sampler.seed != seed:
        cfg = PlannerConfig(
            sampler=SamplerConfig(
                batch_size=cfg.sampler.batch_size, variational=cfg.sampler.variational,
                p_near=cfg.sampler.p_near, near_sigma_frac=cfg.sampler.near_sigma_frac,
                seed=seed),
            eta=cfg.eta, resolution=cfg.resolution, termination=cfg.termination)
    pl = PLANNERS[planner_name](scenario.problem, cfg)
    report = pl.solve()
    sols = report["solutions"]
    counters = report["counters"]
    vs = cfg.sampler.variational
    metrics = TrialMetrics(
        planner=planner_name,
        world=scenario.name,
        seed=cfg.sampler.seed,
        batch_size=vs.init if vs else cfg.sampler.batch_size,
        t_init_ms=sols[0].found_at_ms if sols else None,
        c_init=sols[0].cost if sols else None,
        t_best_ms=sols[-1].found_at_ms if sols else None,
        c_best=sols[-1].cost if sols else None,
        n_collision_checks=counters["n_collision_checks"],
        n_lazy_pops_a=counters["n_lazy_pops_a"],
        n_lazy_pops_b=counters["n_lazy_pops_b"],
        n_edge_pops=counters["n_edge_pops"],
        n_samples=counters["n_samples"],
        n_repair_events=counters["n_repair_events"],
        repair_footprint_total=counters["repair_footprint_total"],
        status=report["status"],
        lazy_pops_at_first_finite_edge=report["lazy_pops_at_first_finite_edge"],
    )
    trace = build_trace(scenario, pl, metrics)
    return metrics, trace


def build_trace(scenario: Scenario, pl: Planner, metrics: TrialMetrics) -> dict:
    """Structured event log plus a final-state snapshot for rendering."""
    from .planner import A, B

    final = {
        "samples": {str(vid): [float(c) for c in v.coords] for vid, v in sorted(pl.vertices.items())},
        "valid_edges": sorted(
            [v.parent[role], vid, role]
            for role in (A, B) for vid, v in pl.vertices.items()
            if v.parent[role] is not None),
        "lazy_edges": sorted(
            [v.lazy_parent[role], vid, role]
            for role in (A, B) for vid, v in pl.vertices.items()
            if v.lazy_parent[role] is not None),
        "path": [[float(c) for c in s] for s in (pl.best_path or [])],
    }
    return {
        "format": "biait-trace-v1",
        "planner": metrics.planner,
        "seed": metrics.seed,
        "scenario": scenario.to_dict(),
        "events": [list(e) for e in pl.events],
        "solutions": [
            {"cost": s.cost, "found_at_ms": s.found_at_ms, "iteration": s.iteration}
            for s in pl.solutions
        ],
        "final": final,
        "metrics": {c: getattr(metrics, c) for c in CSV_COLUMNS},
    }


def save_trace(trace: dict, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(trace, f)
        f.write("\n")


def load_trace(path: str) -> dict:
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def _trial_job(args):
    scenario_doc, planner_name, seed, cfg_kwargs = args
    scenario = scenario_from_dict(scenario_doc)
    cfg = build_config(scenario, seed, **cfg_kwargs)
    metrics, _ = run_trial(scenario, planner_name, cfg)
    return metrics


def run_bench(scenario: Scenario, planners: list[str], seeds: list[int],
              trials_parallel: int = 1, **cfg_kwargs) -> list[TrialMetrics]:
    """One trial per (planner, seed); deterministic row order."""
    jobs = [(scenario.to_dict(), p, s, cfg_kwargs) for p in planners for s in seeds]
    if trials_parallel > 1:
        with ProcessPoolExecutor(max_workers=trials_parallel) as ex:
            results = list(ex.map(_trial_job, jobs))
    else:
        results = [_trial_job(j) for j in jobs]
    return sorted(results, key=lambda m: (m.planner, m.seed))


def summarize(rows: list[TrialMetrics]) -> list[dict]:
    out = []
    for planner in sorted({m.planner for m in rows}):
        sub = [m for m in rows if m.planner == planner]
        t = sorted(m.t_init_ms for m in sub if m.t_init_ms is not None)
        c = sorted(m.c_init for m in sub if m.c_init is not None)

        def q(vals, frac):
            if not vals:
                return math.nan
            return statistics.quantiles(vals, n=4)[{0.25: 0, 0.5: 1, 0.75: 2}[frac]] \
                if len(vals) > 1 else vals[0]

        out.append({
            "planner": planner,
            "solved": sum(1 for m in sub if m.status == "solved"),
            "trials": len(sub),
            "t_init_ms_q1": q(t, 0.25), "t_init_ms_median": q(t, 0.5), "t_init_ms_q3": q(t, 0.75),
            "c_init_q1": q(c, 0.25), "c_init_median": q(c, 0.5), "c_init_q3": q(c, 0.75),
        })
    return out


def write_csv(rows: list[TrialMetrics], path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(CSV_COLUMNS)
        for m in rows:
            w.writerow(m.row())
        for s in summarize(rows):
            f.write("# " + ",".join(f"{k}={v}" for k, v in s.items()) + "\n")


def read_csv(path: str) -> list[TrialMetrics]:
    out = []
    with open(path, newline="", encoding="utf-8") as f:
        for i, row in enumerate(csv.reader(f)):
            if not row or row[0].startswith("#"):
                continue
            if i == 0:
                if row != CSV_COLUMNS:
                    raise ValueError("unexpected CSV column set")
                continue
            out.append(TrialMetrics.from_row(row))
    return out
