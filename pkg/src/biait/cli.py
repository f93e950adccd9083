"""Benchmark CLI: run single trials, seeded sweeps, render traces.

Exit codes: 0 success, 2 validation error, 3 terminated with no solution.
"""

from __future__ import annotations

import argparse
import sys

from . import bench
from .svgplot import emit_svg
from .worlds import WORLD_NAMES, builtin_world


def _scenario_arg(value: str) -> bench.Scenario:
    if value.startswith("builtin:"):
        name, _, rest = value[len("builtin:"):].partition("?")
        params = {}
        if rest:
            for kv in rest.split("&"):
                k, _, v = kv.partition("=")
                params[k] = int(v) if v.lstrip("-").isdigit() else float(v)
        return builtin_world(name, **params)
    return bench.load_scenario(value)


def _seeds_arg(value: str) -> list[int]:
    if ".." in value:
        a, b = value.split("..", 1)
        return list(range(int(a), int(b) + 1))
    return [int(s) for s in value.split(",")]


def _variational_arg(value: str):
    init, alpha = value.split(",", 1)
    return int(init), float(alpha)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="biait",
        description="Anytime sampling-based planning benchmarks "
                    "(bidirectional adaptive-heuristic planner vs baseline)")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="one seeded trial, optionally saving its trace")
    run_p.add_argument("--scenario", required=True,
                       help="scenario JSON path, or builtin:<name>[?k=v&...]")
    run_p.add_argument("--planner", choices=sorted(bench.PLANNERS), default="biait")
    run_p.add_argument("--seed", type=int, default=0)
    run_p.add_argument("--time-budget-ms", type=float, default=None)
    run_p.add_argument("--target-cost", type=float, default=None)
    run_p.add_argument("--max-iterations", type=int, default=None)
    run_p.add_argument("--batch-size", type=int, default=None)
    run_p.add_argument("--variational", type=_variational_arg, default=None,
                       metavar="INIT,ALPHA")
    run_p.add_argument("--p-near", type=float, default=None)
    run_p.add_argument("--out", default=None, help="trace JSON output path")

    bench_p = sub.add_parser("bench", help="seeded sweep over planners, CSV output")
    bench_p.add_argument("--scenario", required=True)
    bench_p.add_argument("--planners", default="biait,ait",
                         help="comma-separated subset of: " + ",".join(sorted(bench.PLANNERS)))
    bench_p.add_argument("--seeds", type=_seeds_arg, default=[0],
                         help="A..B range or comma list")
    bench_p.add_argument("--time-budget-ms", type=float, default=None)
    bench_p.add_argument("--target-cost", type=float, default=None)
    bench_p.add_argument("--max-iterations", type=int, default=None)
    bench_p.add_argument("--batch-size", type=int, default=None)
    bench_p.add_argument("--variational", type=_variational_arg, default=None,
                         metavar="INIT,ALPHA")
    bench_p.add_argument("--p-near", type=float, default=None)
    bench_p.add_argument("--trials-parallel", type=int, default=1)
    bench_p.add_argument("--csv", required=True)

    svg_p = sub.add_parser("emit-svg", help="render a saved trace to SVG")
    svg_p.add_argument("--trace", required=True)
    svg_p.add_argument("--out", required=True)

    sub.add_parser("worlds", help="list built-in worlds")

    args = parser.parse_args(argv)

    try:
        if args.command == "worlds":
            for name in WORLD_NAMES:
                print(name)
            return 0

        if args.command == "emit-svg":
            trace = bench.load_trace(args.trace)
            emit_svg(trace, args.out)
            print(f"wrote {args.out}")
            return 0

        scenario = _scenario_arg(args.scenario)
        if args.time_budget_ms is None and args.target_cost is None \
                and args.max_iterations is None:
            args.time_budget_ms = 1000.0

        if args.command == "run":
            cfg = bench.build_config(
                scenario, args.seed, time_budget_ms=args.time_budget_ms,
                target_cost=args.target_cost, max_iterations=args.max_iterations,
                batch_size=args.batch_size, variational=args.variational,
                p_near=args.p_near)
            metrics, trace = bench.run_trial(scenario, args.planner, cfg)
            if args.out:
                bench.save_trace(trace, args.out)
            print(f"planner={metrics.planner} world={metrics.world} seed={metrics.seed} "
                  f"status={metrics.status} c_init={metrics.c_init} c_best={metrics.c_best} "
                  f"t_init_ms={metrics.t_init_ms}")
            return 0 if metrics.status == "solved" else 3

        if args.command == "bench":
            planners = [p.strip() for p in args.planners.split(",") if p.strip()]
            for p in planners:
                if p not in bench.PLANNERS:
                    raise bench.ScenarioError(f"unknown planner {p!r}")
            rows = bench.run_bench(
                scenario, planners, args.seeds, trials_parallel=args.trials_parallel,
                time_budget_ms=args.time_budget_ms, target_cost=args.target_cost,
                max_iterations=args.max_iterations, batch_size=args.batch_size,
                variational=args.variational, p_near=args.p_near)
            bench.write_csv(rows, args.csv)
            for s in bench.summarize(rows):
                print(s)
            if not any(m.status == "solved" for m in rows):
                return 3
            return 0
    except (bench.ScenarioError, ValueError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
