"""Command-line front end. Subcommands cover the single run, cross-run
comparison, the two rate oracles, objective-change curves, the scaling-law
check, and the group-count ablation. File-writing commands emit delimited
tables plus rendered figures unless --no-plots is given.

Exit codes: 0 on success, 1 when theorem-check fails its tolerance, 2 on
configuration problems."""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .analysis import (group_size_ablation, mr_objective_curves, sample_delta,
                       theorem_scaling_check)
from .engine import ConfigurationError, EvolutionParams
from .harness import (RunConfig, _cell, compare, read_manifest, read_trace,
                      resolve_workers, run, write_manifest, write_report,
                      write_trace, _trace_paths)
from .objectives import make_objective
from .oracles import LookaheadPlan, MrGrid, default_grid, lamr_run, ofmr_search


def _load_config(path: str) -> RunConfig:
    p = Path(path)
    if not p.is_file():
        raise ConfigurationError(f"config not found: {path}")
    try:
        data = json.loads(p.read_text())
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"config {path} is not valid JSON: {e}") from e
    return RunConfig.from_dict(data).resolved()


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok]


def _float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok]


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _grid(args) -> MrGrid:
    return default_grid(args.grid_points, args.grid_low, args.grid_high)


def _add_grid_flags(p: argparse.ArgumentParser, points: int):
    p.add_argument("--grid-points", type=int, default=points)
    p.add_argument("--grid-low", type=float, default=1e-4)
    p.add_argument("--grid-high", type=float, default=1e2)


# ---------------------------------------------------------------------------
# subcommands

def cmd_run(args) -> int:
    config = _load_config(args.config)
    out = _out_dir(args)
    output = run(config, out, workers=args.workers)
    for seed in config.seeds:
        print(f"seed {seed}: final elite {output.records[seed][-1].elite_f:.6g}")
    if not args.no_plots:
        from .plots import plot_run
        plot_run(output.records, out / "run.png",
                 title=f"{config.algorithm} on {config.objective} d={config.dim}")
    print(f"wrote {out}")
    return 0


def cmd_compare(args) -> int:
    report = compare(args.runs, reference_dir=args.reference)
    out = _out_dir(args)
    write_report(out / "report.csv", report)
    for row in report.rows:
        if row.seed == "median":
            mse = "" if row.rate_mse is None else f"  rate_mse {row.rate_mse:.4g}"
            oracle = "  [oracle]" if row.oracle else ""
            print(f"{row.algorithm:10s} median final {row.final_elite:.6g}{mse}{oracle}")
    if not args.no_plots:
        from .plots import plot_compare
        traces = {}
        for run_dir in args.runs:
            run_dir = Path(run_dir)
            name = read_manifest(run_dir / "manifest.json")["algorithm"]
            label = name if name not in traces else f"{name} ({run_dir.name})"
            traces[label] = {s: read_trace(p) for s, p in _trace_paths(run_dir).items()}
        plot_compare(traces, out / "compare.png")
    print(f"wrote {out}")
    return 0


def cmd_ofmr(args) -> int:
    config = _load_config(args.config)
    grid = _grid(args)
    obj = make_objective(config.objective, config.dim, seed=config.seeds[0])
    params = EvolutionParams(n=config.n, eta_x=config.eta_x,
                             generations=config.generations, seed=config.seeds[0])
    best, traces, medians = ofmr_search(grid, obj, params, config.seeds,
                                        init_std=config.init_std)
    out = _out_dir(args)
    lines = ["sigma,median_final"]
    for sigma, med in zip(grid.values, medians):
        lines.append(f"{_cell(sigma)},{_cell(med)}")
    (out / "ofmr_grid.csv").write_text("\n".join(lines) + "\n")

    manifest = config.to_dict()
    manifest["algorithm"] = "ofmr"
    manifest["params"] = {"sigma": best, "grid": [float(v) for v in grid.values]}
    write_manifest(out / "manifest.json", manifest)
    for seed, result in zip(config.seeds, traces[best]):
        write_trace(out / f"trace_seed{seed}.csv", result.records)
    print(f"best fixed rate {best:g} (median final {medians[np.argmin(medians)]:.6g})")
    if not args.no_plots:
        from .plots import plot_ofmr
        plot_ofmr(grid.values, medians, best, out / "ofmr.png",
                  title=f"{config.objective} d={config.dim}")
    print(f"wrote {out}")
    return 0


def cmd_lamr(args) -> int:
    config = _load_config(args.config)
    plan = LookaheadPlan(period=args.period, repeats=args.repeats, grid=_grid(args))
    out = _out_dir(args)
    results = {}
    for seed in config.seeds:
        obj = make_objective(config.objective, config.dim, seed=seed)
        params = EvolutionParams(n=config.n, eta_x=config.eta_x,
                                 generations=config.generations, seed=seed)
        res = lamr_run(obj, params, plan, init_std=config.init_std)
        results[seed] = res
        write_trace(out / f"trace_seed{seed}.csv", res.records)
        print(f"seed {seed}: final elite {res.final_elite:.6g}, "
              f"lookahead evals {res.lookahead_evals}")

    manifest = config.to_dict()
    manifest["algorithm"] = "lamr"
    manifest["params"] = {"period": plan.period, "repeats": plan.repeats,
                          "grid": [float(v) for v in plan.grid.values]}
    manifest["lookahead_evals"] = {str(s): results[s].lookahead_evals
                                   for s in config.seeds}
    write_manifest(out / "manifest.json", manifest)
    if not args.no_plots:
        from .plots import plot_lamr
        plot_lamr(results, out / "lamr.png",
                  title=f"{config.objective} d={config.dim}")
    print(f"wrote {out}")
    return 0


def cmd_delta_curves(args) -> int:
    obj = make_objective(args.objective, args.dim, seed=args.seed)
    x_source = np.array(_float_list(args.x)) if args.x else args.x_std
    grid = np.geomspace(args.grid_low, args.grid_high, args.grid_points)
    hist = sample_delta(obj, x_source, grid, args.samples, args.q, args.seed,
                        bins=args.bins)
    curves = mr_objective_curves(hist)
    out = _out_dir(args)

    lines = ["sigma,mean_delta,min_q_delta,max_q_delta"]
    for i, sigma in enumerate(hist.sigma_grid):
        lines.append(",".join([_cell(sigma), _cell(hist.mean_delta[i]),
                               _cell(hist.min_q_delta[i]), _cell(hist.max_q_delta[i])]))
    (out / "delta_curves.csv").write_text("\n".join(lines) + "\n")

    centers = 0.5 * (hist.bin_edges[:-1] + hist.bin_edges[1:])
    lines = ["sigma," + ",".join(_cell(c) for c in centers)]
    for i, sigma in enumerate(hist.sigma_grid):
        lines.append(_cell(sigma) + "," + ",".join(str(c) for c in hist.counts[i]))
    (out / "delta_hist.csv").write_text("\n".join(lines) + "\n")

    print(f"rate minimizing mean delta:      {curves.best_mean_sigma:g}")
    print(f"rate minimizing best-of-{args.q} delta: {curves.best_min_q_sigma:g}")
    if not args.no_plots:
        from .plots import plot_delta_curves
        plot_delta_curves(hist, curves, out / "delta_curves.png",
                          title=f"{args.objective} d={obj.dim}")
    print(f"wrote {out}")
    return 0


def cmd_theorem_check(args) -> int:
    sigmas = _float_list(args.sigmas)
    check = theorem_scaling_check(args.q, sigmas, args.samples, args.seed,
                                  tolerance=args.tolerance)
    for sigma, est, norm in zip(check.sigmas, check.estimates, check.normalized):
        print(f"sigma {sigma:8g}  E[min of {args.q}] {est: .6f}  normalized {norm: .6f}")
    print(f"normalized spread {check.spread:.4%} (tolerance {args.tolerance:.4%}), "
          f"all negative: {check.all_negative}")
    if args.out:
        out = _out_dir(args)
        lines = ["sigma,estimate,normalized"]
        for sigma, est, norm in zip(check.sigmas, check.estimates, check.normalized):
            lines.append(",".join([_cell(sigma), _cell(est), _cell(norm)]))
        (out / "theorem.csv").write_text("\n".join(lines) + "\n")
        if not args.no_plots:
            from .plots import plot_theorem
            plot_theorem(check, out / "theorem.png")
        print(f"wrote {out}")
    print("PASS" if check.passed else "FAIL")
    return 0 if check.passed else 1


def cmd_ablate_groups(args) -> int:
    obj = make_objective(args.objective, args.dim, seed=0)
    seeds = tuple(_int_list(args.seeds))
    ks = tuple(_int_list(args.ks)) if args.ks else None
    rows = group_size_ablation(obj, args.n, args.generations, seeds, ks=ks,
                               eta_x=args.eta_x, init_std=args.init_std)
    out = _out_dir(args)
    header = "k,median_final," + ",".join(f"final_seed{s}" for s in seeds)
    lines = [header]
    for row in rows:
        lines.append(",".join([str(row.k), _cell(row.median_final)]
                              + [_cell(f) for f in row.finals]))
    (out / "ablation.csv").write_text("\n".join(lines) + "\n")
    for row in rows:
        print(f"k {row.k:4d}: median final {row.median_final:.6g}")
    if not args.no_plots:
        from .plots import plot_ablation
        plot_ablation(rows, out / "ablation.png",
                      title=f"{args.objective} d={args.dim} n={args.n}")
    print(f"wrote {out}")
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gesmr",
        description="Genetic algorithm with group-elite mutation-rate co-evolution")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="execute a run config across its seeds")
    p.add_argument("--config", required=True, help="JSON run config")
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int, default=None,
                   help="seed-level workers (default GESMR_WORKERS or 1)")
    p.add_argument("--no-plots", action="store_true")
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("compare", help="tabulate finished runs side by side")
    p.add_argument("--runs", nargs="+", required=True, help="run directories")
    p.add_argument("--reference", default=None,
                   help="oracle run directory for rate-schedule MSE")
    p.add_argument("--out", required=True)
    p.add_argument("--no-plots", action="store_true")
    p.set_defaults(fn=cmd_compare)

    p = sub.add_parser("ofmr", help="grid-search the best fixed rate over full runs")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    _add_grid_flags(p, points=9)
    p.add_argument("--no-plots", action="store_true")
    p.set_defaults(fn=cmd_ofmr)

    p = sub.add_parser("lamr", help="fixed-rate run re-tuned by periodic look-ahead")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--period", type=int, required=True,
                   help="generations between look-aheads")
    p.add_argument("--repeats", type=int, default=3)
    _add_grid_flags(p, points=9)
    p.add_argument("--no-plots", action="store_true")
    p.set_defaults(fn=cmd_lamr)

    p = sub.add_parser("delta-curves",
                       help="sample the objective change against a rate grid")
    p.add_argument("--objective", required=True)
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--x", default=None, help="fixed point, comma separated")
    p.add_argument("--x-std", type=float, default=1.0,
                   help="redraw x ~ N(0, std^2 I) per sample (ignored with --x)")
    p.add_argument("--samples", type=int, default=20000)
    p.add_argument("--q", type=int, default=16)
    p.add_argument("--bins", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    _add_grid_flags(p, points=33)
    p.add_argument("--out", required=True)
    p.add_argument("--no-plots", action="store_true")
    p.set_defaults(fn=cmd_delta_curves)

    p = sub.add_parser("theorem-check",
                       help="verify the best-of-q change is negative and linear in the rate")
    p.add_argument("--q", type=int, default=10)
    p.add_argument("--sigmas", default="0.5,1,2,4")
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance", type=float, default=0.02)
    p.add_argument("--out", default=None)
    p.add_argument("--no-plots", action="store_true")
    p.set_defaults(fn=cmd_theorem_check)

    p = sub.add_parser("ablate-groups",
                       help="sweep the group count over divisors of the population size")
    p.add_argument("--objective", required=True)
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--generations", type=int, required=True)
    p.add_argument("--seeds", required=True, help="comma separated")
    p.add_argument("--ks", default=None, help="group counts (default: all divisors)")
    p.add_argument("--eta-x", type=float, default=0.5)
    p.add_argument("--init-std", type=float, default=1.0)
    p.add_argument("--out", required=True)
    p.add_argument("--no-plots", action="store_true")
    p.set_defaults(fn=cmd_ablate_groups)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigurationError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
