"""Command-line interface.

Subcommands: simulate, compare-models, estimate, compare-estimators, sweep.
Exit codes: 0 success, 1 scenario/configuration error, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from .harness import (compare_estimators, compare_models, generate_observations,
                      mse, convergence_time, sweep_filter_params, write_sweep_csv,
                      RunReport)
from .scenario import ScenarioError, load_scenario
from .sim import SimulationError, simulate
from .terramech import TerramechanicsError
from .ukf import run_estimation

EXIT_OK = 0
EXIT_SCENARIO = 1
EXIT_NUMERICAL = 2


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="terrasim",
                                description="Off-road vehicle simulation and "
                                            "sinkage-exponent estimation")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--scenario", required=True, help="scenario YAML file")
        sp.add_argument("--out", default="runs", help="output directory")
        sp.add_argument("--seed", type=int, default=None,
                        help="override the scenario noise seed")

    sp = sub.add_parser("simulate", help="forward-simulate one model")
    common(sp)
    sp.add_argument("--model", choices=("coupled", "bicycle"), default="coupled")

    sp = sub.add_parser("compare-models",
                        help="coupled vs. bicycle forward simulation")
    common(sp)

    sp = sub.add_parser("estimate", help="run the parameter-estimation filter")
    common(sp)
    sp.add_argument("--model", choices=("coupled", "bicycle"), default="coupled")

    sp = sub.add_parser("compare-estimators",
                        help="both estimators on one observation stream")
    common(sp)

    sp = sub.add_parser("sweep", help="filter-parameter sweep ranked by MSE")
    common(sp)
    sp.add_argument("--model", choices=("coupled", "bicycle"), default="coupled")
    sp.add_argument("--alphas", default=None,
                    help="comma-separated alpha grid (defaults to scenario sweep block)")
    sp.add_argument("--process-noises", default=None,
                    help="comma-separated R_n grid (defaults to scenario sweep block)")
    return p


def _load(args):
    scenario = load_scenario(args.scenario)
    if args.seed is not None:
        scenario = dataclasses.replace(
            scenario, noise=dataclasses.replace(scenario.noise, seed=args.seed))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return scenario, out


def _cmd_simulate(args) -> int:
    scenario, out = _load(args)
    traj = simulate(args.model, scenario)
    path = out / f"{scenario.name}_{args.model}_trajectory.csv"
    traj.to_csv(path)
    print(f"wrote {path}")
    return EXIT_OK


def _cmd_compare_models(args) -> int:
    scenario, out = _load(args)
    cmp = compare_models(scenario)
    paths = {}
    for model, traj in (("coupled", cmp.coupled), ("bicycle", cmp.bicycle)):
        path = out / f"{scenario.name}_{model}_trajectory.csv"
        traj.to_csv(path)
        paths[model] = str(path)
    sep_path = out / f"{scenario.name}_separation.csv"
    with open(sep_path, "w") as fh:
        fh.write("t,separation\n")
        for t, s in zip(cmp.times, cmp.separation):
            fh.write(f"{t:.9g},{s:.9g}\n")
    print(f"max separation {cmp.max_separation:.6g} m, "
          f"final {cmp.final_separation:.6g} m")
    print(f"wrote {paths['coupled']}, {paths['bicycle']}, {sep_path}")
    return EXIT_OK


def _cmd_estimate(args) -> int:
    scenario, out = _load(args)
    observations, _ = generate_observations(scenario)
    trace = run_estimation(args.model, scenario, observations)
    trace_path = out / f"{scenario.name}_{args.model}_estimate.csv"
    trace.to_csv(trace_path)
    report = RunReport(
        scenario=scenario.name, model=args.model, n_true=scenario.n_true,
        mse=mse(trace, scenario.n_true),
        final_estimate=float(trace.w_hat[-1]),
        convergence_time=convergence_time(trace, scenario.n_true),
        files={"estimate": str(trace_path)},
    )
    report_path = out / f"{scenario.name}_{args.model}_report.json"
    report.to_json(report_path)
    print(f"final estimate {report.final_estimate:.4f} "
          f"(true {scenario.n_true}), MSE {report.mse:.4g}")
    print(f"wrote {trace_path}, {report_path}")
    return EXIT_OK


def _cmd_compare_estimators(args) -> int:
    scenario, out = _load(args)
    _, traces, reports = compare_estimators(scenario)
    failed = False
    for model in ("coupled", "bicycle"):
        report = reports[model]
        if traces[model] is not None:
            path = out / f"{scenario.name}_{model}_estimate.csv"
            traces[model].to_csv(path)
            report.files["estimate"] = str(path)
        report.to_json(out / f"{scenario.name}_{model}_report.json")
        if report.error is not None:
            print(f"{model}: FAILED ({report.error})", file=sys.stderr)
            failed = True
        else:
            print(f"{model}: MSE {report.mse:.4g}, "
                  f"final estimate {report.final_estimate:.4f}")
    return EXIT_NUMERICAL if failed else EXIT_OK


def _cmd_sweep(args) -> int:
    scenario, out = _load(args)
    alphas = ([float(a) for a in args.alphas.split(",")]
              if args.alphas else list(scenario.sweep_alphas))
    rns = ([float(r) for r in args.process_noises.split(",")]
           if args.process_noises else list(scenario.sweep_process_noises))
    if not alphas or not rns:
        raise ScenarioError(
            "sweep grids missing: provide --alphas/--process-noises or a "
            "'sweep' block in the scenario")
    rows = sweep_filter_params(scenario, alphas, rns, model=args.model)
    path = out / f"{scenario.name}_sweep.csv"
    write_sweep_csv(rows, path)
    best = rows[0]
    if best["mse"] is None:
        print("all sweep cells failed", file=sys.stderr)
        return EXIT_NUMERICAL
    print(f"best cell: alpha={best['alpha']}, R_n={best['process_noise']}, "
          f"MSE {best['mse']:.4g}")
    print(f"wrote {path}")
    return EXIT_OK


_COMMANDS = {
    "simulate": _cmd_simulate,
    "compare-models": _cmd_compare_models,
    "estimate": _cmd_estimate,
    "compare-estimators": _cmd_compare_estimators,
    "sweep": _cmd_sweep,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return EXIT_SCENARIO
    except (SimulationError, TerramechanicsError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
