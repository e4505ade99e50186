"""plotviz command line: render figures from terrasim CSV output.

    plotviz render --kind trajectory --in runs/rough_coupled_trajectory.csv \
        --in bicycle=runs/rough_bicycle_trajectory.csv --out traj.png

Inputs may be given as bare paths (labelled by file stem) or LABEL=PATH.
Exit codes: 0 success, 1 bad arguments or schema mismatch.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import figures
from .io import SchemaError, load_estimate, load_trajectory

KINDS = {
    "trajectory": (load_trajectory, figures.trajectory_figure),
    "forces": (load_trajectory, figures.forces_figure),
    "vertical": (load_trajectory, figures.vertical_figure),
    "estimate": (load_estimate, figures.estimate_figure),
}


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="plotviz",
                                description="Render terrasim CSV files")
    sub = p.add_subparsers(dest="command", required=True)
    sp = sub.add_parser("render", help="render one figure")
    sp.add_argument("--kind", choices=sorted(KINDS), required=True)
    sp.add_argument("--in", dest="inputs", action="append", required=True,
                    metavar="[LABEL=]PATH",
                    help="input CSV; repeat to overlay several files")
    sp.add_argument("--out", required=True, help="output image path")
    sp.add_argument("--truth", type=float, default=None,
                    help="true parameter value (estimate figures only)")
    sp.add_argument("--dpi", type=int, default=150)
    return p


def _parse_inputs(specs) -> dict[str, Path]:
    out = {}
    for spec in specs:
        label, sep, path = spec.partition("=")
        if not sep:
            label, path = Path(spec).stem, spec
        if label in out:
            raise SchemaError(f"duplicate input label {label!r}")
        out[label] = Path(path)
    return out


def _cmd_render(args) -> int:
    loader, builder = KINDS[args.kind]
    datasets = {label: loader(path)
                for label, path in _parse_inputs(args.inputs).items()}
    if args.kind == "estimate":
        fig = builder(datasets, truth=args.truth)
    else:
        if args.truth is not None:
            print("--truth is only meaningful with --kind estimate",
                  file=sys.stderr)
            return 1
        fig = builder(datasets)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=args.dpi)
    print(f"wrote {out}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _cmd_render(args)
    except SchemaError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
