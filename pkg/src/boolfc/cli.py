"""Command-line surface: construct, sweep, pareto, metrics, transform, noise.

Exit codes: 0 success, 1 module error, 2 flag misuse.  All randomness
flows from --seed (noise only), so identical invocations produce
byte-identical output files.
"""

from __future__ import annotations

import argparse
import io
import json
import sys

import numpy as np

from . import expr as ex
from .dataset import Dataset, DatasetError, dump_dataset, load_dataset
from .metrics import FeatureSet, MetricsError, report
from .noise import noise_experiment, write_noise_csv
from .pareto import (
    closest_point,
    pareto_front,
    read_sweep_csv,
    solution_json_dict,
    sweep,
    write_sweep_csv,
)
from .stats import StatsError
from .ufc import FixedMode, RiskMode, UfcConfig, UfcError, ufc_run
from .ufringe import UfringeConfig, ufringe_run

_ERRORS = (DatasetError, MetricsError, StatsError, UfcError, ex.ExprError,
           ValueError, OSError)


def _parse_prune(value: str) -> bool:
    if value not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected 'on' or 'off'")
    return value == "on"


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _json_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boolfc",
        description="Unsupervised Boolean feature construction toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a feature set from a dataset")
    p.add_argument("dataset")
    p.add_argument("--algorithm", choices=("ufc", "ufringe"), default="ufc")
    p.add_argument("--lambda", dest="threshold", type=float,
                   help="fixed correlation threshold (with --max-iter)")
    p.add_argument("--max-iter", type=int, help="iteration cap for fixed mode")
    p.add_argument("--risk", type=float,
                   help="significance level for the risk-based mode")
    p.add_argument("--hard-cap", type=int, default=100)
    p.add_argument("--prune", type=_parse_prune, default=None,
                   help="candidate pruning on|off (default: on in risk mode)")
    p.add_argument("--max-features", type=int, default=300,
                   help="feature budget (ufringe)")
    p.add_argument("--min-leaf", type=int, default=5)
    p.add_argument("--max-depth", type=int, default=10)
    p.add_argument("--out", required=True, help="output path prefix")

    p = sub.add_parser("sweep", help="grid sweep over lambda and iterations")
    p.add_argument("dataset")
    p.add_argument("--lambda-from", type=float, required=True)
    p.add_argument("--lambda-to", type=float, required=True)
    p.add_argument("--lambda-step", type=float, required=True)
    p.add_argument("--iters-max", type=int, required=True)
    p.add_argument("--prune", type=_parse_prune, default=False)
    p.add_argument("--out", required=True, help="output CSV path")

    p = sub.add_parser("pareto", help="front + closest point from a sweep CSV")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--front-out", required=True)
    p.add_argument("--closest-out", required=True)

    p = sub.add_parser("metrics", help="evaluate a feature file on a dataset")
    p.add_argument("dataset")
    p.add_argument("--features", required=True)
    p.add_argument("--out", help="optional JSON output path")

    p = sub.add_parser("transform", help="re-express a dataset with features")
    p.add_argument("dataset")
    p.add_argument("--features", required=True)
    p.add_argument("--out", required=True, help="output CSV path")

    p = sub.add_parser("noise", help="noise-stability experiment")
    p.add_argument("dataset")
    p.add_argument("--pcts", required=True,
                   help="comma-separated noise fractions, e.g. 0,0.1,0.2")
    p.add_argument("--replicates", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--risk", type=float, default=0.001)
    p.add_argument("--prune", type=_parse_prune, default=False)
    p.add_argument("--out", required=True, help="output CSV path")

    return parser


def mangle_name(text: str, taken: set[str]) -> str:
    """Deterministic identifier for an expression, unique within a header."""
    name = (
        text.replace(" & ", "-and-")
        .replace("!", "not-")
        .replace("(", "lp-")
        .replace(")", "-rp")
    )
    if not name or not (name[0].isalpha() or name[0] == "_"):
        name = "f_" + name
    base = name
    suffix = 2
    while name in taken:
        name = f"{base}-{suffix}"
        suffix += 1
    taken.add(name)
    return name


def cmd_construct(args, parser) -> int:
    if args.algorithm == "ufc":
        fixed = args.threshold is not None or args.max_iter is not None
        risk = args.risk is not None
        if fixed and risk:
            parser.error("--lambda/--max-iter and --risk are mutually exclusive")
        if fixed and (args.threshold is None or args.max_iter is None):
            parser.error("fixed mode needs both --lambda and --max-iter")
        if not fixed and not risk:
            parser.error("choose --lambda X --max-iter N or --risk A")
        if risk:
            mode = RiskMode(args.risk, args.hard_cap)
        else:
            mode = FixedMode(args.threshold, args.max_iter)
        d = load_dataset(args.dataset)
        result = ufc_run(d, UfcConfig(mode, candidate_pruning=args.prune))
        fs = result.features
        run_dict = result.to_json_dict()
        final = result.final_report()
    else:
        d = load_dataset(args.dataset)
        cfg = UfringeConfig(
            max_features=args.max_features,
            min_leaf=args.min_leaf,
            max_depth=args.max_depth,
        )
        fs = ufringe_run(d, cfg)
        final = report(fs)
        run_dict = {
            "algorithm": "ufringe",
            "max_features": cfg.max_features,
            "features": [ex.to_text(e) for e in fs.members],
            "final_metrics": json.loads(final.to_json()),
        }
    ex.save_feature_file(fs.members, args.out + ".features.txt")
    _write_text(args.out + ".run.json", _json_dumps(run_dict))
    print(final.to_json())
    return 0


def cmd_sweep(args) -> int:
    d = load_dataset(args.dataset)
    if args.lambda_step <= 0 or args.lambda_to < args.lambda_from:
        raise ValueError("invalid lambda grid")
    if args.iters_max < 1:
        raise ValueError("--iters-max must be >= 1")
    count = int(round((args.lambda_to - args.lambda_from) / args.lambda_step)) + 1
    thresholds = [args.lambda_from + i * args.lambda_step for i in range(count)]
    thresholds = [t for t in thresholds if t <= args.lambda_to + 1e-12]
    sols = sweep(d, thresholds, range(1, args.iters_max + 1), pruning=args.prune)
    buf = io.StringIO()
    write_sweep_csv(sols, buf)
    _write_text(args.out, buf.getvalue())
    return 0


def cmd_pareto(args) -> int:
    with open(args.infile, "r", encoding="utf-8") as fh:
        sols = read_sweep_csv(fh)
    front = pareto_front(sols)
    buf = io.StringIO()
    write_sweep_csv(front, buf)
    _write_text(args.front_out, buf.getvalue())
    best = closest_point(sols)
    _write_text(args.closest_out, _json_dumps(solution_json_dict(best)))
    return 0


def cmd_metrics(args) -> int:
    d = load_dataset(args.dataset)
    exprs = ex.load_feature_file(args.features)
    fs = FeatureSet(exprs, d)
    text = report(fs).to_json()
    if args.out:
        _write_text(args.out, text + "\n")
    print(text)
    return 0


def cmd_transform(args) -> int:
    d = load_dataset(args.dataset)
    exprs = ex.load_feature_file(args.features)
    fs = FeatureSet(exprs, d)
    taken: set[str] = set()
    names = [mangle_name(key, taken) for key in fs.keys]
    out_ds = Dataset(names, fs.extensions)
    buf = io.StringIO()
    dump_dataset(out_ds, buf)
    _write_text(args.out, buf.getvalue())
    return 0


def cmd_noise(args) -> int:
    d = load_dataset(args.dataset)
    pcts = [float(s) for s in args.pcts.split(",") if s.strip() != ""]
    if not pcts:
        raise ValueError("--pcts must list at least one fraction")
    rows = noise_experiment(
        d,
        pcts,
        replicates=args.replicates,
        seed=args.seed,
        alpha=args.risk,
        pruning=args.prune,
    )
    buf = io.StringIO()
    write_noise_csv(rows, buf)
    _write_text(args.out, buf.getvalue())
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "construct":
            return cmd_construct(args, parser)
        if args.command == "sweep":
            return cmd_sweep(args)
        if args.command == "pareto":
            return cmd_pareto(args)
        if args.command == "metrics":
            return cmd_metrics(args)
        if args.command == "transform":
            return cmd_transform(args)
        if args.command == "noise":
            return cmd_noise(args)
        parser.error(f"unknown command {args.command!r}")
    except _ERRORS as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
