"""Command line entry point: ``erspud run | phase | theory``."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .dictmetrics import rel_error
from .errors import ErspudError
from .theorycheck import CHECKS
from .xphase import PhaseConfig, num_samples, run_grid, run_trial, summary_csv


def _parse_value(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def cmd_run(args):
    """Single trial per (n, k) pair of the config, reporting the match."""
    cfg = PhaseConfig.from_json(args.config)
    out = []
    for n in cfg.n_values:
        for k in cfg.k_values:
            err, info = run_trial(
                n, k, cfg.p_for(n), cfg.algorithm, cfg.dict_kind, cfg.precondition,
                cfg.master_seed, value_dist=cfg.value_dist,
                cols_per_round=cfg.cols_per_round, return_details=True,
            )
            res = info["result"]
            match = rel_error(res.A_hat, info["A"]).to_dict() if res is not None else None
            out.append({"n": n, "k": k, "p": num_samples(n, cfg.p_rule), "rel_error": err,
                        "success": err < cfg.success_threshold, "match": match})
    json.dump(out, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


def cmd_phase(args):
    cfg = PhaseConfig.from_json(args.config)
    if args.output_dir:
        cfg.output_dir = args.output_dir
    cells = run_grid(cfg, workers=args.workers)
    sys.stdout.write(summary_csv(cells))
    return 0


def cmd_theory(args):
    fn = CHECKS[args.check]
    params = {}
    for item in args.param or []:
        key, _, value = item.partition("=")
        params[key] = _parse_value(value)
    if "v" in params:
        params["v"] = np.asarray(params["v"], dtype=float)
    report = fn(**params)
    json.dump(report.to_dict(), sys.stdout)
    sys.stdout.write("\n")
    return 0 if report.passed else 1


def build_parser():
    parser = argparse.ArgumentParser(prog="erspud", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one seeded trial per grid point")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("phase", help="run a phase-transition grid")
    p.add_argument("--config", required=True)
    p.add_argument("--output-dir")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_phase)

    p = sub.add_parser("theory", help="run one Monte-Carlo theory check")
    p.add_argument("--check", required=True, choices=sorted(CHECKS))
    p.add_argument("--param", action="append", metavar="KEY=VALUE",
                   help="check parameter; values are parsed as JSON when possible")
    p.set_defaults(func=cmd_theory)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ErspudError, TypeError) as exc:
        print(f"erspud: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
