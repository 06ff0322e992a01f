"""Command-line entry points: ldim, play, regret, verify."""
from __future__ import annotations

import argparse
import json
import sys

from . import runner, verification
from .hypotheses import FiniteClass, format_point
from .littlestone import ldim, shattered_tree_witness


def _load_spec(value: str) -> dict:
    if value.lstrip().startswith("{"):
        return json.loads(value)
    with open(value) as fh:
        return json.load(fh)


def _cmd_ldim(args) -> int:
    cls = FiniteClass.from_config(_load_spec(args.class_file))
    d = ldim(cls)
    print(f"hypotheses: {len(cls)}")
    print(f"domain:     {len(cls.domain)} points")
    print(f"ldim:       {d}")
    if args.witness and d >= 1:
        witness = shattered_tree_witness(cls, d)
        print(f"witness points (level order): "
              f"{[format_point(p) for p in witness.points]}")
        for labeling in sorted(witness.realizers):
            print(f"  labeling {''.join(map(str, labeling))} -> "
                  f"hypothesis {witness.realizers[labeling]}")
    return 0


def _cmd_play(args) -> int:
    trace, learner = runner.play_config(
        _load_spec(args.learner), _load_spec(args.nature), args.T, seed=args.seed)
    print(f"rounds:   {len(trace)}")
    print(f"mistakes: {trace.mistakes}")
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(runner.trace_to_csv(trace))
        print(f"trace written to {args.csv}")
    return 0


def _cmd_regret(args) -> int:
    config = _load_spec(args.config)
    curve = runner.regret_experiment_from_config(config)
    header = f"{'T':>6} {'trials':>7} {'mean':>10} {'se':>8}"
    if curve.bounds is not None:
        header += f" {'bound':>10}"
    print(header)
    for row in curve.rows():
        line = f"{row['T']:>6} {row['trials']:>7} {row['mean']:>10.3f} {row['se']:>8.3f}"
        if "bound" in row:
            line += f" {row['bound']:>10.2f}"
        print(line)
    return 0


def _cmd_verify(args) -> int:
    report = verification.run_report(args.suite, args.seed)
    for line in report.lines():
        print(line)
    return 0 if report.all_passed else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="nuolab",
        description="Non-uniform online learning laboratory")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ldim", help="dimension of an explicit class file")
    p.add_argument("class_file")
    p.add_argument("--witness", action="store_true",
                   help="also print a maximal shattered tree")
    p.set_defaults(fn=_cmd_ldim)

    p = sub.add_parser("play", help="run one game")
    p.add_argument("--learner", required=True, help="spec file or inline JSON")
    p.add_argument("--nature", required=True, help="spec file or inline JSON")
    p.add_argument("-T", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", help="write the trace as CSV")
    p.set_defaults(fn=_cmd_play)

    p = sub.add_parser("regret", help="Monte-Carlo regret experiment")
    p.add_argument("--config", required=True)
    p.set_defaults(fn=_cmd_regret)

    p = sub.add_parser("verify", help="run the bound-verification suite")
    p.add_argument("--suite", choices=("default", "full"), default="default")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_verify)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
