"""Command-line surface: gen / run / sweep / report subcommands."""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

import numpy as np

from . import games, harness
from .errors import DuelRankError

CONFIG_FLAGS = [
    ("--algo", str), ("--game", str), ("--n", int), ("--T", int),
    ("--tau", int), ("--gamma", float), ("--gamma-mode", str),
    ("--alpha", float), ("--eta0", float), ("--k", int), ("--melo", str),
    ("--delta", float), ("--lambda-ridge", float), ("--ridge", float),
    ("--c1", float), ("--clip-eps", float), ("--seed", int),
    ("--matrix-seed", int), ("--replicates", int), ("--matrix", str),
    ("--ks", str), ("--out", str), ("--workers", int),
]


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value config file ('#' comments)")
    for flag, typ in CONFIG_FLAGS:
        p.add_argument(flag, type=typ, default=None,
                       dest=flag[2:].replace("-", "_"))


def _overrides(args: argparse.Namespace) -> dict:
    keys = [f[0][2:].replace("-", "_") for f in CONFIG_FLAGS]
    return {k: getattr(args, k) for k in keys if getattr(args, k) is not None}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="duelrank",
        description="Online match scheduling for Elo/mElo rating estimation.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="write a win-probability matrix CSV")
    p_gen.add_argument("--game", default="elo",
                       choices=["elo", "noisy_elo", "triangular", "cyclic"])
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--rating-scale", type=float, default=1.0)
    p_gen.add_argument("--noise", type=float, default=0.0)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", required=True)

    p_run = sub.add_parser("run", help="simulate one configuration")
    _add_config_flags(p_run)

    p_sweep = sub.add_parser("sweep", help="grid of configurations")
    _add_config_flags(p_sweep)
    p_sweep.add_argument("--grid", action="append", default=[],
                         metavar="KEY=V1,V2,...",
                         help="sweep values for one config key (repeatable)")

    p_rep = sub.add_parser("report", help="summarize existing trace CSVs")
    p_rep.add_argument("--traces", nargs="+", required=True)
    p_rep.add_argument("--out", help="summary JSON path (default: stdout)")
    return parser


def cmd_gen(args) -> int:
    if args.game == "elo":
        m = games.gen_elo_game(args.n, args.rating_scale, args.seed)
    elif args.game == "noisy_elo":
        m = games.gen_noisy_elo_game(args.n, args.rating_scale, args.noise,
                                     args.seed)
    elif args.game == "triangular":
        m = games.gen_triangular(args.n)
    else:
        m = games.gen_cyclic(args.n)
    np.savetxt(args.out, m.p, delimiter=",", fmt="%.17g")
    return 0


def cmd_run(args) -> int:
    cfg = harness.parse_config(args.config, _overrides(args))
    traces, summary = harness.simulate(cfg)
    if cfg.out:
        harness.report(traces, summary, cfg.out)
    else:
        json.dump(summary.stats(), sys.stdout, indent=2)
        sys.stdout.write("\n")
    return 0


def _parse_grid(specs: list[str], field_types: dict) -> dict:
    grid: dict[str, list] = {}
    for spec in specs:
        if "=" not in spec:
            raise DuelRankError(f"bad --grid spec: {spec!r}")
        key, raw = spec.split("=", 1)
        typ = field_types.get(key)
        if typ is None:
            raise DuelRankError(f"unknown sweep key: {key}")
        grid[key] = [harness._convert(key, v, typ)
                     for v in raw.split(",") if v.strip()]
    return grid


def cmd_sweep(args) -> int:
    cfg = harness.parse_config(args.config, _overrides(args))
    grid = _parse_grid(args.grid, harness._field_types())
    results = harness.sweep(cfg, grid)
    payload = json.dumps(results, indent=2) + "\n"
    if cfg.out:
        with open(f"{cfg.out}.sweep.json", "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
    return 0


def cmd_report(args) -> int:
    """Rebuild a summary from final trace rows."""
    finals = {"final_cum_regret": [], "final_rr": [], "final_hr": [],
              "final_ndcg": [], "traces": list(args.traces)}
    for path in args.traces:
        trace = harness.read_trace_csv(path)
        last = trace.rows[-1]
        finals["final_cum_regret"].append(last.cum_regret)
        finals["final_rr"].append(last.rr)
        finals["final_hr"].append(list(last.hr))
        finals["final_ndcg"].append(list(last.ndcg))
    finals["cum_regret_mean"] = float(np.mean(finals["final_cum_regret"]))
    finals["rr_mean"] = float(np.mean(finals["final_rr"]))
    payload = json.dumps(finals, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "gen":
            return cmd_gen(args)
        if args.command == "run":
            return cmd_run(args)
        if args.command == "sweep":
            return cmd_sweep(args)
        return cmd_report(args)
    except (DuelRankError, OSError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        key = getattr(exc, "key", None)
        if key:
            err["key"] = key
        sys.stderr.write(json.dumps(err) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
