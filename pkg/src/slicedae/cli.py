"""Command-line entry points: gen-data, train, eval, distance."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .config import RunConfig, load_config
from .data import gen_synthetic, load_points_csv, save_points_csv
from .metrics import CSV_HEADER, mardia_kurtosis, mardia_skewness
from .slicer import DistanceKind, sample_directions, sliced_distance, sliced_pairwise_sw
from .train import evaluate_run, train


def _parse_pairs(pairs, what):
    out = {}
    for item in pairs or ():
        if "=" not in item:
            raise ValueError(f"{what} expects key=value, got {item!r}")
        key, _, value = item.partition("=")
        out[key.strip()] = value.strip()
    return out


def _cmd_gen_data(args) -> int:
    params = {}
    for key, value in _parse_pairs(args.param, "--param").items():
        params[key] = int(value) if key in ("dim", "components") else float(value)
    ds = gen_synthetic(args.kind, args.count, args.seed, **params)
    points = np.vstack([ds.train, ds.test])
    save_points_csv(args.out, points)
    print(f"wrote {points.shape[0]} points of dimension {points.shape[1]} to {args.out}")
    return 0


def _cmd_train(args) -> int:
    overrides = _parse_pairs(args.set, "--set")
    if args.out_dir is not None:
        overrides["out_dir"] = args.out_dir
    if args.config:
        cfg = load_config(args.config, overrides)
    else:
        cfg = RunConfig.from_mapping(overrides)
    run_dir = train(cfg)
    print(f"run directory: {run_dir}")
    print((run_dir / "summary.txt").read_text(encoding="ascii"), end="")
    return 0


def _cmd_eval(args) -> int:
    row = evaluate_run(args.run_dir, checkpoint=args.checkpoint, seed=args.seed)
    print(CSV_HEADER)
    print(row.to_csv_line())
    return 0


def _cmd_distance(args) -> int:
    kind = DistanceKind.parse(args.kind)
    points = load_points_csv(args.file_a)
    rng = np.random.default_rng(np.random.SeedSequence(args.seed))
    dirs = sample_directions(args.k, points.shape[1], rng)
    if args.file_b is not None:
        if kind != DistanceKind.SW:
            raise ValueError("a second file only makes sense for the pairwise kind (sw)")
        other = load_points_csv(args.file_b)
        value = sliced_pairwise_sw(points, other, dirs)
    else:
        value, _ = sliced_distance(points, dirs, kind, rng=rng)
    print(f"kind={kind.value}")
    print(f"sliced_distance={value!r}")
    print(f"mardia_skewness={mardia_skewness(points)!r}")
    print(f"mardia_kurtosis_normalized={mardia_kurtosis(points, normalize=True)!r}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slicedae",
        description="Sliced normality penalties for autoencoder latents",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-data", help="generate a synthetic dataset CSV")
    p.add_argument("kind", choices=["gaussian_mixture", "ring", "checker"])
    p.add_argument("-n", "--count", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out", required=True)
    p.add_argument(
        "--param",
        action="append",
        metavar="KEY=VALUE",
        help="generator knob, e.g. --param components=5 (repeatable)",
    )
    p.set_defaults(func=_cmd_gen_data)

    p = sub.add_parser("train", help="run a configured training")
    p.add_argument("--config", help="key=value config file")
    p.add_argument(
        "--set",
        action="append",
        metavar="KEY=VALUE",
        help="override one config key (repeatable, wins over the file)",
    )
    p.add_argument("-o", "--out-dir", help="shortcut for --set out_dir=...")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("eval", help="recompute metrics from a saved checkpoint")
    p.add_argument("run_dir")
    p.add_argument("--checkpoint", help="explicit checkpoint path (default: final)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("distance", help="sliced distance of a CSV point set")
    p.add_argument("file_a")
    p.add_argument("--file-b", help="second point set (pairwise sw only)")
    p.add_argument("--kind", default="scfw")
    p.add_argument("-k", type=int, default=50, help="number of projections")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_distance)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
