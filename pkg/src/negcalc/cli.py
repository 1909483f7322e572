"""Command-line entry point: ``negcalc run`` and ``negcalc invariants``.

Exit status: 0 success, 2 invalid configuration, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import tolerances
from .errors import ConfigError, SingularityError
from .experiments import EXPERIMENTS, FORMATS, NumericalFailure, RunConfig, dumps, locate_kink, run_sweep

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


def _parse_param(text: str) -> tuple[str, str]:
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    return key.strip(), value.strip()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="negcalc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="sweep an experiment and write its data file")
    run.add_argument("--experiment", required=True, choices=EXPERIMENTS)
    run.add_argument("--param", action="append", default=[], type=_parse_param, metavar="KEY=VALUE")
    run.add_argument("--out", type=Path, help="output file (required except for invariants)")
    run.add_argument("--format", choices=FORMATS, help="defaults to the --out suffix, else csv")
    run.add_argument("--figure", nargs="?", const=True, default=None, metavar="PNG",
                     help="also render a figure (default path: --out with .png suffix)")
    run.add_argument("--kinks", action="store_true", help="print located d1 kinks to stdout")

    inv = sub.add_parser("invariants", help="run the randomized property suite")
    inv.add_argument("--seed", type=int, default=0)
    inv.add_argument("--samples", type=int, default=20)
    return parser


def _invariants(seed: int, samples: int) -> int:
    from .invariants import run_invariants

    if samples < 1:
        raise ConfigError("--samples must be >= 1")
    results = run_invariants(seed, samples)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name}: {r.detail}")
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} invariants hold")
    return EXIT_OK if failed == 0 else EXIT_NUMERIC


def _run(args) -> int:
    params = dict(args.param)
    if args.experiment == "invariants":
        return _invariants(int(params.get("seed", 0)), int(params.get("samples", 20)))
    if args.out is None:
        raise ConfigError("--out is required")
    fmt = args.format or ("json" if args.out.suffix.lower() == ".json" else "csv")
    cfg = RunConfig(args.experiment, params, args.out, fmt)
    meta, records = run_sweep(cfg)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(dumps(meta, records, fmt), encoding="utf-8")
    print(f"wrote {len(records)} records to {args.out}")
    if args.kinks:
        print("kinks:", " ".join(repr(k) for k in locate_kink(records)) or "none")
    if args.figure is not None:
        from .plotting import write_sweep_figure

        target = args.out.with_suffix(".png") if args.figure is True else Path(args.figure)
        print(f"wrote figure {write_sweep_figure(meta, records, target)}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        tolerances.set_tolerances(tolerances.from_env())
    except ValueError as exc:
        print(f"negcalc: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.command == "invariants":
            return _invariants(args.seed, args.samples)
        return _run(args)
    except ConfigError as exc:
        print(f"negcalc: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalFailure, SingularityError) as exc:
        print(f"negcalc: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    raise SystemExit(main())
