"""Command-line experiment runner.

Exit codes: 0 success, 2 configuration error, 3 numerical failure (e.g.
no interference range anywhere in a sweep).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .experiments import (ConfigFileError, figure_preset, load_config,
                          run_experiment, rows_to_csv, spec_to_config,
                          write_csv)
from .model import NoInterferenceRange

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mmwmac",
                                description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, needs_config=True):
        if needs_config:
            sp.add_argument("--config", required=True, help="YAML experiment config")
        sp.add_argument("--seed", type=int, default=None, help="override RNG seed")
        sp.add_argument("--out", default=None, help="CSV output path (default stdout)")
        sp.add_argument("--workers", type=int, default=1,
                        help="worker processes for sweep points")

    sp = sub.add_parser("analyze", help="closed-form metrics")
    common(sp)
    sp = sub.add_parser("mc", help="Monte Carlo estimates")
    common(sp)
    sp.add_argument("--trials", type=int, default=None)
    sp = sub.add_parser("sim", help="discrete-event simulation")
    common(sp)
    sp.add_argument("--duration", type=float, default=None, help="seconds")
    sp = sub.add_parser("sweep", help="run the config as written (engine from file)")
    common(sp)
    sp.add_argument("--trials", type=int, default=None)
    sp.add_argument("--duration", type=float, default=None)
    sp = sub.add_parser("figure", help="run a named figure preset")
    common(sp, needs_config=False)
    sp.add_argument("--figure", required=True, help="figure id, e.g. fig6")
    return p


def _emit(rows, specs, out: str | None) -> None:
    if out is None:
        sys.stdout.write(rows_to_csv(rows, [spec_to_config(s) for s in specs],
                                     specs[0].seed if specs else 0))
    else:
        write_csv(out, rows, specs)


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "figure":
            specs = figure_preset(args.figure,
                                  seed=args.seed if args.seed is not None else 1)
        else:
            spec = load_config(args.config)
            if args.command == "analyze":
                spec = replace(spec, engine="analytic")
            elif args.command == "mc":
                spec = replace(spec, engine="montecarlo")
            elif args.command == "sim":
                spec = replace(spec, engine="desim")
            if args.seed is not None:
                spec = replace(spec, seed=args.seed)
            if getattr(args, "trials", None) is not None:
                spec = replace(spec, trials=args.trials)
            if getattr(args, "duration", None) is not None:
                spec = replace(spec, duration_s=args.duration)
            specs = [spec]
    except (ConfigFileError, ValueError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        rows = []
        for spec in specs:
            rows.extend(run_experiment(spec, workers=args.workers))
    except NoInterferenceRange as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    out = args.out if args.out is not None else (specs[0].out if specs else None)
    _emit(rows, specs, out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
