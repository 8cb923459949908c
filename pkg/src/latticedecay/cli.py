"""Command-line interface.

Exit codes: 0 success, 1 configuration error, 2 numeric failure
(integration/truncation/convergence), 3 declared tolerance exceeded.
"""

from __future__ import annotations

import argparse
import sys

from . import experiments
from .experiments import ConfigError, ExperimentConfig, ToleranceError
from .model import ProfileError
from .propagator import IntegrationError, TruncationError

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERIC = 2
EXIT_TOLERANCE = 3


def _add_common_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--config", metavar="PATH",
                        help="key-value config file; flags override")
    parser.add_argument("--delta", type=float)
    parser.add_argument("--profile",
                        help="sudden | linear | custom:<path>")
    parser.add_argument("--rise-time", type=float, dest="rise_time")
    parser.add_argument("--initial-site", type=int, dest="initial_site")
    parser.add_argument("--t-max", type=float, dest="t_max")
    parser.add_argument("--step", type=float)
    parser.add_argument("--out", metavar="DIR")
    parser.add_argument("--format", choices=experiments.FORMATS)
    parser.add_argument("--tolerance-profile", dest="tolerance_profile",
                        choices=experiments.TOLERANCE_PROFILES)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latticedecay",
        description="Decay of a defect site on a semi-infinite chain "
                    "under switched coupling: TDSE, exact series, regime "
                    "analysis, and figure reproduction.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in [
        ("propagate", "integrate the TDSE and write P(t)"),
        ("analytic", "Bessel-series survival probability vs TDSE"),
        ("regimes", "exponential/asymptotic decomposition and sums"),
        ("diagrams", "diagram-count table: formula vs brute force"),
        ("identities", "exact identity sweep and memory-sum check"),
    ]:
        p = sub.add_parser(name, help=help_text)
        _add_common_flags(p)

    p = sub.add_parser("reproduce", help="figure-reproduction presets")
    p.add_argument("preset", choices=experiments.PRESETS)
    _add_common_flags(p)

    p = sub.add_parser("sweep", help="concurrent linear-rise sweep")
    p.add_argument("--rise-times", required=True, dest="rise_times",
                   help="comma-separated rise times, e.g. 0.5,1,2")
    _add_common_flags(p)
    return parser


def _build_config(args: argparse.Namespace) -> ExperimentConfig:
    overrides = {}
    for key in ("delta", "profile", "rise_time", "initial_site",
                "t_max", "step", "out", "format", "tolerance_profile"):
        val = getattr(args, key, None)
        if val is not None:
            overrides[key] = val
    if args.config:
        return experiments.load_config_file(args.config, overrides)
    return experiments.config_from_strings(overrides)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _build_config(args)
        if args.command == "propagate":
            result = experiments.run_propagate(config)
        elif args.command == "analytic":
            result = experiments.run_analytic(config)
        elif args.command == "regimes":
            result = experiments.run_regimes(config)
        elif args.command == "diagrams":
            result = experiments.run_diagrams(config)
        elif args.command == "identities":
            result = experiments.run_identities(config)
        elif args.command == "reproduce":
            result = experiments.reproduce(args.preset, config)
        else:
            rise_times = [t for t in args.rise_times.split(",") if t]
            try:
                rise_times = [float(t) for t in rise_times]
            except ValueError as exc:
                raise ConfigError(f"bad rise time list: {exc}") from exc
            result = experiments.run_sweep(config, rise_times)
    except (ConfigError, ProfileError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ToleranceError as exc:
        print(f"tolerance exceeded: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE
    except (IntegrationError, TruncationError, FloatingPointError,
            ArithmeticError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for path in result.files:
        print(path)
    for key, val in sorted(result.deviations.items()):
        print(f"# deviation {key} = {val:.6g}")
    for key, val in sorted(result.fits.items()):
        print(f"# fit {key} = {val}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
