# app/interfaces/routers.py
"""
Argument parser of the command-line interface: one subparser per command,
sharing the same flags.
"""
import argparse
from typing import Optional, Sequence, Tuple

from app.interfaces.controllers.experiment_controller import COMMANDS, CliRequest

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")

_HELP = {
    "train": "train one network with full-batch gradient descent and certify it",
    "sweep": "step-size sweep over eta_grid x reps",
    "rate": "restricted-MSE rate experiment over n_grid",
    "counterexample": "min-norm interpolants of pure-noise labels over counterexample_n_grid",
    "interpolate": "second-layer min-norm interpolant on a frozen random first layer",
    "verify": "certify a stored params.json against the configured data",
    "basis": "per-neuron basis functions and knot sparsity of a stored params.json",
    "report": "flatten the run catalog of --out into report.csv",
}


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="FILE", help="YAML experiment configuration")
    parser.add_argument("--out", metavar="DIR", required=True, help="output directory")
    parser.add_argument(
        "--set", dest="overrides", metavar="KEY=VALUE", action="append", default=[],
        help="override one configuration key (repeatable)",
    )
    parser.add_argument("--plot", action="store_true", help="also render SVG figures")
    parser.add_argument("--workers", type=int, metavar="N", help="worker processes for studies")
    parser.add_argument("--log-level", default="INFO", choices=LOG_LEVELS, type=str.upper)
    parser.add_argument("--params", metavar="FILE", help="params.json for verify and basis")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relu-stability",
        description="Minima-stability experiments for two-layer univariate ReLU networks.",
    )
    commands = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)
    for name in COMMANDS:
        _add_common(commands.add_parser(name, help=_HELP[name], description=_HELP[name]))
    return parser


def parse_request(argv: Optional[Sequence[str]] = None) -> Tuple[CliRequest, str]:
    """Returns the request and the log level."""
    args = build_parser().parse_args(argv)
    request = CliRequest(
        command=args.command,
        out=args.out,
        config_path=args.config,
        overrides=tuple(args.overrides),
        plot=args.plot,
        workers=args.workers,
        params_path=args.params,
    )
    return request, args.log_level
