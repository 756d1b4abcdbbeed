import argparse
import sys
from pathlib import Path

from qhflow.config import Settings
from qhflow.schemas.field import FieldDocument
from qhflow.services.parsing import parse_field

# Flag name -> Settings field
_SETTING_FLAGS = {
    "tol": "tol",
    "r_bound": "r_bound",
    "size": "plot_size",
    "trajectories": "plot_trajectories",
    "format": "output_format",
    "log_level": "log_level",
    "log_format": "log_format",
}


def build_settings(args: argparse.Namespace) -> Settings:
    """Settings from the flags that were given on the command line."""
    overrides = {
        field: getattr(args, flag)
        for flag, field in _SETTING_FLAGS.items()
        if getattr(args, flag, None) is not None
    }
    return Settings(**overrides)


def read_text(path: str) -> str:
    """Contents of ``path``; "-" reads stdin."""
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def read_document(path: str, weights: tuple[int, int] | None = None) -> FieldDocument:
    return parse_field(read_text(path), weights=weights)


def add_weights_option(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--weights",
        type=int,
        nargs=2,
        metavar=("P", "Q"),
        default=None,
        help="Weights for documents without p and q, overriding any they give",
    )


def given_weights(args: argparse.Namespace) -> tuple[int, int] | None:
    return tuple(args.weights) if args.weights else None
