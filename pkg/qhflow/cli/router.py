import argparse

from qhflow.cli import analyze, construct, count, decompose, equiv, plot

COMMANDS = (analyze, count, construct, equiv, decompose, plot)


def _common_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--format", choices=["text", "json"], default=None)
    parent.add_argument("--tol", type=float, default=None, help="Return-integral tolerance")
    parent.add_argument("--log-level", default=None)
    parent.add_argument("--log-format", choices=["console", "json"], default=None)
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qhflow",
        description="Structural stability and phase portraits of planar "
        "quasihomogeneous polynomial vector fields.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    parents = [_common_options()]
    for command in COMMANDS:
        command.register(subparsers, parents)
    return parser
