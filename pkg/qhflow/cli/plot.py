import argparse
from pathlib import Path

from qhflow.config import Settings
from qhflow.core.exceptions import NotStableError
from qhflow.dependencies import add_weights_option, given_weights, read_document
from qhflow.services.analysis import analyze
from qhflow.services.parsing import load_field
from qhflow.services.plotting import render_portrait


def register(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "plot",
        parents=parents,
        help="Write the phase portrait on the Poincaré–Lyapunov disk as SVG",
    )
    parser.add_argument("file")
    add_weights_option(parser)
    parser.add_argument("-o", "--out", required=True, help="SVG output path")
    parser.add_argument("--size", type=int, default=None, help="Width and height in pixels")
    parser.add_argument("--trajectories", type=int, default=None, help="Number of seeds")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, settings: Settings) -> int:
    analysis = analyze(load_field(read_document(args.file, given_weights(args))), settings)
    if not analysis.verdict.is_stable:
        raise NotStableError(f"only stable fields are plotted, got {analysis.verdict.verdict}")
    summary = render_portrait(
        analysis.field, list(analysis.singularities), Path(args.out), settings
    )
    print(f"wrote {summary.path} ({summary.points} points, {summary.trajectories} orbits)")
    return 0
