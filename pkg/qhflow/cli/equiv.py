import argparse

from qhflow.cli.render import emit, render_equivalence
from qhflow.config import Settings
from qhflow.dependencies import add_weights_option, given_weights, read_document
from qhflow.schemas.counting import EquivalenceReport
from qhflow.services.analysis import analyze, compare
from qhflow.services.parsing import load_field

INEQUIVALENT_EXIT = 1


def register(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "equiv",
        parents=parents,
        help="Decide topological equivalence of two stable fields",
    )
    parser.add_argument("file1")
    parser.add_argument("file2")
    add_weights_option(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, settings: Settings) -> int:
    left = analyze(load_field(read_document(args.file1, given_weights(args))), settings)
    right = analyze(load_field(read_document(args.file2, given_weights(args))), settings)
    result = compare(left, right)
    report = EquivalenceReport(
        equivalent=result.equivalent,
        basis=result.basis,
        left=result.left,
        right=result.right,
    )
    emit(report, settings.output_format, render_equivalence)
    return 0 if result.equivalent else INEQUIVALENT_EXIT
