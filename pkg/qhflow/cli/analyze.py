import argparse

from qhflow.cli.render import emit, render_analysis
from qhflow.config import Settings
from qhflow.dependencies import add_weights_option, given_weights, read_document
from qhflow.services.analysis import analyze, build_report
from qhflow.services.parsing import load_field


def register(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "analyze",
        parents=parents,
        help="Classify a field and describe its phase portrait",
    )
    parser.add_argument("file", help="JSON or EXPR field document, '-' for stdin")
    add_weights_option(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, settings: Settings) -> int:
    """Exit 0 for stable, 3 for unstable in its family, 4 for the radial field."""
    field = load_field(read_document(args.file, given_weights(args)))
    analysis = analyze(field, settings)
    emit(build_report(analysis), settings.output_format, render_analysis)
    return analysis.exit_code
