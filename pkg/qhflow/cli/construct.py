import argparse

from qhflow.config import Settings
from qhflow.services.field_core import normalize_weights
from qhflow.services.parsing import field_document, render_document
from qhflow.services.sequences import construct_representative, parse_sequence


def register(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "construct",
        parents=parents,
        help="Build a stable field realizing a sign sequence",
    )
    parser.add_argument("p", type=int)
    parser.add_argument("q", type=int)
    parser.add_argument("m", type=int)
    parser.add_argument("--sequence", required=True, help='Pairs (σ,ν) such as "--,++,--,++"')
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, settings: Settings) -> int:
    """Always prints a JSON field document, whatever the output format."""
    w = normalize_weights(args.p, args.q, args.m)
    field = construct_representative(parse_sequence(args.sequence), w)
    print(render_document(field_document(field)))
    return 0
