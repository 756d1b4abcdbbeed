import argparse

from qhflow.cli.render import emit, render_decomposition
from qhflow.config import Settings
from qhflow.dependencies import read_document
from qhflow.schemas.analysis import ComponentSummary, DecompositionReport
from qhflow.services.analysis import analyze, build_report
from qhflow.services.decomposition import End, NotApplicable, QHComponent, decompose
from qhflow.services.parsing import document_polys


def register(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "decompose",
        parents=parents,
        help="Local portrait of a polynomial field from its dominant quasihomogeneous part",
    )
    parser.add_argument("file", help="Polynomial field document; its m is ignored")
    parser.add_argument("--p", type=int, required=True)
    parser.add_argument("--q", type=int, required=True)
    parser.add_argument(
        "--end",
        type=str.upper,
        choices=[end.value for end in End],
        default=End.ORIGIN.value,
    )
    parser.set_defaults(handler=run)


def _summaries(components: list[QHComponent]) -> list[ComponentSummary]:
    return [
        ComponentSummary(m=c.m, P_terms=len(c.P.terms), Q_terms=len(c.Q.terms)) for c in components
    ]


def run(args: argparse.Namespace, settings: Settings) -> int:
    """Exit 7 when the dominant part is not structurally stable."""
    document = read_document(args.file, weights=(args.p, args.q))
    P, Q = document_polys(document)
    end = End(args.end)
    weights = f"({args.p},{args.q})"
    try:
        result = decompose(P, Q, args.p, args.q, end, settings)
    except NotApplicable as exc:
        if exc.dominant is not None:
            report = DecompositionReport(
                end=end,
                weights=weights,
                components=_summaries(exc.components),
                dominant_m=exc.dominant.m,
                applicable=False,
                message=f"{exc}; local equivalence theorem inapplicable",
            )
            emit(report, settings.output_format, render_decomposition)
        raise

    analysis = analyze(result.field, settings)
    report = DecompositionReport(
        end=result.end,
        weights=weights,
        components=_summaries(result.components),
        dominant_m=result.dominant.m,
        applicable=True,
        message=(
            f"near the {result.end.lower()} the field is topologically equivalent "
            f"to its component X_{result.dominant.m}"
        ),
        analysis=build_report(analysis),
    )
    emit(report, settings.output_format, render_decomposition)
    return 0
