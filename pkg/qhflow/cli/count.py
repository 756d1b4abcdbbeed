import argparse

from qhflow.cli.render import emit, render_count
from qhflow.config import Settings
from qhflow.schemas.counting import (
    ClassCountReport,
    Discrepancy,
    KCountRow,
    RepresentativeReport,
)
from qhflow.services.counting import (
    class_representatives,
    count_bruteforce,
    count_formula,
    discrepancies,
)
from qhflow.services.field_core import normalize_weights
from qhflow.services.parsing import field_document
from qhflow.services.stability import theta_membership


def register(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "count",
        parents=parents,
        help="Count equivalence classes of stable fields in H_pqm",
    )
    parser.add_argument("p", type=int)
    parser.add_argument("q", type=int)
    parser.add_argument("m", type=int)
    parser.add_argument(
        "--brute-force",
        action="store_true",
        help="Also enumerate sign sequences and compare",
    )
    parser.add_argument("--r-bound", type=int, default=None, help="Largest r to enumerate")
    parser.add_argument(
        "--representatives",
        action="store_true",
        help="Construct one field per class",
    )
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, settings: Settings) -> int:
    w = normalize_weights(args.p, args.q, args.m)
    formula = count_formula(w)
    rows = [KCountRow(k=row.k, D=row.D, E=row.E, C=row.C) for row in formula.per_k.values()]
    report = ClassCountReport(
        weights=str(w),
        r=formula.r,
        theta=theta_membership(w).labels,
        c0=formula.c0,
        rows=rows,
        total=formula.total,
        closed_form=str(formula.closed_form),
    )

    if args.brute_force:
        oracle = count_bruteforce(w, settings)
        for row in report.rows:
            found = oracle.per_k[row.k]
            row.oracle_D, row.oracle_E, row.oracle_C = found.D, found.E, found.C
            row.match = (row.D, row.E, row.C) == (found.D, found.E, found.C)
        report.oracle_total = oracle.total
        report.discrepancies = [
            Discrepancy(
                kind=item.kind,
                regime=item.regime,
                k=item.k,
                printed=str(item.printed),
                observed=str(item.observed),
            )
            for item in discrepancies(w, settings)
        ]

    if args.representatives:
        report.representatives = [
            RepresentativeReport(
                k=rep.k,
                sequence=str(rep.sequence) if rep.sequence else None,
                field=field_document(rep.field),
            )
            for rep in class_representatives(w, settings)
        ]

    emit(report, settings.output_format, render_count)
    return 0
