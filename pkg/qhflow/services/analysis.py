"""The analysis pipeline shared by the commands."""

from __future__ import annotations

from dataclasses import dataclass

import structlog

from qhflow.config import Settings, get_settings
from qhflow.core.exceptions import DegenerateRadialError, NotStableError, QHFlowError
from qhflow.schemas import analysis as schemas
from qhflow.services.field_core import (
    EtaData,
    MembershipReport,
    QHField,
    check_membership,
    compute_eta,
)
from qhflow.services.geometry import (
    InfinitySingularity,
    InvariantCurve,
    SectorDecomposition,
    SingularityKind,
    circle_integral,
    infinite_singularities,
    invariant_curves,
    origin_sectors,
)
from qhflow.services.parsing import field_document
from qhflow.services.sequences import (
    SignSequence,
    are_equivalent,
    canonical_form,
    sign_sequence,
)
from qhflow.services.stability import (
    NormalForm,
    Portrait,
    ReturnIntegral,
    StabilityVerdict,
    ThetaMembership,
    Verdict,
    classify,
    normal_form,
    theta_membership,
)

logger = structlog.get_logger()

EXIT_CODES = {
    Verdict.STABLE: 0,
    Verdict.UNSTABLE_IN_FAMILY: NotStableError.exit_code,
    Verdict.DEGENERATE_RADIAL: DegenerateRadialError.exit_code,
}


@dataclass(frozen=True)
class FieldAnalysis:
    field: QHField
    eta: EtaData
    membership: MembershipReport
    theta: ThetaMembership
    verdict: StabilityVerdict
    normal_form: NormalForm | None = None
    singularities: tuple[InfinitySingularity, ...] = ()
    curves: tuple[InvariantCurve, ...] = ()
    sectors: SectorDecomposition | None = None
    sequence: SignSequence | None = None
    circle: ReturnIntegral | None = None

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.verdict.verdict]


def analyze(X: QHField, settings: Settings | None = None) -> FieldAnalysis:
    """Classify X and collect its geometry."""
    settings = settings or get_settings()
    eta = compute_eta(X)
    membership = check_membership(X.w)
    theta = theta_membership(X.w)
    verdict = classify(X, eta, settings)
    base = FieldAnalysis(X, eta, membership, theta, verdict)
    if verdict.verdict is Verdict.DEGENERATE_RADIAL:
        return base

    try:
        form = normal_form(X, eta)
    except QHFlowError as exc:
        logger.debug("normal_form_unavailable", reason=str(exc))
        form = None

    points = infinite_singularities(X, eta)
    sectors = None
    if points and all(point.kind is not SingularityKind.SADDLE_NODE for point in points):
        sectors = origin_sectors(points)

    circle = None
    if verdict.integral is not None:
        circle = circle_integral(X, settings=settings)

    sequence = None
    if verdict.is_stable and verdict.portrait is Portrait.SECTORED:
        sequence = sign_sequence(X, points)

    logger.info(
        "field_analyzed",
        w=str(X.w),
        verdict=verdict.verdict,
        portrait=verdict.portrait,
        points=len(points),
    )
    return FieldAnalysis(
        X,
        eta,
        membership,
        theta,
        verdict,
        normal_form=form,
        singularities=tuple(points),
        curves=tuple(invariant_curves(X, eta)),
        sectors=sectors,
        sequence=sequence,
        circle=circle,
    )


def _singularity(point: InfinitySingularity) -> schemas.SingularityReport:
    return schemas.SingularityReport(
        chart=point.chart,
        root=point.root.describe() if point.root else None,
        approx=point.root.approx if point.root else None,
        kind=point.kind,
        sigma=point.sigma_sign,
        nu=point.nu_sign,
        multiplicity=point.multiplicity,
    )


def _integral(integral: ReturnIntegral) -> schemas.IntegralReport:
    return schemas.IntegralReport(
        value=integral.value,
        sign=integral.sign,
        error_bound=integral.error_bound,
        ambiguous=integral.ambiguous,
        certified_center=integral.certified_center,
        reversible=integral.reversible,
    )


def build_report(analysis: FieldAnalysis) -> schemas.AnalysisReport:
    verdict = analysis.verdict
    integral = verdict.integral
    form = analysis.normal_form
    return schemas.AnalysisReport(
        weights=str(analysis.field.w),
        field=field_document(analysis.field),
        membership=schemas.MembershipReport(
            nonempty=analysis.membership.nonempty,
            k1=analysis.membership.k1,
            k2=analysis.membership.k2,
        ),
        theta=schemas.ThetaReport(
            in_theta=list(analysis.theta.in_theta),
            labels=analysis.theta.labels,
            r=analysis.theta.r,
        ),
        verdict=verdict.verdict,
        portrait=verdict.portrait,
        reasons=[str(reason) for reason in verdict.reasons],
        integral=_integral(integral) if integral else None,
        circle_integral=_integral(analysis.circle) if analysis.circle else None,
        normal_form=schemas.NormalFormReport(
            case=form.case,
            r=form.r,
            boundary=list(form.boundary),
            soft_zero_corners=list(form.soft_zero_corners),
        )
        if form
        else None,
        singularities=[_singularity(point) for point in analysis.singularities],
        invariant_curves=len(analysis.curves),
        sectors=schemas.SectorReport(
            sectors=[str(kind) for kind in analysis.sectors.sectors],
            separatrix_count=analysis.sectors.separatrix_count,
        )
        if analysis.sectors
        else None,
        sequence=str(analysis.sequence) if analysis.sequence else None,
    )


@dataclass(frozen=True)
class Equivalence:
    equivalent: bool
    basis: str
    left: str
    right: str


def _invariant(analysis: FieldAnalysis) -> str:
    if analysis.sequence is not None:
        return str(analysis.sequence)
    return str(analysis.verdict.portrait)


def compare(left: FieldAnalysis, right: FieldAnalysis) -> Equivalence:
    """Topological equivalence of two stable fields."""
    for side in (left, right):
        if not side.verdict.is_stable:
            raise NotStableError(f"{side.field} is {side.verdict.verdict}")

    a, b = left.sequence, right.sequence
    if a is None or b is None:
        equivalent = a is None and b is None and left.verdict.portrait == right.verdict.portrait
        return Equivalence(equivalent, "FOCUS", _invariant(left), _invariant(right))

    if len(a) != len(b):
        equivalent = False
    elif a.parity_case == b.parity_case:
        equivalent = are_equivalent(a, b)
    else:
        equivalent = canonical_form(a) == canonical_form(b)
    return Equivalence(equivalent, "SEQUENCE", str(a), str(b))
