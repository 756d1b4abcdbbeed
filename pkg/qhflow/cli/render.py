"""Human-readable renderings of the report schemas."""

from pydantic import BaseModel

from qhflow.schemas.analysis import AnalysisReport, DecompositionReport
from qhflow.schemas.counting import ClassCountReport, EquivalenceReport

_PORTRAIT_TEXT = {
    "GLOBAL_CENTER": "global center",
    "GLOBAL_STABLE_FOCUS": "global stable focus",
    "GLOBAL_UNSTABLE_FOCUS": "global unstable focus",
    "SECTORED": "finite sectors at the origin",
}


def _sign(value: int) -> str:
    return "+" if value > 0 else "-"


def render_json(report: BaseModel) -> str:
    return report.model_dump_json(indent=2, by_alias=True)


def render_analysis(report: AnalysisReport) -> str:
    lines = [f"weights    {report.weights}"]
    field = report.field
    lines.append(f"terms      P: {len(field.P_terms)}  Q: {len(field.Q_terms)}")
    membership = report.membership
    state = "nonempty" if membership.nonempty else "empty"
    lines.append(f"family     H {state} (k1={membership.k1}, k2={membership.k2})")
    theta = ", ".join(report.theta.labels) or "none"
    r = report.theta.r if report.theta.r is not None else "-"
    lines.append(f"theta      {theta}; r = {r}")
    lines.append(f"verdict    {report.verdict}")
    if report.portrait:
        lines.append(f"portrait   {report.portrait} ({_PORTRAIT_TEXT[report.portrait]})")
    if report.reasons:
        lines.append(f"reasons    {', '.join(report.reasons)}")
    if report.integral:
        integral = report.integral
        certified = ", certified center" if integral.certified_center else ""
        lines.append(
            f"integral   {integral.value:.10f} (sign {integral.sign:+d}, "
            f"error {integral.error_bound:.1e}{certified})"
        )
    if report.circle_integral:
        circle = report.circle_integral
        reversible = ", reversible" if circle.reversible else ""
        lines.append(f"circle     {circle.value:.10f} (sign {circle.sign:+d}{reversible})")
    if report.normal_form:
        form = report.normal_form
        lines.append(f"normal     case {form.case}, r = {form.r}")
        if form.soft_zero_corners:
            lines.append(f"           zero corners: {', '.join(form.soft_zero_corners)}")
    lines.append(f"points     {len(report.singularities)}")
    for point in report.singularities:
        root = point.root or ("+inf" if point.chart == "Y_POS" else "-inf")
        lines.append(
            f"  {point.chart:<6} {root:<24} {point.kind:<14} "
            f"sigma={_sign(point.sigma)} nu={_sign(point.nu)}"
        )
    lines.append(f"curves     {report.invariant_curves}")
    if report.sectors:
        sectors = ", ".join(report.sectors.sectors)
        lines.append(f"sectors    {sectors} ({report.sectors.separatrix_count} separatrices)")
    if report.sequence:
        lines.append(f"sequence   {report.sequence}")
    return "\n".join(lines)


def render_count(report: ClassCountReport) -> str:
    theta = ", ".join(report.theta)
    lines = [f"weights {report.weights}  r = {report.r}  {theta}"]
    oracle = report.oracle_total is not None
    header = f"{'k':>4} {'D':>6} {'E':>6} {'C':>6}"
    if oracle:
        header += f" {'D*':>6} {'E*':>6} {'C*':>6}  match"
    lines.append(header)
    for row in report.rows:
        line = f"{row.k:>4} {row.D:>6} {row.E:>6} {row.C:>6}"
        if oracle:
            verdict = "yes" if row.match else "NO"
            line += f" {row.oracle_D:>6} {row.oracle_E:>6} {row.oracle_C:>6}  {verdict}"
        lines.append(line)
    lines.append(f"c0 = {report.c0}")
    lines.append(f"total = {report.total}  (closed form {report.closed_form})")
    if oracle:
        lines.append(f"oracle total = {report.oracle_total}")
    for item in report.discrepancies:
        k = f" k={item.k}" if item.k is not None else ""
        lines.append(
            f"DISCREPANCY {item.kind}{k} printed={item.printed} "
            f"oracle={item.observed} ({item.regime})"
        )
    for rep in report.representatives:
        label = rep.sequence or "focus"
        lines.append(f"representative k={rep.k} {label}")
        lines.append(rep.field.model_dump_json(by_alias=True))
    return "\n".join(lines)


def render_equivalence(report: EquivalenceReport) -> str:
    verdict = "equivalent" if report.equivalent else "inequivalent"
    return f"{verdict}\n  {report.left}\n  {report.right}"


def render_decomposition(report: DecompositionReport) -> str:
    parts = ", ".join(f"m={c.m}" for c in report.components)
    lines = [
        f"end        {report.end}",
        f"weights    {report.weights}",
        f"components {parts}",
        f"dominant   m={report.dominant_m}",
        report.message,
    ]
    if report.analysis:
        lines.append(render_analysis(report.analysis))
    return "\n".join(lines)


def emit(report: BaseModel, output_format: str, text_renderer) -> None:
    """Write a report to stdout in the configured format."""
    print(render_json(report) if output_format == "json" else text_renderer(report))
