from pydantic import BaseModel, Field

from qhflow.schemas.field import FieldDocument


class MembershipReport(BaseModel):
    """Whether H_pqm has fields at all."""

    nonempty: bool = Field(..., description="Both P and Q have available monomials")
    k1: int = Field(..., description="Monomials available to P")
    k2: int = Field(..., description="Monomials available to Q")


class ThetaReport(BaseModel):
    in_theta: list[bool] = Field(..., description="Θ1..Θ4 membership")
    labels: list[str] = Field(..., description="Names of the Θ sets that hold")
    r: int | None = Field(None, description="Common solution r, if any")


class IntegralReport(BaseModel):
    value: float = Field(..., description="Oriented return integral")
    sign: int = Field(..., description="Sign, 0 when ambiguous")
    error_bound: float = Field(..., description="Quadrature error estimate")
    ambiguous: bool = Field(..., description="Value within tolerance of zero")
    certified_center: bool = Field(False, description="Integrand is exactly odd")
    reversible: bool = Field(False, description="Field is reversed by a reflection")


class NormalFormReport(BaseModel):
    case: str = Field(..., description="Normal form case A-D")
    r: int = Field(..., description="Solution of the matching Θ equation")
    boundary: list[bool] = Field(..., description="η(0,1) != 0 and η(1,0) != 0")
    soft_zero_corners: list[str] = Field(
        default_factory=list, description="Printed corner coefficients that are zero"
    )


class SingularityReport(BaseModel):
    chart: str = Field(..., description="Chart the point lies in")
    root: str | None = Field(None, description="Exact root or isolating interval")
    approx: float | None = Field(None, description="Root as a float")
    kind: str = Field(..., description="Saddle, node or saddle-node")
    sigma: int = Field(..., description="Sign of the angular eigenvalue")
    nu: int = Field(..., description="Sign of the radial eigenvalue")
    multiplicity: int = Field(1, description="Multiplicity of the root")


class SectorReport(BaseModel):
    sectors: list[str] = Field(..., description="Origin sectors in equator order")
    separatrix_count: int = Field(..., description="Directions bounding a hyperbolic sector")


class AnalysisReport(BaseModel):
    """Full analysis of one field."""

    weights: str = Field(..., description="Normalized (p,q,m)")
    field: FieldDocument = Field(..., description="Normalized field")
    membership: MembershipReport
    theta: ThetaReport
    verdict: str = Field(..., description="STABLE, UNSTABLE_IN_FAMILY or DEGENERATE_RADIAL")
    portrait: str | None = Field(None, description="Global portrait type")
    reasons: list[str] = Field(default_factory=list, description="Why the field is not stable")
    integral: IntegralReport | None = None
    circle_integral: IntegralReport | None = Field(
        None, description="Return integral over one full turn of the trig functions"
    )
    normal_form: NormalFormReport | None = None
    singularities: list[SingularityReport] = Field(default_factory=list)
    invariant_curves: int = Field(0, description="Invariant curves through the origin")
    sectors: SectorReport | None = None
    sequence: str | None = Field(None, description="Sign sequence when stable and sectored")


class ComponentSummary(BaseModel):
    m: int = Field(..., description="Degree of the component")
    P_terms: int = Field(..., description="Number of terms in P_m")
    Q_terms: int = Field(..., description="Number of terms in Q_m")


class DecompositionReport(BaseModel):
    """Quasihomogeneous split of a general polynomial field."""

    end: str = Field(..., description="ORIGIN or INFINITY")
    weights: str = Field(..., description="(p,q) used for the split")
    components: list[ComponentSummary]
    dominant_m: int = Field(..., description="Degree of the component that decides the end")
    applicable: bool = Field(..., description="Dominant component is structurally stable")
    message: str
    analysis: AnalysisReport | None = None
