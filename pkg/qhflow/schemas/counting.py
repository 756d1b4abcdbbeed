from pydantic import BaseModel, Field

from qhflow.schemas.field import FieldDocument


class KCountRow(BaseModel):
    k: int = Field(..., description="Equator point pairs")
    D: int = Field(..., description="Shift orbits")
    E: int = Field(..., description="Reversal-closed shift orbits")
    C: int = Field(..., description="Equivalence classes, (D + E) / 2")
    oracle_D: int | None = Field(None, description="D by enumeration")
    oracle_E: int | None = Field(None, description="E by enumeration")
    oracle_C: int | None = Field(None, description="C by enumeration")
    match: bool | None = Field(None, description="Formula and oracle agree")


class Discrepancy(BaseModel):
    kind: str = Field(..., description="Which printed value disagrees")
    regime: str = Field(..., description="Parity case and parity of r")
    k: int | None = Field(None, description="k, when the value is per-k")
    printed: str = Field(..., description="Printed value")
    observed: str = Field(..., description="Oracle value")


class RepresentativeReport(BaseModel):
    k: int
    sequence: str | None = Field(None, description="Sign sequence, absent for foci")
    field: FieldDocument


class ClassCountReport(BaseModel):
    """Equivalence classes of stable fields in H_pqm."""

    weights: str = Field(..., description="Normalized (p,q,m)")
    r: int
    theta: list[str] = Field(..., description="Θ sets that hold")
    c0: int = Field(..., description="Classes without equator points")
    rows: list[KCountRow]
    total: int = Field(..., description="Total from the per-k formulas")
    closed_form: str = Field(..., description="Printed closed-form total")
    oracle_total: int | None = None
    discrepancies: list[Discrepancy] = Field(default_factory=list)
    representatives: list[RepresentativeReport] = Field(default_factory=list)


class EquivalenceReport(BaseModel):
    equivalent: bool
    basis: str = Field(..., description="SEQUENCE or FOCUS")
    left: str = Field(..., description="Invariant of the first field")
    right: str = Field(..., description="Invariant of the second field")
