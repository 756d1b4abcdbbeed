import re

from pydantic import BaseModel, ConfigDict, Field, field_validator

COEFF_PATTERN = re.compile(r"[+-]?\d+(/[1-9]\d*)?")

Term = tuple[int, int, str]


class FieldDocument(BaseModel):
    """Serialized quasihomogeneous field (P, Q) with its weights."""

    model_config = ConfigDict(populate_by_name=True)

    p: int = Field(..., gt=0, description="Weight of x")
    q: int = Field(..., gt=0, description="Weight of y")
    m: int | None = Field(None, gt=0, description="Degree; inferred from the supports when absent")
    P_terms: list[Term] = Field(
        default_factory=list, alias="P", description="Terms [i, j, coeff] of P"
    )
    Q_terms: list[Term] = Field(
        default_factory=list, alias="Q", description="Terms [i, j, coeff] of Q"
    )

    @field_validator("P_terms", "Q_terms")
    @classmethod
    def check_terms(cls, terms: list[Term]) -> list[Term]:
        for i, j, coeff in terms:
            if i < 0 or j < 0:
                raise ValueError(f"exponents must be non-negative, got ({i}, {j})")
            if not COEFF_PATTERN.fullmatch(coeff):
                raise ValueError(f"coefficient {coeff!r} is not a rational string")
        return terms
