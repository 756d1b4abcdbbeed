"""Split a general polynomial field into quasihomogeneous components."""

from __future__ import annotations

from dataclasses import dataclass
from enum import StrEnum

import structlog

from qhflow.config import Settings, get_settings
from qhflow.core.exceptions import InvalidInputError, NotApplicableError, QHFlowError
from qhflow.services.field_core import QHField, normalize_field
from qhflow.services.poly_core import BivarPoly
from qhflow.services.stability import StabilityVerdict, classify

logger = structlog.get_logger()


class NotApplicable(NotApplicableError):
    """The dominant component does not decide the local portrait."""

    def __init__(
        self,
        message: str,
        components: list[QHComponent] | None = None,
        dominant: QHComponent | None = None,
    ):
        super().__init__(message)
        self.components = components or []
        self.dominant = dominant


class End(StrEnum):
    ORIGIN = "ORIGIN"
    INFINITY = "INFINITY"


@dataclass(frozen=True)
class QHComponent:
    m: int
    P: BivarPoly
    Q: BivarPoly


@dataclass(frozen=True)
class Decomposition:
    end: End
    p: int
    q: int
    components: list[QHComponent]
    dominant: QHComponent
    field: QHField
    verdict: StabilityVerdict


def split_components(P: BivarPoly, Q: BivarPoly, p: int, q: int) -> list[QHComponent]:
    """Components X_m with deg_w P_m = p - 1 + m and deg_w Q_m = q - 1 + m, by ascending m."""
    if p < 1 or q < 1:
        raise InvalidInputError(f"weights must be positive, got ({p}, {q})")
    if P.is_zero and Q.is_zero:
        raise InvalidInputError("P and Q are both identically zero")

    parts: dict[int, tuple[dict, dict]] = {}
    for (i, j), c in P.terms.items():
        parts.setdefault(p * i + q * j - p + 1, ({}, {}))[0][(i, j)] = c
    for (i, j), c in Q.terms.items():
        parts.setdefault(p * i + q * j - q + 1, ({}, {}))[1][(i, j)] = c

    return [
        QHComponent(m, BivarPoly.from_terms(p_terms), BivarPoly.from_terms(q_terms))
        for m, (p_terms, q_terms) in sorted(parts.items())
    ]


def dominant_component(components: list[QHComponent], end: End) -> QHComponent:
    component = components[0] if end is End.ORIGIN else components[-1]
    if component.m < 1:
        raise NotApplicable(
            f"dominant component has m={component.m} < 1; the {end.lower()} is not a "
            "singular point of a quasihomogeneous part",
            components,
            component,
        )
    return component


def decompose(
    P: BivarPoly,
    Q: BivarPoly,
    p: int,
    q: int,
    end: End,
    settings: Settings | None = None,
) -> Decomposition:
    """Dominant component at ``end``, normalized and classified.

    The full field is locally equivalent to its dominant component at that end
    whenever the component is structurally stable in its own family.
    """
    settings = settings or get_settings()
    components = split_components(P, Q, p, q)
    dominant = dominant_component(components, end)

    try:
        field = normalize_field(p, q, dominant.m, dominant.P, dominant.Q)
    except QHFlowError as exc:
        raise NotApplicable(
            f"dominant component X_{dominant.m} is not in H: {exc}", components, dominant
        ) from exc

    verdict = classify(field, settings=settings)
    logger.debug(
        "field_decomposed",
        end=end,
        components=[c.m for c in components],
        dominant=dominant.m,
        verdict=verdict.verdict,
    )
    if not verdict.is_stable:
        raise NotApplicable(
            f"dominant part X_{dominant.m} is {verdict.verdict}, not structurally stable",
            components,
            dominant,
        )
    return Decomposition(end, p, q, components, dominant, field, verdict)
