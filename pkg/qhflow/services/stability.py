"""Return-map integral, stability decision, normal forms and Θ membership."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import StrEnum

import numpy as np
import structlog
from scipy import integrate

from qhflow.config import Settings, get_settings
from qhflow.core.exceptions import (
    EmptyClassError,
    InvalidInputError,
    NotStableError,
    QHFlowError,
)
from qhflow.services.field_core import EtaData, QHField, compute_eta, compute_xi
from qhflow.services.poly_core import Axis, UnivarPoly, WeightSignature, restrict, sign

logger = structlog.get_logger()


class InconsistentR(QHFlowError):
    """Two Θ equations produced different r."""


class NoIntegerR(EmptyClassError):
    """The matching equation has no admissible integer solution."""


class PatternViolation(NotStableError):
    """A coefficient the normal form requires is zero."""


class HypothesisViolated(InvalidInputError):
    """η(1,u) has a real root or η(0,1) = 0."""


class Verdict(StrEnum):
    STABLE = "STABLE"
    UNSTABLE_IN_FAMILY = "UNSTABLE_IN_FAMILY"
    DEGENERATE_RADIAL = "DEGENERATE_RADIAL"


class Portrait(StrEnum):
    GLOBAL_CENTER = "GLOBAL_CENTER"
    GLOBAL_STABLE_FOCUS = "GLOBAL_STABLE_FOCUS"
    GLOBAL_UNSTABLE_FOCUS = "GLOBAL_UNSTABLE_FOCUS"
    SECTORED = "SECTORED"


class Reason(StrEnum):
    MULTIPLE_ROOT = "MULTIPLE_ROOT"
    BOUNDARY_ROOT_NOT_SIMPLE = "BOUNDARY_ROOT_NOT_SIMPLE"
    CENTER_INTEGRAL_ZERO = "CENTER_INTEGRAL_ZERO"
    CENTER_CERTIFIED = "CENTER_CERTIFIED"
    RADIAL = "RADIAL"


class NormalCase(StrEnum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"


@dataclass(frozen=True)
class ReturnIntegral:
    value: float
    sign: int
    error_bound: float
    ambiguous: bool
    certified_center: bool = False
    reversible: bool = False


@dataclass(frozen=True)
class ThetaMembership:
    in_theta: tuple[bool, bool, bool, bool]
    r: int | None

    def holds(self, index: int) -> bool:
        """Θ_index for index in 1..4."""
        return self.in_theta[index - 1]

    def only(self, index: int) -> bool:
        return self.holds(index) and sum(self.in_theta) == 1

    @property
    def any(self) -> bool:
        return any(self.in_theta)

    @property
    def labels(self) -> list[str]:
        return [f"Θ{i}" for i in range(1, 5) if self.holds(i)]


@dataclass(frozen=True)
class NormalForm:
    case: NormalCase
    r: int
    boundary: tuple[bool, bool]
    soft_zero_corners: tuple[str, ...] = ()


@dataclass(frozen=True)
class StabilityVerdict:
    verdict: Verdict
    portrait: Portrait | None
    integral: ReturnIntegral | None = None
    reasons: list[Reason] = field(default_factory=list)

    @property
    def is_stable(self) -> bool:
        return self.verdict is Verdict.STABLE


def _solve(numerator: int, pq: int, offset: int, r_min: int) -> int | None:
    """r with numerator = (r + offset)·pq and r >= r_min."""
    if numerator % pq != 0:
        return None
    r = numerator // pq - offset
    return r if r >= r_min else None


def theta_membership(w: WeightSignature) -> ThetaMembership:
    """Solve the four Θ equations for r."""
    p, q, m = w.p, w.q, w.m
    if math.gcd(p, q) != 1:
        raise InvalidInputError(f"Θ membership needs coprime weights, got {w}")
    pq = p * q
    solutions = [
        _solve(p + q + m - 1, pq, 1, 0),
        _solve(p + m - 1, pq, 0, 0),
        _solve(q + m - 1, pq, 0, 0),
        _solve(m - 1, pq, -1, 1),
    ]
    found = {r for r in solutions if r is not None}
    if len(found) > 1:
        raise InconsistentR(f"Θ equations disagree on r for {w}: {solutions}")
    return ThetaMembership(
        in_theta=tuple(r is not None for r in solutions),
        r=found.pop() if found else None,
    )


_CASE_EQUATION = {NormalCase.A: 1, NormalCase.B: 2, NormalCase.C: 3, NormalCase.D: 4}


def _corners(case: NormalCase, w: WeightSignature, r: int) -> list[tuple[str, int, int]]:
    """Coefficients that must be nonzero, as (component, i, j)."""
    p, q = w.p, w.q
    match case:
        case NormalCase.A:
            return [
                ("c", 0, (r + 1) * p),
                ("c", (r + 1) * q, 0),
                ("a", 0, (r + 1) * p - 1),
                ("b", (r + 1) * q - 1, 0),
            ]
        case NormalCase.B:
            return [("c", 0, r * p + 1), ("c", r * q, 1), ("a", 0, r * p), ("a", r * q, 0)]
        case NormalCase.C:
            return [("c", 1, r * p), ("c", 1 + r * q, 0), ("b", 0, r * p), ("b", r * q, 0)]
        case NormalCase.D:
            return [
                ("c", 1, (r - 1) * p + 1),
                ("c", 1 + (r - 1) * q, 1),
                ("a", 1 + (r - 1) * q, 0),
                ("b", 0, 1 + (r - 1) * p),
            ]


def _soft_corners(case: NormalCase, w: WeightSignature, r: int) -> list[tuple[str, int, int]]:
    p, q = w.p, w.q
    match case:
        case NormalCase.C:
            return [("a", 1, r * p - 1)]
        case NormalCase.D:
            return [("a", 1, (r - 1) * p), ("b", (r - 1) * q, 1)]
        case _:
            return []


def normal_form(X: QHField, eta: EtaData) -> NormalForm:
    """Case, r and corner check of the normal form."""
    boundary = (eta.eta_0_pos != 0, eta.eta_1_0 != 0)
    case = {
        (True, True): NormalCase.A,
        (True, False): NormalCase.B,
        (False, True): NormalCase.C,
        (False, False): NormalCase.D,
    }[boundary]

    theta = theta_membership(X.w)
    if not theta.holds(_CASE_EQUATION[case]):
        raise NoIntegerR(
            f"case {case} needs equation {_CASE_EQUATION[case]} to hold for {X.w}; "
            "no stable field has this boundary behaviour"
        )
    r = theta.r
    assert r is not None

    components = {"a": X.P, "b": X.Q, "c": eta.eta}
    for name, i, j in _corners(case, X.w, r):
        if components[name].coeff(i, j) == 0:
            raise PatternViolation(f"case {case} requires {name}_{{{i},{j}}} != 0")
    soft = tuple(
        f"{name}_{{{i},{j}}}"
        for name, i, j in _soft_corners(case, X.w, r)
        if components[name].coeff(i, j) == 0
    )
    return NormalForm(case=case, r=r, boundary=boundary, soft_zero_corners=soft)


def _reflect(poly: UnivarPoly) -> UnivarPoly:
    """poly(-u)."""
    return UnivarPoly.from_coefficients(
        c * (-1) ** k for k, c in enumerate(poly.coefficients)
    )


def _is_odd_ratio(numerator: UnivarPoly, denominator: UnivarPoly) -> bool:
    """N/D is odd iff N(u)D(-u) + N(-u)D(u) vanishes."""
    total = UnivarPoly(
        (numerator * _reflect(denominator)).poly + (_reflect(numerator) * denominator).poly
    )
    return total.is_zero


def _homogenized(poly: UnivarPoly, degree: int):
    """(s, c) ↦ c^degree · poly(s/c) as a float function."""
    coefficients = [float(c) for c in poly.coefficients]

    def evaluate(s: float, c: float) -> float:
        return sum(a * s**k * c ** (degree - k) for k, a in enumerate(coefficients))

    return evaluate


def integrand_parts(X: QHField, eta: EtaData) -> tuple[UnivarPoly, UnivarPoly]:
    """Numerator p·ξ(1,u) and denominator (p + q·u^2p)·η(1,u)."""
    p, q = X.w.p, X.w.q
    numerator = restrict(compute_xi(X), Axis.X_POS)
    numerator = UnivarPoly.from_coefficients(c * p for c in numerator.coefficients)
    weight = UnivarPoly.from_coefficients([p] + [0] * (2 * p - 1) + [q])
    return numerator, weight * eta.pos_restriction


def return_integral(
    X: QHField, eta: EtaData | None = None, tol: float | None = None
) -> ReturnIntegral:
    """Signed growth of the radius over one turn around a monodromic origin.

    The integrand is invariant under (P, Q) ↦ (-P, -Q), so the value is multiplied
    by sgn η(0,1) to carry the time orientation. For η > 0 it is the plain integral.
    """
    eta = eta or compute_eta(X)
    tol = tol if tol is not None else get_settings().tol
    if eta.identically_zero or eta.pos_roots or eta.eta_0_pos == 0:
        raise HypothesisViolated("return integral needs η(1,u) rootless and η(0,1) != 0")

    numerator, denominator = integrand_parts(X, eta)
    certified = _is_odd_ratio(numerator, denominator)

    n_deg, d_deg = numerator.degree, denominator.degree
    num = _homogenized(numerator, max(n_deg, 0))
    den = _homogenized(denominator, d_deg)
    excess = d_deg - max(n_deg, 0) - 2

    def integrand(theta: float) -> float:
        s, c = np.sin(theta), np.cos(theta)
        return num(s, c) * c**excess / den(s, c)

    if numerator.is_zero:
        value, error = 0.0, 0.0
    else:
        value, error = integrate.quad(
            integrand, -np.pi / 2, np.pi / 2, epsabs=tol / 4, epsrel=0.0, limit=200
        )
    value *= sign(eta.eta_0_pos)

    ambiguous = certified or abs(value) <= tol
    logger.debug(
        "return_integral_evaluated",
        value=value,
        error_bound=error,
        ambiguous=ambiguous,
        certified_center=certified,
    )
    return ReturnIntegral(
        value=value,
        sign=0 if ambiguous else sign(value),
        error_bound=error,
        ambiguous=ambiguous,
        certified_center=certified,
    )


def classify(
    X: QHField, eta: EtaData | None = None, settings: Settings | None = None
) -> StabilityVerdict:
    """Structural stability verdict and global portrait type."""
    settings = settings or get_settings()
    eta = eta or compute_eta(X)

    if eta.identically_zero:
        return StabilityVerdict(Verdict.DEGENERATE_RADIAL, None, reasons=[Reason.RADIAL])

    if not eta.pos_roots and eta.eta_0_pos != 0:
        integral = return_integral(X, eta, settings.tol)
        if integral.ambiguous:
            reason = Reason.CENTER_INTEGRAL_ZERO
            if integral.certified_center:
                reason = Reason.CENTER_CERTIFIED
            return StabilityVerdict(
                Verdict.UNSTABLE_IN_FAMILY, Portrait.GLOBAL_CENTER, integral, [reason]
            )
        portrait = (
            Portrait.GLOBAL_UNSTABLE_FOCUS if integral.sign > 0 else Portrait.GLOBAL_STABLE_FOCUS
        )
        return StabilityVerdict(Verdict.STABLE, portrait, integral)

    reasons: list[Reason] = []
    if any(root.multiplicity > 1 for root in eta.pos_roots):
        reasons.append(Reason.MULTIPLE_ROOT)
    if eta.eta_0_pos == 0 and eta.eta_x_slope == 0:
        reasons.append(Reason.BOUNDARY_ROOT_NOT_SIMPLE)

    verdict = Verdict.UNSTABLE_IN_FAMILY if reasons else Verdict.STABLE
    logger.debug("field_classified", verdict=verdict, roots=len(eta.pos_roots), reasons=reasons)
    return StabilityVerdict(verdict, Portrait.SECTORED, None, reasons)

