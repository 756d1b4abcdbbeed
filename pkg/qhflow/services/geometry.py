"""Geometry of the Poincaré–Lyapunov disk.

Covers the (p,q)-trigonometric functions Cs and Sn, the singular points on the
equator with their eigenvalue signs, invariant curves through the origin, the
sector structure at the origin and the circle route to the return integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import StrEnum

import numpy as np
import structlog
from scipy import integrate, special

from qhflow.config import Settings, get_settings
from qhflow.core.exceptions import InvalidInputError
from qhflow.services.field_core import (
    EtaData,
    QHField,
    compute_eta,
    compute_xi,
    reversing_symmetry,
)
from qhflow.services.poly_core import (
    Axis,
    IsolatedRoot,
    UnivarPoly,
    WeightSignature,
    refine_until_sign,
    restrict,
    sign,
)
from qhflow.services.stability import HypothesisViolated, ReturnIntegral

logger = structlog.get_logger()


class InvalidKind(InvalidInputError):
    """Saddle-node on the equator; sectors are undefined."""


class SingularityKind(StrEnum):
    SADDLE = "SADDLE"
    STABLE_NODE = "STABLE_NODE"
    UNSTABLE_NODE = "UNSTABLE_NODE"
    SADDLE_NODE = "SADDLE_NODE"


class CurveKind(StrEnum):
    AXIS_X0 = "AXIS_X0"
    CURVE = "CURVE"


class SectorKind(StrEnum):
    HYPERBOLIC = "HYPERBOLIC"
    ELLIPTIC = "ELLIPTIC"
    PARABOLIC = "PARABOLIC"


@dataclass(frozen=True)
class TrigState:
    z: float
    omega: float
    phi: float
    period: float


@dataclass(frozen=True)
class InfinitySingularity:
    chart: Axis
    root: IsolatedRoot | None  # None on the Y charts
    kind: SingularityKind
    sigma_sign: int
    nu_sign: int
    multiplicity: int = 1

    @property
    def at_infinity(self) -> bool:
        return self.root is None

    @property
    def is_node(self) -> bool:
        return self.kind in (SingularityKind.STABLE_NODE, SingularityKind.UNSTABLE_NODE)


@dataclass(frozen=True)
class InvariantCurve:
    kind: CurveKind
    root: IsolatedRoot | None = None
    mirrored: float | None = None  # the matching λ in the X_NEG chart


@dataclass(frozen=True)
class SectorDecomposition:
    sectors: list[SectorKind]
    separatrix_count: int


def trig_period(p: int, q: int) -> float:
    """Period of Cs and Sn from the Gamma-function formula."""
    a, b = 1 / (2 * p), 1 / (2 * q)
    return (
        2
        * p ** (-1 / (2 * q))
        * q ** (-1 / (2 * p))
        * special.gamma(a)
        * special.gamma(b)
        / special.gamma(a + b)
    )


def _trig_rhs(p: int, q: int):
    def rhs(_phi, state):
        z, omega = state[0], state[1]
        return [-(omega ** (2 * p - 1)), z ** (2 * q - 1)]

    return rhs


def _initial_state(p: int, q: int) -> list[float]:
    return [p ** (-1 / (2 * q)), 0.0]


def pq_trig(w: WeightSignature, phi: float, settings: Settings | None = None) -> TrigState:
    """(Cs φ, Sn φ) by integrating ż = -ω^(2p-1), ω̇ = z^(2q-1)."""
    settings = settings or get_settings()
    p, q = w.p, w.q
    period = trig_period(p, q)
    reduced = math.fmod(phi, period)
    z0, omega0 = _initial_state(p, q)
    if reduced == 0:
        return TrigState(z0, omega0, phi, period)

    solution = integrate.solve_ivp(
        _trig_rhs(p, q),
        (0.0, reduced),
        [z0, omega0],
        method="DOP853",
        rtol=settings.ode_rtol,
        atol=settings.ode_atol,
    )
    z, omega = solution.y[:, -1]
    return TrigState(float(z), float(omega), phi, period)


def trig_samples(
    w: WeightSignature, count: int, settings: Settings | None = None
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(φ, Cs φ, Sn φ) on an even grid over one period."""
    settings = settings or get_settings()
    p, q = w.p, w.q
    period = trig_period(p, q)
    phis = np.linspace(0.0, period, count)
    solution = integrate.solve_ivp(
        _trig_rhs(p, q),
        (0.0, period),
        _initial_state(p, q),
        method="DOP853",
        t_eval=phis,
        rtol=settings.ode_rtol,
        atol=settings.ode_atol,
    )
    return phis, solution.y[0], solution.y[1]


def first_return_period(w: WeightSignature, settings: Settings | None = None) -> float:
    """Period measured by event detection on the trig ODE."""
    settings = settings or get_settings()
    p, q = w.p, w.q
    rhs = _trig_rhs(p, q)
    options = {"method": "DOP853", "rtol": settings.ode_rtol, "atol": settings.ode_atol}
    horizon = 2 * trig_period(p, q)

    def z_rises(_phi, state):
        return state[0]

    z_rises.terminal = True
    z_rises.direction = 1

    def omega_rises(_phi, state):
        return state[1]

    omega_rises.terminal = True
    omega_rises.direction = 1

    # z crosses zero upwards at three quarters of a turn, then ω returns to zero
    first = integrate.solve_ivp(
        rhs, (0.0, horizon), _initial_state(p, q), events=z_rises, **options
    )
    t_quarter = first.t_events[0][0]
    second = integrate.solve_ivp(
        rhs,
        (t_quarter, t_quarter + horizon),
        first.y_events[0][0],
        events=omega_rises,
        **options,
    )
    return float(second.t_events[0][0])


def polar_radius(w: WeightSignature, xs, ys):
    """(p,q)-polar radius R with x = R^p Cs φ, y = R^q Sn φ."""
    p, q = w.p, w.q
    return (p * np.asarray(xs) ** (2 * q) + q * np.asarray(ys) ** (2 * p)) ** (1 / (2 * p * q))


def radial_angular(X: QHField, phi: float, settings: Settings | None = None) -> tuple[float, float]:
    """(ξ, η) evaluated at (Cs φ, Sn φ)."""
    state = pq_trig(X.w, phi, settings)
    xi = compute_xi(X).numeric()
    eta = compute_eta(X).eta.numeric()
    return float(xi(state.z, state.omega)), float(eta(state.z, state.omega))


def circle_integral(
    X: QHField, tol: float | None = None, settings: Settings | None = None
) -> ReturnIntegral:
    """Return integral over one period of the trig functions, oriented like return_integral.

    A field reversed by a reflection integrates to zero over the full turn and is
    reported ambiguous whatever the numeric value.
    """
    settings = settings or get_settings()
    tol = tol if tol is not None else settings.tol
    eta_data = compute_eta(X)
    if eta_data.identically_zero or eta_data.pos_roots or eta_data.eta_0_pos == 0:
        raise HypothesisViolated("circle integral needs η(1,u) rootless and η(0,1) != 0")

    p, q = X.w.p, X.w.q
    xi = compute_xi(X).numeric()
    eta = eta_data.eta.numeric()
    trig = _trig_rhs(p, q)

    def rhs(phi, state):
        dz, domega = trig(phi, state)
        return [dz, domega, float(xi(state[0], state[1]) / eta(state[0], state[1]))]

    period = trig_period(p, q)
    solution = integrate.solve_ivp(
        rhs,
        (0.0, period),
        _initial_state(p, q) + [0.0],
        method="DOP853",
        rtol=settings.ode_rtol,
        atol=settings.ode_atol,
    )
    accumulated = float(solution.y[2, -1])
    value = float(sign(eta_data.eta_0_pos) * 2 * math.pi / period * accumulated)
    error = settings.ode_rtol * abs(value) + settings.ode_atol * period
    # A reversible field cancels over the full turn, whatever the half-line route says.
    symmetry = reversing_symmetry(X)
    ambiguous = symmetry is not None or bool(abs(value) <= tol)
    logger.debug(
        "circle_integral_evaluated", value=value, period=period, reversible=symmetry is not None
    )
    return ReturnIntegral(
        value=value,
        sign=0 if ambiguous else sign(value),
        error_bound=error,
        ambiguous=ambiguous,
        reversible=symmetry is not None,
    )


def _kind(multiplicity: int, sigma: int, nu: int) -> SingularityKind:
    if multiplicity % 2 == 0:
        return SingularityKind.SADDLE_NODE
    if sigma * nu < 0:
        return SingularityKind.SADDLE
    return SingularityKind.STABLE_NODE if sigma < 0 else SingularityKind.UNSTABLE_NODE


def _x_chart_point(
    chart: Axis, root: IsolatedRoot, eta_restriction: UnivarPoly, p_restriction: UnivarPoly
) -> InfinitySingularity:
    slope = refine_until_sign(root, eta_restriction.derivative(root.multiplicity))
    radial = refine_until_sign(root, p_restriction)
    if chart is Axis.X_POS:
        sigma, nu = slope, -radial
    else:
        sigma, nu = -slope, radial
    return InfinitySingularity(
        chart, root, _kind(root.multiplicity, sigma, nu), sigma, nu, root.multiplicity
    )


def _y_chart_point(chart: Axis, X: QHField, eta: EtaData) -> InfinitySingularity:
    order, lowest = restrict(eta.eta, chart).lowest_coefficient()
    if chart is Axis.Y_POS:
        sigma, nu = -sign(lowest), -sign(X.Q.evaluate(0, 1))
    else:
        sigma, nu = sign(lowest), sign(X.Q.evaluate(0, -1))
    return InfinitySingularity(chart, None, _kind(order, sigma, nu), sigma, nu, order)


def infinite_singularities(X: QHField, eta: EtaData | None = None) -> list[InfinitySingularity]:
    """Singular points on the equator in counterclockwise chart order."""
    eta = eta or compute_eta(X)
    if eta.identically_zero:
        return []

    p_pos = restrict(X.P, Axis.X_POS)
    p_neg = restrict(X.P, Axis.X_NEG)
    points = [_x_chart_point(Axis.X_POS, r, eta.pos_restriction, p_pos) for r in eta.pos_roots]
    if eta.eta_0_pos == 0:
        points.append(_y_chart_point(Axis.Y_POS, X, eta))
    points.extend(
        _x_chart_point(Axis.X_NEG, r, eta.neg_restriction, p_neg) for r in eta.neg_roots
    )
    if eta.eta_0_pos == 0:
        points.append(_y_chart_point(Axis.Y_NEG, X, eta))

    logger.debug("infinite_singularities_found", count=len(points))
    return points


def invariant_curves(X: QHField, eta: EtaData | None = None) -> list[InvariantCurve]:
    """Invariant curves y^p = λ^p x^q and the axis x = 0 when present."""
    eta = eta or compute_eta(X)
    symmetry = (-1) ** X.w.q
    curves = [
        InvariantCurve(CurveKind.CURVE, root, symmetry * root.approx) for root in eta.pos_roots
    ]
    if not eta.identically_zero and eta.eta_0_pos == 0:
        curves.append(InvariantCurve(CurveKind.AXIS_X0))
    return curves


def origin_sectors(points: list[InfinitySingularity]) -> SectorDecomposition:
    """Sectors at the origin between consecutive characteristic directions."""
    if any(point.kind is SingularityKind.SADDLE_NODE for point in points):
        raise InvalidKind("saddle-node on the equator, origin sectors are undefined")

    n = len(points)
    sectors: list[SectorKind] = []
    for i in range(n):
        left, right = points[i].is_node, points[(i + 1) % n].is_node
        if left and right:
            sectors.append(SectorKind.HYPERBOLIC)
        elif not left and not right:
            sectors.append(SectorKind.ELLIPTIC)
        else:
            sectors.append(SectorKind.PARABOLIC)

    separatrices = sum(
        1
        for i in range(n)
        if SectorKind.HYPERBOLIC in (sectors[i - 1], sectors[i])
    )
    return SectorDecomposition(sectors, separatrices)
