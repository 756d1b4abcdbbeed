"""Validated quasihomogeneous vector fields and their η polynomial."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import structlog

from qhflow.core.exceptions import InvalidInputError
from qhflow.services.poly_core import (
    Axis,
    BivarPoly,
    BothZero,
    IsolatedRoot,
    UnivarPoly,
    WeightSignature,
    isolate_real_roots,
    restrict,
    univar_gcd,
    weighted_degree,
    weighted_support,
    x,
    y,
)

logger = structlog.get_logger()


class IndivisibleDegree(InvalidInputError):
    """gcd(p, q) does not divide m - 1."""


class WrongDegree(InvalidInputError):
    """A component has the wrong weighted degree."""


class NotCoprime(InvalidInputError):
    """P and Q share a nonconstant factor."""


@dataclass(frozen=True)
class MembershipReport:
    nonempty: bool
    k1: int
    k2: int

    @property
    def coefficient_dimension(self) -> int:
        return self.k1 + self.k2


@dataclass(frozen=True)
class QHField:
    """Planar field (P, Q) in H_pqm."""

    w: WeightSignature
    P: BivarPoly
    Q: BivarPoly

    def swap_axes(self) -> QHField:
        """The same field written with x and y exchanged."""
        return QHField(
            WeightSignature(self.w.q, self.w.p, self.w.m),
            self.Q.swap_axes(),
            self.P.swap_axes(),
        )

    def scaled(self, factor: Fraction | int) -> QHField:
        return QHField(self.w, self.P * factor, self.Q * factor)

    def __str__(self) -> str:
        return f"w={self.w} P={self.P} Q={self.Q}"


@dataclass(frozen=True)
class EtaData:
    eta: BivarPoly
    pos_restriction: UnivarPoly
    neg_restriction: UnivarPoly
    pos_roots: list[IsolatedRoot]
    neg_roots: list[IsolatedRoot]
    eta_0_pos: Fraction
    eta_0_neg: Fraction
    identically_zero: bool

    @property
    def eta_1_0(self) -> Fraction:
        return self.eta.evaluate(1, 0)

    @property
    def eta_x_slope(self) -> Fraction:
        """∂η/∂x at (0,1), read as the x-coefficient of η(x,1)."""
        return sum(
            (c for (i, _), c in self.eta.terms.items() if i == 1),
            Fraction(0),
        )


def _count_solutions(p: int, q: int, degree: int) -> int:
    return sum(1 for i in range(degree // p + 1) if (degree - p * i) % q == 0)


def check_membership(w: WeightSignature) -> MembershipReport:
    """Count the monomials available to P and Q."""
    k1 = _count_solutions(w.p, w.q, w.p_degree)
    k2 = _count_solutions(w.p, w.q, w.q_degree)
    return MembershipReport(nonempty=k1 >= 1 and k2 >= 1, k1=k1, k2=k2)


def _needs_swap(p: int, q: int) -> bool:
    # odd weight first; p = 1 whenever one weight is 1
    return p % 2 == 0 or (q == 1 and p > 1)


def normalize_weights(p: int, q: int, m: int) -> WeightSignature:
    """Reduce to coprime weights with p odd."""
    WeightSignature(p, q, m)  # rejects non-positive input
    k = math.gcd(p, q)
    if (m - 1) % k != 0:
        raise IndivisibleDegree(f"gcd(p,q)={k} does not divide m-1={m - 1}")
    p, q, m = p // k, q // k, 1 + (m - 1) // k
    if _needs_swap(p, q):
        p, q = q, p
    return WeightSignature(p, q, m)


def _divisible_by(poly: BivarPoly, var: str) -> bool:
    index = 0 if var == "x" else 1
    return all(monom[index] >= 1 for monom in poly.terms)


def _check_degree(name: str, poly: BivarPoly, expected: int, w: WeightSignature) -> None:
    if poly.is_zero:
        return
    found = weighted_degree(poly, w)
    if found != expected:
        raise WrongDegree(
            f"{name} must have weighted degree {expected} for w={w}, "
            f"found {sorted(weighted_support(poly, w))}"
        )


def validate(w: WeightSignature, P: BivarPoly, Q: BivarPoly) -> QHField:
    """Check degrees and coprimality and return the field."""
    if P.is_zero and Q.is_zero:
        raise BothZero("P and Q are both identically zero")
    _check_degree("P", P, w.p_degree, w)
    _check_degree("Q", Q, w.q_degree, w)

    if _divisible_by(P, "x") and _divisible_by(Q, "x"):
        raise NotCoprime("x divides both P and Q")
    if _divisible_by(P, "y") and _divisible_by(Q, "y"):
        raise NotCoprime("y divides both P and Q")
    common = univar_gcd(restrict(P, Axis.X_POS), restrict(Q, Axis.X_POS))
    if common.degree > 0:
        raise NotCoprime(f"P(1,u) and Q(1,u) share the factor {common}")

    return QHField(w, P, Q)


def normalize_field(p: int, q: int, m: int, P: BivarPoly, Q: BivarPoly) -> QHField:
    """Normalize weights, swap axes when needed, then validate."""
    w = normalize_weights(p, q, m)
    k = math.gcd(p, q)
    if w.p != p // k:
        P, Q = Q.swap_axes(), P.swap_axes()
        logger.debug("axes_swapped", original=(p, q), normalized=(w.p, w.q))
    return validate(w, P, Q)


def compute_eta(X: QHField) -> EtaData:
    """η = p·x·Q - q·y·P with its directional zeros."""
    p, q = X.w.p, X.w.q
    eta = BivarPoly.monomial(1, 0, p) * X.Q - BivarPoly.monomial(0, 1, q) * X.P
    pos = restrict(eta, Axis.X_POS)
    neg = restrict(eta, Axis.X_NEG)
    if eta.is_zero:
        return EtaData(eta, pos, neg, [], [], Fraction(0), Fraction(0), True)
    return EtaData(
        eta=eta,
        pos_restriction=pos,
        neg_restriction=neg,
        pos_roots=isolate_real_roots(pos),
        neg_roots=isolate_real_roots(neg, descending=True),
        eta_0_pos=eta.evaluate(0, 1),
        eta_0_neg=eta.evaluate(0, -1),
        identically_zero=False,
    )


def is_radial(X: QHField) -> bool:
    """True iff (P, Q) is a scalar multiple of (px, qy)."""
    return compute_eta(X).identically_zero


def reversing_symmetry(X: QHField) -> str | None:
    """Reflection that, together with t -> -t, maps X to itself.

    "x" flips the sign of x, "y" the sign of y and "origin" both.
    """
    P, Q = X.P.terms, X.Q.terms
    if all(i % 2 == 0 for i, _ in P) and all(i % 2 == 1 for i, _ in Q):
        return "x"
    if all(j % 2 == 1 for _, j in P) and all(j % 2 == 0 for _, j in Q):
        return "y"
    if all((i + j) % 2 == 0 for i, j in [*P, *Q]):
        return "origin"
    return None


def compute_xi(X: QHField) -> BivarPoly:
    """ξ = x^(2q-1)·P + y^(2p-1)·Q, the radial part in (p,q)-polar coordinates."""
    p, q = X.w.p, X.w.q
    return BivarPoly.monomial(2 * q - 1, 0) * X.P + BivarPoly.monomial(0, 2 * p - 1) * X.Q


def shear(X: QHField, lam: Fraction | int) -> QHField:
    """Apply v = y + lam·x^q to a field with p = 1."""
    if X.w.p != 1:
        raise InvalidInputError(f"shear needs p = 1, got w={X.w}")
    q = X.w.q
    lam = Fraction(lam)
    back = {y: y - (lam.numerator * x**q) / lam.denominator}
    P_new = X.P.as_expr().subs(back, simultaneous=True)
    Q_new = X.Q.as_expr().subs(back, simultaneous=True) + (
        lam.numerator * q * x ** (q - 1) * P_new / lam.denominator
    )
    return validate(X.w, BivarPoly.from_expr(P_new.expand()), BivarPoly.from_expr(Q_new.expand()))
