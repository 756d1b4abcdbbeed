"""Exact polynomial arithmetic over the rationals.

Bivariate polynomials are thin immutable wrappers around ``sympy.Poly`` over
``QQ``. Real roots of univariate restrictions are isolated with a square-free
decomposition followed by Sturm-sequence bisection, so every sign the analysis
reads is decided exactly.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass
from enum import StrEnum
from fractions import Fraction
from functools import cached_property

import numpy as np
import structlog
import sympy as sp
from sympy import QQ, Poly

from qhflow.core.exceptions import InvalidInputError, NotStableError

logger = structlog.get_logger()

x, y = sp.symbols("x y")
t = sp.Symbol("t")

Rational = Fraction


class ZeroPolynomial(InvalidInputError):
    """Operation needs a nonzero polynomial."""


class BothZero(InvalidInputError):
    """Both operands are identically zero."""


class ProbeVanishes(NotStableError):
    """Probe polynomial shares the isolated root."""

    event = "probe_vanishes_at_root"


class Axis(StrEnum):
    X_POS = "X_POS"
    X_NEG = "X_NEG"
    Y_POS = "Y_POS"
    Y_NEG = "Y_NEG"


def to_fraction(value: object) -> Fraction:
    """Convert a sympy or domain rational to ``Fraction``."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    rational = sp.Rational(value)
    return Fraction(int(rational.p), int(rational.q))


def to_sympy(value: Fraction | int) -> sp.Rational:
    value = Fraction(value)
    return sp.Rational(value.numerator, value.denominator)


def sign(value: Fraction | int | float) -> int:
    if value > 0:
        return 1
    return -1 if value < 0 else 0


@dataclass(frozen=True)
class WeightSignature:
    """Weights (p, q) and degree m of a quasihomogeneous family."""

    p: int
    q: int
    m: int

    def __post_init__(self) -> None:
        if min(self.p, self.q, self.m) < 1:
            raise InvalidInputError(
                f"weights and degree must be positive, got ({self.p}, {self.q}, {self.m})"
            )

    @property
    def p_degree(self) -> int:
        """Weighted degree of P."""
        return self.p - 1 + self.m

    @property
    def q_degree(self) -> int:
        """Weighted degree of Q."""
        return self.q - 1 + self.m

    @property
    def eta_degree(self) -> int:
        return self.p + self.q + self.m - 1

    def __str__(self) -> str:
        return f"({self.p},{self.q},{self.m})"


@dataclass(frozen=True)
class BivarPoly:
    """Sparse polynomial in x, y with rational coefficients."""

    poly: Poly

    @classmethod
    def from_terms(cls, terms: Mapping[tuple[int, int], Fraction | int]) -> BivarPoly:
        data = {tuple(monom): to_sympy(coeff) for monom, coeff in terms.items() if coeff != 0}
        if not data:
            return cls.zero()
        return cls(Poly.from_dict(data, x, y, domain=QQ))

    @classmethod
    def from_expr(cls, expr: sp.Expr) -> BivarPoly:
        return cls(Poly(expr, x, y, domain=QQ))

    @classmethod
    def zero(cls) -> BivarPoly:
        return cls(Poly(0, x, y, domain=QQ))

    @classmethod
    def monomial(cls, i: int, j: int, coeff: Fraction | int = 1) -> BivarPoly:
        return cls.from_terms({(i, j): coeff})

    @cached_property
    def terms(self) -> dict[tuple[int, int], Fraction]:
        """Nonzero coefficients keyed by exponent pair."""
        return {
            (int(i), int(j)): to_fraction(coeff)
            for (i, j), coeff in self.poly.terms()
            if coeff != 0
        }

    @property
    def is_zero(self) -> bool:
        return self.poly.is_zero

    def coeff(self, i: int, j: int) -> Fraction:
        return self.terms.get((i, j), Fraction(0))

    def evaluate(self, xv: Fraction | int, yv: Fraction | int) -> Fraction:
        xv, yv = Fraction(xv), Fraction(yv)
        return sum((c * xv**i * yv**j for (i, j), c in self.terms.items()), Fraction(0))

    def diff(self, var: str) -> BivarPoly:
        return BivarPoly(self.poly.diff(x if var == "x" else y))

    def swap_axes(self) -> BivarPoly:
        """Exchange the roles of x and y."""
        return BivarPoly.from_terms({(j, i): c for (i, j), c in self.terms.items()})

    def as_expr(self) -> sp.Expr:
        return self.poly.as_expr()

    def numeric(self) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
        """Vectorised float evaluation for quadrature and plotting."""
        terms = [(i, j, float(c)) for (i, j), c in self.terms.items()]

        def evaluate(xs, ys):
            xs = np.asarray(xs, dtype=float)
            ys = np.asarray(ys, dtype=float)
            total = np.zeros(np.broadcast(xs, ys).shape)
            for i, j, c in terms:
                total = total + c * xs**i * ys**j
            return total

        return evaluate

    def __add__(self, other: BivarPoly) -> BivarPoly:
        return BivarPoly(self.poly + other.poly)

    def __sub__(self, other: BivarPoly) -> BivarPoly:
        return BivarPoly(self.poly - other.poly)

    def __neg__(self) -> BivarPoly:
        return BivarPoly(-self.poly)

    def __mul__(self, other: BivarPoly | Fraction | int) -> BivarPoly:
        if isinstance(other, BivarPoly):
            return BivarPoly(self.poly * other.poly)
        return BivarPoly(self.poly * to_sympy(other))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> BivarPoly:
        return BivarPoly(self.poly**exponent)

    def exact_quotient(self, other: BivarPoly) -> BivarPoly:
        """Divide, asserting the remainder vanishes."""
        quotient, remainder = self.poly.div(other.poly)
        if not remainder.is_zero:
            raise ArithmeticError(f"{other.as_expr()} does not divide {self.as_expr()}")
        return BivarPoly(quotient)

    def __str__(self) -> str:
        return "0" if self.is_zero else str(self.as_expr())


@dataclass(frozen=True)
class UnivarPoly:
    """Dense univariate polynomial with rational coefficients."""

    poly: Poly

    @classmethod
    def from_coefficients(cls, coefficients: Iterable[Fraction | int]) -> UnivarPoly:
        """Build from coefficients listed lowest degree first."""
        data = {(k,): to_sympy(c) for k, c in enumerate(coefficients) if c != 0}
        if not data:
            return cls(Poly(0, t, domain=QQ))
        return cls(Poly.from_dict(data, t, domain=QQ))

    @cached_property
    def coefficients(self) -> list[Fraction]:
        return [to_fraction(c) for c in reversed(self.poly.all_coeffs())]

    @property
    def is_zero(self) -> bool:
        return self.poly.is_zero

    @property
    def degree(self) -> int:
        return int(self.poly.degree()) if not self.is_zero else -1

    def eval(self, value: Fraction | int) -> Fraction:
        return _horner(self.coefficients, Fraction(value))

    def derivative(self, order: int = 1) -> UnivarPoly:
        return UnivarPoly(self.poly.diff((t, order)))

    def lowest_coefficient(self) -> tuple[int, Fraction]:
        """Lowest degree with a nonzero coefficient, and that coefficient."""
        for k, coeff in enumerate(self.coefficients):
            if coeff != 0:
                return k, coeff
        raise ZeroPolynomial("zero polynomial has no lowest coefficient")

    def __mul__(self, other: UnivarPoly) -> UnivarPoly:
        return UnivarPoly(self.poly * other.poly)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, UnivarPoly) and self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash(tuple(self.coefficients))

    def __str__(self) -> str:
        return str(self.poly.as_expr())


@dataclass(frozen=True)
class IsolatedRoot:
    """A real root of ``defining`` isolated in the closed interval [lo, hi]."""

    lo: Fraction
    hi: Fraction
    multiplicity: int
    defining: UnivarPoly
    exact_value: Fraction | None = None

    @property
    def approx(self) -> float:
        if self.exact_value is not None:
            return float(self.exact_value)
        return float((self.lo + self.hi) / 2)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def refined(self, width: Fraction) -> IsolatedRoot:
        """Shrink the interval by bisection until it is narrower than ``width``."""
        if self.exact_value is not None:
            return self
        lo, hi = self.lo, self.hi
        sign_lo = sign(self.defining.eval(lo))
        while hi - lo > width:
            mid = (lo + hi) / 2
            value = self.defining.eval(mid)
            if value == 0:
                return IsolatedRoot(mid, mid, self.multiplicity, self.defining, mid)
            if sign(value) == sign_lo:
                lo = mid
            else:
                hi = mid
        return IsolatedRoot(lo, hi, self.multiplicity, self.defining)

    def describe(self) -> str:
        if self.exact_value is not None:
            return str(self.exact_value)
        return f"~{self.approx:.12g} in [{self.lo}, {self.hi}]"


def weighted_support(poly: BivarPoly, w: WeightSignature) -> set[int]:
    return {w.p * i + w.q * j for i, j in poly.terms}


def weighted_degree(poly: BivarPoly, w: WeightSignature) -> int | None:
    """Weighted degree when every term shares it. None for mixed supports and for zero."""
    degrees = weighted_support(poly, w)
    if len(degrees) != 1:
        return None
    return degrees.pop()


def restrict(poly: BivarPoly, axis: Axis) -> UnivarPoly:
    """poly(1,u), poly(-1,u), poly(v,1) or poly(v,-1)."""
    coefficients: dict[int, Fraction] = {}
    for (i, j), coeff in poly.terms.items():
        match axis:
            case Axis.X_POS:
                degree, value = j, coeff
            case Axis.X_NEG:
                degree, value = j, coeff * (-1) ** i
            case Axis.Y_POS:
                degree, value = i, coeff
            case Axis.Y_NEG:
                degree, value = i, coeff * (-1) ** j
        coefficients[degree] = coefficients.get(degree, Fraction(0)) + value
    if not coefficients:
        return UnivarPoly.from_coefficients([])
    dense = [coefficients.get(k, Fraction(0)) for k in range(max(coefficients) + 1)]
    return UnivarPoly.from_coefficients(dense)


def _horner(coefficients: list[Fraction], value: Fraction) -> Fraction:
    """Evaluate coefficients listed lowest degree first."""
    total = Fraction(0)
    for coeff in reversed(coefficients):
        total = total * value + coeff
    return total


class _SturmCounter:
    """Counts distinct real roots of a square-free polynomial in (a, b]."""

    def __init__(self, poly: Poly) -> None:
        self.coefficients = UnivarPoly(poly).coefficients
        self.sequence = [UnivarPoly(g).coefficients for g in sp.sturm(poly)]

    def _sign_changes(self, point: Fraction) -> int:
        values = [sign(_horner(g, point)) for g in self.sequence]
        values = [s for s in values if s != 0]
        return sum(1 for a, b in zip(values, values[1:], strict=False) if a != b)

    def count(self, a: Fraction, b: Fraction) -> int:
        return self._sign_changes(a) - self._sign_changes(b)

    def is_root(self, value: Fraction) -> bool:
        return _horner(self.coefficients, value) == 0


def _cauchy_bound(poly: Poly) -> Fraction:
    coeffs = [to_fraction(c) for c in poly.all_coeffs()]
    lead = abs(coeffs[0])
    return 1 + max((abs(c) / lead for c in coeffs[1:]), default=Fraction(0))


def _split_point(counter: _SturmCounter, lo: Fraction, hi: Fraction) -> Fraction:
    """A point strictly inside (lo, hi) that is not a root."""
    candidates = [(lo + hi) / 2] + [lo + (hi - lo) * k / 7 for k in range(1, 7)]
    for mid in candidates:
        if not counter.is_root(mid):
            return mid
    raise ArithmeticError("no root-free split point found")  # pragma: no cover


def _isolate_squarefree(poly: Poly) -> list[tuple[Fraction, Fraction]]:
    counter = _SturmCounter(poly)
    bound = _cauchy_bound(poly)
    pending = [(-bound, bound)]
    isolated: list[tuple[Fraction, Fraction]] = []
    while pending:
        lo, hi = pending.pop()
        n_roots = counter.count(lo, hi)
        if n_roots == 0:
            continue
        if n_roots == 1:
            isolated.append((lo, hi))
            continue
        mid = _split_point(counter, lo, hi)
        pending.extend([(lo, mid), (mid, hi)])
    return sorted(isolated)


def isolate_real_roots(poly: UnivarPoly, descending: bool = False) -> list[IsolatedRoot]:
    """All distinct real roots with multiplicities, in disjoint rational intervals."""
    if poly.is_zero:
        raise ZeroPolynomial("cannot isolate the roots of the zero polynomial")
    if poly.degree < 1:
        return []

    _, factors = poly.poly.sqf_list()
    squarefree = Poly(1, t, domain=QQ)
    for factor, _ in factors:
        squarefree = squarefree * factor

    rational_roots = {to_fraction(r) for r in squarefree.ground_roots()}
    counters = [(_SturmCounter(factor), factor, mult) for factor, mult in factors]

    roots: list[IsolatedRoot] = []
    for lo, hi in _isolate_squarefree(squarefree):
        for counter, factor, mult in counters:
            if counter.count(lo, hi) == 1:
                break
        else:  # pragma: no cover
            raise ArithmeticError(f"interval [{lo}, {hi}] matches no square-free factor")
        exact = next((r for r in rational_roots if lo < r <= hi), None)
        if exact is not None:
            roots.append(IsolatedRoot(exact, exact, mult, UnivarPoly(factor), exact))
        else:
            roots.append(IsolatedRoot(lo, hi, mult, UnivarPoly(factor)))

    logger.debug("roots_isolated", degree=poly.degree, count=len(roots))
    return sorted(roots, key=lambda r: r.lo, reverse=descending)


def univar_gcd(a: UnivarPoly, b: UnivarPoly) -> UnivarPoly:
    """Monic greatest common divisor."""
    if a.is_zero and b.is_zero:
        raise BothZero("gcd of two zero polynomials is undefined")
    return UnivarPoly(a.poly.gcd(b.poly).monic())


def refine_until_sign(root: IsolatedRoot, probe: UnivarPoly) -> int:
    """Sign of ``probe`` at the root, refining the interval until it is constant."""
    if root.exact_value is not None:
        value = probe.eval(root.exact_value)
        if value == 0:
            raise ProbeVanishes(f"probe {probe} vanishes at {root.exact_value}")
        return sign(value)

    if probe.is_zero:
        raise ProbeVanishes("zero probe vanishes everywhere")
    if probe.degree == 0:
        return sign(probe.coefficients[0])

    common = univar_gcd(root.defining, probe)
    if common.degree > 0 and _SturmCounter(common.poly).count(root.lo, root.hi) > 0:
        raise ProbeVanishes(f"probe {probe} shares the root {root.describe()}")

    probe_counter = _SturmCounter(probe.poly.sqf_part())
    current = root
    while probe_counter.count(current.lo, current.hi) > 0 or probe_counter.is_root(current.lo):
        current = current.refined(current.width / 2)
        if current.exact_value is not None:
            return refine_until_sign(current, probe)
    return sign(probe.eval((current.lo + current.hi) / 2))
