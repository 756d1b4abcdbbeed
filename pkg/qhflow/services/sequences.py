"""Sign sequences of stable fields and the construction of representatives."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import StrEnum
from fractions import Fraction

import structlog

from qhflow.core.exceptions import (
    InvalidInputError,
    NotAdmissibleError,
    NotStableError,
    QHFlowError,
)
from qhflow.services.field_core import QHField, compute_eta, validate
from qhflow.services.geometry import InfinitySingularity, SingularityKind, infinite_singularities
from qhflow.services.poly_core import BivarPoly, WeightSignature, sign
from qhflow.services.stability import NoIntegerR, classify, theta_membership

logger = structlog.get_logger()

Pair = tuple[int, int]

_SEQUENCE_RE = re.compile(r"[+-]{2}(,[+-]{2})*")


class SymmetryViolation(InvalidInputError):
    """Sequence breaks the alternation or reflection symmetry of its parity case."""


class KOutOfRange(InvalidInputError):
    """k is not an allowed number of equator points for (m, r)."""


class ShapeMismatch(InvalidInputError):
    """Sequences of different length or parity case."""


class CaseMismatch(QHFlowError):
    """Constructed field does not realize the requested sequence."""


class SequenceParseError(InvalidInputError):
    """Malformed sequence text."""


class NotAdmissible(NotAdmissibleError):
    """No stable field realizes the sequence."""


class ParityCase(StrEnum):
    ODD_ODD = "ODD_ODD"
    EVEN_Q_NO_BOUNDARY = "EVEN_Q_NO_BOUNDARY"
    EVEN_Q_BOUNDARY = "EVEN_Q_BOUNDARY"


class ConstructionCase(StrEnum):
    CASE1 = "CASE1"
    CASE2 = "CASE2"
    CASE3 = "CASE3"
    CASE4 = "CASE4"


@dataclass(frozen=True)
class SignSequence:
    """Cyclic word of (σ, ν) pairs read around the equator."""

    entries: tuple[Pair, ...]
    parity_case: ParityCase | None = None

    def __post_init__(self) -> None:
        if not self.entries or len(self.entries) % 2:
            raise SymmetryViolation(f"a sign sequence needs 2k >= 2 entries, got {len(self)}")

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def k(self) -> int:
        return len(self.entries) // 2

    @property
    def s(self) -> int:
        """Sign changes among ν_1..ν_k."""
        nus = [nu for _, nu in self.entries[: self.k]]
        return sum(1 for a, b in zip(nus, nus[1:], strict=False) if a != b)

    @property
    def sigmas(self) -> list[int]:
        return [sigma for sigma, _ in self.entries]

    @property
    def nus(self) -> list[int]:
        return [nu for _, nu in self.entries]

    def with_entries(self, entries: tuple[Pair, ...]) -> SignSequence:
        return SignSequence(entries, self.parity_case)

    def __str__(self) -> str:
        return format_sequence(self)


def _symbol(value: int) -> str:
    return "+" if value > 0 else "-"


def format_sequence(w: SignSequence) -> str:
    return ",".join(_symbol(sigma) + _symbol(nu) for sigma, nu in w.entries)


def parse_sequence(text: str, parity_case: ParityCase | None = None) -> SignSequence:
    """Parse "--,++,..." (σ then ν in each pair)."""
    text = text.strip()
    if not _SEQUENCE_RE.fullmatch(text):
        raise SequenceParseError(f"malformed sign sequence {text!r}")
    entries = tuple(
        (1 if pair[0] == "+" else -1, 1 if pair[1] == "+" else -1) for pair in text.split(",")
    )
    return SignSequence(entries, parity_case)


def parity_case(w: WeightSignature) -> ParityCase:
    """Symmetry class of sequences for normalized weights."""
    if w.q % 2:
        return ParityCase.ODD_ODD
    return ParityCase.EVEN_Q_NO_BOUNDARY if w.m % 2 == 0 else ParityCase.EVEN_Q_BOUNDARY


def _negate(pair: Pair) -> Pair:
    return (-pair[0], -pair[1])


def check_symmetry(w: SignSequence, w_sig: WeightSignature, r: int) -> None:
    """Raise SymmetryViolation unless w has the alternation and reflection of its case."""
    n, k = len(w), w.k
    e = w.entries
    if any(e[i][0] * e[(i + 1) % n][0] != -1 for i in range(n)):
        raise SymmetryViolation(f"σ does not alternate in {w}")

    case = w.parity_case or parity_case(w_sig)
    match case:
        case ParityCase.ODD_ODD:
            factor = (-1) ** (w_sig.m - 1)
            ok = all(e[i + k] == (factor * e[i][0], factor * e[i][1]) for i in range(k))
        case ParityCase.EVEN_Q_NO_BOUNDARY:
            ok = all(e[n - 1 - i] == _negate(e[i]) for i in range(k))
        case ParityCase.EVEN_Q_BOUNDARY:
            factor = (-1) ** (r - 1)
            ok = all(e[n - 2 - i] == e[i] for i in range(k - 1)) and e[n - 1] == (
                factor * e[k - 1][0],
                factor * e[k - 1][1],
            )
    if not ok:
        raise SymmetryViolation(f"{w} breaks the {case} reflection symmetry for w={w_sig}")


def k_allowed(k: int, r: int) -> bool:
    return 0 <= k <= r + 1 and (k - r - 1) % 2 == 0


def sign_sequence(
    X: QHField, points: list[InfinitySingularity] | None = None
) -> SignSequence:
    """The (σ, ν) word of a stable sectored field."""
    points = points if points is not None else infinite_singularities(X)
    if len(points) < 2:
        raise NotStableError("a sign sequence needs at least two equator points")
    if any(point.kind is SingularityKind.SADDLE_NODE for point in points):
        raise NotStableError("saddle-node on the equator, no sign sequence")

    w = SignSequence(
        tuple((point.sigma_sign, point.nu_sign) for point in points), parity_case(X.w)
    )
    r = theta_membership(X.w).r
    check_symmetry(w, X.w, r if r is not None else 0)
    return w


def shift(w: SignSequence, steps: int = 1) -> SignSequence:
    """Cyclic rotation: entry i of the result is entry i + steps of w."""
    steps %= len(w)
    return w.with_entries(w.entries[steps:] + w.entries[:steps])


def reverse(w: SignSequence) -> SignSequence:
    return w.with_entries(tuple(reversed(w.entries)))


def canonical_form(w: SignSequence) -> tuple[Pair, ...]:
    """Least rotation of w or of its reversal."""
    candidates = [w.entries, reverse(w).entries]
    return min(c[i:] + c[:i] for c in candidates for i in range(len(w)))


def is_admissible(w: SignSequence, w_sig: WeightSignature, r: int) -> bool:
    """Whether some stable field with weights w_sig realizes w."""
    if not k_allowed(w.k, r):
        raise KOutOfRange(f"k={w.k} is not allowed for m={w_sig.m}, r={r}")
    check_symmetry(w, w_sig, r)
    if w.k < r + 1 or w.s < r:
        return True
    return any(sigma == nu for sigma, nu in w.entries)


def are_equivalent(w1: SignSequence, w2: SignSequence) -> bool:
    """Same orbit under shift and reversal."""
    if len(w1) != len(w2):
        raise ShapeMismatch(f"cannot compare 2k={len(w1)} with 2k={len(w2)}")
    if w1.parity_case and w2.parity_case and w1.parity_case != w2.parity_case:
        raise ShapeMismatch(f"parity cases differ: {w1.parity_case} vs {w2.parity_case}")
    return canonical_form(w1) == canonical_form(w2)


@dataclass(frozen=True)
class RepresentativeSpec:
    """Choices that pin down one representative field."""

    case: ConstructionCase
    lambda_values: tuple[Fraction, ...]
    mu_values: tuple[Fraction, ...]
    a_sign: int
    at_infinity: bool = False


_MIN_K = {
    ConstructionCase.CASE1: 1,
    ConstructionCase.CASE2: 1,
    ConstructionCase.CASE3: 1,
    ConstructionCase.CASE4: 2,
}


def choose_case(w_sig: WeightSignature, k: int) -> ConstructionCase:
    """Normal form used to realize a k-point sequence."""
    theta = theta_membership(w_sig)
    match parity_case(w_sig):
        case ParityCase.EVEN_Q_BOUNDARY:
            order = [3, 4]
        case ParityCase.EVEN_Q_NO_BOUNDARY:
            order = [1, 2]
        case ParityCase.ODD_ODD:
            order = [1, 2, 3, 4]
    for index in order:
        case = ConstructionCase(f"CASE{index}")
        if theta.holds(index) and k >= _MIN_K[case]:
            return case
    raise NotAdmissible(f"no normal form of {w_sig} carries k={k} equator pairs")


def _default_lambdas(count: int, with_zero: bool) -> list[Fraction]:
    half = math.ceil(count / 2)
    values = [Fraction(j - half) for j in range(1, count + 1)]
    if with_zero:
        return values
    return [v + 1 if v >= 0 else v for v in values]


def plan_representative(target: SignSequence, w_sig: WeightSignature) -> RepresentativeSpec:
    """Deterministic λ, μ and a for the target sequence."""
    k = target.k
    case = choose_case(w_sig, k)
    boundary = case in (ConstructionCase.CASE3, ConstructionCase.CASE4)
    with_zero = case in (ConstructionCase.CASE2, ConstructionCase.CASE4)
    finite = k - 1 if boundary else k

    lambdas = _default_lambdas(finite, with_zero)
    nus = target.nus[:finite]
    mus = tuple(
        (lambdas[i] + lambdas[i + 1]) / 2 for i in range(finite - 1) if nus[i] != nus[i + 1]
    )
    sigma_1 = target.entries[0][0]
    a_sign = sigma_1 * (-1) ** (k if boundary else k - 1)
    return RepresentativeSpec(case, tuple(lambdas), mus, a_sign, at_infinity=boundary)


class _Forms:
    """Binary forms in X = x^q and Y = y^p used to build α."""

    def __init__(self, w: WeightSignature, lambdas: tuple[Fraction, ...]) -> None:
        p, q = w.p, w.q
        self.X = BivarPoly.monomial(q, 0)
        self.Y = BivarPoly.monomial(0, p)
        self.E = self.Y**2 + self.X**2 * 2
        if lambdas:
            v_lo, v_hi = lambdas[0] ** p - 1, lambdas[-1] ** p + 1
        else:
            v_lo, v_hi = Fraction(-1), Fraction(1)
        self.L_plus = self.Y - self.X * v_lo
        self.L_minus = self.Y - self.X * v_hi

    def positive(self, d: int) -> BivarPoly:
        """Leading Y-coefficient 1, positive at every finite root."""
        if d % 2 == 0:
            return self.E ** (d // 2)
        return self.E ** ((d - 1) // 2) * self.L_plus

    def negative(self, d: int) -> BivarPoly:
        """Leading Y-coefficient 1, negative at every finite root. Needs d >= 1."""
        if d % 2 == 1:
            return self.E ** ((d - 1) // 2) * self.L_minus
        return self.E ** ((d - 2) // 2) * self.L_plus * self.L_minus

    def signed(self, d: int, epsilon: int) -> BivarPoly:
        if epsilon > 0:
            return self.positive(d)
        if d == 0:
            raise NotAdmissible("α of degree zero cannot change sign")
        return self.negative(d)


def _root_product(w: WeightSignature, values) -> BivarPoly:
    product = BivarPoly.monomial(0, 0)
    for value in values:
        product = product * (BivarPoly.monomial(0, w.p) - BivarPoly.monomial(w.q, 0, value**w.p))
    return product


def build_field(spec: RepresentativeSpec, target: SignSequence, w_sig: WeightSignature) -> QHField:
    """Assemble (P, Q) from η, h and α for the planned case."""
    p, q = w_sig.p, w_sig.q
    r = theta_membership(w_sig).r
    k = target.k
    a = spec.a_sign
    lambdas = spec.lambda_values
    forms = _Forms(w_sig, lambdas)

    h = _root_product(w_sig, spec.mu_values)
    nonzero = [lam for lam in lambdas if lam != 0]
    disk = BivarPoly.monomial(2 * q, 0) + BivarPoly.monomial(0, 2 * p)
    core = disk ** ((r + 1 - k) // 2) * _root_product(w_sig, nonzero) * a

    if lambdas:
        h_at = h.evaluate(1, lambdas[0])
        epsilon = target.entries[0][1] * sign(a * h_at)
    else:
        epsilon = 1

    x_, y_ = BivarPoly.monomial(1, 0), BivarPoly.monomial(0, 1)
    y_rest = BivarPoly.monomial(0, p - 1)
    s_fin = len(spec.mu_values)

    match spec.case:
        case ConstructionCase.CASE1 | ConstructionCase.CASE2:
            alpha = forms.signed(r - s_fin, epsilon)
        case ConstructionCase.CASE3 | ConstructionCase.CASE4:
            d = r - 1 - s_fin
            kappa = -target.entries[k - 1][1] * a
            if kappa > 0:
                if d == 0:
                    alpha = BivarPoly.monomial(0, 0, Fraction(1, 2) if epsilon > 0 else -1)
                else:
                    alpha = forms.X * forms.positive(d - 1) * epsilon
            else:
                alpha = forms.signed(d, epsilon) * 2

    scale = Fraction(-a, q)
    match spec.case:
        case ConstructionCase.CASE1:
            eta = core
            P = alpha * h * y_rest * scale
        case ConstructionCase.CASE2:
            eta = y_ * core
            P = alpha * h * scale
        case ConstructionCase.CASE3:
            eta = x_ * core
            P = x_ * y_rest * alpha * h * scale
        case ConstructionCase.CASE4:
            eta = x_ * y_ * core
            P = x_ * alpha * h * scale

    Q = (eta + y_ * P * q).exact_quotient(BivarPoly.monomial(1, 0, p))
    return validate(w_sig, P, Q)


def construct_representative(
    target: SignSequence,
    w_sig: WeightSignature,
    spec: RepresentativeSpec | None = None,
) -> QHField:
    """A stable field whose sign sequence is exactly ``target``."""
    if math.gcd(w_sig.p, w_sig.q) != 1 or w_sig.p % 2 == 0:
        raise InvalidInputError(f"weights must be normalized, got {w_sig}")
    r = theta_membership(w_sig).r
    if r is None:
        raise NoIntegerR(f"no stable field exists for {w_sig}")
    expected_case = parity_case(w_sig)
    if target.parity_case not in (None, expected_case):
        raise CaseMismatch(f"sequence is {target.parity_case}, weights need {expected_case}")
    target = SignSequence(target.entries, expected_case)

    if not is_admissible(target, w_sig, r):
        raise NotAdmissible(f"{target} is not admissible for {w_sig}")

    spec = spec or plan_representative(target, w_sig)
    X = build_field(spec, target, w_sig)

    verdict = classify(X)
    if not verdict.is_stable:
        raise CaseMismatch(f"constructed field is {verdict.verdict}: {X}")
    eta = compute_eta(X)
    produced = sign_sequence(X, infinite_singularities(X, eta))
    if produced.entries != target.entries:
        raise CaseMismatch(f"constructed field realizes {produced}, expected {target}")

    logger.debug("representative_constructed", case=spec.case, target=str(target))
    return X


def focus_representatives(w_sig: WeightSignature) -> list[QHField]:
    """The two rootless stable fields, one per focus orientation."""
    r = theta_membership(w_sig).r
    if r is None or r % 2 == 0 or not theta_membership(w_sig).holds(1):
        return []
    p, q = w_sig.p, w_sig.q
    forms = _Forms(w_sig, ())
    eta = (BivarPoly.monomial(2 * q, 0) + BivarPoly.monomial(0, 2 * p)) ** ((r + 1) // 2)
    P = forms.positive(r) * BivarPoly.monomial(0, p - 1) * Fraction(-1, q)
    Q = (eta + BivarPoly.monomial(0, 1, q) * P).exact_quotient(BivarPoly.monomial(1, 0, p))
    X = validate(w_sig, P, Q)
    return [X, X.scaled(-1)]
