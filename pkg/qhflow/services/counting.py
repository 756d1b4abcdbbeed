"""Counting topological equivalence classes of stable fields.

Three layers are kept side by side: the granular per-k formulas, the printed
closed-form totals, and an exhaustive oracle that enumerates admissible sign
sequences and partitions them into orbits under shift and reversal. The oracle
is authoritative; ``discrepancies`` reports where the printed layers disagree.
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction
from functools import lru_cache

import structlog
from sympy import divisors

from qhflow.config import Settings, get_settings
from qhflow.core.exceptions import EmptyClassError, InvalidInputError
from qhflow.services.field_core import QHField
from qhflow.services.poly_core import WeightSignature
from qhflow.services.sequences import (
    KOutOfRange,
    NotAdmissible,
    ParityCase,
    SignSequence,
    SymmetryViolation,
    check_symmetry,
    choose_case,
    construct_representative,
    focus_representatives,
    is_admissible,
    k_allowed,
    parity_case,
)
from qhflow.services.stability import ThetaMembership, theta_membership

logger = structlog.get_logger()


class NoR(EmptyClassError):
    """No r exists, so the family has no stable field."""


class BoundExceeded(InvalidInputError):
    """r is above the configured oracle bound."""

    event = "oracle_bound_exceeded"


class DiscrepancyKind(StrEnum):
    TOTAL_CLOSED_FORM = "TOTAL_CLOSED_FORM"
    PRINTED_D = "PRINTED_D"
    PRINTED_E = "PRINTED_E"
    C0_CONVENTION = "C0_CONVENTION"


@dataclass(frozen=True)
class KCount:
    k: int
    D: int
    E: int
    C: int


@dataclass(frozen=True)
class ClassCount:
    w: WeightSignature
    r: int
    per_k: dict[int, KCount]
    c0: int
    total_formula: int | None = None
    total_enumerated: int | None = None
    closed_form: Fraction | None = None

    @property
    def total(self) -> int:
        return self.c0 + sum(row.C for row in self.per_k.values())


@dataclass(frozen=True)
class Discrepancy:
    kind: DiscrepancyKind
    regime: str
    printed: Fraction
    observed: Fraction
    k: int | None = None


@dataclass(frozen=True)
class Representative:
    k: int
    sequence: SignSequence | None
    field: QHField


def j_set(m: int, r: int) -> set[int]:
    """Allowed numbers k of equator point pairs."""
    if r < 0:
        raise InvalidInputError(f"r must be non-negative, got {r}")
    start = 0 if r % 2 else 1
    return set(range(start, r + 2, 2))


@lru_cache(maxsize=None)
def primitive_cycles(n: int, doubled: bool) -> Fraction:
    """𝒫_{2n} from the primitive-cycle recurrence; ``doubled`` selects 2^{2n} over 2^n."""
    top = 2 ** (2 * n) if doubled else 2**n
    rest = sum((l * primitive_cycles(l, doubled) for l in divisors(n) if l != n), Fraction(0))
    return (top - rest) / n


@lru_cache(maxsize=None)
def symmetric_cycles(n: int, doubled: bool) -> Fraction:
    """I_{2n}; the undoubled form is only used for odd n."""
    top = 2 ** (n + 1) if doubled else 2 ** ((n + 1) // 2)
    return top - sum((symmetric_cycles(l, doubled) for l in divisors(n) if l != n), Fraction(0))


def _odd_part(k: int) -> int:
    while k % 2 == 0:
        k //= 2
    return k


def _cycle_sum(k: int, r: int, counter) -> Fraction:
    if r % 2:
        return sum((counter(n, True) for n in divisors(k // 2)), Fraction(0))
    return sum((counter(n, False) for n in divisors(k)), Fraction(0))


def _check_k(w_sig: WeightSignature, r: int, k: int) -> None:
    if k == 0 or not k_allowed(k, r):
        raise KOutOfRange(f"k={k} is not a nonzero element of J for m={w_sig.m}, r={r}")


def _realizable(w_sig: WeightSignature, k: int) -> bool:
    try:
        choose_case(w_sig, k)
    except NotAdmissible:
        return False
    return True


def count_D(w_sig: WeightSignature, r: int, k: int) -> int:
    """Shift orbits of admissible k-sequences."""
    _check_k(w_sig, r, k)
    if not _realizable(w_sig, k):
        return 0
    match parity_case(w_sig):
        case ParityCase.ODD_ODD:
            value = _cycle_sum(k, r, primitive_cycles)
        case ParityCase.EVEN_Q_NO_BOUNDARY | ParityCase.EVEN_Q_BOUNDARY:
            value = Fraction(2**k)
    return int(value) - (1 if k == r + 1 else 0)


def count_E(w_sig: WeightSignature, r: int, k: int) -> int:
    """Shift orbits of admissible k-sequences that contain their reversal."""
    _check_k(w_sig, r, k)
    if not _realizable(w_sig, k):
        return 0
    match parity_case(w_sig):
        case ParityCase.ODD_ODD:
            value = _cycle_sum(k, r, symmetric_cycles)
        case ParityCase.EVEN_Q_NO_BOUNDARY:
            value = Fraction(2 ** ((_odd_part(k) + 1) // 2))
        case ParityCase.EVEN_Q_BOUNDARY:
            value = Fraction(2**k)
    return int(value) - (1 if k == r + 1 else 0)


def printed_D(w_sig: WeightSignature, r: int, k: int) -> int:
    """D as the printed propositions state it, without the realisability floor."""
    _check_k(w_sig, r, k)
    if parity_case(w_sig) is ParityCase.ODD_ODD:
        value = _cycle_sum(k, r, primitive_cycles)
    else:
        value = sum((primitive_cycles(n, False) for n in divisors(k)), Fraction(0))
    return int(value) - (1 if k == r + 1 else 0)


def printed_E(w_sig: WeightSignature, r: int, k: int) -> int:
    _check_k(w_sig, r, k)
    top = k == r + 1
    match parity_case(w_sig):
        case ParityCase.ODD_ODD:
            return int(_cycle_sum(k, r, symmetric_cycles)) - (1 if top else 0)
        case ParityCase.EVEN_Q_NO_BOUNDARY:
            return 1 if top else 2
        case ParityCase.EVEN_Q_BOUNDARY:
            if r % 2:
                return 3 if top else 4
            return 1 if top else 2


def _membership(w_sig: WeightSignature) -> tuple[ThetaMembership, int]:
    theta = theta_membership(w_sig)
    if theta.r is None:
        raise NoR(f"Ω is empty for {w_sig}: no Θ equation has an integer solution")
    return theta, theta.r


def focus_count(theta: ThetaMembership) -> int:
    """Rootless stable fields exist iff Θ₁ holds with r odd; they come as a pair of foci."""
    return 2 if theta.holds(1) and theta.r is not None and theta.r % 2 == 1 else 0


def printed_focus_count(theta: ThetaMembership) -> int:
    return 2 if theta.only(1) and theta.r is not None and theta.r % 2 == 1 else 0


def _nested_sum(outer: range, divisor_of, term) -> Fraction:
    return sum(
        (term(n) for j in outer for n in divisors(divisor_of(j))),
        Fraction(0),
    )


def closed_form_total(w_sig: WeightSignature) -> Fraction:
    """The printed closed-form total, evaluated literally in exact rationals."""
    theta, r = _membership(w_sig)
    half = Fraction(1, 2)
    odd_r = r % 2 == 1

    if parity_case(w_sig) is ParityCase.ODD_ODD:
        if odd_r:
            base = 1 if theta.only(1) else -1
            inner = _nested_sum(
                range(1, (r + 1) // 2 + 1),
                lambda j: j,
                lambda n: primitive_cycles(n, True) + symmetric_cycles(n, True),
            )
            return base + half * inner
        inner = _nested_sum(
            range(1, r // 2 + 1),
            lambda j: 2 * j + 1,
            lambda n: primitive_cycles(n, False) + symmetric_cycles(n, False),
        )
        return -1 + half * inner

    def P(n: int) -> Fraction:
        return primitive_cycles(n, False)

    if not odd_r:
        inner = _nested_sum(range(1, r // 2 + 1), lambda j: 2 * j + 1, P)
        return half * (r - 2 + inner)
    outer = range(1, (r + 1) // 2 + 1)
    if theta.holds(1):
        return half * (r + 3 + _nested_sum(outer, lambda j: 2 * j, P))
    if theta.holds(2):
        return half * (r - 1 + _nested_sum(outer, lambda j: 2 * j, P))
    return r + half * _nested_sum(outer, lambda j: j, P)


def _row(k: int, D: int, E: int) -> KCount:
    if (D + E) % 2:
        raise ArithmeticError(f"D + E is odd at k={k}: D={D}, E={E}")
    return KCount(k=k, D=D, E=E, C=(D + E) // 2)


def count_formula(w_sig: WeightSignature) -> ClassCount:
    """Per-k counts from the granular formulas and the closed-form total."""
    theta, r = _membership(w_sig)
    per_k = {
        k: _row(k, count_D(w_sig, r, k), count_E(w_sig, r, k))
        for k in sorted(j_set(w_sig.m, r))
        if k != 0
    }
    c0 = focus_count(theta)
    total = c0 + sum(row.C for row in per_k.values())
    logger.debug("classes_counted", w=str(w_sig), r=r, total=total)
    return ClassCount(
        w=w_sig,
        r=r,
        per_k=per_k,
        c0=c0,
        total_formula=total,
        closed_form=closed_form_total(w_sig),
    )


# Oracle. Each pair (σ, ν) is packed into two bits and a word of 2k pairs into one int.


def _pack(entries: tuple[tuple[int, int], ...]) -> int:
    word = 0
    for index, (sigma, nu) in enumerate(entries):
        word |= (((sigma > 0) << 1) | (nu > 0)) << (2 * index)
    return word


def _rotations(word: int, length: int) -> Iterator[int]:
    width = 2 * (length - 1)
    for _ in range(length):
        yield word
        word = (word >> 2) | ((word & 3) << width)


def _reversed(word: int, length: int) -> int:
    result = 0
    for index in range(length):
        result |= ((word >> (2 * index)) & 3) << (2 * (length - 1 - index))
    return result


def _extend(head: list[tuple[int, int]], w_sig: WeightSignature, r: int):
    """Complete the first k pairs to 2k pairs using the parity-case symmetry."""
    k = len(head)
    entries = list(head) + [(0, 0)] * k
    match parity_case(w_sig):
        case ParityCase.ODD_ODD:
            f = (-1) ** (w_sig.m - 1)
            for i in range(k):
                entries[i + k] = (f * head[i][0], f * head[i][1])
        case ParityCase.EVEN_Q_NO_BOUNDARY:
            for i in range(k):
                entries[2 * k - 1 - i] = (-head[i][0], -head[i][1])
        case ParityCase.EVEN_Q_BOUNDARY:
            for i in range(k - 1):
                entries[2 * k - 2 - i] = head[i]
            f = (-1) ** (r - 1)
            entries[2 * k - 1] = (f * head[k - 1][0], f * head[k - 1][1])
    return tuple(entries)


def admissible_sequences(w_sig: WeightSignature, r: int, k: int) -> list[SignSequence]:
    """Every admissible sequence with k pairs per half, in enumeration order."""
    case = parity_case(w_sig)
    found: list[SignSequence] = []
    for phase in (1, -1):
        sigmas = [phase * (-1) ** i for i in range(k)]
        for bits in range(2**k):
            head = [(sigmas[i], 1 if bits >> i & 1 else -1) for i in range(k)]
            candidate = SignSequence(_extend(head, w_sig, r), case)
            try:
                check_symmetry(candidate, w_sig, r)
            except SymmetryViolation:
                continue
            if is_admissible(candidate, w_sig, r):
                found.append(candidate)
    return found


@dataclass
class _Orbits:
    shift_orbits: set[int] = field(default_factory=set)
    symmetric: set[int] = field(default_factory=set)
    full: dict[int, SignSequence] = field(default_factory=dict)


def _partition(sequences: list[SignSequence], length: int) -> _Orbits:
    orbits = _Orbits()
    for w in sequences:
        word = _pack(w.entries)
        shift_min = min(_rotations(word, length))
        mirror_min = min(_rotations(_reversed(word, length), length))
        orbits.shift_orbits.add(shift_min)
        if shift_min == mirror_min:
            orbits.symmetric.add(shift_min)
        key = min(shift_min, mirror_min)
        if key not in orbits.full or _pack(orbits.full[key].entries) > word:
            orbits.full[key] = w
    return orbits


@lru_cache(maxsize=256)
def _enumerate(w_sig: WeightSignature, r: int, k: int) -> tuple[KCount, tuple[SignSequence, ...]]:
    if not _realizable(w_sig, k):
        return KCount(k, 0, 0, 0), ()
    orbits = _partition(admissible_sequences(w_sig, r, k), 2 * k)
    row = KCount(
        k=k, D=len(orbits.shift_orbits), E=len(orbits.symmetric), C=len(orbits.full)
    )
    representatives = tuple(orbits.full[key] for key in sorted(orbits.full))
    return row, representatives


def _oracle_r(w_sig: WeightSignature, settings: Settings) -> tuple[ThetaMembership, int]:
    theta, r = _membership(w_sig)
    if r > settings.r_bound:
        raise BoundExceeded(f"r={r} exceeds the oracle bound {settings.r_bound}")
    return theta, r


def count_bruteforce(w_sig: WeightSignature, settings: Settings | None = None) -> ClassCount:
    """Per-k counts by exhaustive enumeration of admissible sequences."""
    settings = settings or get_settings()
    theta, r = _oracle_r(w_sig, settings)
    per_k = {k: _enumerate(w_sig, r, k)[0] for k in sorted(j_set(w_sig.m, r)) if k != 0}
    c0 = focus_count(theta)
    total = c0 + sum(row.C for row in per_k.values())
    logger.debug("classes_enumerated", w=str(w_sig), r=r, total=total)
    return ClassCount(w=w_sig, r=r, per_k=per_k, c0=c0, total_enumerated=total)


def _regime(w_sig: WeightSignature, r: int) -> str:
    return f"{parity_case(w_sig)}/r={'odd' if r % 2 else 'even'}"


def discrepancies(w_sig: WeightSignature, settings: Settings | None = None) -> list[Discrepancy]:
    """Printed values that disagree with the oracle."""
    oracle = count_bruteforce(w_sig, settings)
    theta, r = _membership(w_sig)
    regime = _regime(w_sig, r)
    found: list[Discrepancy] = []

    closed = closed_form_total(w_sig)
    if closed != oracle.total_enumerated:
        found.append(
            Discrepancy(DiscrepancyKind.TOTAL_CLOSED_FORM, regime, closed, Fraction(oracle.total))
        )
    for k, row in oracle.per_k.items():
        printed = printed_D(w_sig, r, k)
        if printed != row.D:
            found.append(
                Discrepancy(
                    DiscrepancyKind.PRINTED_D, regime, Fraction(printed), Fraction(row.D), k
                )
            )
        printed = printed_E(w_sig, r, k)
        if printed != row.E:
            found.append(
                Discrepancy(
                    DiscrepancyKind.PRINTED_E, regime, Fraction(printed), Fraction(row.E), k
                )
            )
    printed_c0 = printed_focus_count(theta)
    if printed_c0 != oracle.c0:
        found.append(
            Discrepancy(
                DiscrepancyKind.C0_CONVENTION, regime, Fraction(printed_c0), Fraction(oracle.c0), 0
            )
        )
    if found:
        logger.info("printed_counts_disagree", w=str(w_sig), count=len(found))
    return found


def class_representatives(
    w_sig: WeightSignature, settings: Settings | None = None
) -> list[Representative]:
    """One constructed stable field per equivalence class."""
    settings = settings or get_settings()
    theta, r = _oracle_r(w_sig, settings)
    found = [Representative(0, None, X) for X in focus_representatives(w_sig)]
    for k in sorted(j_set(w_sig.m, r)):
        if k == 0:
            continue
        for w in _enumerate(w_sig, r, k)[1]:
            found.append(Representative(k, w, construct_representative(w, w_sig)))
    logger.debug("representatives_built", w=str(w_sig), count=len(found))
    return found
