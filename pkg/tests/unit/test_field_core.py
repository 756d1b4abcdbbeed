from fractions import Fraction

import pytest

from qhflow.core.exceptions import InvalidInputError
from qhflow.services.field_core import (
    IndivisibleDegree,
    NotCoprime,
    WrongDegree,
    check_membership,
    compute_eta,
    is_radial,
    normalize_field,
    normalize_weights,
    reversing_symmetry,
    shear,
)
from qhflow.services.poly_core import BivarPoly, BothZero, WeightSignature


@pytest.mark.parametrize(
    "raw,expected",
    [
        ((1, 2, 2), (1, 2, 2)),
        ((2, 4, 3), (1, 2, 2)),
        ((2, 1, 3), (1, 2, 3)),
        ((3, 1, 4), (1, 3, 4)),
        ((4, 3, 5), (3, 4, 5)),
        ((6, 9, 4), (3, 2, 2)),
    ],
)
def test_normalize_weights(raw, expected):
    """Test that weights are reduced by their gcd with p odd."""
    w = normalize_weights(*raw)
    assert (w.p, w.q, w.m) == expected


def test_normalize_weights_rejects_indivisible_degree():
    """Test that gcd(p, q) must divide m - 1."""
    with pytest.raises(IndivisibleDegree):
        normalize_weights(2, 4, 2)


def test_membership_counts_monomials():
    """Test the monomial counts for (1, 2, 2)."""
    report = check_membership(WeightSignature(1, 2, 2))
    assert report.nonempty
    assert (report.k1, report.k2) == (2, 2)
    assert report.coefficient_dimension == 4


def test_membership_empty_family():
    """Test that (3, 7, 2) admits no P."""
    report = check_membership(WeightSignature(3, 7, 2))
    assert not report.nonempty
    assert report.k1 == 0


def test_validate_rejects_wrong_degree(field_builder):
    """Test that P = x is rejected for (1, 2, 2)."""
    with pytest.raises(WrongDegree):
        field_builder(1, 2, 2, {(1, 0): 1}, {(3, 0): 1})


def test_validate_rejects_common_axis_factor(field_builder):
    """Test that x dividing P and Q is rejected."""
    with pytest.raises(NotCoprime):
        field_builder(1, 2, 2, {(2, 0): 1}, {(3, 0): 1, (1, 1): 1})


def test_validate_rejects_common_factor(field_builder):
    """Test that x - y dividing P and Q is rejected."""
    with pytest.raises(NotCoprime):
        field_builder(1, 1, 2, {(2, 0): 1, (0, 2): -1}, {(2, 0): 1, (1, 1): -1})


def test_validate_rejects_zero_field(field_builder):
    """Test that P = Q = 0 is rejected."""
    with pytest.raises(BothZero):
        field_builder(1, 2, 2, {}, {})


def test_eta_of_focus(x1):
    """Test that the focus field has η = x^4 + y^2."""
    eta = compute_eta(x1)
    assert eta.eta.terms == {(4, 0): Fraction(1), (0, 2): Fraction(1)}
    assert eta.pos_roots == []
    assert eta.eta_0_pos == 1
    assert eta.eta_0_neg == 1


def test_eta_of_sectored_field(x2):
    """Test the directional zeros of η = 2x^4 - 5x^2 y + 2y^2."""
    eta = compute_eta(x2)
    assert [root.exact_value for root in eta.pos_roots] == [Fraction(1, 2), Fraction(2)]
    assert [root.exact_value for root in eta.neg_roots] == [Fraction(2), Fraction(1, 2)]
    assert eta.eta_1_0 == 2
    assert not eta.identically_zero


def test_radial_field_detected(radial, x1):
    """Test that (x, 2y) is radial and the focus is not."""
    assert is_radial(radial)
    assert not is_radial(x1)


def test_reversing_symmetry(x1, x2, field_builder):
    """Test that each reflection is detected and a linear focus has none."""
    assert reversing_symmetry(x1) == "x"
    assert reversing_symmetry(x2) == "x"
    assert reversing_symmetry(field_builder(1, 1, 2, {(1, 1): 1}, {(2, 0): 1, (0, 2): 1})) == "y"
    quadratic = field_builder(1, 1, 2, {(2, 0): 1, (1, 1): 1}, {(2, 0): 1, (1, 1): 1, (0, 2): 1})
    assert reversing_symmetry(quadratic) == "origin"
    focus = field_builder(1, 1, 1, {(1, 0): 1, (0, 1): -1}, {(1, 0): 1, (0, 1): 1})
    assert reversing_symmetry(focus) is None


def test_normalize_field_swaps_axes(x2):
    """Test that a field given with weights (2, 1) is rewritten for (1, 2)."""
    P = BivarPoly.from_terms({(0, 3): 2, (1, 1): -3})
    Q = BivarPoly.from_terms({(0, 2): 1, (1, 0): -1})
    field = normalize_field(2, 1, 2, P, Q)
    assert (field.w.p, field.w.q, field.w.m) == (1, 2, 2)
    assert field.P.terms == x2.P.terms
    assert field.Q.terms == x2.Q.terms


def test_swap_axes_is_an_involution(x2):
    """Test that swapping twice gives back the field."""
    twice = x2.swap_axes().swap_axes()
    assert twice.w == x2.w
    assert twice.P.terms == x2.P.terms
    assert twice.Q.terms == x2.Q.terms


def test_shear_is_invertible(x2):
    """Test that shearing by 3/2 and then by -3/2 gives back the field."""
    sheared = shear(x2, Fraction(3, 2))
    assert sheared.P.terms != x2.P.terms
    back = shear(sheared, Fraction(-3, 2))
    assert back.P.terms == x2.P.terms
    assert back.Q.terms == x2.Q.terms


def test_shear_needs_unit_weight(field_builder):
    """Test that shear is only defined for p = 1."""
    field = field_builder(3, 2, 2, {(0, 2): 1}, {(1, 0): 1})
    with pytest.raises(InvalidInputError, match="p = 1"):
        shear(field, 1)
