import math

import pytest

from qhflow.services.field_core import compute_eta
from qhflow.services.poly_core import WeightSignature
from qhflow.services.stability import (
    HypothesisViolated,
    NormalCase,
    Portrait,
    Reason,
    Verdict,
    classify,
    normal_form,
    return_integral,
    theta_membership,
)


def test_return_integral_of_unstable_focus(x1):
    """Test that the focus field has return integral pi."""
    integral = return_integral(x1, tol=1e-9)
    assert integral.value == pytest.approx(math.pi, abs=1e-6)
    assert integral.sign == 1
    assert not integral.ambiguous


def test_return_integral_flips_with_time(x1):
    """Test that reversing time negates the return integral."""
    integral = return_integral(x1.scaled(-1), tol=1e-9)
    assert integral.value == pytest.approx(-math.pi, abs=1e-6)
    assert integral.sign == -1


def test_return_integral_needs_monodromic_origin(x2):
    """Test that a field with directional zeros has no return integral."""
    with pytest.raises(HypothesisViolated):
        return_integral(x2)


def test_classify_focus(x1, test_settings):
    """Test that the focus field is a stable unstable focus."""
    verdict = classify(x1, settings=test_settings)
    assert verdict.verdict is Verdict.STABLE
    assert verdict.portrait is Portrait.GLOBAL_UNSTABLE_FOCUS
    assert classify(x1.scaled(-1), settings=test_settings).portrait is (
        Portrait.GLOBAL_STABLE_FOCUS
    )


def test_classify_linear_center(field_builder, test_settings):
    """Test that the rotation (-y, x) is a certified center."""
    center = field_builder(1, 1, 1, {(0, 1): -1}, {(1, 0): 1})
    verdict = classify(center, settings=test_settings)
    assert verdict.verdict is Verdict.UNSTABLE_IN_FAMILY
    assert verdict.portrait is Portrait.GLOBAL_CENTER
    assert verdict.reasons == [Reason.CENTER_CERTIFIED]
    assert verdict.integral.certified_center


def test_classify_center_with_odd_integrand(field_builder, test_settings):
    """Test that (-y, 2x^3) in H_122 is certified as a center from its odd integrand."""
    center = field_builder(1, 2, 2, {(0, 1): -1}, {(3, 0): 2})
    verdict = classify(center, settings=test_settings)
    assert verdict.verdict is Verdict.UNSTABLE_IN_FAMILY
    assert verdict.portrait is Portrait.GLOBAL_CENTER
    assert verdict.reasons == [Reason.CENTER_CERTIFIED]
    assert verdict.integral.certified_center
    assert verdict.integral.sign == 0


def test_classify_sectored(x2, test_settings):
    """Test that four simple directional zeros give a stable sectored field."""
    verdict = classify(x2, settings=test_settings)
    assert verdict.is_stable
    assert verdict.portrait is Portrait.SECTORED
    assert verdict.reasons == []


def test_classify_multiple_root(field_builder, test_settings):
    """Test that a double directional zero is unstable in the family."""
    field = field_builder(1, 1, 1, {(1, 0): 2, (0, 1): -1}, {(1, 0): 1})
    verdict = classify(field, settings=test_settings)
    assert verdict.verdict is Verdict.UNSTABLE_IN_FAMILY
    assert Reason.MULTIPLE_ROOT in verdict.reasons


def test_classify_non_simple_boundary_root(field_builder, test_settings):
    """Test that a double zero along x = 0 is unstable in the family."""
    field = field_builder(1, 1, 1, {(1, 0): 1}, {(1, 0): 1, (0, 1): 1})
    verdict = classify(field, settings=test_settings)
    assert verdict.verdict is Verdict.UNSTABLE_IN_FAMILY
    assert verdict.reasons == [Reason.BOUNDARY_ROOT_NOT_SIMPLE]


def test_classify_radial(radial, test_settings):
    """Test that the radial field is degenerate."""
    verdict = classify(radial, settings=test_settings)
    assert verdict.verdict is Verdict.DEGENERATE_RADIAL
    assert verdict.portrait is None


def test_theta_membership_linear():
    """Test that (1, 1, 1) satisfies all four equations with r = 1."""
    theta = theta_membership(WeightSignature(1, 1, 1))
    assert theta.in_theta == (True, True, True, True)
    assert theta.r == 1
    assert theta.labels == ["Θ1", "Θ2", "Θ3", "Θ4"]


def test_theta_membership_quadratic():
    """Test that (1, 2, 2) lies in the first two classes only."""
    theta = theta_membership(WeightSignature(1, 2, 2))
    assert theta.in_theta == (True, True, False, False)
    assert theta.r == 1


def test_theta_membership_empty():
    """Test that (3, 7, 2) satisfies none of the equations."""
    theta = theta_membership(WeightSignature(3, 7, 2))
    assert not theta.any
    assert theta.r is None


def test_theta_equations_agree_on_r():
    """Test that solved equations share r and that overlaps force unit weights."""
    for p in range(1, 10):
        for q in range(1, 10):
            if math.gcd(p, q) != 1:
                continue
            for m in range(1, 51):
                theta = theta_membership(WeightSignature(p, q, m))
                r = theta.r
                if theta.holds(1):
                    assert p + q + m - 1 == (r + 1) * p * q
                if theta.holds(2):
                    assert p + m - 1 == r * p * q
                if theta.holds(3):
                    assert q + m - 1 == r * p * q
                if theta.holds(4):
                    assert m - 1 == (r - 1) * p * q and r >= 1
                held = {i for i in range(1, 5) if theta.holds(i)}
                if {1, 4} <= held or {2, 3} <= held:
                    assert p == q == 1
                if {1, 2} <= held or {3, 4} <= held:
                    assert p == 1
                if {1, 3} <= held or {2, 4} <= held:
                    assert q == 1


def test_normal_form_of_sectored_field(x2):
    """Test that both boundary directions are regular for the sectored field."""
    form = normal_form(x2, compute_eta(x2))
    assert form.case is NormalCase.A
    assert form.r == 1
    assert form.boundary == (True, True)
    assert form.soft_zero_corners == ()


def test_normal_form_of_rotation(field_builder):
    """Test that the rotation sits in the first case with r = 1."""
    center = field_builder(1, 1, 1, {(0, 1): -1}, {(1, 0): 1})
    form = normal_form(center, compute_eta(center))
    assert form.case is NormalCase.A
    assert form.r == 1


@pytest.mark.parametrize("factor,expected", [(2, 1), (-3, -1)])
def test_return_integral_under_time_rescaling(x1, factor, expected):
    """Test that positive rescaling keeps the sign and negative rescaling flips it."""
    assert return_integral(x1.scaled(factor), tol=1e-9).sign == expected
