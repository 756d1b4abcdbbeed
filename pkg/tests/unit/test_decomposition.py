from fractions import Fraction

import pytest

from qhflow.services.decomposition import (
    End,
    NotApplicable,
    decompose,
    split_components,
)
from qhflow.services.poly_core import BivarPoly
from qhflow.services.stability import Portrait


def _focus_plus_quintic():
    P = BivarPoly.from_terms({(2, 0): 1, (0, 1): Fraction(-1, 2), (5, 0): 1})
    Q = BivarPoly.from_terms({(3, 0): 1, (1, 1): 2})
    return P, Q


def test_split_components():
    """Test that the quintic term forms its own component."""
    components = split_components(*_focus_plus_quintic(), 1, 2)
    assert [c.m for c in components] == [2, 5]
    assert components[1].Q.is_zero
    assert components[1].P.terms == {(5, 0): 1}


def test_dominant_part_at_origin(test_settings):
    """Test that the lowest component decides the portrait at the origin."""
    result = decompose(*_focus_plus_quintic(), 1, 2, End.ORIGIN, test_settings)
    assert result.dominant.m == 2
    assert result.field.w.m == 2
    assert result.verdict.portrait is Portrait.GLOBAL_UNSTABLE_FOCUS


def test_degenerate_part_at_infinity(test_settings):
    """Test that a dominant part outside the family is not applicable."""
    with pytest.raises(NotApplicable):
        decompose(*_focus_plus_quintic(), 1, 2, End.INFINITY, test_settings)


def test_unstable_dominant_part(test_settings):
    """Test that a double directional zero in the linear part is not applicable."""
    P = BivarPoly.from_terms({(1, 0): 2, (0, 1): -1, (3, 0): 1})
    Q = BivarPoly.from_terms({(1, 0): 1})
    with pytest.raises(NotApplicable, match="UNSTABLE_IN_FAMILY") as info:
        decompose(P, Q, 1, 1, End.ORIGIN, test_settings)
    assert [c.m for c in info.value.components] == [1, 3]
    assert info.value.dominant.m == 1


def test_constant_term_is_not_singular(test_settings):
    """Test that a nonzero constant leaves no singular point to describe."""
    P = BivarPoly.from_terms({(0, 0): 1, (1, 0): 1})
    Q = BivarPoly.from_terms({(0, 1): 1})
    with pytest.raises(NotApplicable):
        decompose(P, Q, 1, 1, End.ORIGIN, test_settings)
