import random
from fractions import Fraction

import pytest

from qhflow.services.counting import admissible_sequences, j_set
from qhflow.services.field_core import QHField, validate
from qhflow.services.geometry import SingularityKind, infinite_singularities
from qhflow.services.poly_core import BivarPoly, WeightSignature
from qhflow.services.sequences import are_equivalent, construct_representative, sign_sequence
from qhflow.services.stability import classify, theta_membership

FAMILIES = [
    WeightSignature(1, 1, 2),
    WeightSignature(1, 1, 3),
    WeightSignature(1, 2, 2),
    WeightSignature(1, 2, 3),
    WeightSignature(1, 2, 4),
]


def _nudge(poly: BivarPoly, rng: random.Random) -> BivarPoly:
    return BivarPoly.from_terms(
        {mono: c + Fraction(rng.randint(-10**6, 10**6), 10**12) for mono, c in poly.terms.items()}
    )


def _perturbed(X: QHField, rng: random.Random) -> QHField:
    return validate(X.w, _nudge(X.P, rng), _nudge(X.Q, rng))


@pytest.fixture
def sectored_fields() -> list[QHField]:
    """Constructed stable sectored fields over several families."""
    fields = []
    for w in FAMILIES:
        r = theta_membership(w).r
        for k in sorted(j_set(w.m, r)):
            if k == 0 or k > 4:
                continue
            fields.extend(construct_representative(t, w) for t in admissible_sequences(w, r, k))
    return fields


def test_sectored_portrait_survives_small_perturbation(sectored_fields):
    """Test that k, the point kinds and the sequence class persist under 1e-6 nudges."""
    rng = random.Random(7321)
    for _ in range(50):
        X = rng.choice(sectored_fields)
        nudged = _perturbed(X, rng)
        assert classify(nudged).is_stable, nudged

        before, after = infinite_singularities(X), infinite_singularities(nudged)
        assert len(after) == len(before)
        assert [p.kind for p in after] == [p.kind for p in before]
        assert are_equivalent(sign_sequence(nudged, after), sign_sequence(X, before))


def test_double_root_splits_under_perturbation(field_builder):
    """Test that a double directional zero is not structurally stable."""
    epsilon = Fraction(1, 10**6)
    P = {(1, 0): 2, (0, 1): -1}
    double = field_builder(1, 1, 1, P, {(1, 0): 1})
    assert {p.kind for p in infinite_singularities(double)} == {SingularityKind.SADDLE_NODE}
    assert len(infinite_singularities(double)) == 2

    assert infinite_singularities(field_builder(1, 1, 1, P, {(1, 0): 1 + epsilon})) == []
    split = infinite_singularities(field_builder(1, 1, 1, P, {(1, 0): 1 - epsilon}))
    assert len(split) == 4
    assert SingularityKind.SADDLE_NODE not in {p.kind for p in split}
