import math

import pytest

from qhflow.config import Settings
from qhflow.services.counting import (
    BoundExceeded,
    DiscrepancyKind,
    NoR,
    class_representatives,
    count_bruteforce,
    count_D,
    count_E,
    count_formula,
    discrepancies,
    j_set,
    primitive_cycles,
    symmetric_cycles,
)
from qhflow.services.poly_core import WeightSignature
from qhflow.services.sequences import KOutOfRange, are_equivalent, sign_sequence
from qhflow.services.stability import classify, theta_membership


@pytest.fixture
def oracle_settings() -> Settings:
    return Settings(r_bound=7)


def _grid():
    for p in (1, 3, 5):
        for q in range(1, 7):
            if math.gcd(p, q) != 1 or (q == 1 and p > 1):
                continue
            for m in range(1, 61):
                w = WeightSignature(p, q, m)
                r = theta_membership(w).r
                if r is not None and r <= 7:
                    yield w


def test_j_set():
    """Test the allowed k for odd and even r."""
    assert j_set(1, 1) == {0, 2}
    assert j_set(3, 3) == {0, 2, 4}
    assert j_set(4, 2) == {1, 3}
    assert j_set(1, 0) == {1}


def test_cycle_recurrences():
    """Test the first values of both cycle recurrences."""
    assert [primitive_cycles(n, False) for n in (1, 2, 3, 4)] == [2, 1, 2, 3]
    assert [primitive_cycles(n, True) for n in (1, 2, 3)] == [4, 6, 20]
    assert symmetric_cycles(1, True) == 4
    assert symmetric_cycles(2, True) == 4


def test_linear_family_counts():
    """Test that (1, 1, 1) has three sectored classes and two foci."""
    count = count_formula(WeightSignature(1, 1, 1))
    assert count.r == 1
    row = count.per_k[2]
    assert (row.D, row.E, row.C) == (3, 3, 3)
    assert count.c0 == 2
    assert count.total == 5
    assert count.total_formula == 5


def test_linear_family_oracle(oracle_settings):
    """Test that the oracle agrees on (1, 1, 1)."""
    count = count_bruteforce(WeightSignature(1, 1, 1), oracle_settings)
    assert count.per_k[2].C == 3
    assert count.total_enumerated == 5


@pytest.mark.parametrize("w", [WeightSignature(1, 7, 2), WeightSignature(3, 7, 2)], ids=str)
def test_empty_families_raise(w):
    """Test that families without r have no stable fields."""
    with pytest.raises(NoR):
        count_formula(w)


def test_oracle_bound():
    """Test that the oracle refuses r above its bound."""
    with pytest.raises(BoundExceeded):
        count_bruteforce(WeightSignature(1, 1, 1), Settings(r_bound=0))


def test_granular_counts_match_oracle(oracle_settings):
    """Test the per-k formulas against exhaustive enumeration."""
    checked = 0
    for w in _grid():
        formula = count_formula(w)
        oracle = count_bruteforce(w, oracle_settings)
        assert formula.per_k.keys() == oracle.per_k.keys(), w
        for k, row in oracle.per_k.items():
            assert formula.per_k[k] == row, (w, k)
            assert row.C == (row.D + row.E) // 2
            assert (row.D + row.E) % 2 == 0
        assert formula.c0 == oracle.c0
        assert formula.total == oracle.total
        checked += 1
    assert checked > 50


def test_count_D_and_E_reject_k_outside_j():
    """Test that k outside the allowed set is rejected."""
    w = WeightSignature(1, 1, 1)
    with pytest.raises(KOutOfRange):
        count_D(w, 1, 1)
    with pytest.raises(KOutOfRange):
        count_E(w, 1, 0)


def test_linear_family_discrepancies(oracle_settings):
    """Test that the printed total and focus count differ from the oracle."""
    found = {d.kind: d for d in discrepancies(WeightSignature(1, 1, 1), oracle_settings)}
    assert set(found) == {DiscrepancyKind.TOTAL_CLOSED_FORM, DiscrepancyKind.C0_CONVENTION}
    assert found[DiscrepancyKind.TOTAL_CLOSED_FORM].printed == 3
    assert found[DiscrepancyKind.TOTAL_CLOSED_FORM].observed == 5
    assert found[DiscrepancyKind.C0_CONVENTION].printed == 0
    assert found[DiscrepancyKind.C0_CONVENTION].regime == "ODD_ODD/r=odd"


def test_representatives_cover_every_class(oracle_settings):
    """Test that (1, 1, 1) yields five pairwise inequivalent stable fields."""
    representatives = class_representatives(WeightSignature(1, 1, 1), oracle_settings)
    assert len(representatives) == 5
    assert [rep.k for rep in representatives] == [0, 0, 2, 2, 2]
    for rep in representatives:
        assert classify(rep.field).is_stable
    sequences = [sign_sequence(rep.field) for rep in representatives if rep.k]
    for i, left in enumerate(sequences):
        for right in sequences[i + 1 :]:
            assert not are_equivalent(left, right)
