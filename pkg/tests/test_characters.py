"""
Tests for truncated Borcherds-Kac-Weyl characters.

Core claims:
    - finite type characters reproduce the classical weight multiplicities
    - an imaginary index with lambda(h_i) > 0 contributes 1 at every height
    - too short a Weyl truncation is detected, not silently returned
    - the character agrees with the constructed simple module, including
      the imaginary index to height 6
"""

import pytest

from tests.conftest import datum
from weak_quantum_algebra.cartan import validate_datum
from weak_quantum_algebra.characters import (
    apply_weyl,
    character_module_crosscheck,
    perpendicular_subsets,
    truncated_character,
    weyl_elements,
)
from weak_quantum_algebra.exceptions import NotApplicable, TruncationTooTight

AFFINE_SL2 = [[2, -2], [-2, 2]]


def test_sl2_character():
    series = truncated_character(datum("sl2"), [2], 5)
    assert series.multiplicities == {(0,): 1, (1,): 1, (2,): 1}
    assert series.multiplicity([3]) == 0


def test_trivial_character():
    series = truncated_character(datum("sl3"), [0, 0], 4)
    assert series.multiplicities == {(0, 0): 1}


def test_sl3_fundamental():
    series = truncated_character(datum("sl3"), [1, 0], 4)
    assert series.multiplicities == {(0, 0): 1, (1, 0): 1, (1, 1): 1}


def test_sl3_adjoint():
    series = truncated_character(datum("sl3"), [1, 1], 4)
    assert series.multiplicity([1, 1]) == 2
    assert sum(series.multiplicities.values()) == 8
    assert series.multiplicity([1, 0]) == series.multiplicity([0, 1]) == 1
    assert series.multiplicity([2, 2]) == 1


def test_imaginary_index_contributes_every_height():
    series = truncated_character(datum("imag-2"), [1], 6)
    assert series.multiplicities == {(k,): 1 for k in range(7)}


def test_imaginary_index_with_zero_weight_is_trivial():
    series = truncated_character(datum("imag-2"), [0], 6)
    assert series.multiplicities == {(0,): 1}


def test_to_frame():
    frame = truncated_character(datum("sl2"), [1], 3).to_frame()
    assert list(frame.columns) == ["drop", "height", "multiplicity"]
    assert frame["drop"].tolist() == ["[0]", "[1]"]
    assert frame["multiplicity"].tolist() == [1, 1]


def test_non_dominant_and_wrong_length():
    with pytest.raises(NotApplicable):
        truncated_character(datum("sl2"), [-1], 3)
    with pytest.raises(NotApplicable):
        truncated_character(datum("sl3"), [1], 3)


def test_truncation_too_tight():
    d = validate_datum(AFFINE_SL2)
    with pytest.raises(TruncationTooTight):
        truncated_character(d, [1, 0], 6, weyl_length=1)


def test_apply_weyl():
    d = datum("sl2")
    assert apply_weyl(d, (0,), [1], [0]) == (1,)
    assert apply_weyl(d, (0,), [3], [0]) == (3,)
    assert apply_weyl(validate_datum(AFFINE_SL2), (0, 1), [1, 1], [0, 0]) == (3, 1)


def test_weyl_elements():
    assert len(weyl_elements(datum("sl2"), 5)) == 2
    assert len(weyl_elements(datum("sl3"), 6)) == 6
    assert len(weyl_elements(validate_datum(AFFINE_SL2), 2)) == 5
    assert weyl_elements(datum("imag0"), 4) == [()]


def test_perpendicular_subsets():
    assert perpendicular_subsets(validate_datum([[0, 0], [0, 0]])) == [(), (0,), (1,), (0, 1)]
    assert perpendicular_subsets(validate_datum([[-2, -1], [-1, -2]])) == [(), (0,), (1,)]
    assert perpendicular_subsets(validate_datum([[0, 0], [0, 0]]), [1, 0]) == [(), (1,)]


@pytest.mark.parametrize(
    "name, highest, height",
    [
        ("sl2", [2], 4),
        ("sl3", [1, 0], 3),
        ("sl3", [1, 1], 4),
        ("imag-2", [0], 6),
        ("imag-2", [1], 6),
        ("imag-2", [2], 6),
    ],
)
def test_character_matches_module(name, highest, height):
    records = character_module_crosscheck(datum(name), highest, height)
    assert records
    assert [r.check_id for r in records if r.unexpected] == []


def test_crosscheck_ids():
    records = character_module_crosscheck(datum("sl2"), [1], 2)
    assert [r.check_id for r in records] == [
        "character-crosscheck:[1]:[0]",
        "character-crosscheck:[1]:[1]",
        "character-crosscheck:[1]:[2]",
    ]


def test_crosscheck_limits():
    with pytest.raises(NotApplicable):
        character_module_crosscheck(datum("sl2"), [1], 9)
    big = validate_datum([[2, -1, 0], [-1, 2, -1], [0, -1, 2]])
    with pytest.raises(NotApplicable):
        character_module_crosscheck(big, [1, 0, 0], 2)
