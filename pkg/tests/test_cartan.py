"""
Tests for Borcherds-Cartan data.

Core claims:
    - the five-datum gallery validates
    - each seeded single-condition defect yields exactly its violation
    - classification splits indices by a_ii = 2
    - the bilinear form is symmetric and equals s_i a_ij
"""

import pytest

from tests.conftest import GALLERY, datum
from weak_quantum_algebra.cartan import (
    RootVector,
    bilinear_form,
    check_datum,
    classify_indices,
    find_symmetrizers,
    root_pairing,
    simple_root,
    validate_datum,
)
from weak_quantum_algebra.exceptions import DatumValidationError, IndexOutOfRange, NotApplicable


def test_gallery_validates(gallery_name):
    a, s = GALLERY[gallery_name]
    d = validate_datum(a, s)
    assert d.n == len(a)
    assert check_datum(a, s) == []


@pytest.mark.parametrize(
    "a, s, kind",
    [
        ([[2, -1], [0, 2]], [1, 1], "ZeroPairViolation"),
        ([[3]], [1], "DiagonalViolation"),
        ([[2, 1], [-1, 2]], [1, 1], "SignViolation"),
        ([[2, -2], [-1, 2]], [1, 1], "NotSymmetrizable"),
        ([[2]], [0], "NonPositiveSymmetrizer"),
        ([[2, -1]], [1], "NonSquare"),
        ([[2, -1], [-1, 2]], [1], "LengthMismatch"),
    ],
)
def test_single_defect_gives_single_violation(a, s, kind):
    violations = check_datum(a, s)
    assert [v.kind for v in violations] == [kind]
    with pytest.raises(DatumValidationError) as info:
        validate_datum(a, s)
    assert [v.kind for v in info.value.violations] == [kind]


def test_zero_pair_indices():
    (violation,) = check_datum([[2, -1], [0, 2]], [1, 1])
    assert violation.indices == (1, 0)
    assert violation.render() == "ZeroPairViolation(1,0)"


def test_violations_are_exhaustive():
    kinds = {v.kind for v in check_datum([[3, 1], [1, 2]], [1, 1])}
    assert kinds == {"DiagonalViolation", "SignViolation"}


def test_imaginary_index_is_valid():
    d = validate_datum([[-2, -1], [-1, 2]], [1, 1])
    assert classify_indices(d).imaginary == (0,)


@pytest.mark.parametrize(
    "a, real, imaginary",
    [
        ([[2]], (0,), ()),
        ([[0]], (), (0,)),
        ([[2, -1], [-1, 0]], (0,), (1,)),
    ],
)
def test_classify_indices(a, real, imaginary):
    kinds = classify_indices(validate_datum(a))
    assert kinds.real == real
    assert kinds.imaginary == imaginary


def test_bilinear_form_sl3():
    d = datum("sl3")
    assert bilinear_form(d, 0, 0) == 2
    assert bilinear_form(d, 0, 1) == -1 == bilinear_form(d, 1, 0)


def test_bilinear_form_non_simply_laced():
    d = validate_datum([[2, -2], [-1, 2]], [1, 2])
    assert bilinear_form(d, 0, 1) == -2 == bilinear_form(d, 1, 0)


def test_bilinear_form_symmetric_on_gallery(gallery_name):
    d = datum(gallery_name)
    for i in d.indices():
        for j in d.indices():
            assert bilinear_form(d, i, j) == bilinear_form(d, j, i)


def test_bilinear_form_index_check():
    with pytest.raises(IndexOutOfRange):
        bilinear_form(datum("sl2"), 0, 1)


def test_root_pairing_and_vectors():
    d = datum("sl3")
    beta = simple_root(d, 0) + simple_root(d, 1)
    assert beta.coeffs == (1, 1)
    assert beta.height == 2
    assert root_pairing(d, beta.coeffs, 0) == 1
    with pytest.raises(NotApplicable):
        (simple_root(d, 0) - beta).height


def test_root_vector_is_immutable():
    v = RootVector(coeffs=(1, 0))
    with pytest.raises(Exception):
        v.coeffs = (0, 1)


@pytest.mark.parametrize(
    "a, expected",
    [
        ([[2, -1], [-1, 2]], (1, 1)),
        ([[2, -2], [-1, 2]], (1, 2)),
        ([[2, 0], [0, -3]], (1, 1)),
        ([[2, -1], [0, 2]], None),
    ],
)
def test_find_symmetrizers(a, expected):
    assert find_symmetrizers(a) == expected
