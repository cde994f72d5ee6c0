"""
Tests for truncated highest-weight modules.

Core claims:
    - the simple sl2 module with lambda = q^n has dimension n + 1
    - K_0 acts diagonally with eigenvalues q^n, q^{n-2}, ..., q^{-n}
    - every defining relation acts as zero on the exposed vectors
    - the null sector kills the torus, the unit sector inverts it
    - the averaging idempotent acts as 1 for gamma = 1 and 0 for gamma = -1
    - one-dimensional w-bar modules exist only under the gating condition
"""

import pytest

from tests.conftest import presentation
from weak_quantum_algebra.exceptions import GammaNotRoot, GatingViolation, NotApplicable, SectorMismatch
from weak_quantum_algebra.presentation import E, F, J, K, AlgebraElement, Kb, quantum_group_presentation
from weak_quantum_algebra.qscalar import ONE, Q, q_power
from weak_quantum_algebra.representations import (
    averaging_action,
    averaging_commutes,
    averaging_idempotent,
    build_highest_weight_module,
    matrix_entries,
    normal_f_words,
    onedim_gating,
    onedim_wbar_modules,
    sector_check,
    verify_module_relations,
)


def unexpected(records):
    return [r.check_id for r in records if r.unexpected]


@pytest.mark.parametrize("n", range(6))
def test_sl2_simple_dimension(n):
    p = presentation("sl2", 2)
    module = build_highest_weight_module(p, [q_power(n)], height=6)
    assert module.dim == n + 1
    assert module.weight_multiplicities() == {(k,): 1 for k in range(n + 1)}


def test_sl2_eigenvalues():
    p = presentation("sl2", 2)
    module = build_highest_weight_module(p, [q_power(2)], height=4)
    assert module.eigenvalues(K(0)) == [q_power(2), ONE, q_power(-2)]
    assert module.eigenvalues(Kb(0)) == [q_power(-2), ONE, q_power(2)]
    assert module.labels() == ["v", "F0*v", "F0^2*v"]


def test_verma_truncation_keeps_every_word():
    p = presentation("sl2", 2)
    module = build_highest_weight_module(p, [q_power(2)], height=4, simple=False)
    assert module.dim == 5
    assert not module.simple


def test_generic_weight_is_not_truncated_by_quotient():
    p = presentation("sl2", 2)
    module = build_highest_weight_module(p, [Q + 1], height=3)
    assert module.dim == 4


def test_module_relations_sl2_m3(sl2_m3):
    module = build_highest_weight_module(sl2_m3, [q_power(2)], "unit", 1, height=3)
    records = verify_module_relations(module, "sl2")
    assert records
    assert unexpected(records) == []
    assert all(r.check_id.startswith("sl2:relation:") for r in records)


def test_module_relations_sl3(sl3):
    module = build_highest_weight_module(sl3, [Q, ONE], height=3)
    assert module.dim == 3
    assert unexpected(verify_module_relations(module)) == []


def test_module_relations_type_zero():
    p = presentation("sl2", 3, tau_e=["zero"], tau_f=["zero"])
    module = build_highest_weight_module(p, [q_power(1)], "unit", -1, height=3)
    assert unexpected(verify_module_relations(module)) == []
    assert unexpected(sector_check(module)) == []


def test_unit_sector_check(sl2_m3):
    module = build_highest_weight_module(sl2_m3, [q_power(1)], "unit", -1, height=3)
    records = sector_check(module)
    assert "module:sector:gamma" in {r.check_id for r in records}
    assert unexpected(records) == []
    assert module.eigenvalues(J) == [-ONE, -ONE]


def test_null_sector_kills_the_torus(sl2_m3):
    module = build_highest_weight_module(sl2_m3, [0], "null", height=3)
    assert module.matrix(K(0)).is_zero_matrix
    assert module.matrix(Kb(0)).is_zero_matrix
    assert module.gamma is None
    assert unexpected(sector_check(module)) == []
    assert unexpected(verify_module_relations(module)) == []


def test_sector_mismatch(sl2_m3):
    with pytest.raises(SectorMismatch):
        build_highest_weight_module(sl2_m3, [0], "unit")
    with pytest.raises(SectorMismatch):
        build_highest_weight_module(sl2_m3, [Q], "null")
    with pytest.raises(NotApplicable):
        build_highest_weight_module(sl2_m3, [Q, Q])


def test_gamma_must_be_a_root_of_unity():
    with pytest.raises(GammaNotRoot):
        build_highest_weight_module(presentation("sl2", 3), [Q], "unit", 2)
    with pytest.raises(GammaNotRoot):
        build_highest_weight_module(presentation("sl2", 2), [Q], "unit", -1)
    with pytest.raises(GammaNotRoot):
        build_highest_weight_module(quantum_group_presentation(presentation("sl2").datum), [Q], "unit", -1)


def test_averaging_idempotent(sl2_m3):
    e = averaging_idempotent(sl2_m3)
    assert sl2_m3.equal(sl2_m3.multiply(e, e), e)
    assert averaging_idempotent(quantum_group_presentation(sl2_m3.datum)) == AlgebraElement.one()


@pytest.mark.parametrize("gamma", [1, -1])
def test_averaging_action(sl2_m3, gamma):
    module = build_highest_weight_module(sl2_m3, [q_power(1)], "unit", gamma, height=3)
    record = averaging_action(module, f"gamma={gamma}")
    assert record.status == "pass"
    assert averaging_commutes(module)


def test_normal_f_words_respect_serre(sl3):
    words = normal_f_words(sl3, 3, [F(0), F(1)])
    assert words[0] == ()
    assert all(sl3.is_normal_letters(wd) for wd in words)
    assert (F(1), F(0), F(0)) not in words


def test_matrix_entries(sl2_m3):
    module = build_highest_weight_module(sl2_m3, [q_power(1)], "unit", 1, height=3)
    e = matrix_entries(module.matrix(E(0)))
    f = matrix_entries(module.matrix(F(0)))
    assert f == {1: {0: ONE}}
    assert e[0][1] == ONE


def test_onedim_gating():
    assert onedim_gating(presentation("imag0", 3))
    assert not onedim_gating(presentation("sl2", 3))
    assert onedim_gating(presentation("sl2", 3, tau_e=["zero"], tau_f=["zero"]))


def test_onedim_wbar_module_on_imaginary_datum():
    p = presentation("imag0", 3)
    records = onedim_wbar_modules(p, {0: Q}, {0: 2})
    assert records
    assert unexpected(records) == []


def test_onedim_wbar_gating_violation(sl2_m3):
    with pytest.raises(GatingViolation):
        onedim_wbar_modules(sl2_m3)
    with pytest.raises(NotApplicable):
        onedim_wbar_modules(quantum_group_presentation(sl2_m3.datum))
