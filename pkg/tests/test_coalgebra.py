"""
Tests for tensor powers, generator maps and the bialgebra structure.

Core claims:
    - Delta, eps follow the type table: J and torus letters are grouplike,
      type-zero E_i and F_i pick up J^{m-1} on the opposite leg
    - Delta and eps send every defining relation to zero, for every
      gallery datum, per-index type table and m from 2 to 5
    - Delta(xy) = Delta(x)Delta(y) on random words
    - coassociativity and both counit laws hold on every generator
    - a type-one coproduct on a type-zero letter breaks a relation
"""

import pytest

from tests.conftest import GALLERY, presentation, type_table_cases
from weak_quantum_algebra.coalgebra import (
    GeneratorMap,
    TensorElement,
    apply_map,
    apply_on_leg,
    is_zero_value,
    multiply_legs,
    standard_coproduct,
    standard_counit,
    tensor_multiply,
    verify_coalgebra_axioms,
    verify_morphism_on_relations,
)
from weak_quantum_algebra.exceptions import NotApplicable
from weak_quantum_algebra.presentation import E, F, J, K, AlgebraElement, Kb
from weak_quantum_algebra.qscalar import ONE, ZERO
from weak_quantum_algebra.weakhopf import random_words


def w(*gens, coeff=1):
    return AlgebraElement.word(*gens, coeff=coeff)


def pure(*factors):
    return TensorElement.pure(*factors)


def test_coproduct_of_j(sl2_m3):
    delta = standard_coproduct(sl2_m3)
    assert apply_map(sl2_m3, delta, w(J)) == pure(w(J), w(J))


def test_coproduct_type_zero_e():
    p = presentation("sl2", 3, tau_e=["zero"])
    delta = standard_coproduct(p)
    expected = pure(w(J, J), w(E(0))) + pure(w(E(0)), w(K(0)))
    assert apply_map(p, delta, w(E(0))) == expected


def test_coproduct_type_one_f(sl2_m3):
    delta = standard_coproduct(sl2_m3)
    expected = pure(w(F(0)), AlgebraElement.one()) + pure(w(Kb(0)), w(F(0)))
    assert apply_map(sl2_m3, delta, w(F(0))) == expected


def test_coproduct_type_zero_f():
    p = presentation("sl2", 3, tau_f=["zero"])
    delta = standard_coproduct(p)
    expected = pure(w(F(0)), w(J, J)) + pure(w(Kb(0)), w(F(0)))
    assert apply_map(p, delta, w(F(0))) == expected


def test_counit(sl2_m3):
    eps = standard_counit(sl2_m3)
    assert apply_map(sl2_m3, eps, w(J)) == ONE
    assert apply_map(sl2_m3, eps, w(E(0))) == ZERO
    assert apply_map(sl2_m3, eps, w(K(0), Kb(0))) == ONE
    assert apply_map(sl2_m3, eps, AlgebraElement.one()) == ONE


def test_tensor_multiply_reduces_each_leg(sl2_m3):
    u = pure(w(K(0)), AlgebraElement.one())
    v = pure(w(Kb(0)), w(E(0)))
    assert tensor_multiply(sl2_m3, u, v) == pure(w(J, J), w(E(0)))


def test_multiply_legs(sl2_m3):
    assert multiply_legs(sl2_m3, pure(w(K(0)), w(Kb(0)))) == w(J, J)


def test_counit_on_a_leg(sl2_m3):
    delta = standard_coproduct(sl2_m3)
    eps = standard_counit(sl2_m3)
    d = apply_map(sl2_m3, delta, w(E(0)))
    left = apply_on_leg(sl2_m3, eps, d, 0)
    assert left.legs == 1
    assert left.as_element() == w(E(0))


def test_leg_mismatch_and_missing_image(sl2_m3):
    with pytest.raises(NotApplicable):
        pure(w(J)) + pure(w(J), w(J))
    with pytest.raises(NotApplicable):
        pure(w(J), w(J)).as_element()
    partial = GeneratorMap(name="partial", images={J: w(J)})
    with pytest.raises(NotApplicable):
        apply_map(sl2_m3, partial, w(E(0)))
    with pytest.raises(NotApplicable):
        apply_on_leg(sl2_m3, partial, pure(w(J)), 1)


def test_tensor_render():
    t = pure(w(E(0)), AlgebraElement.one()) - pure(w(K(0)), w(E(0)))
    assert t.render() == "E0 ⊗ 1 - K0 ⊗ E0"
    assert TensorElement.zero(2).render() == "0"


@pytest.mark.parametrize("m", [2, 3])
def test_delta_and_eps_preserve_relations(gallery_name, m):
    p = presentation(gallery_name, m)
    for f in (standard_coproduct(p), standard_counit(p)):
        records = verify_morphism_on_relations(p, f)
        assert records
        assert [r.check_id for r in records if r.unexpected] == []


@pytest.mark.slow
@pytest.mark.parametrize("name, tau_e, tau_f, m", type_table_cases())
def test_bialgebra_across_type_tables(name, tau_e, tau_f, m):
    p = presentation(name, m, tau_e=tau_e, tau_f=tau_f)
    delta = standard_coproduct(p)
    eps = standard_counit(p)
    for f in (delta, eps):
        records = verify_morphism_on_relations(p, f)
        assert records
        assert [r.check_id for r in records if r.unexpected] == []
    records = verify_coalgebra_axioms(p, delta, eps)
    assert [r.check_id for r in records if r.unexpected] == []


@pytest.mark.parametrize("m", [2, 3, 4])
def test_delta_is_multiplicative_on_random_words(gallery_name, m):
    n = len(GALLERY[gallery_name][0])
    p = presentation(gallery_name, m, tau_e=["zero"] + ["one"] * (n - 1), tau_f=["one"] * (n - 1) + ["zero"])
    delta = standard_coproduct(p)
    words = [x for _, x in random_words(p, 20, seed=m, max_length=3)]
    for x, y in zip(words[::2], words[1::2]):
        product = apply_map(p, delta, p.multiply(x, y))
        split = tensor_multiply(p, apply_map(p, delta, x), apply_map(p, delta, y))
        assert is_zero_value(product - split), (x.render(), y.render())


def test_coalgebra_axioms(sl2_m3):
    delta = standard_coproduct(sl2_m3)
    eps = standard_counit(sl2_m3)
    records = verify_coalgebra_axioms(sl2_m3, delta, eps)
    assert len(records) == 3 * len(sl2_m3.generators())
    assert all(r.status == "pass" for r in records)


def test_coalgebra_axioms_type_zero():
    p = presentation("sl3", 3, tau_e=["zero", "one"], tau_f=["one", "zero"])
    records = verify_coalgebra_axioms(p, standard_coproduct(p), standard_counit(p))
    assert all(r.status == "pass" for r in records)


def test_type_one_coproduct_on_type_zero_letter_fails():
    p = presentation("sl2", 3, tau_e=["zero"])
    delta = standard_coproduct(p)
    images = dict(delta.images)
    images[E(0)] = pure(AlgebraElement.one(), w(E(0))) + pure(w(E(0)), w(K(0)))
    broken = GeneratorMap(name="broken", images=images, codomain="tensor", legs=2)
    records = verify_morphism_on_relations(p, broken)
    failed = [r for r in records if r.status == "fail"]
    assert failed
    assert any(r.check_id.startswith("broken:type-zero-absorption") for r in failed)
    assert all(r.residue for r in failed)
