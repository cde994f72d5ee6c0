"""
Tensor powers of the algebra, generator maps and the bialgebra structure.

A ``GeneratorMap`` assigns an image to every generator and is extended to
words multiplicatively (or anti-multiplicatively); the codomain is the algebra
itself, a tensor power of it, or the scalar field.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Collection, Dict, List, Literal, Mapping, Optional, Sequence, Tuple, Union

from weak_quantum_algebra.check_catalog import anchor, relation_anchor
from weak_quantum_algebra.exceptions import NotApplicable
from weak_quantum_algebra.models import CheckRecord
from weak_quantum_algebra.presentation import (
    AlgebraElement,
    Generator,
    Presentation,
    Rule,
    Word,
    render_word,
    word_key,
)
from weak_quantum_algebra.qscalar import ONE, ZERO, QScalar

logger = logging.getLogger(__name__)

TensorWord = Tuple[Word, ...]


class TensorElement:
    """A linear combination of pure tensors with a fixed number of legs."""

    __slots__ = ("legs", "terms", "reduced")

    def __init__(self, legs: int, terms: Optional[Mapping[TensorWord, QScalar]] = None, reduced: bool = False):
        self.legs = legs
        self.terms: Dict[TensorWord, QScalar] = {w: c for w, c in (terms or {}).items() if c}
        self.reduced = reduced

    @classmethod
    def zero(cls, legs: int) -> "TensorElement":
        return cls(legs, {}, reduced=True)

    @classmethod
    def unit(cls, legs: int) -> "TensorElement":
        return cls(legs, {((),) * legs: ONE})

    @classmethod
    def pure(cls, *factors: AlgebraElement) -> "TensorElement":
        """factors[0] (x) factors[1] (x) ..."""
        terms: Dict[TensorWord, QScalar] = {(): ONE}
        for factor in factors:
            grown: Dict[TensorWord, QScalar] = {}
            for tw, c in terms.items():
                for w, d in factor.terms.items():
                    key = tw + (w,)
                    grown[key] = grown[key] + c * d if key in grown else c * d
            terms = grown
        return cls(len(factors), terms)

    def is_empty(self) -> bool:
        return not self.terms

    def _combine(self, other: "TensorElement", sign: int) -> "TensorElement":
        _same_legs(self, other)
        terms = dict(self.terms)
        for w, c in other.terms.items():
            terms[w] = terms[w] + c * sign if w in terms else c * sign
        return TensorElement(self.legs, terms)

    def __add__(self, other: "TensorElement") -> "TensorElement":
        return self._combine(other, 1)

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self._combine(other, -1)

    def __neg__(self) -> "TensorElement":
        return TensorElement(self.legs, {w: -c for w, c in self.terms.items()}, self.reduced)

    def scale(self, coeff: Union[QScalar, int]) -> "TensorElement":
        c = QScalar.coerce(coeff)
        return TensorElement(self.legs, {w: v * c for w, v in self.terms.items()}, self.reduced)

    def concat(self, other: "TensorElement") -> "TensorElement":
        """Componentwise free product (a (x) b)(c (x) d) = ac (x) bd."""
        _same_legs(self, other)
        terms: Dict[TensorWord, QScalar] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(w1, w2))
                terms[key] = terms[key] + c1 * c2 if key in terms else c1 * c2
        return TensorElement(self.legs, terms)

    def as_element(self) -> AlgebraElement:
        if self.legs != 1:
            raise NotApplicable(f"a {self.legs}-leg tensor is not an algebra element")
        return AlgebraElement({w[0]: c for w, c in self.terms.items()}, self.reduced)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.legs == other.legs and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def render(self) -> str:
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda kv: tuple(word_key(w) for w in kv[0]))
        pieces = []
        for w, c in items:
            body = " ⊗ ".join(render_word(part) for part in w)
            if c == 1:
                pieces.append(body)
            elif c == -1:
                pieces.append(f"-{body}")
            else:
                pieces.append(f"({c.render()})*{body}")
        return " + ".join(pieces).replace("+ -", "- ")

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"TensorElement({self.render()!r})"


def _same_legs(u: TensorElement, v: TensorElement) -> None:
    if u.legs != v.legs:
        raise NotApplicable(f"tensor legs differ: {u.legs} vs {v.legs}")


Image = Union[AlgebraElement, TensorElement, QScalar]
Value = Union[AlgebraElement, TensorElement, QScalar]


@dataclass(frozen=True, eq=False)
class GeneratorMap:
    """Images of the generators plus how to extend them to words.

    ``target`` is the presentation the images live in; ``None`` means the
    source presentation.  ``unit`` is the image of 1 for algebra-valued maps
    that are not unital, such as U_q'(G) -> w U J^{m-1}.
    """

    name: str
    images: Mapping[Generator, Image]
    codomain: Literal["algebra", "tensor", "scalar"] = "algebra"
    mode: Literal["morphism", "anti-morphism"] = "morphism"
    legs: int = 1
    target: Optional[Presentation] = field(default=None, repr=False)
    unit: Optional[AlgebraElement] = field(default=None, repr=False)

    def image(self, g: Generator) -> Image:
        try:
            return self.images[g]
        except KeyError:
            raise NotApplicable(f"map {self.name!r} has no image for {g.render()}") from None


def reduce_tensor(p: Presentation, t: TensorElement) -> TensorElement:
    """Reduce every leg independently."""
    cache: Dict[Word, AlgebraElement] = {}

    def leg(word: Word) -> AlgebraElement:
        if word not in cache:
            cache[word] = p.reduce(AlgebraElement.word(*word))
        return cache[word]

    total: Dict[TensorWord, QScalar] = {}
    for tw, c in t.terms.items():
        expanded = TensorElement.pure(*(leg(w) for w in tw))
        for key, d in expanded.terms.items():
            total[key] = total[key] + c * d if key in total else c * d
    return TensorElement(t.legs, total, reduced=True)


def tensor_multiply(p: Presentation, u: TensorElement, v: TensorElement) -> TensorElement:
    return reduce_tensor(p, u.concat(v))


def standard_coproduct(p: Presentation) -> GeneratorMap:
    """Delta with grouplike torus letters and J, skew-primitive E and F."""
    w = p.idempotent()
    one = AlgebraElement.one()
    images: Dict[Generator, Image] = {}
    for g in p.generators():
        x = AlgebraElement.word(g)
        i = g.index
        if g.kind == "E":
            left = w if p.type_flag(g) == "zero" else one
            images[g] = TensorElement.pure(left, x) + TensorElement.pure(x, AlgebraElement.word(Generator("K", i)))
        elif g.kind == "F":
            right = w if p.type_flag(g) == "zero" else one
            images[g] = TensorElement.pure(x, right) + TensorElement.pure(AlgebraElement.word(Generator("Kb", i)), x)
        else:
            images[g] = TensorElement.pure(x, x)
    return GeneratorMap(name="coproduct", images=images, codomain="tensor", legs=2)


def standard_counit(p: Presentation) -> GeneratorMap:
    images: Dict[Generator, Image] = {
        g: (ZERO if g.kind in ("E", "F") else ONE) for g in p.generators()
    }
    return GeneratorMap(name="counit", images=images, codomain="scalar", legs=0)


def _ordered(f: GeneratorMap, word: Word) -> Sequence[Generator]:
    return tuple(reversed(word)) if f.mode == "anti-morphism" else word


def apply_map(p: Presentation, f: GeneratorMap, x: AlgebraElement) -> Value:
    """Extend f over x word by word and reduce in f's target."""
    target = f.target or p
    if f.codomain == "scalar":
        total = ZERO
        for word, c in x.terms.items():
            prod = ONE
            for g in _ordered(f, word):
                if g.kind == "J" and p.unital:
                    continue
                prod = prod * f.image(g)  # type: ignore[operator]
                if not prod:
                    break
            total = total + c * prod
        return total
    if f.codomain == "tensor":
        acc: Dict[TensorWord, QScalar] = {}
        for word, c in x.terms.items():
            prod_t = TensorElement.unit(f.legs)
            for g in _ordered(f, word):
                if g.kind == "J" and p.unital:
                    continue
                prod_t = tensor_multiply(target, prod_t, f.image(g))  # type: ignore[arg-type]
            for key, d in prod_t.terms.items():
                acc[key] = acc[key] + c * d if key in acc else c * d
        return TensorElement(f.legs, acc, reduced=True)
    acc_e: Dict[Word, QScalar] = {}
    for word, c in x.terms.items():
        prod_e = f.unit if f.unit is not None else AlgebraElement.one()
        for g in _ordered(f, word):
            if g.kind == "J" and p.unital:
                continue
            prod_e = target.multiply(prod_e, f.image(g))  # type: ignore[arg-type]
        for key, d in prod_e.terms.items():
            acc_e[key] = acc_e[key] + c * d if key in acc_e else c * d
    return AlgebraElement(acc_e, reduced=True)


def apply_on_leg(p: Presentation, f: GeneratorMap, t: TensorElement, leg: int) -> TensorElement:
    """Apply f to one leg of t; tensor-valued maps splice in extra legs,
    scalar-valued maps remove the leg."""
    if not 0 <= leg < t.legs:
        raise NotApplicable(f"leg {leg} outside a {t.legs}-leg tensor")
    if f.codomain == "scalar":
        new_legs = t.legs - 1
    elif f.codomain == "tensor":
        new_legs = t.legs + f.legs - 1
    else:
        new_legs = t.legs
    cache: Dict[Word, Value] = {}
    total: Dict[TensorWord, QScalar] = {}
    for tw, c in t.terms.items():
        word = tw[leg]
        if word not in cache:
            cache[word] = apply_map(p, f, AlgebraElement.word(*word))
        image = cache[word]
        before, after = tw[:leg], tw[leg + 1 :]
        if isinstance(image, QScalar):
            if image:
                _add_term(total, before + after, c * image)
        elif isinstance(image, TensorElement):
            for middle, d in image.terms.items():
                _add_term(total, before + middle + after, c * d)
        else:
            for w, d in image.terms.items():
                _add_term(total, before + (w,) + after, c * d)
    return TensorElement(new_legs, total, reduced=True)


def apply_legwise(p: Presentation, fs: Sequence[GeneratorMap], t: TensorElement) -> TensorElement:
    """(f_0 (x) f_1 (x) ...)(t) for algebra-valued maps."""
    if len(fs) != t.legs:
        raise NotApplicable(f"{len(fs)} maps for a {t.legs}-leg tensor")
    for leg, f in enumerate(fs):
        if f.codomain != "algebra":
            raise NotApplicable(f"map {f.name!r} is not algebra valued")
        t = apply_on_leg(p, f, t, leg)
    return t


def multiply_legs(p: Presentation, t: TensorElement) -> AlgebraElement:
    """mu: a_0 (x) a_1 (x) ... -> a_0 a_1 ..., reduced."""
    acc = AlgebraElement.zero()
    for tw, c in t.terms.items():
        word = tuple(g for part in tw for g in part)
        acc = acc + AlgebraElement.word(*word, coeff=c)
    return p.reduce(acc)


def _add_term(total: Dict[TensorWord, QScalar], key: TensorWord, c: QScalar) -> None:
    if key in total:
        value = total[key] + c
        if value:
            total[key] = value
        else:
            del total[key]
    elif c:
        total[key] = c


def is_zero_value(value: Value) -> bool:
    if isinstance(value, QScalar):
        return not value
    return value.is_empty()


def render_value(value: Value) -> str:
    return value.render()


def verify_morphism_on_relations(
    p: Presentation,
    f: GeneratorMap,
    *,
    relations: Optional[Sequence[Rule]] = None,
    expected_failures: Collection[str] = (),
    prefix: Optional[str] = None,
) -> List[CheckRecord]:
    """Check that f sends every defining relation of p to zero.

    Args:
        p: Source presentation.
        f: Map to test; images are reduced in ``f.target`` (default p).
        relations: Relations to test; defaults to all of p's.
        expected_failures: Relation families predicted to fail.
        prefix: Check-id prefix; defaults to the map name.

    Returns:
        One record per relation, with the rendered residue on failure.
    """
    records = []
    label = prefix or f.name
    for rule in relations if relations is not None else p.defining_relations():
        start = time.perf_counter()
        residue = apply_map(p, f, rule.residue())
        ok = is_zero_value(residue)
        records.append(
            CheckRecord.judge(
                f"{label}:{rule.name}",
                relation_anchor(rule.family),
                ok,
                expect_ok=rule.family not in expected_failures,
                residue="" if ok else render_value(residue),
                seconds=time.perf_counter() - start,
            )
        )
    bad = sum(1 for r in records if r.unexpected)
    if bad:
        logger.warning("%s: %d relation(s) not preserved", label, bad)
    else:
        logger.info("%s: %d relation(s) preserved", label, len(records))
    return records


def verify_coalgebra_axioms(p: Presentation, delta: GeneratorMap, eps: GeneratorMap) -> List[CheckRecord]:
    """Coassociativity and both counit laws on every generator."""
    records = []
    for g in p.generators():
        x = p.reduce(AlgebraElement.word(g))
        start = time.perf_counter()
        d = apply_map(p, delta, x)
        assert isinstance(d, TensorElement)
        left = apply_on_leg(p, delta, d, 0)
        right = apply_on_leg(p, delta, d, 1)
        residue = reduce_tensor(p, left - right)
        records.append(
            CheckRecord.judge(
                f"coassociativity:{g.render()}",
                anchor("coassociativity"),
                residue.is_empty(),
                residue=residue.render() if not residue.is_empty() else "",
                seconds=time.perf_counter() - start,
            )
        )
        for side, leg in (("left", 0), ("right", 1)):
            start = time.perf_counter()
            collapsed = apply_on_leg(p, eps, d, leg).as_element()
            diff = p.reduce(collapsed - x)
            records.append(
                CheckRecord.judge(
                    f"counit-{side}:{g.render()}",
                    anchor("counit-law"),
                    diff.is_empty(),
                    residue=diff.render() if not diff.is_empty() else "",
                    seconds=time.perf_counter() - start,
                )
            )
    return records
