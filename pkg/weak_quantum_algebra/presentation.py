"""
Words, algebra elements and the oriented rewriting system of wU_q^tau(G).

Reduction keeps every word in a structured normal form while it is built
letter by letter from the left:

    (J^p1 X1)(J^p2 X2)...(J^pk Xk) * torus block * J^e

where the X are E/F letters, the torus block collects signed K and D
exponents, inner J-exponents lie in 1..m-2 and the trailing exponent e is
reduced against J^m = J.  A word that contains a bare J, a torus letter or a
type-zero letter equals itself times the central idempotent J^{m-1}; for those
words e is taken modulo m-1.  E/F letters are straightened at the tail with
the EF commutator, the quantum Serre rules and the commutation rules under the
degree-lexicographic order F_0 < ... < F_{n-1} < E_0 < ... < E_{n-1}.
"""

import logging
import os
import threading
from dataclasses import dataclass
from itertools import groupby
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

from weak_quantum_algebra.cartan import BorcherdsCartanDatum
from weak_quantum_algebra.exceptions import (
    IndexOutOfRange,
    NotApplicable,
    ReductionBudgetExceeded,
    UnknownGenerator,
    UnsupportedM,
)
from weak_quantum_algebra.qscalar import ONE, QScalar, q_power, quantum_binomial

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 1_000_000
DEFAULT_MAX_WORD_LENGTH = 12

LETTER_KINDS = ("E", "F")
TORUS_KINDS = ("K", "Kb", "D", "Db")
KINDS = LETTER_KINDS + TORUS_KINDS + ("J",)
_KIND_RANK = {"F": 0, "E": 1, "K": 2, "Kb": 3, "D": 4, "Db": 5, "J": 6}


class Generator(NamedTuple):
    """One generator symbol; J carries index -1."""

    kind: str
    index: int = -1

    def render(self) -> str:
        return "J" if self.kind == "J" else f"{self.kind}{self.index}"

    def sort_key(self) -> Tuple[int, int]:
        return _KIND_RANK[self.kind], self.index


J = Generator("J")


def E(i: int) -> Generator:
    return Generator("E", i)


def F(i: int) -> Generator:
    return Generator("F", i)


def K(i: int) -> Generator:
    return Generator("K", i)


def Kb(i: int) -> Generator:
    return Generator("Kb", i)


def D(i: int) -> Generator:
    return Generator("D", i)


def Db(i: int) -> Generator:
    return Generator("Db", i)


Word = Tuple[Generator, ...]
Scalarish = Union[QScalar, int]


def word_key(word: Word) -> Tuple[int, Tuple[Tuple[int, int], ...]]:
    return len(word), tuple(g.sort_key() for g in word)


def render_word(word: Word) -> str:
    if not word:
        return "1"
    pieces = []
    for g, run in groupby(word):
        count = len(list(run))
        pieces.append(g.render() if count == 1 else f"{g.render()}^{count}")
    return "*".join(pieces)


class AlgebraElement:
    """A finite linear combination of words with QScalar coefficients."""

    __slots__ = ("terms", "reduced")

    def __init__(self, terms: Optional[Mapping[Word, QScalar]] = None, reduced: bool = False):
        self.terms: Dict[Word, QScalar] = {w: c for w, c in (terms or {}).items() if c}
        self.reduced = reduced

    @classmethod
    def zero(cls) -> "AlgebraElement":
        return cls({}, reduced=True)

    @classmethod
    def one(cls) -> "AlgebraElement":
        return cls({(): ONE})

    @classmethod
    def word(cls, *gens: Generator, coeff: Scalarish = 1) -> "AlgebraElement":
        return cls({tuple(gens): QScalar.coerce(coeff)})

    @classmethod
    def scalar(cls, coeff: Scalarish) -> "AlgebraElement":
        return cls({(): QScalar.coerce(coeff)})

    def is_empty(self) -> bool:
        return not self.terms

    def scalar_value(self) -> Optional[QScalar]:
        """The coefficient when the element is a multiple of 1, else None."""
        if not self.terms:
            return QScalar.from_int(0)
        if set(self.terms) == {()}:
            return self.terms[()]
        return None

    def _combine(self, other: "AlgebraElement", sign: int) -> "AlgebraElement":
        terms = dict(self.terms)
        for w, c in other.terms.items():
            terms[w] = terms[w] + c * sign if w in terms else c * sign
        return AlgebraElement(terms)

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self._combine(other, 1)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self._combine(other, -1)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement({w: -c for w, c in self.terms.items()}, self.reduced)

    def scale(self, coeff: Scalarish) -> "AlgebraElement":
        c = QScalar.coerce(coeff)
        return AlgebraElement({w: v * c for w, v in self.terms.items()}, self.reduced)

    def __mul__(self, coeff: Scalarish) -> "AlgebraElement":
        return self.scale(coeff)

    __rmul__ = __mul__

    def concat(self, other: "AlgebraElement") -> "AlgebraElement":
        """Free (unreduced) product."""
        terms: Dict[Word, QScalar] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                terms[w] = terms[w] + c1 * c2 if w in terms else c1 * c2
        return AlgebraElement(terms)

    def power(self, exponent: int) -> "AlgebraElement":
        result = AlgebraElement.one()
        for _ in range(exponent):
            result = result.concat(self)
        return result

    def letters(self) -> Iterable[Generator]:
        for w in self.terms:
            yield from w

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def sorted_terms(self) -> List[Tuple[Word, QScalar]]:
        return sorted(self.terms.items(), key=lambda item: word_key(item[0]))

    def render(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for position, (w, c) in enumerate(self.sorted_terms()):
            negative = False
            if c == -1:
                coeff, negative = "", True
            elif c == 1:
                coeff = ""
            elif c.is_atomic() or (-c).is_atomic():
                negative = not c.is_atomic()
                coeff = (-c if negative else c).render()
            else:
                coeff = f"({c.render()})"
            if not w:
                body = coeff or "1"
            else:
                body = f"{coeff}*{render_word(w)}" if coeff else render_word(w)
            if position == 0:
                pieces.append(f"-{body}" if negative else body)
            else:
                pieces.append(f" - {body}" if negative else f" + {body}")
        return "".join(pieces)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"AlgebraElement({self.render()!r})"


@dataclass(frozen=True)
class Rule:
    """An oriented defining relation lhs -> rhs, tagged with its family."""

    name: str
    family: str
    lhs: Word
    rhs: AlgebraElement

    def residue(self) -> AlgebraElement:
        return AlgebraElement.word(*self.lhs) - self.rhs


@dataclass(frozen=True)
class TraceStep:
    """One applied relation instance: coeff * left * (lhs - rhs) * right."""

    rule: Rule
    left: Word
    right: Word
    coeff: QScalar

    @property
    def name(self) -> str:
        return self.rule.name

    def instance(self) -> AlgebraElement:
        outer = AlgebraElement.word(*self.left, coeff=self.coeff)
        return outer.concat(self.rule.residue()).concat(AlgebraElement.word(*self.right))

    def __str__(self) -> str:
        return self.rule.name


def replay_trace(steps: Iterable[TraceStep]) -> AlgebraElement:
    """Sum of the recorded relation instances, in the free algebra.

    For ``reduce(x, trace=steps)`` this equals ``x - reduce(x)`` term for term.
    """
    total = AlgebraElement.zero()
    for step in steps:
        total = total + step.instance()
    return total


class _Tracer:
    """Collects trace steps for one term: scale and right context of the current product."""

    __slots__ = ("steps", "scale", "suffix")

    def __init__(self, steps: List[TraceStep], scale: QScalar = ONE, suffix: Word = ()):
        self.steps = steps
        self.scale = scale
        self.suffix = suffix

    def scoped(self, coeff: QScalar, rest: Word) -> "_Tracer":
        return _Tracer(self.steps, self.scale * coeff, rest + self.suffix)


class _Derivation:
    """Literal rewriting of a single word, each step recorded as a relation instance."""

    def __init__(self, p: "Presentation", tracer: _Tracer, word: Sequence["Generator"]):
        self.p = p
        self.tracer = tracer
        self.word: List[Generator] = list(word)
        self.coeff = ONE

    def record(self, pos: int, rule: Rule, coeff: QScalar) -> None:
        right = tuple(self.word[pos + len(rule.lhs) :]) + self.tracer.suffix
        self.tracer.steps.append(TraceStep(rule, tuple(self.word[:pos]), right, self.tracer.scale * coeff))

    def apply(self, pos: int, rule: Rule) -> None:
        ((rword, rc),) = rule.rhs.terms.items()
        self.record(pos, rule, self.coeff)
        self.word[pos : pos + len(rule.lhs)] = rword
        self.coeff = self.coeff * rc

    def unapply(self, pos: int, rule: Rule) -> None:
        ((rword, rc),) = rule.rhs.terms.items()
        self.coeff = self.coeff / rc
        self.word[pos : pos + len(rword)] = rule.lhs
        self.record(pos, rule, -self.coeff)

    def swap(self, pos: int) -> None:
        a, b = self.word[pos], self.word[pos + 1]
        rule = self.p._swaps.get((a, b))
        if rule is not None:
            self.apply(pos, rule)
            return
        rule = self.p._swaps.get((b, a))
        if rule is None:
            raise RuntimeError(f"no exchange relation for {a.render()}*{b.render()}")
        self.unapply(pos, rule)

    def expect(self, word: Word, coeff: QScalar) -> None:
        if tuple(self.word) != word or self.coeff != coeff:
            raise RuntimeError(
                f"trace diverged: {render_word(tuple(self.word))} != {render_word(word)}"
            )


class TypeTable(NamedTuple):
    """Type flags ("one" or "zero") of the E and F generators."""

    e: Tuple[str, ...]
    f: Tuple[str, ...]

    @classmethod
    def uniform(cls, n: int, flag: str = "one") -> "TypeTable":
        return cls(e=(flag,) * n, f=(flag,) * n)


# letters, torus K exponents, torus D exponents, trailing J exponent
Normal = Tuple[Tuple[Tuple[int, Generator], ...], Tuple[int, ...], Tuple[int, ...], int]
_Expansion = Tuple[Tuple[Normal, QScalar], ...]


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning("ignoring non-integer %s=%r", name, raw)
        return default
    return value if value > 0 else default


def default_budget() -> int:
    return _env_int("WQA_BUDGET", DEFAULT_BUDGET)


def default_max_word_length() -> int:
    return _env_int("WQA_MAX_WORD_LENGTH", DEFAULT_MAX_WORD_LENGTH)


class Presentation:
    """The generators, defining relations and reduction of wU_q^tau(G).

    With ``unital=True`` the instance is the ordinary quantised enveloping
    algebra U_q'(G): J acts as 1 and K_i Kb_i = D_i Db_i = 1.  Build instances
    through ``build_presentation`` or ``quantum_group_presentation``.
    """

    def __init__(
        self,
        datum: BorcherdsCartanDatum,
        tau: TypeTable,
        m: int,
        *,
        unital: bool = False,
        max_word_length: Optional[int] = None,
        budget: Optional[int] = None,
    ):
        self.datum = datum
        self.tau = tau
        self.m = m
        self.unital = unital
        self.max_word_length = max_word_length or default_max_word_length()
        self.budget = budget or default_budget()
        self._a = datum.a
        self._s = datum.s
        self._zeros = (0,) * datum.n
        self._type_zero = frozenset(
            [E(i) for i, flag in enumerate(tau.e) if flag == "zero"]
            + [F(i) for i, flag in enumerate(tau.f) if flag == "zero"]
        )
        self._cache: Dict[Tuple[Normal, Generator], _Expansion] = {}
        self._lock = threading.Lock()
        self._rules, self._letter_rules = self._build_rules()
        self._rule_index = {r.name: r for r in self._rules}
        self._swaps: Dict[Word, Rule] = {}
        for rule in self._rules:
            if len(rule.lhs) != 2 or len(rule.rhs.terms) != 1:
                continue
            if next(iter(rule.rhs.terms)) == rule.lhs[::-1]:
                self._swaps.setdefault(rule.lhs, rule)
        self._pattern_lengths = sorted({len(p) for p in self._letter_rules}, reverse=True)
        logger.info(
            "presentation n=%d m=%d%s: %d defining relations, %d rewrite patterns",
            datum.n,
            m,
            " (unital)" if unital else "",
            len(self._rules),
            len(self._letter_rules),
        )

    # generators -------------------------------------------------------

    @property
    def n(self) -> int:
        return self.datum.n

    def generators(self) -> Tuple[Generator, ...]:
        gens: List[Generator] = []
        for i in range(self.n):
            gens.extend([E(i), F(i), K(i), Kb(i), D(i), Db(i)])
        if not self.unital:
            gens.append(J)
        return tuple(gens)

    def type_flag(self, g: Generator) -> str:
        if g.kind not in LETTER_KINDS:
            raise NotApplicable(f"{g.render()} carries no type flag")
        self.check_generator(g)
        return "zero" if g in self._type_zero else "one"

    def check_generator(self, g: Generator) -> None:
        if g.kind not in KINDS:
            raise UnknownGenerator(f"unknown generator kind {g.kind!r}")
        if g.kind == "J":
            if g.index != -1:
                raise UnknownGenerator("J takes no index")
            return
        if not 0 <= g.index < self.n:
            raise IndexOutOfRange(f"{g.render()}: index outside I = {{0..{self.n - 1}}}")

    def idempotent_word(self) -> Word:
        """J^{m-1} as a word (empty for the unital presentation)."""
        return () if self.unital else (J,) * (self.m - 1)

    def idempotent(self) -> AlgebraElement:
        return AlgebraElement.word(*self.idempotent_word())

    def q_i(self, i: int) -> QScalar:
        return q_power(self._s[i])

    # rules ------------------------------------------------------------

    def defining_relations(self) -> Tuple[Rule, ...]:
        return self._rules

    def letter_patterns(self) -> Tuple[Word, ...]:
        return tuple(self._letter_rules)

    def max_f_letters(self) -> int:
        """Largest number of F letters on either side of a defining relation."""
        counts = [1]
        for rule in self._rules:
            counts.append(sum(1 for g in rule.lhs if g.kind == "F"))
            for w in rule.rhs.terms:
                counts.append(sum(1 for g in w if g.kind == "F"))
        return max(counts)

    def _build_rules(self) -> Tuple[Tuple[Rule, ...], Dict[Word, Tuple[str, Tuple[Tuple[QScalar, Word], ...]]]]:
        rules: List[Rule] = []
        letter_rules: Dict[Word, Tuple[str, Tuple[Tuple[QScalar, Word], ...]]] = {}
        n = self.n
        unit = AlgebraElement.word(*self.idempotent_word())

        def add(family: str, lhs: Word, rhs: AlgebraElement, rewrite: bool = False) -> None:
            name = f"{family}:{render_word(lhs)}"
            rules.append(Rule(name=name, family=family, lhs=lhs, rhs=rhs))
            if rewrite:
                letter_rules[lhs] = (name, tuple((c, w) for w, c in rhs.sorted_terms()))

        w_word = self.idempotent_word()
        for i in range(n):
            add("torus-inverse", (K(i), Kb(i)), unit)
            add("torus-inverse", (Kb(i), K(i)), unit)
            add("torus-inverse", (D(i), Db(i)), unit)
            add("torus-inverse", (Db(i), D(i)), unit)
        if not self.unital:
            add("j-idempotency", (J,) * self.m, AlgebraElement.word(J))

        torus = [g for i in range(n) for g in (K(i), Kb(i), D(i), Db(i))]
        for x in torus:
            for y in torus:
                if y.sort_key() >= x.sort_key():
                    continue
                if x.index == y.index and {x.kind, y.kind} in ({"K", "Kb"}, {"D", "Db"}):
                    continue
                add("torus-commutation", (x, y), AlgebraElement.word(y, x))
        if not self.unital:
            for x in torus:
                add("j-torus-commutation", (J, x), AlgebraElement.word(x, J))
                add("torus-absorption", (x,) + w_word, AlgebraElement.word(x))
                add("torus-absorption", w_word + (x,), AlgebraElement.word(x))

        for i in range(n):
            for j in range(n):
                e_exp = self._s[i] * self._a[i][j]
                delta = int(i == j)
                add("type-one-exchange", (K(j), E(i)), AlgebraElement.word(E(i), K(j), coeff=q_power(e_exp)))
                add("type-one-exchange", (Kb(j), E(i)), AlgebraElement.word(E(i), Kb(j), coeff=q_power(-e_exp)))
                add("type-one-exchange", (K(j), F(i)), AlgebraElement.word(F(i), K(j), coeff=q_power(-e_exp)))
                add("type-one-exchange", (Kb(j), F(i)), AlgebraElement.word(F(i), Kb(j), coeff=q_power(e_exp)))
                add("d-exchange", (D(j), E(i)), AlgebraElement.word(E(i), D(j), coeff=q_power(delta)))
                add("d-exchange", (Db(j), E(i)), AlgebraElement.word(E(i), Db(j), coeff=q_power(-delta)))
                add("d-exchange", (D(j), F(i)), AlgebraElement.word(F(i), D(j), coeff=q_power(-delta)))
                add("d-exchange", (Db(j), F(i)), AlgebraElement.word(F(i), Db(j), coeff=q_power(delta)))
                if self.unital:
                    continue
                if E(i) in self._type_zero:
                    add("type-zero-conjugation", (K(j), E(i), Kb(j)), AlgebraElement.word(E(i), coeff=q_power(e_exp)))
                    add("d-conjugation", (D(j), E(i), Db(j)), AlgebraElement.word(E(i), coeff=q_power(delta)))
                if F(i) in self._type_zero:
                    add("type-zero-conjugation", (K(j), F(i), Kb(j)), AlgebraElement.word(F(i), coeff=q_power(-e_exp)))
                    add("d-conjugation", (D(j), F(i), Db(j)), AlgebraElement.word(F(i), coeff=q_power(-delta)))

        if not self.unital:
            for i in range(n):
                for x in (E(i), F(i)):
                    add("central-idempotent", w_word + (x,), AlgebraElement.word(x, *w_word))
                    if x in self._type_zero:
                        add("type-zero-absorption", (x,) + w_word, AlgebraElement.word(x))
                        add("type-zero-absorption", w_word + (x,), AlgebraElement.word(x))

        for i in range(n):
            for j in range(n):
                rhs = AlgebraElement.word(F(j), E(i))
                if i == j:
                    c = ONE / (self.q_i(i) - self.q_i(i).inverse())
                    rhs = rhs + AlgebraElement.word(K(i), coeff=c) - AlgebraElement.word(Kb(i), coeff=c)
                add("ef-commutator", (E(i), F(j)), rhs, rewrite=True)

        for i in range(n):
            if self._a[i][i] != 2:
                continue
            for j in range(n):
                if j == i:
                    continue
                for side in LETTER_KINDS:
                    lead, rhs = self._serre_rule(i, j, side)
                    add("quantum-serre", lead, rhs, rewrite=self._a[i][j] != 0)

        for i in range(n):
            for j in range(i + 1, n):
                if self._a[i][j] != 0:
                    continue
                for maker in (E, F):
                    add("commutation", (maker(j), maker(i)), AlgebraElement.word(maker(i), maker(j)), rewrite=True)
        return tuple(rules), letter_rules

    def _serre_terms(self, i: int, j: int, side: str) -> List[Tuple[QScalar, Word]]:
        maker = E if side == "E" else F
        n_ij = 1 - self._a[i][j]
        x_i, x_j = maker(i), maker(j)
        terms = []
        for r in range(n_ij + 1):
            coeff = quantum_binomial(n_ij, r, self._s[i]) * (-1) ** r
            terms.append((coeff, (x_i,) * (n_ij - r) + (x_j,) + (x_i,) * r))
        return terms

    def _serre_rule(self, i: int, j: int, side: str) -> Tuple[Word, AlgebraElement]:
        terms = self._serre_terms(i, j, side)
        lead_index = len(terms) - 1 if j > i else 0
        lead_coeff, lead = terms[lead_index]
        rhs = AlgebraElement.zero()
        for position, (coeff, word) in enumerate(terms):
            if position != lead_index:
                rhs = rhs + AlgebraElement.word(*word, coeff=-coeff / lead_coeff)
        return lead, rhs

    def serre_element(self, i: int, j: int, side: str = "E") -> AlgebraElement:
        """The unreduced quantum Serre sum for (i, j) on the E or F side.

        Raises:
            NotApplicable: Unless a_ii = 2 and i != j.
        """
        self.check_generator(E(i))
        self.check_generator(E(j))
        if self._a[i][i] != 2 or i == j:
            raise NotApplicable(f"no Serre relation for (i, j) = ({i}, {j})")
        if side not in LETTER_KINDS:
            raise NotApplicable(f"side must be E or F, got {side!r}")
        result = AlgebraElement.zero()
        for coeff, word in self._serre_terms(i, j, side):
            result = result + AlgebraElement.word(*word, coeff=coeff)
        return result

    # normal forms -----------------------------------------------------

    def _w_other(self, letters: Tuple[Tuple[int, Generator], ...], kvec: Tuple[int, ...], dvec: Tuple[int, ...]) -> bool:
        if any(kvec) or any(dvec):
            return True
        return any(p or g in self._type_zero for p, g in letters)

    def _settle(self, letters: Tuple[Tuple[int, Generator], ...], kvec: Tuple[int, ...], dvec: Tuple[int, ...], jexp: int) -> Normal:
        if self.unital:
            return letters, kvec, dvec, 0
        period = self.m - 1
        if self._w_other(letters, kvec, dvec):
            jexp %= period
        elif jexp > 0:
            jexp = (jexp - 1) % period + 1
        return letters, kvec, dvec, jexp

    def _identity(self) -> Normal:
        return (), self._zeros, self._zeros, 0

    def _to_word(self, s: Normal) -> Word:
        letters, kvec, dvec, jexp = s
        out: List[Generator] = []
        for p, g in letters:
            out.extend([J] * p)
            out.append(g)
        for i, k in enumerate(kvec):
            out.extend([K(i)] * k if k > 0 else [Kb(i)] * -k)
        for i, d in enumerate(dvec):
            out.extend([D(i)] * d if d > 0 else [Db(i)] * -d)
        out.extend([J] * jexp)
        return tuple(out)

    def _torus_word(self, kvec: Tuple[int, ...], dvec: Tuple[int, ...]) -> List[Generator]:
        return list(self._to_word(((), kvec, dvec, 0)))

    def _match_tail(self, letters: Tuple[Tuple[int, Generator], ...]) -> Optional[Word]:
        size = len(letters)
        for length in self._pattern_lengths:
            if length > size:
                continue
            start = size - length
            if any(p for p, _ in letters[start + 1 :]):
                continue
            pattern = tuple(g for _, g in letters[start:])
            if pattern in self._letter_rules:
                return pattern
        return None

    def _rule(self, family: str, lhs: Sequence[Generator]) -> Rule:
        return self._rule_index[f"{family}:{render_word(tuple(lhs))}"]

    def _rmul(self, s: Normal, g: Generator, counter: List[int], tracer: Optional[_Tracer]) -> _Expansion:
        counter[0] += 1
        if counter[0] > self.budget:
            raise ReductionBudgetExceeded(f"reduction exceeded {self.budget} steps")
        key = (s, g)
        if tracer is None:
            with self._lock:
                cached = self._cache.get(key)
            if cached is not None:
                return cached
        if g.kind == "J":
            result: _Expansion = ((self._rmul_j(s, tracer), ONE),)
        elif g.kind in TORUS_KINDS:
            result = ((self._rmul_torus(s, g, tracer), ONE),)
        else:
            result = self._rmul_letter(s, g, counter, tracer)
        if tracer is None:
            with self._lock:
                self._cache[key] = result
        return result

    def _rmul_j(self, s: Normal, tracer: Optional[_Tracer]) -> Normal:
        if self.unital:
            return s
        letters, kvec, dvec, jexp = s
        settled = self._settle(letters, kvec, dvec, jexp + 1)
        if tracer is not None:
            d = _Derivation(self, tracer, self._to_word(s) + (J,))
            self._settle_steps(d, letters, kvec, dvec, jexp + 1)
            d.expect(self._to_word(settled), ONE)
        return settled

    def _rmul_torus(self, s: Normal, g: Generator, tracer: Optional[_Tracer]) -> Normal:
        letters, kvec, dvec, jexp = s
        on_k = g.kind in ("K", "Kb")
        step = 1 if g.kind in ("K", "D") else -1
        vec = list(kvec if on_k else dvec)
        cancels = vec[g.index] * step < 0
        vec[g.index] += step
        extra = self.m - 1 if cancels and not self.unital else 0
        new_k, new_d = (tuple(vec), dvec) if on_k else (kvec, tuple(vec))
        result = self._settle(letters, new_k, new_d, jexp + extra)
        if tracer is None:
            return result

        d = _Derivation(self, tracer, self._to_word(s) + (g,))
        pos = len(d.word) - 1
        counts = [abs(k) for k in kvec] + [abs(v) for v in dvec]
        after = sum(counts[(g.index if on_k else self.n + g.index) + 1 :])
        # g travels left past the trailing J's and the later torus slots
        for _ in range(jexp + after):
            d.swap(pos - 1)
            pos -= 1
        if cancels:
            d.apply(pos - 1, self._rule("torus-inverse", (d.word[pos - 1], g)))
            start = pos - 1
            for t in range(extra):
                at = start + extra - 1 - t
                for u in range(after):
                    d.swap(at + u)
        self._settle_steps(d, letters, new_k, new_d, jexp + extra)
        d.expect(self._to_word(result), ONE)
        return result

    def _rmul_letter(self, s: Normal, g: Generator, counter: List[int], tracer: Optional[_Tracer]) -> _Expansion:
        letters, kvec, dvec, jexp = s
        i = g.index
        sign = 1 if g.kind == "E" else -1
        shift = self._s[i] * sum(k * self._a[i][j] for j, k in enumerate(kvec)) + dvec[i]
        coeff = q_power(sign * shift)
        inner = not self.unital and 1 <= jexp <= self.m - 2
        if inner:
            new_letters = letters + ((jexp, g),)
            block = 0
        else:
            new_letters = letters + ((0, g),)
            block = jexp
        if len(new_letters) > self.max_word_length:
            raise ReductionBudgetExceeded(
                f"word length exceeds the ceiling of {self.max_word_length} E/F letters"
            )
        d: Optional[_Derivation] = None
        if tracer is not None:
            d = _Derivation(self, tracer, self._to_word(s) + (g,))
            self._letter_steps(d, s, inner)
            d.expect(self._to_word((new_letters, kvec, dvec, block)), coeff)
        pattern = self._match_tail(new_letters)
        if pattern is None:
            result = self._settle(new_letters, kvec, dvec, block)
            if d is not None:
                self._settle_steps(d, new_letters, kvec, dvec, block)
                d.expect(self._to_word(result), coeff)
            return ((result, coeff),)

        name, replacement = self._letter_rules[pattern]
        size = len(pattern)
        w_flag = not self.unital and self._w_other(new_letters, kvec, dvec)
        base = self._settle(new_letters[:-size], self._zeros, self._zeros, 0)
        lead_j = new_letters[-size][0]
        tail = self._torus_word(kvec, dvec) + [J] * block
        if w_flag:
            tail += list(self.idempotent_word())
        if d is not None:
            if w_flag:
                self._insert_idempotent(d, new_letters, kvec, dvec)
            prefix = sum(p + 1 for p, _ in new_letters[:-size])
            d.record(prefix + lead_j, self._rule_index[name], d.coeff)
        acc: Dict[Normal, QScalar] = {}
        for rcoeff, rword in replacement:
            hs = (J,) * lead_j + tuple(rword) + tuple(tail)
            state: Dict[Normal, QScalar] = {base: coeff * rcoeff}
            for t, h in enumerate(hs):
                state = self._step(state, h, counter, tracer, hs[t + 1 :])
            _merge(acc, state)
        return tuple(acc.items())

    # literal derivations behind the structural steps, built only when tracing

    def _letter_steps(self, d: _Derivation, s: Normal, inner: bool) -> None:
        letters, kvec, dvec, jexp = s
        lead = sum(p + 1 for p, _ in letters)
        tlen = len(self._torus_word(kvec, dvec))
        pos = lead + tlen + jexp
        if inner:
            for t in range(jexp):
                for at in range(lead + tlen + t - 1, lead + t - 1, -1):
                    d.swap(at)
        elif jexp:
            w = self.idempotent_word()
            d.apply(pos - len(w), self._rule("central-idempotent", w + (d.word[pos],)))
            pos -= len(w)
        for at in range(pos - 1, pos - 1 - tlen, -1):
            d.swap(at)

    def _absorb_steps(self, d: _Derivation, letters: Tuple[Tuple[int, Generator], ...], kvec: Tuple[int, ...], dvec: Tuple[int, ...]) -> None:
        """Drop the J^{m-1} that follows the torus block of a word fixed by the idempotent."""
        w = self.idempotent_word()
        pos = sum(p + 1 for p, _ in letters)
        torus = self._torus_word(kvec, dvec)
        if torus:
            d.apply(pos + len(torus) - 1, self._rule("torus-absorption", (torus[-1],) + w))
            return
        for p, g in reversed(letters):
            if g in self._type_zero:
                d.apply(pos - 1, self._rule("type-zero-absorption", (g,) + w))
                return
            d.unapply(pos - 1, self._rule("central-idempotent", w + (g,)))
            pos -= 1
            if p:
                d.apply(pos - 1, self._rule("j-idempotency", (J,) * self.m))
                return
        raise RuntimeError("no letter absorbs the central idempotent")

    def _insert_idempotent(self, d: _Derivation, letters: Tuple[Tuple[int, Generator], ...], kvec: Tuple[int, ...], dvec: Tuple[int, ...]) -> None:
        w = self.idempotent_word()
        scratch = _Derivation(self, _Tracer([], d.tracer.scale, d.tracer.suffix), d.word + list(w))
        scratch.coeff = d.coeff
        self._absorb_steps(scratch, letters, kvec, dvec)
        for step in reversed(scratch.tracer.steps):
            d.tracer.steps.append(TraceStep(step.rule, step.left, step.right, -step.coeff))
        d.word.extend(w)

    def _settle_steps(self, d: _Derivation, letters: Tuple[Tuple[int, Generator], ...], kvec: Tuple[int, ...], dvec: Tuple[int, ...], jexp: int) -> None:
        if self.unital:
            return
        period = self.m - 1
        if self._w_other(letters, kvec, dvec):
            while jexp >= period:
                self._absorb_steps(d, letters, kvec, dvec)
                jexp -= period
        else:
            while jexp >= self.m:
                d.apply(len(d.word) - self.m, self._rule("j-idempotency", (J,) * self.m))
                jexp -= period

    def _step(
        self,
        state: Dict[Normal, QScalar],
        g: Generator,
        counter: List[int],
        tracer: Optional[_Tracer],
        rest: Word = (),
    ) -> Dict[Normal, QScalar]:
        out: Dict[Normal, QScalar] = {}
        for s, c in state.items():
            scoped = None if tracer is None else tracer.scoped(c, rest)
            for s2, c2 in self._rmul(s, g, counter, scoped):
                _accumulate(out, s2, c * c2)
        return out

    # public reduction API --------------------------------------------

    def reduce(self, x: AlgebraElement, trace: Optional[List[TraceStep]] = None) -> AlgebraElement:
        """Rewrite x to normal form.

        Args:
            x: Element over this presentation's generators.
            trace: When given, receives every relation instance applied, so
                that ``replay_trace(trace) == x - reduce(x)`` in the free
                algebra; the memo cache is bypassed while tracing.

        Raises:
            ReductionBudgetExceeded: When the step or word-length ceiling is hit.
        """
        counter = [0]
        acc: Dict[Normal, QScalar] = {}
        for word, coeff in x.terms.items():
            tracer = None if trace is None else _Tracer(trace)
            state: Dict[Normal, QScalar] = {self._identity(): coeff}
            for t, g in enumerate(word):
                self.check_generator(g)
                state = self._step(state, g, counter, tracer, word[t + 1 :])
            _merge(acc, state)
        logger.debug("reduced %d term(s) to %d in %d step(s)", len(x.terms), len(acc), counter[0])
        return AlgebraElement({self._to_word(s): c for s, c in acc.items()}, reduced=True)

    def multiply(self, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
        return self.reduce(x.concat(y))

    def is_zero(self, x: AlgebraElement) -> bool:
        """One-sided test: True proves x = 0, False only means x did not reduce to 0."""
        return self.reduce(x).is_empty()

    def equal(self, x: AlgebraElement, y: AlgebraElement) -> bool:
        return self.is_zero(x - y)

    def is_normal_letters(self, gens: Sequence[Generator]) -> bool:
        """True when no rewrite pattern occurs in a J-free E/F word."""
        word = tuple(gens)
        for length in self._pattern_lengths:
            for start in range(len(word) - length + 1):
                if word[start : start + length] in self._letter_rules:
                    return False
        return True

    def peirce_decompose(self, x: AlgebraElement) -> Tuple[AlgebraElement, AlgebraElement]:
        """Split x by the central idempotent into its w and w-bar parts."""
        w = self.idempotent()
        w_part = self.reduce(x.concat(w))
        wbar_part = self.reduce(x - x.concat(w))
        return w_part, wbar_part

    def element(self, *gens: Generator, coeff: Scalarish = 1) -> AlgebraElement:
        for g in gens:
            self.check_generator(g)
        return AlgebraElement.word(*gens, coeff=coeff)

    def clear_cache(self) -> None:
        with self._lock:
            self._cache.clear()


def _accumulate(acc: Dict[Normal, QScalar], s: Normal, c: QScalar) -> None:
    if s in acc:
        total = acc[s] + c
        if total:
            acc[s] = total
        else:
            del acc[s]
    elif c:
        acc[s] = c


def _merge(acc: Dict[Normal, QScalar], state: Dict[Normal, QScalar]) -> None:
    for s, c in state.items():
        _accumulate(acc, s, c)


def build_presentation(
    d: BorcherdsCartanDatum,
    tau: Optional[TypeTable] = None,
    m: int = 2,
    *,
    max_word_length: Optional[int] = None,
    budget: Optional[int] = None,
) -> Presentation:
    """Build wU_q^tau(G) for a validated datum.

    Args:
        d: Validated Borcherds-Cartan datum.
        tau: Type table; defaults to every E and F of type one.
        m: Order with J^m = J; must be at least 2.
        max_word_length: E/F letter ceiling for reductions.
        budget: Reduction step ceiling; defaults to WQA_BUDGET or 10^6.

    Raises:
        UnsupportedM: When m < 2.
    """
    if m < 2:
        raise UnsupportedM(f"m must be at least 2, got {m}")
    tau = tau or TypeTable.uniform(d.n)
    if len(tau.e) != d.n or len(tau.f) != d.n:
        raise IndexOutOfRange("type table length differs from the index set")
    for flag in tau.e + tau.f:
        if flag not in ("one", "zero"):
            raise NotApplicable(f"type flag must be 'one' or 'zero', got {flag!r}")
    return Presentation(d, tau, m, max_word_length=max_word_length, budget=budget)


def quantum_group_presentation(
    d: BorcherdsCartanDatum,
    *,
    max_word_length: Optional[int] = None,
    budget: Optional[int] = None,
) -> Presentation:
    """The ordinary quantised enveloping algebra U_q'(G) (J = 1, Kb_i = K_i^-1)."""
    return Presentation(
        d,
        TypeTable.uniform(d.n),
        1,
        unital=True,
        max_word_length=max_word_length,
        budget=budget,
    )
