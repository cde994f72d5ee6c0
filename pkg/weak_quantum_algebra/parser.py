"""
Expression grammar for algebra elements.

    expr    :: ['-'] term (('+' | '-') term)*
    term    :: factor (['*' | '/'] factor)*      juxtaposition multiplies
    factor  :: atom ['^' ['-'] integer]
    atom    :: generator | 'q' | integer | '[' n [';' i] ']' | '(' expr ')'

Generators are ``E<i> F<i> K<i> Kb<i> D<i> Db<i> J``.  ``[n]`` is the quantum
integer in base q and ``[n;i]`` the one in base q_i.  Parsing builds a small
tree first; the tree is then evaluated against a presentation so unknown
generators and bad indices are reported with their position.
"""

import logging
from functools import lru_cache
from typing import Any, List, Tuple

import pyparsing as pp

from weak_quantum_algebra.exceptions import (
    DivisionByZero,
    ExpressionSyntaxError,
    IndexOutOfRange,
    UnknownGenerator,
)
from weak_quantum_algebra.presentation import AlgebraElement, Generator, Presentation
from weak_quantum_algebra.qscalar import Q, QScalar, quantum_integer

logger = logging.getLogger(__name__)

Node = Tuple[Any, ...]


def _node(kind: str):
    def action(s: str, loc: int, toks: pp.ParseResults) -> Node:
        return (kind, loc) + tuple(toks)

    return action


def _fold(kind: str):
    def action(s: str, loc: int, toks: pp.ParseResults) -> Node:
        items = list(toks[0])
        return (kind, loc, items) if len(items) > 1 else items[0]

    return action


@lru_cache(maxsize=1)
def grammar() -> pp.ParserElement:
    expr = pp.Forward()
    integer = pp.Regex(r"\d+").set_parse_action(lambda t: int(t[0]))
    signed = pp.Regex(r"-?\d+").set_parse_action(lambda t: int(t[0]))

    generator = pp.Regex(r"(?P<kind>Kb|Db|E|F|K|D)(?P<index>\d+)|(?P<kind_j>J)(?![A-Za-z0-9_])")
    generator.set_parse_action(
        lambda s, loc, t: ("gen", loc, t.get("kind") or "J", int(t["index"]) if t.get("index") else -1)
    )
    q_atom = pp.Regex(r"q(?![0-9_])").set_parse_action(lambda s, loc, t: ("q", loc))
    unknown = pp.Regex(r"[A-Za-z_][A-Za-z0-9_]*").set_parse_action(lambda s, loc, t: ("unknown", loc, t[0]))
    number = integer.copy().set_parse_action(lambda s, loc, t: ("num", loc, int(t[0])))
    qint = (
        pp.Suppress("[") + signed + pp.Optional(pp.Suppress(";") + integer, default=None) + pp.Suppress("]")
    ).set_parse_action(_node("qint"))
    group = pp.Suppress("(") + expr + pp.Suppress(")")

    atom = generator | q_atom | number | qint | group | unknown
    factor = (atom + pp.Optional(pp.Suppress("^") + signed)).set_parse_action(
        lambda s, loc, t: ("pow", loc, t[0], t[1]) if len(t) == 2 else t[0]
    )
    mulop = pp.one_of("* /")
    term = pp.Group(factor + pp.ZeroOrMore(pp.Optional(mulop, default="*") + factor))
    term.set_parse_action(_fold("mul"))
    addop = pp.one_of("+ -")
    lead = pp.Optional(pp.Literal("-"), default="+")
    expr <<= pp.Group(lead + term + pp.ZeroOrMore(addop + term)).set_parse_action(
        lambda s, loc, t: ("add", loc, list(t[0]))
    )
    return expr


def parse_tree(text: str) -> Node:
    """Parse text into an expression tree.

    Raises:
        ExpressionSyntaxError: With the offset where parsing stopped.
    """
    try:
        return grammar().parse_string(text, parse_all=True)[0]
    except pp.ParseBaseException as exc:
        raise ExpressionSyntaxError(exc.msg, exc.loc) from None


class _Evaluator:
    def __init__(self, p: Presentation):
        self.p = p

    def run(self, node: Node) -> AlgebraElement:
        handler = getattr(self, f"_eval_{node[0]}")
        return handler(*node[1:])

    def _eval_num(self, loc: int, value: int) -> AlgebraElement:
        return AlgebraElement.scalar(value)

    def _eval_q(self, loc: int) -> AlgebraElement:
        return AlgebraElement.scalar(Q)

    def _eval_unknown(self, loc: int, name: str) -> AlgebraElement:
        raise UnknownGenerator(f"unknown generator {name!r} at position {loc}")

    def _eval_gen(self, loc: int, kind: str, index: int) -> AlgebraElement:
        g = Generator(kind, index)
        if g not in self.p.generators():
            try:
                self.p.check_generator(g)
            except IndexOutOfRange as exc:
                raise IndexOutOfRange(f"{exc} (at position {loc})") from None
            raise UnknownGenerator(f"{g.render()} is not a generator here (at position {loc})")
        return AlgebraElement.word(g)

    def _eval_qint(self, loc: int, n: int, i: Any) -> AlgebraElement:
        if i is None:
            return AlgebraElement.scalar(quantum_integer(n))
        if not 0 <= i < self.p.n:
            raise IndexOutOfRange(f"[{n};{i}]: index outside I = {{0..{self.p.n - 1}}} (at position {loc})")
        return AlgebraElement.scalar(quantum_integer(n, self.p.datum.s[i]))

    def _as_scalar(self, value: AlgebraElement, loc: int, what: str) -> QScalar:
        c = value.scalar_value()
        if c is None:
            raise ExpressionSyntaxError(f"{what} needs a scalar", loc)
        return c

    def _eval_pow(self, loc: int, base: Node, exponent: int) -> AlgebraElement:
        value = self.run(base)
        if exponent >= 0:
            return value.power(exponent)
        c = self._as_scalar(value, loc, "a negative power")
        if not c:
            raise DivisionByZero(f"negative power of zero at position {loc}")
        return AlgebraElement.scalar(c**exponent)

    def _eval_mul(self, loc: int, items: List[Any]) -> AlgebraElement:
        result = self.run(items[0])
        for op, node in zip(items[1::2], items[2::2]):
            value = self.run(node)
            if op == "*":
                result = result.concat(value)
                continue
            c = self._as_scalar(value, node[1], "division")
            if not c:
                raise DivisionByZero(f"division by zero at position {node[1]}")
            result = result.scale(c.inverse())
        return result

    def _eval_add(self, loc: int, items: List[Any]) -> AlgebraElement:
        result = AlgebraElement.zero()
        for sign, node in zip(items[0::2], items[1::2]):
            value = self.run(node)
            result = result - value if sign == "-" else result + value
        return result


def parse_expression(text: str, p: Presentation) -> AlgebraElement:
    """Parse text into an unreduced element of p.

    Raises:
        ExpressionSyntaxError: Malformed text, or division by a non-scalar.
        UnknownGenerator: A name that is not a generator of p.
        IndexOutOfRange: A generator index outside the index set.
    """
    element = _Evaluator(p).run(parse_tree(text))
    logger.debug("parsed %r as %s", text, element.render())
    return element
