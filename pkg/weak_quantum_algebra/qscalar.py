"""
Exact arithmetic in the coefficient field Q(q).

Scalars wrap elements of sympy's rational function field ``QQ(q)``; sympy
cancels the polynomial gcd on every operation, and ``QScalar.canonical`` adds
the integer normalisation used for hashing and rendering.
"""

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Dict, Tuple, Union

from sympy import QQ, Symbol

from weak_quantum_algebra.exceptions import DivisionByZero, OutOfRange

# Coefficient domain, shared with DomainMatrix in the representation code.
DOMAIN = QQ.frac_field(Symbol("q"))
_GEN = DOMAIN.field.gens[0]

Operand = Union["QScalar", int, Fraction]
Canonical = Tuple[Tuple[Tuple[int, int], ...], Tuple[Tuple[int, int], ...]]


def _to_fraction(c: object) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))  # type: ignore[attr-defined]


class QScalar:
    """An element of Q(q) in canonical form."""

    __slots__ = ("_value", "_canonical")

    def __init__(self, value: object):
        self._value = value
        self._canonical: Union[Canonical, None] = None

    # construction -----------------------------------------------------

    @classmethod
    def from_int(cls, n: int) -> "QScalar":
        return cls(DOMAIN.convert(n))

    @classmethod
    def from_fraction(cls, value: Fraction) -> "QScalar":
        return cls(DOMAIN.convert(value.numerator) / DOMAIN.convert(value.denominator))

    @classmethod
    def coerce(cls, value: Operand) -> "QScalar":
        if isinstance(value, QScalar):
            return value
        if isinstance(value, Fraction):
            return cls.from_fraction(value)
        if isinstance(value, int):
            return cls.from_int(value)
        raise TypeError(f"cannot coerce {type(value).__name__} to QScalar")

    @property
    def value(self) -> object:
        """The underlying sympy field element."""
        return self._value

    # arithmetic -------------------------------------------------------

    def __add__(self, other: Operand) -> "QScalar":
        return QScalar(self._value + QScalar.coerce(other)._value)

    __radd__ = __add__

    def __sub__(self, other: Operand) -> "QScalar":
        return QScalar(self._value - QScalar.coerce(other)._value)

    def __rsub__(self, other: Operand) -> "QScalar":
        return QScalar(QScalar.coerce(other)._value - self._value)

    def __mul__(self, other: Operand) -> "QScalar":
        return QScalar(self._value * QScalar.coerce(other)._value)

    __rmul__ = __mul__

    def __truediv__(self, other: Operand) -> "QScalar":
        divisor = QScalar.coerce(other)
        if not divisor:
            raise DivisionByZero("division by the zero scalar")
        return QScalar(self._value / divisor._value)

    def __rtruediv__(self, other: Operand) -> "QScalar":
        return QScalar.coerce(other) / self

    def __neg__(self) -> "QScalar":
        return QScalar(-self._value)

    def __pow__(self, exponent: int) -> "QScalar":
        if exponent < 0 and not self:
            raise DivisionByZero("negative power of the zero scalar")
        try:
            return QScalar(self._value**exponent)
        except ZeroDivisionError as exc:
            raise DivisionByZero(str(exc)) from exc

    def inverse(self) -> "QScalar":
        return QScalar.from_int(1) / self

    def __bool__(self) -> bool:
        return bool(self._value.numer)  # type: ignore[attr-defined]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = QScalar.coerce(other)
        if not isinstance(other, QScalar):
            return NotImplemented
        return not (self._value - other._value).numer  # type: ignore[operator]

    def __hash__(self) -> int:
        return hash(self.canonical)

    # canonical form ---------------------------------------------------

    @property
    def canonical(self) -> Canonical:
        """Integer numerator (Laurent) and denominator (polynomial) terms.

        The denominator has a nonzero constant term and a positive leading
        coefficient; the content of numerator and denominator together is 1.
        """
        if self._canonical is None:
            self._canonical = self._compute_canonical()
        return self._canonical

    def _compute_canonical(self) -> Canonical:
        numer = {m[0]: _to_fraction(c) for m, c in self._value.numer.terms()}  # type: ignore[attr-defined]
        denom = {m[0]: _to_fraction(c) for m, c in self._value.denom.terms()}  # type: ignore[attr-defined]
        if not numer:
            return ((), ((0, 1),))
        scale = lcm(*(c.denominator for c in [*numer.values(), *denom.values()]))
        num_i = {e: int(c * scale) for e, c in numer.items()}
        den_i = {e: int(c * scale) for e, c in denom.items()}
        content = gcd(*num_i.values(), *den_i.values())
        if den_i[max(den_i)] < 0:
            content = -content
        shift = min(den_i)
        num_t = tuple(sorted(((e - shift, c // content) for e, c in num_i.items()), reverse=True))
        den_t = tuple(sorted(((e - shift, c // content) for e, c in den_i.items()), reverse=True))
        return num_t, den_t

    def is_laurent(self) -> bool:
        """True when the denominator is a constant."""
        return len(self.canonical[1]) == 1

    def laurent_terms(self) -> Dict[int, Fraction]:
        """Exponent to coefficient map; only valid for Laurent scalars."""
        num, den = self.canonical
        if len(den) != 1:
            raise OutOfRange(f"{self.render()} is not a Laurent polynomial")
        d = den[0][1]
        return {e: Fraction(c, d) for e, c in num}

    # evaluation and rendering ----------------------------------------

    def evaluate(self, value: Union[Fraction, int]) -> Fraction:
        """Substitute a rational number for q."""
        x = Fraction(value)
        num, den = self.canonical

        def poly(terms: Tuple[Tuple[int, int], ...]) -> Fraction:
            total = Fraction(0)
            for e, c in terms:
                if e < 0 and x == 0:
                    raise DivisionByZero("negative power of q at q = 0")
                total += c * x**e
            return total

        bottom = poly(den)
        if bottom == 0:
            raise DivisionByZero(f"{self.render()} has a pole at q = {x}")
        return poly(num) / bottom

    def render(self) -> str:
        num, den = self.canonical
        if not num:
            return "0"
        if len(den) == 1:
            d = den[0][1]
            return _render_laurent([(e, Fraction(c, d)) for e, c in num])
        top = _render_laurent([(e, Fraction(c)) for e, c in num])
        bottom = _render_laurent([(e, Fraction(c)) for e, c in den])
        return f"({top})/({bottom})"

    def is_atomic(self) -> bool:
        """True when the rendering needs no parentheses inside a product."""
        num, den = self.canonical
        return len(den) == 1 and len(num) == 1 and Fraction(num[0][1], den[0][1]) > 0

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"QScalar({self.render()!r})"


def _render_monomial(exponent: int, coeff: Fraction) -> str:
    magnitude = abs(coeff)
    if exponent == 0:
        return str(magnitude)
    power = "q" if exponent == 1 else f"q^{exponent}"
    if magnitude == 1:
        return power
    return f"{magnitude}*{power}"


def _render_laurent(terms: "list[Tuple[int, Fraction]]") -> str:
    pieces = []
    for position, (exponent, coeff) in enumerate(sorted(terms, reverse=True)):
        text = _render_monomial(exponent, coeff)
        if position == 0:
            pieces.append(f"-{text}" if coeff < 0 else text)
        else:
            pieces.append(f" - {text}" if coeff < 0 else f" + {text}")
    return "".join(pieces)


ZERO = QScalar.from_int(0)
ONE = QScalar.from_int(1)
Q = QScalar(_GEN)


@lru_cache(maxsize=4096)
def q_power(exponent: int) -> QScalar:
    """q raised to an integer power."""
    return Q**exponent


def qs_arith(op: str, x: QScalar, y: Union[QScalar, int, None] = None) -> QScalar:
    """Dispatch one field operation by name.

    Args:
        op: One of ``add``, ``sub``, ``mul``, ``div``, ``neg``, ``pow``.
        x: Left operand.
        y: Right operand, or the integer exponent for ``pow``.

    Raises:
        DivisionByZero: For ``div`` by zero or a negative power of zero.
    """
    if op == "neg":
        return -x
    if y is None:
        raise OutOfRange(f"operation {op!r} needs a second operand")
    if op == "pow":
        if not isinstance(y, int):
            raise OutOfRange("pow needs an integer exponent")
        return x**y
    handlers = {
        "add": lambda a, b: a + b,
        "sub": lambda a, b: a - b,
        "mul": lambda a, b: a * b,
        "div": lambda a, b: a / b,
    }
    if op not in handlers:
        raise OutOfRange(f"unknown scalar operation {op!r}")
    return handlers[op](x, QScalar.coerce(y))


@lru_cache(maxsize=1024)
def quantum_integer(m: int, base_exponent: int = 1) -> QScalar:
    """[m] in base nu = q^base_exponent, i.e. (nu^m - nu^-m)/(nu - nu^-1)."""
    if base_exponent <= 0:
        raise OutOfRange("base exponent must be positive")
    if m < 0:
        return -quantum_integer(-m, base_exponent)
    total = ZERO
    for k in range(m):
        total = total + q_power(base_exponent * (m - 1 - 2 * k))
    return total


@lru_cache(maxsize=1024)
def quantum_factorial(m: int, base_exponent: int = 1) -> QScalar:
    if m < 0:
        raise OutOfRange("quantum factorial of a negative integer")
    result = ONE
    for k in range(1, m + 1):
        result = result * quantum_integer(k, base_exponent)
    return result


@lru_cache(maxsize=1024)
def quantum_binomial(m: int, k: int, base_exponent: int = 1) -> QScalar:
    """Gaussian binomial [m choose k] in base q^base_exponent.

    Raises:
        OutOfRange: Unless 0 <= k <= m.
    """
    if m < 0 or k < 0 or k > m:
        raise OutOfRange(f"quantum binomial needs 0 <= k <= m, got m={m}, k={k}")
    return quantum_factorial(m, base_exponent) / (
        quantum_factorial(k, base_exponent) * quantum_factorial(m - k, base_exponent)
    )
