"""Rational scalars, vectors and exact square roots."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Sequence, Tuple, Union

from ..errors import InputError

QVector = Tuple[Fraction, ...]
RationalLike = Union[int, Fraction, str]


def as_rational(value: RationalLike) -> Fraction:
    """Parse ``3``, ``"3"``, ``"-1/2"`` or a Fraction into a Fraction.

    Floats are rejected: they would silently smuggle rounding into the kernel.
    """
    if isinstance(value, bool):
        raise InputError(f"not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            num, _, den = text.partition("/")
            if den:
                return Fraction(int(num), int(den))
            return Fraction(int(num))
        except (ValueError, ZeroDivisionError):
            raise InputError(f"not a rational: {value!r}") from None
    raise InputError(f"not a rational: {value!r}")


def format_rational(q: Fraction) -> str:
    """Canonical string form: ``"3"`` or ``"-1/2"``."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def qvec(coords: Iterable[RationalLike]) -> QVector:
    return tuple(as_rational(c) for c in coords)


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def integer_scale(row: Sequence[Fraction]) -> Tuple[Tuple[int, ...], Fraction]:
    """Return ``(ints, k)`` with ``ints = k * row`` primitive and ``k > 0``.

    The zero row maps to itself with ``k = 1``.
    """
    den = 1
    for x in row:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in row]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g == 0:
        return tuple(ints), 1
    return tuple(x // g for x in ints), Fraction(den, g)


def primitive(vec: Sequence[int]) -> Tuple[int, ...]:
    g = 0
    for x in vec:
        g = math.gcd(g, x)
    if g <= 1:
        return tuple(vec)
    return tuple(x // g for x in vec)


def _is_square_int(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def exact_sqrt(q: Fraction):
    """Square root of a nonnegative rational: a Fraction when rational,
    otherwise a :class:`QuadraticValue`."""
    if q < 0:
        raise ValueError("negative radicand")
    if _is_square_int(q.numerator) and _is_square_int(q.denominator):
        return Fraction(math.isqrt(q.numerator), math.isqrt(q.denominator))
    return QuadraticValue(q)


@total_ordering
class QuadraticValue:
    """The nonnegative real number ``sqrt(square)`` with ``square`` rational.

    Comparison against other QuadraticValues and against nonnegative
    rationals is exact (it compares squares).
    """

    __slots__ = ("square",)

    def __init__(self, square: RationalLike):
        square = as_rational(square)
        if square < 0:
            raise ValueError("QuadraticValue needs a nonnegative square")
        self.square = square

    @staticmethod
    def _square_of(other) -> Fraction:
        if isinstance(other, QuadraticValue):
            return other.square
        other = as_rational(other) if not isinstance(other, Fraction) else other
        if other < 0:
            return Fraction(-1)
        return other * other

    def __eq__(self, other):
        try:
            return self.square == self._square_of(other)
        except InputError:
            return NotImplemented

    def __lt__(self, other):
        s = self._square_of(other)
        if s < 0:
            return False
        return self.square < s

    def __hash__(self):
        return hash(("QuadraticValue", self.square))

    def __float__(self):
        return math.sqrt(self.square)

    def __repr__(self):
        return f"QuadraticValue(sqrt({format_rational(self.square)}))"

    def as_rational(self):
        """The value as a Fraction if it is rational, else None."""
        r = exact_sqrt(self.square)
        return r if isinstance(r, Fraction) else None

    def to_json(self) -> str:
        r = self.as_rational()
        if r is not None:
            return format_rational(r)
        return f"sqrt({format_rational(self.square)})"
