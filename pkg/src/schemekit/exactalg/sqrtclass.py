"""The incomplete square-root extension F-sqrt-F.

A SqrtClassValue represents alpha * sqrt(beta) with alpha, beta in a real number
field F and beta >= 0.  Radicands are canonicalized by extracting the square part
of their rational content, so two values are in the same class F-sqrt-beta exactly
when their canonical radicands are identical field elements.  Addition across
classes is an error; products of same-class values land back in F.
"""

import gmpy2
from gmpy2 import mpq

import sympy

from .field import AlgebraicReal, _coerce


class IncompatibleClassError(ValueError):
    """Addition of sqrt-class values with different canonical radicands."""


def _sq_decompose(n):
    """n = s^2 * r with r squarefree; returns (s, r) for a positive integer n."""
    s, r = 1, 1
    for p, e in sympy.factorint(int(n)).items():
        s *= p ** (e // 2)
        if e % 2:
            r *= p
    return s, r


def canonical_radicand(beta):
    """Split beta >= 0 as (scale, radicand) with beta = scale^2 * radicand.

    The radicand has squarefree positive integer rational content; only rational
    square factors are extracted (no square detection inside the field).
    """
    beta = _coerce(beta)
    sgn = beta.sign()
    if sgn < 0:
        raise ValueError("radicand must be nonnegative")
    if sgn == 0:
        return AlgebraicReal.rational(1), AlgebraicReal.rational(0)
    num = 0
    den = 1
    for c in beta.coords:
        num = gmpy2.gcd(num, c.numerator)
        den = gmpy2.lcm(den, c.denominator)
    content = mpq(num, den)  # positive: applies to the coordinate gcd only
    core = beta * (1 / content)  # integer-content 1, but sign of coords may vary
    a, b = content.numerator, content.denominator
    s, r = _sq_decompose(a * b)
    # beta = (a/b) * core = (s/b)^2 * r * core
    scale = AlgebraicReal.rational(mpq(s, b))
    radicand = core * mpq(r)
    return scale, radicand


class SqrtClassValue:
    """alpha * sqrt(beta) with beta canonical."""

    __slots__ = ("coefficient", "radicand")

    def __init__(self, coefficient, radicand, canonical=False):
        coefficient = _coerce(coefficient)
        radicand = _coerce(radicand)
        if coefficient.is_zero() or radicand.is_zero():
            self.coefficient = AlgebraicReal.rational(0)
            self.radicand = AlgebraicReal.rational(0)
            return
        if not canonical:
            scale, radicand = canonical_radicand(radicand)
            coefficient = coefficient * scale
        self.coefficient = coefficient
        self.radicand = radicand

    def is_zero(self):
        return self.coefficient.is_zero()

    def same_class(self, other):
        if self.is_zero() or other.is_zero():
            return True
        return self.radicand == other.radicand

    def __add__(self, other):
        if not isinstance(other, SqrtClassValue):
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.radicand != other.radicand:
            raise IncompatibleClassError(
                "sqrt-class addition requires a common radicand"
            )
        return SqrtClassValue(
            self.coefficient + other.coefficient, self.radicand, canonical=True
        )

    def __neg__(self):
        return SqrtClassValue(-self.coefficient, self.radicand, canonical=True)

    def __sub__(self, other):
        if not isinstance(other, SqrtClassValue):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        """Product: same-class operands collapse into the field F."""
        if isinstance(other, SqrtClassValue):
            if self.is_zero() or other.is_zero():
                return AlgebraicReal.rational(0)
            if self.radicand != other.radicand:
                raise IncompatibleClassError(
                    "sqrt-class product is only defined within one class"
                )
            return self.coefficient * other.coefficient * self.radicand
        return SqrtClassValue(self.coefficient * _coerce(other), self.radicand,
                              canonical=True)

    __rmul__ = __mul__

    def square(self):
        return self.coefficient * self.coefficient * self.radicand

    def __eq__(self, other):
        if not isinstance(other, SqrtClassValue):
            return NotImplemented
        if self.is_zero():
            return other.is_zero()
        return self.radicand == other.radicand and self.coefficient == other.coefficient

    def __hash__(self):
        return hash((self.coefficient, self.radicand))

    def sign(self):
        return self.coefficient.sign()

    def to_float(self):
        import math

        return self.coefficient.to_float() * math.sqrt(self.radicand.to_float())

    def render(self):
        if self.is_zero():
            return "0"
        return f"{self.coefficient.render()}*sqrt({self.radicand.render()})"

    def __repr__(self):
        return f"SqrtClassValue({self.render()})"


def sqrt_of_field_element(beta):
    """The positive square root of beta >= 0 as a canonical SqrtClassValue."""
    scale, radicand = canonical_radicand(beta)
    return SqrtClassValue(scale, radicand, canonical=True)


def divide_into_class(value, divisor):
    """value / divisor for a field element and a nonzero SqrtClassValue.

    alpha / (c * sqrt(beta)) = (alpha / (c * beta)) * sqrt(beta).
    """
    value = _coerce(value)
    if divisor.is_zero():
        raise ZeroDivisionError("division by zero sqrt-class value")
    return SqrtClassValue(
        value / (divisor.coefficient * divisor.radicand), divisor.radicand,
        canonical=True,
    )


def sqrtclass_arithmetic(op, a, b=None):
    """Uniform entry point mirroring the module contract."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "div":
        if isinstance(a, SqrtClassValue) and isinstance(b, SqrtClassValue):
            if a.is_zero():
                return AlgebraicReal.rational(0)
            if a.radicand != b.radicand:
                raise IncompatibleClassError("sqrt-class division across classes")
            return a.coefficient / b.coefficient
        return divide_into_class(a, b)
    if op == "square":
        return a.square()
    if op == "sqrt_of_field_element":
        return sqrt_of_field_element(a)
    raise ValueError(f"unknown sqrt-class operation: {op}")
