from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, List, Sequence, Tuple, Union

from app.algebra.field import FieldDesc, Raw, Scalar
from app.core.errors import UsageError

# degree of the zero polynomial
NEG_INF = float("-inf")


def _trim(coeffs: Iterable[Raw]) -> Tuple[Raw, ...]:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class Polynomial:
    """Univariate polynomial in t, coefficients ascending, no trailing zeros."""

    field: FieldDesc
    coeffs: Tuple[Raw, ...]

    def __post_init__(self) -> None:
        if self.coeffs and self.coeffs[-1] == 0:
            object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @classmethod
    def make(cls, field: FieldDesc, coeffs: Sequence[Union[int, Fraction, str, Raw]]) -> "Polynomial":
        return cls(field, _trim(field.coerce(c) for c in coeffs))

    @classmethod
    def zero(cls, field: FieldDesc) -> "Polynomial":
        return cls(field, ())

    @classmethod
    def constant(cls, field: FieldDesc, c: Raw) -> "Polynomial":
        return cls(field, _trim([c]))

    @classmethod
    def linear(cls, field: FieldDesc, c0: Raw, c1: Raw) -> "Polynomial":
        """c0 + c1 * t"""
        return cls(field, _trim([c0, c1]))

    # -- descriptors -------------------------------------------------------

    @property
    def degree(self) -> Union[int, float]:
        """Degree, ``NEG_INF`` for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def leading(self) -> Raw:
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def coefficient(self, k: int) -> Raw:
        return self.coeffs[k] if k < len(self.coeffs) else self.field.zero

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self.field.require_same(other.field)
        f = self.field
        size = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(f, _trim(f.add(self.coefficient(k), other.coefficient(k)) for k in range(size)))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.field, tuple(self.field.neg(c) for c in self.coeffs))

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self.field.require_same(other.field)
        f = self.field
        if not self.coeffs or not other.coeffs:
            return Polynomial.zero(f)
        out = [f.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = f.add(out[i + j], f.mul(a, b))
        return Polynomial(f, _trim(out))

    def scale(self, c: Raw) -> "Polynomial":
        f = self.field
        return Polynomial(f, _trim(f.mul(c, x) for x in self.coeffs))

    def __divmod__(self, other: "Polynomial") -> Tuple["Polynomial", "Polynomial"]:
        self.field.require_same(other.field)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        f = self.field
        rem = list(self.coeffs)
        dq = len(other.coeffs) - 1
        inv_lead = f.inv(other.leading)
        quot = [f.zero] * max(len(rem) - dq, 0)
        while len(rem) - 1 >= dq and rem:
            shift = len(rem) - 1 - dq
            c = f.mul(rem[-1], inv_lead)
            quot[shift] = c
            for k, b in enumerate(other.coeffs):
                rem[shift + k] = f.sub(rem[shift + k], f.mul(c, b))
            rem = list(_trim(rem))
        return Polynomial(f, _trim(quot)), Polynomial(f, tuple(rem))

    def __floordiv__(self, other: "Polynomial") -> "Polynomial":
        return divmod(self, other)[0]

    def __mod__(self, other: "Polynomial") -> "Polynomial":
        return divmod(self, other)[1]

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        return self.scale(self.field.inv(self.leading))

    def __call__(self, t: Raw) -> Raw:
        """Horner evaluation at a raw field value."""
        f = self.field
        acc = f.zero
        for c in reversed(self.coeffs):
            acc = f.add(f.mul(acc, t), c)
        return acc

    def primitive_integer_form(self) -> List[int]:
        """Coprime integer coefficients of a rational multiple of self (rationals only)."""
        if self.field.is_finite:
            raise UsageError("integer form is defined over the rationals only")
        if self.is_zero():
            return []
        den = lcm(*(Fraction(c).denominator for c in self.coeffs))
        ints = [int(Fraction(c) * den) for c in self.coeffs]
        content = gcd(*ints)
        ints = [c // content for c in ints]
        if ints[-1] < 0:
            ints = [-c for c in ints]
        return ints

    def render(self, var: str = "t") -> str:
        """``c0 + c1*t + c2*t^2 + ...`` with zero terms omitted; ``0`` for the zero polynomial."""
        if self.is_zero():
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            s = self.field.format(c)
            if k == 0:
                terms.append(s)
            elif k == 1:
                terms.append(f"{s}*{var}")
            else:
                terms.append(f"{s}*{var}^{k}")
        return " + ".join(terms)

    def __str__(self) -> str:
        return self.render()


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd; gcd(0, 0) = 0."""
    a.field.require_same(b.field)
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def eval_poly(g: Polynomial, t0: Scalar) -> Scalar:
    g.field.require_same(t0.field)
    return Scalar(g.field, g(t0.value))
