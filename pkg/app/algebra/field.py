"""Exact scalar fields: prime fields GF(p) and the rationals.

Matrices and polynomials store *raw* values (``int`` in ``[0, p)`` for GF(p), ``Fraction`` for the
rationals) and delegate arithmetic to their :class:`FieldDesc`. :class:`Scalar` is the boxed form
handed out by the public API.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional, Union

from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from app.core.config import settings
from app.core.errors import FieldMismatchError, ParseError, UsageError

Raw = Union[int, Fraction]


class FieldKind(str, Enum):
    """Field kinds; the values are the tokens of the text format."""
    PRIME = "gf"
    RATIONAL = "rat"


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    d = 3
    while d * d <= m:
        if m % d == 0:
            return False
        d += 2
    return True


class FieldDesc(BaseModel):
    """Descriptor of the ground field K. Two descriptors are interchangeable iff equal."""

    model_config = ConfigDict(frozen=True)

    kind: FieldKind
    modulus: Optional[int] = None

    @model_validator(mode="after")
    def check_modulus(self) -> "FieldDesc":
        if self.kind is FieldKind.PRIME:
            if self.modulus is None:
                raise ValueError("prime field requires a modulus")
            if not 2 <= self.modulus < settings.MAX_MODULUS:
                raise ValueError(f"modulus must lie in [2, {settings.MAX_MODULUS})")
            if not is_prime(self.modulus):
                raise ValueError(f"modulus {self.modulus} is not prime")
        elif self.modulus is not None:
            raise ValueError("the rational field takes no modulus")
        return self

    # -- descriptors -------------------------------------------------------

    @property
    def is_finite(self) -> bool:
        return self.kind is FieldKind.PRIME

    @property
    def order(self) -> Optional[int]:
        """Number of elements, None for the rationals."""
        return self.modulus

    @property
    def characteristic(self) -> int:
        return self.modulus if self.modulus is not None else 0

    @property
    def zero(self) -> Raw:
        return 0 if self.modulus is not None else Fraction(0)

    @property
    def one(self) -> Raw:
        return 1 if self.modulus is not None else Fraction(1)

    def __str__(self) -> str:
        if self.modulus is not None:
            return f"GF({self.modulus})"
        return "QQ"

    def require_same(self, other: "FieldDesc") -> None:
        if self != other:
            raise FieldMismatchError(f"field mismatch: {self} vs {other}")

    # -- raw arithmetic ----------------------------------------------------

    def coerce(self, x: Union[int, Fraction, str, "Scalar"]) -> Raw:
        """Map an int, Fraction, numeric string or Scalar to the canonical raw value."""
        if isinstance(x, Scalar):
            self.require_same(x.field)
            return x.value
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, bool):
            x = int(x)
        if self.modulus is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.modulus == 0:
                raise UsageError(f"{x} has no image in {self}")
            return x.numerator * pow(x.denominator, -1, self.modulus) % self.modulus
        return int(x) % self.modulus

    def add(self, a: Raw, b: Raw) -> Raw:
        if self.modulus is not None:
            return (a + b) % self.modulus
        return a + b

    def sub(self, a: Raw, b: Raw) -> Raw:
        if self.modulus is not None:
            return (a - b) % self.modulus
        return a - b

    def mul(self, a: Raw, b: Raw) -> Raw:
        if self.modulus is not None:
            return a * b % self.modulus
        return a * b

    def neg(self, a: Raw) -> Raw:
        if self.modulus is not None:
            return -a % self.modulus
        return -a

    def inv(self, a: Raw) -> Raw:
        if a == 0:
            raise ZeroDivisionError(f"zero has no inverse in {self}")
        if self.modulus is not None:
            return pow(a, -1, self.modulus)
        return 1 / a

    def div(self, a: Raw, b: Raw) -> Raw:
        return self.mul(a, self.inv(b))

    def elements(self) -> Iterator[Raw]:
        """All field elements in canonical order 0, 1, ..., p-1."""
        if self.modulus is None:
            raise UsageError("the rational field cannot be enumerated")
        return iter(range(self.modulus))

    def sort_key(self, a: Raw) -> tuple:
        """Deterministic order: GF(p) by representative, QQ by (|num| + den, sign)."""
        if self.modulus is not None:
            return (a,)
        return (abs(a.numerator) + a.denominator, a < 0, a)

    # -- text --------------------------------------------------------------

    def parse(self, token: str) -> Raw:
        token = token.strip()
        try:
            if self.modulus is None:
                return Fraction(token)
            if "/" in token:
                return self.coerce(Fraction(token))
            return int(token) % self.modulus
        except (ValueError, ZeroDivisionError) as e:
            raise ParseError(f"invalid {self} entry {token!r}: {e}") from e

    def format(self, a: Raw) -> str:
        return str(a)

    def header(self) -> str:
        if self.modulus is not None:
            return f"field gf {self.modulus}"
        return "field rat"


@lru_cache(maxsize=None)
def GF(p: int) -> FieldDesc:
    try:
        return FieldDesc(kind=FieldKind.PRIME, modulus=p)
    except ValidationError as e:
        raise UsageError(f"invalid prime field GF({p}): {e.errors()[0]['msg']}") from e


@lru_cache(maxsize=None)
def rationals() -> FieldDesc:
    return FieldDesc(kind=FieldKind.RATIONAL)


QQ = rationals()


def parse_field_header(line: str) -> FieldDesc:
    """Parse ``field gf <p>`` or ``field rat``."""
    parts = line.split()
    try:
        if parts[:2] == ["field", "rat"] and len(parts) == 2:
            return QQ
        if parts[:2] == ["field", "gf"] and len(parts) == 3:
            return GF(int(parts[2]))
    except ValueError as e:
        raise ParseError(f"invalid field header {line!r}: {e}") from e
    raise ParseError(f"invalid field header {line!r}")


@dataclass(frozen=True)
class Scalar:
    """An exact field element in canonical form; equality is direct comparison."""

    field: FieldDesc
    value: Raw

    @classmethod
    def of(cls, field: FieldDesc, x: Union[int, Fraction, str]) -> "Scalar":
        return cls(field, field.coerce(x))

    def _other(self, other: object) -> Raw:
        if isinstance(other, Scalar):
            self.field.require_same(other.field)
            return other.value
        if isinstance(other, (int, Fraction)):
            return self.field.coerce(other)
        raise TypeError(f"cannot combine Scalar with {type(other).__name__}")

    def __add__(self, other: object) -> "Scalar":
        return Scalar(self.field, self.field.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other: object) -> "Scalar":
        return Scalar(self.field, self.field.sub(self.value, self._other(other)))

    def __rsub__(self, other: object) -> "Scalar":
        return Scalar(self.field, self.field.sub(self._other(other), self.value))

    def __mul__(self, other: object) -> "Scalar":
        return Scalar(self.field, self.field.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> "Scalar":
        return Scalar(self.field, self.field.div(self.value, self._other(other)))

    def __neg__(self) -> "Scalar":
        return Scalar(self.field, self.field.neg(self.value))

    def inverse(self) -> "Scalar":
        return Scalar(self.field, self.field.inv(self.value))

    def is_zero(self) -> bool:
        return self.value == 0

    def __str__(self) -> str:
        return self.field.format(self.value)
