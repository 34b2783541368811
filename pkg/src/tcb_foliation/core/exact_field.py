"""Exact arithmetic in the quadratic field Q(sqrt d)."""

import math
import re
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Optional, Tuple, Union

from mpmath import mp, mpf

from ..errors import DivisionByZero, MixedRadicand, ScalarSyntaxError

Number = Union["Scalar", int, Fraction]


class ArithOp(str, Enum):
    """Binary and unary field operations."""

    ADD = "add"
    SUB = "sub"
    MUL = "mul"
    DIV = "div"
    NEG = "neg"


@lru_cache(maxsize=256)
def is_square_free(n: int) -> bool:
    """Check that no square larger than 1 divides n."""
    if n < 1:
        return False
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


def _check_radicand(d: int) -> int:
    if not isinstance(d, int) or isinstance(d, bool) or d < 0:
        raise ScalarSyntaxError(
            f"radicand must be a non-negative integer, got {d!r}",
            invariant="scalar.radicand",
        )
    if d == 1 or (d > 1 and not is_square_free(d)):
        raise ScalarSyntaxError(
            f"radicand {d} is not square-free (or is a perfect square)",
            invariant="scalar.radicand",
        )
    return d


def _sgn(value: Union[int, Fraction]) -> int:
    return (value > 0) - (value < 0)


class Scalar:
    """Element a + b*sqrt(d) with rational a, b and square-free d.

    Values are immutable. Scalars with different radicands never combine;
    plain ``int`` and ``Fraction`` operands are promoted to the scalar's field.
    """

    __slots__ = ("_rational", "_radical", "_d")

    def __init__(
        self,
        rational: Union[int, Fraction, str] = 0,
        radical: Union[int, Fraction, str] = 0,
        d: int = 0,
    ):
        a = Fraction(rational)
        b = Fraction(radical)
        d = _check_radicand(d)
        if d == 0 and b != 0:
            raise ScalarSyntaxError(
                "a radical part needs a positive radicand",
                invariant="scalar.radicand",
            )
        object.__setattr__(self, "_rational", a)
        object.__setattr__(self, "_radical", b)
        object.__setattr__(self, "_d", d)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @classmethod
    def _make(cls, a: Fraction, b: Fraction, d: int) -> "Scalar":
        # Trusted constructor for results of field operations.
        obj = cls.__new__(cls)
        object.__setattr__(obj, "_rational", a)
        object.__setattr__(obj, "_radical", b)
        object.__setattr__(obj, "_d", d)
        return obj

    @property
    def rational_part(self) -> Fraction:
        return self._rational

    @property
    def radical_part(self) -> Fraction:
        return self._radical

    @property
    def d(self) -> int:
        return self._d

    def is_rational(self) -> bool:
        return self._radical == 0

    def is_zero(self) -> bool:
        return self._rational == 0 and self._radical == 0

    # coercion

    def _coerce(self, other: Number) -> "Scalar":
        if isinstance(other, Scalar):
            if other._d != self._d:
                raise MixedRadicand(
                    f"cannot combine Q(sqrt {self._d}) with Q(sqrt {other._d})",
                    details={"left": self._d, "right": other._d},
                )
            return other
        if isinstance(other, (int, Rational)) and not isinstance(other, bool):
            return Scalar._make(Fraction(other), Fraction(0), self._d)
        return NotImplemented

    def with_radicand(self, d: int) -> "Scalar":
        """Move a rational Scalar into Q(sqrt d)."""
        if self._d == d:
            return self
        if self._radical != 0:
            raise MixedRadicand(
                f"cannot move {self} into Q(sqrt {d})",
                details={"left": self._d, "right": d},
            )
        return Scalar._make(self._rational, Fraction(0), _check_radicand(d))

    # arithmetic

    def __add__(self, other: Number) -> "Scalar":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Scalar._make(
            self._rational + o._rational, self._radical + o._radical, self._d
        )

    __radd__ = __add__

    def __sub__(self, other: Number) -> "Scalar":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Scalar._make(
            self._rational - o._rational, self._radical - o._radical, self._d
        )

    def __rsub__(self, other: Number) -> "Scalar":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other: Number) -> "Scalar":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        a, b, c, e = self._rational, self._radical, o._rational, o._radical
        return Scalar._make(a * c + b * e * self._d, a * e + b * c, self._d)

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> "Scalar":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: Number) -> "Scalar":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __neg__(self) -> "Scalar":
        return Scalar._make(-self._rational, -self._radical, self._d)

    def __pos__(self) -> "Scalar":
        return self

    def __abs__(self) -> "Scalar":
        return -self if self.sign() < 0 else self

    def conjugate(self) -> "Scalar":
        """Galois conjugate a - b*sqrt(d)."""
        return Scalar._make(self._rational, -self._radical, self._d)

    def norm(self) -> Fraction:
        """Field norm a^2 - b^2 d."""
        return self._rational**2 - self._radical**2 * self._d

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise DivisionByZero("division by zero Scalar")
        n = self.norm()
        return Scalar._make(self._rational / n, -self._radical / n, self._d)

    # ordering

    def sign(self) -> int:
        """Exact sign of a + b*sqrt(d), decided with integer arithmetic."""
        a, b, d = self._rational, self._radical, self._d
        if b == 0 or d == 0:
            return _sgn(a)
        if a == 0:
            return _sgn(b)
        sa, sb = _sgn(a), _sgn(b)
        if sa == sb:
            return sa
        # a^2 against b^2 d with denominators cleared
        lhs = a.numerator**2 * b.denominator**2
        rhs = b.numerator**2 * d * a.denominator**2
        return sa if lhs > rhs else sb

    def _cmp(self, other: Number) -> int:
        o = self._coerce(other)
        if o is NotImplemented:
            raise TypeError(f"cannot compare Scalar with {type(other).__name__}")
        return (self - o).sign()

    def __lt__(self, other: Number) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: Number) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: Number) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: Number) -> bool:
        return self._cmp(other) >= 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Scalar):
            # rational values are equal across fields, matching __hash__
            if self._radical == 0 and other._radical == 0:
                return self._rational == other._rational
            return (
                self._d == other._d
                and self._rational == other._rational
                and self._radical == other._radical
            )
        if isinstance(other, (int, Rational)) and not isinstance(other, bool):
            return self._radical == 0 and self._rational == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._radical == 0:
            return hash(self._rational)
        return hash((self._rational, self._radical, self._d))

    def __bool__(self) -> bool:
        return not self.is_zero()

    # conversions

    def floor(self) -> int:
        """Exact floor, using integer square roots only."""
        a, b, d = self._rational, self._radical, self._d
        if b == 0 or d == 0:
            return math.floor(a)
        # x = (P + s*sqrt(M)) / D with M not a perfect square
        den = a.denominator * b.denominator
        p = a.numerator * b.denominator
        m = (a.denominator * b.numerator) ** 2 * d
        k = math.isqrt(m)
        low = p + k if b > 0 else p - k - 1
        return low // den

    def ceil(self) -> int:
        return -((-self).floor())

    def to_mpf(self, prec: int = 128) -> mpf:
        """High-precision binary evaluation (advisory, never used for decisions)."""
        with mp.workprec(prec):
            value = mpf(self._rational.numerator) / self._rational.denominator
            if self._radical != 0:
                value += (
                    mpf(self._radical.numerator)
                    / self._radical.denominator
                    * mp.sqrt(self._d)
                )
            return +value

    def __float__(self) -> float:
        return float(self.to_mpf(96))

    def as_tuple(self) -> Tuple[Fraction, Fraction, int]:
        return self._rational, self._radical, self._d

    # text

    def format(self) -> str:
        """Canonical text "p/q" or "p/q+r/s*sqrt(d)"."""
        a, b, d = self._rational, self._radical, self._d
        rat = _format_fraction(a)
        if b == 0:
            return rat
        if b == 1:
            rad = f"sqrt({d})"
        elif b == -1:
            rad = f"-sqrt({d})"
        else:
            rad = f"{_format_fraction(b)}*sqrt({d})"
        if a == 0:
            return rad
        return rat + ("+" if b > 0 else "") + rad

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"Scalar('{self.format()}', d={self._d})"

    def __reduce__(self):
        return (Scalar, (self._rational, self._radical, self._d))

    @classmethod
    def parse(cls, text: str, d: int = 0) -> "Scalar":
        return parse_scalar(text, d)


def _format_fraction(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


_NUMBER = r"\d+(?:\.\d+)?(?:\s*/\s*\d+)?"
_TERM = re.compile(
    rf"""
    \s*(?P<sign>[+-])?\s*
    (?:
        (?P<coef>{_NUMBER})\s*(?:\*\s*)?sqrt\(\s*(?P<d1>\d+)\s*\)
      | sqrt\(\s*(?P<d2>\d+)\s*\)(?:\s*/\s*(?P<den>\d+))?
      | (?P<rat>{_NUMBER})
    )\s*
    """,
    re.VERBOSE,
)


def _parse_number(token: str) -> Fraction:
    if "/" in token:
        num, den = token.split("/")
        den_value = Fraction(den.strip())
        if den_value == 0:
            raise ScalarSyntaxError(f"zero denominator in {token!r}")
        return Fraction(num.strip()) / den_value
    return Fraction(token)


def parse_scalar(text: str, d: Optional[int] = 0) -> Scalar:
    """Parse "p/q" or "p/q+r/s*sqrt(d)" (spaces optional, signs allowed).

    When ``d`` is non-zero the text's radicand must agree with it; a
    radical-free text is placed into Q(sqrt d).
    """
    if not isinstance(text, str) or not text.strip():
        raise ScalarSyntaxError(f"empty Scalar text {text!r}")
    context_d = d or 0
    rational = Fraction(0)
    radical = Fraction(0)
    seen_d: Optional[int] = None
    pos = 0
    first = True
    while pos < len(text):
        match = _TERM.match(text, pos)
        if match is None or match.end() == pos:
            raise ScalarSyntaxError(f"cannot parse Scalar {text!r} at offset {pos}")
        if not first and match.group("sign") is None:
            raise ScalarSyntaxError(f"missing sign between terms in {text!r}")
        sign = -1 if match.group("sign") == "-" else 1
        if match.group("rat") is not None:
            rational += sign * _parse_number(match.group("rat"))
        else:
            if match.group("coef") is not None:
                coef = _parse_number(match.group("coef"))
                term_d = int(match.group("d1"))
            else:
                den = match.group("den")
                coef = Fraction(1, int(den)) if den else Fraction(1)
                if den and int(den) == 0:
                    raise ScalarSyntaxError(f"zero denominator in {text!r}")
                term_d = int(match.group("d2"))
            if seen_d is not None and seen_d != term_d:
                raise MixedRadicand(
                    f"two radicands in {text!r}",
                    details={"left": seen_d, "right": term_d},
                )
            seen_d = term_d
            radical += sign * coef
        first = False
        pos = match.end()

    if seen_d is None:
        return Scalar(rational, 0, context_d)
    if context_d and seen_d != context_d:
        raise MixedRadicand(
            f"{text!r} uses sqrt({seen_d}) but the instance is over sqrt({context_d})",
            details={"left": context_d, "right": seen_d},
        )
    if radical == 0:
        return Scalar(rational, 0, context_d or seen_d)
    return Scalar(rational, radical, seen_d)


def format_scalar(x: Scalar) -> str:
    return x.format()


def arith(op: Union[ArithOp, str], x: Scalar, y: Optional[Scalar] = None) -> Scalar:
    """Dispatch a field operation by name."""
    op = ArithOp(op)
    if op is ArithOp.NEG:
        return -x
    if y is None:
        raise ScalarSyntaxError(f"operation {op.value} needs two operands")
    if op is ArithOp.ADD:
        return x + y
    if op is ArithOp.SUB:
        return x - y
    if op is ArithOp.MUL:
        return x * y
    return x / y


def sign(x: Scalar) -> int:
    return x.sign()


class QuadraticField:
    """Factory for Scalars sharing one radicand."""

    def __init__(self, d: int = 0):
        self.d = _check_radicand(d)

    def __call__(
        self, value: Union[str, int, Fraction, Scalar], radical: Union[int, Fraction] = 0
    ) -> Scalar:
        if isinstance(value, Scalar):
            return value.with_radicand(self.d)
        if isinstance(value, str):
            return parse_scalar(value, self.d)
        return Scalar(value, radical, self.d)

    @property
    def zero(self) -> Scalar:
        return Scalar(0, 0, self.d)

    @property
    def one(self) -> Scalar:
        return Scalar(1, 0, self.d)

    @property
    def root(self) -> Scalar:
        """sqrt(d) itself."""
        return Scalar(0, 1, self.d)

    def __repr__(self) -> str:
        return f"QuadraticField({self.d})"
