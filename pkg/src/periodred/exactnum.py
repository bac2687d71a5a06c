"""Exact arithmetic in Q and in a real quadratic extension Q(sqrt(n)).

An :class:`AlgNum` stores ``a + b*sqrt(n)`` with rational ``a``, ``b`` and a
square-free radicand ``n``.  Rational values carry ``n = 0`` and combine
freely with any radicand; two irrational operands must share ``n``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

__all__ = ["AlgNum", "RadicandMismatch", "squarefree_part", "sqrt_in_field", "as_algnum"]


class RadicandMismatch(ValueError):
    """Raised when operands live in different quadratic fields."""


def squarefree_part(n: int) -> tuple[int, int]:
    """Return ``(s, k)`` with ``n == s * k**2`` and ``s`` square-free."""
    if n < 0:
        raise ValueError("radicand must be nonnegative")
    if n == 0:
        return 0, 0
    s, k = 1, 1
    m = n
    p = 2
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        k *= p ** (e // 2)
        if e % 2:
            s *= p
        p += 1
    return s * m, k


def _is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


class AlgNum:
    __slots__ = ("a", "b", "n")

    def __init__(self, a=0, b=0, n: int = 0):
        a = Fraction(a)
        b = Fraction(b)
        if b == 0:
            n = 0
        elif n == 0:
            raise ValueError("nonzero surd part requires a radicand")
        elif n == 1:
            a, b, n = a + b, Fraction(0), 0
        else:
            s, k = squarefree_part(n)
            if s == 1:
                a, b, n = a + b * k, Fraction(0), 0
            else:
                b, n = b * k, s
        self.a = a
        self.b = b
        self.n = n

    @classmethod
    def sqrt(cls, n: int) -> "AlgNum":
        return cls(0, 1, n)

    # -- coercion -----------------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, AlgNum):
            return other
        if isinstance(other, (int, Rational)):
            return AlgNum(other)
        return NotImplemented

    def _common(self, other: "AlgNum") -> int:
        if self.n and other.n and self.n != other.n:
            raise RadicandMismatch(f"sqrt({self.n}) and sqrt({other.n}) in one operation")
        return self.n or other.n

    # -- field operations ---------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = self._common(other)
        return AlgNum(self.a + other.a, self.b + other.b, n)

    __radd__ = __add__

    def __neg__(self):
        return AlgNum(-self.a, -self.b, self.n)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = self._common(other)
        return AlgNum(self.a - other.a, self.b - other.b, n)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = self._common(other)
        if not self.b and not other.b:
            return AlgNum(self.a * other.a)
        return AlgNum(self.a * other.a + self.b * other.b * n,
                      self.a * other.b + self.b * other.a, n)

    __rmul__ = __mul__

    def conjugate(self) -> "AlgNum":
        return AlgNum(self.a, -self.b, self.n)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.n

    def inverse(self) -> "AlgNum":
        if self.is_zero():
            raise ZeroDivisionError("AlgNum division by zero")
        if not self.b:
            return AlgNum(1 / self.a)
        nm = self.norm()
        return AlgNum(self.a / nm, -self.b / nm, self.n)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        self._common(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = AlgNum(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- sign and comparison ------------------------------------------------
    def sign(self) -> int:
        """Exact sign of ``a + b*sqrt(n)`` using only rational arithmetic."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with b^2 n
        lhs = self.a * self.a
        rhs = self.b * self.b * self.n
        if lhs > rhs:
            return sa
        if lhs < rhs:
            return sb
        return 0

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.b == 0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.a == other.a and self.b == other.b and (self.n == other.n or not self.b)

    def __hash__(self):
        if not self.b:
            return hash(self.a)
        return hash((self.a, self.b, self.n))

    def _cmp(self, other) -> int:
        other = self._coerce(other)
        if other is NotImplemented:
            raise TypeError(f"cannot compare AlgNum with {type(other).__name__}")
        return (self - other).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- conversion ---------------------------------------------------------
    def __float__(self):
        if not self.b:
            return float(self.a)
        return float(self.a) + float(self.b) * math.sqrt(self.n)

    def to_fraction(self) -> Fraction:
        if self.b:
            raise ValueError(f"{self} is irrational")
        return self.a

    def enclosure(self) -> tuple[Fraction, Fraction]:
        """A rational interval ``[lo, hi]`` containing the value."""
        if not self.b:
            return self.a, self.a
        scale = 10**15
        lo_s = Fraction(math.isqrt(self.n * scale * scale), scale)
        hi_s = lo_s + Fraction(1, scale)
        if self.b > 0:
            return self.a + self.b * lo_s, self.a + self.b * hi_s
        return self.a + self.b * hi_s, self.a + self.b * lo_s

    def __repr__(self):
        return f"AlgNum({self})"

    def __str__(self):
        return format_algnum(self)


def as_algnum(x) -> AlgNum:
    if isinstance(x, AlgNum):
        return x
    return AlgNum(x)


def sqrt_in_field(k, n: int = 0) -> AlgNum | None:
    """Square root of the nonnegative rational ``k`` inside Q(sqrt(n)), if any.

    With ``n == 0`` any quadratic irrationality is accepted and the radicand
    is chosen from ``k``.
    """
    k = Fraction(k)
    if k < 0:
        return None
    if k == 0:
        return AlgNum(0)
    num, den = k.numerator, k.denominator
    # sqrt(num/den) = sqrt(num*den)/den
    s, c = squarefree_part(num * den)
    if s == 1:
        return AlgNum(Fraction(c, den))
    if n in (0, s):
        return AlgNum(0, Fraction(c, den), s)
    return None


def format_algnum(x: AlgNum) -> str:
    def frac(q: Fraction) -> str:
        return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"

    if not x.b:
        return frac(x.a)
    surd = f"sqrt({x.n})"
    if x.b == 1:
        bpart = surd
    elif x.b == -1:
        bpart = "-" + surd
    else:
        bpart = f"{frac(x.b)}*{surd}"
    if not x.a:
        return bpart
    if x.b < 0:
        return f"{frac(x.a)} - {bpart[1:]}"
    return f"{frac(x.a)} + {bpart}"
