"""Exact integers, rationals and outward-rounded rational intervals.

Python ``int`` and :class:`fractions.Fraction` already give exact
arbitrary-precision integers and canonical rationals, so this module only adds
the pieces the engines and the oracle need on top of them: a floor that is
correct for every sign combination, the strict sign test used by the output
guards, a small integer-matrix toolkit and a closed rational interval type.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence, Union

from .errors import PrecisionExhausted

Number = Union[int, Fraction]
Matrix = tuple[tuple[int, ...], ...]

DEFAULT_BUDGET_BITS = 4096
DEFAULT_START_BITS = 64


def floor_div(a: int, b: int) -> int:
    """Mathematical floor of ``a / b`` (rounds toward minus infinity)."""
    if b == 0:
        raise ZeroDivisionError("floor_div by zero")
    return a // b


def same_strict_sign(values: Iterable[int]) -> bool:
    """True iff every value is > 0 or every value is < 0. A zero fails."""
    values = list(values)
    if not values:
        raise ValueError("same_strict_sign needs at least one value")
    if values[0] > 0:
        return all(v > 0 for v in values)
    if values[0] < 0:
        return all(v < 0 for v in values)
    return False


def bit_length(value: int) -> int:
    return abs(value).bit_length()


# -- integer matrices -------------------------------------------------------
# Matrices are tuples of row tuples so that states can be shared freely.


def as_matrix(rows: Iterable[Iterable[int]]) -> Matrix:
    mat = tuple(tuple(int(v) for v in row) for row in rows)
    if not mat or any(len(row) != len(mat) for row in mat):
        raise ValueError("expected a non-empty square matrix")
    return mat


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def scale_sub(a: Matrix, k: int, b: Matrix) -> Matrix:
    """``a - k*b`` entrywise."""
    return tuple(tuple(x - k * y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def negate(a: Matrix) -> Matrix:
    return tuple(tuple(-x for x in row) for row in a)


def det(a: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(a)
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def max_entry_bits(*mats: Matrix) -> int:
    return max((bit_length(v) for mat in mats for row in mat for v in row), default=0)


# -- intervals --------------------------------------------------------------


def _floor_frac(q: Fraction) -> int:
    return q.numerator // q.denominator


def _ceil_frac(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[lo, hi]`` with rational endpoints.

    Arithmetic is exact on the endpoints, so every result contains the true
    result. :meth:`round_out` widens to a dyadic grid to keep endpoint sizes
    bounded, again rounding away from the enclosed set.
    """

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = Fraction(self.lo), Fraction(self.hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, value: Number) -> "Interval":
        return cls(Fraction(value), Fraction(value))

    @classmethod
    def coerce(cls, value: Union["Interval", Number]) -> "Interval":
        return value if isinstance(value, Interval) else cls.point(value)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, value: Union["Interval", Number]) -> bool:
        other = Interval.coerce(value)
        return self.lo <= other.lo and other.hi <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def intersect(self, other: "Interval") -> "Interval":
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi))

    def floor(self) -> int | None:
        """The common floor of every point, or None if not yet determined."""
        lo, hi = _floor_frac(self.lo), _floor_frac(self.hi)
        return lo if lo == hi else None

    def round_out(self, bits: int) -> "Interval":
        scale = 1 << bits
        lo = Fraction(_floor_frac(self.lo * scale), scale)
        hi = Fraction(_ceil_frac(self.hi * scale), scale)
        return Interval(lo, hi)

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __add__(self, other):
        other = Interval.coerce(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __sub__(self, other):
        other = Interval.coerce(other)
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other):
        return Interval.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Interval):
            k = Fraction(other)
            return Interval(self.lo * k, self.hi * k) if k >= 0 else Interval(self.hi * k, self.lo * k)
        products = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return Interval(min(products), max(products))

    __rmul__ = __mul__

    def reciprocal(self) -> "Interval":
        if self.contains_zero():
            raise ZeroDivisionError(f"interval {self} contains zero")
        return Interval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        return self * Interval.coerce(other).reciprocal()

    def __rtruediv__(self, other):
        return Interval.coerce(other) * self.reciprocal()

    def __repr__(self) -> str:
        return f"Interval({float(self.lo)!r}, {float(self.hi)!r})"


def interval_floor(
    x: Interval,
    refine: Callable[[int], Interval] | None = None,
    *,
    start_bits: int = DEFAULT_START_BITS,
    budget_bits: int = DEFAULT_BUDGET_BITS,
) -> int:
    """Certified floor of the real enclosed by ``x``.

    ``refine(bits)`` must return an enclosure of the same real, nominally
    accurate to ``bits`` bits. Precision doubles until the floor is
    determined; going past ``budget_bits`` raises :class:`PrecisionExhausted`.
    """
    bits = start_bits
    while True:
        n = x.floor()
        if n is not None:
            return n
        if refine is None or bits > budget_bits:
            raise PrecisionExhausted(f"floor undetermined for {x!r} at {bits} bits")
        x = x.intersect(refine(bits))
        bits *= 2
