"""Interval-refinable real tuples.

A source exposes ``m`` and ``intervals(bits)``, which returns one enclosure
per component, nominally ``2**-bits`` wide. Enclosures for larger ``bits``
nest inside those for smaller ``bits``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import PrecisionExhausted
from .exactnum import Interval, Matrix, identity, matmul, same_strict_sign
from .mcf import Mcf, step_matrix


class RealSource:
    m: int

    def intervals(self, bits: int) -> tuple[Interval, ...]:
        raise NotImplementedError

    @property
    def exact(self) -> bool:
        return False


class RationalSource(RealSource):
    def __init__(self, values: Sequence):
        self.values = tuple(Fraction(v) for v in values)
        self.m = len(self.values)

    @property
    def exact(self) -> bool:
        return True

    def intervals(self, bits: int) -> tuple[Interval, ...]:
        return tuple(Interval.point(v) for v in self.values)

    def __repr__(self) -> str:
        return f"RationalSource({', '.join(map(str, self.values))})"


def iroot(n: int, k: int) -> int:
    """floor(n ** (1/k)) for integers n >= 0, k >= 1, by integer Newton steps."""
    if n < 0:
        raise ValueError("iroot of a negative number")
    if n < 2 or k == 1:
        return n
    x = 1 << -(-n.bit_length() // k)  # >= true root
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


class RootSource(RealSource):
    """Tuple of k-th roots ``(r_1^(1/k), ..., r_m^(1/k))``.

    ``intervals(bits)`` brackets each root between consecutive multiples of
    ``2**-bits``, which nest as ``bits`` grows.
    """

    def __init__(self, radicands: Sequence[int], degree: int):
        if degree < 1 or any(r < 0 for r in radicands):
            raise ValueError("need degree >= 1 and non-negative radicands")
        self.radicands = tuple(int(r) for r in radicands)
        self.degree = degree
        self.m = len(self.radicands)

    def _one(self, r: int, bits: int) -> Interval:
        scaled = r << (bits * self.degree)
        n = iroot(scaled, self.degree)
        lo = Fraction(n, 1 << bits)
        if n ** self.degree == scaled:
            return Interval.point(lo)
        return Interval(lo, Fraction(n + 1, 1 << bits))

    def intervals(self, bits: int) -> tuple[Interval, ...]:
        return tuple(self._one(r, bits) for r in self.radicands)

    def __repr__(self) -> str:
        return f"RootSource({list(self.radicands)}, degree={self.degree})"


def cube_root_pair(d: int) -> RootSource:
    """``(d^(1/3), d^(2/3))``, the standard cubic test input."""
    return RootSource((d, d * d), 3)


def is_cube(d: int) -> bool:
    return iroot(d, 3) ** 3 == d


class McfSource(RealSource):
    """Value of an expansion, enclosed by the column ratios of its convergents.

    Valid whenever the tails after the first step are non-negative, which
    holds for admissible expansions. The running intersection keeps the
    enclosures nested.
    """

    def __init__(self, mcf: Mcf, max_steps: int = 100_000):
        self.mcf = mcf
        self.m = mcf.m
        self.max_steps = max_steps
        self._iter = iter(mcf)
        self._conv: Matrix = identity(self.m + 1)
        self._used = 0
        self._done = False
        self._best: list[Interval] | None = None

    def _bracket(self) -> list[Interval] | None:
        den = self._conv[-1]
        if self._done:
            col0 = den[0]
            return [Interval.point(Fraction(row[0], col0)) for row in self._conv[:-1]]
        if not same_strict_sign(den):
            return None
        out = []
        for row in self._conv[:-1]:
            ratios = [Fraction(a, b) for a, b in zip(row, den)]
            out.append(Interval(min(ratios), max(ratios)))
        return out

    def _absorb(self) -> None:
        try:
            a = next(self._iter)
        except StopIteration:
            self._done = True
            return
        self._conv = matmul(self._conv, step_matrix(a))
        self._used += 1

    def intervals(self, bits: int) -> tuple[Interval, ...]:
        target = Fraction(1, 1 << bits)
        while True:
            if self._used >= 1:
                bracket = self._bracket()
                if bracket is not None:
                    if self._best is None:
                        self._best = bracket
                    else:
                        self._best = [b.intersect(n) for b, n in zip(self._best, bracket)]
                    if self._done or all(b.width <= target for b in self._best):
                        return tuple(self._best)
            if self._done and self._used == 0:
                raise ValueError("empty expansion has no value")
            if self._used >= self.max_steps:
                raise PrecisionExhausted(f"expansion did not narrow below 2^-{bits} in {self.max_steps} steps")
            self._absorb()

    def __repr__(self) -> str:
        return f"McfSource({self.mcf!r})"


def parse_source(text: str, m: int | None = None) -> RealSource:
    """Parse a command-line source description.

    ``cbrt:d`` gives ``(d^(1/3), d^(2/3))``, ``sqrt:d`` gives ``(sqrt d,)``,
    ``root:k:r1,r2,...`` gives k-th roots and ``rational:p/q,...`` exact values.
    """
    kind, _, rest = text.partition(":")
    if kind == "cbrt":
        src = cube_root_pair(int(rest))
    elif kind == "sqrt":
        src = RootSource((int(rest),), 2)
    elif kind == "root":
        k, _, rads = rest.partition(":")
        src = RootSource([int(r) for r in rads.split(",")], int(k))
    elif kind == "rational":
        src = RationalSource([Fraction(v) for v in rest.split(",")])
    else:
        raise ValueError(f"unknown source kind {kind!r}")
    if m is not None and src.m != m:
        raise ValueError(f"source {text!r} has {src.m} components, expected m={m}")
    return src
