"""Independent ground truth for the engines.

The oracle never touches engine state: it evaluates the transformed tuple
directly in interval arithmetic and expands it with the Jacobi-Perron
iteration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import PrecisionExhausted, Terminated
from .exactnum import DEFAULT_BUDGET_BITS, Interval, as_matrix, bit_length, max_entry_bits
from .mcf import JpaExpander
from .sources import RealSource

_ZERO = Interval.point(0)


def _linear(coeffs: Sequence[int], xs: Sequence[Interval]) -> Interval:
    return sum((c * x for c, x in zip(coeffs, xs) if c), _ZERO)


class MoebiusImage(RealSource):
    """Component i is ``L^(i)(x, 1) / L^(m+1)(x, 1)`` with rows of ``C`` as forms."""

    def __init__(self, source: RealSource, C):
        self.source = source
        self.C = as_matrix(C)
        self.m = len(self.C) - 1
        if source.m != self.m:
            raise ValueError("matrix size does not match the source dimension")
        self._margin = max_entry_bits(self.C) + 2 * bit_length(self.m + 1) + 8

    @property
    def exact(self) -> bool:
        return self.source.exact

    def intervals(self, bits: int) -> tuple[Interval, ...]:
        xs = tuple(self.source.intervals(bits + self._margin)) + (Interval.point(1),)
        forms = [_linear(row, xs) for row in self.C]
        den = forms[-1]
        return tuple(f / den for f in forms[:-1])


class BilinearImage(RealSource):
    """Component i is ``sum_jl c_jl^(i) x^(j) y^(l)`` over the last such form."""

    def __init__(self, x: RealSource, y: RealSource, forms):
        if x.m != y.m:
            raise ValueError("x and y dimensions differ")
        self.x, self.y = x, y
        self.forms = tuple(as_matrix(f) for f in forms)
        self.m = x.m
        if len(self.forms) != self.m + 1 or any(len(f) != self.m + 1 for f in self.forms):
            raise ValueError("form family has the wrong shape")
        self._margin = max_entry_bits(*self.forms) + 4 * bit_length(self.m + 1) + 8

    @property
    def exact(self) -> bool:
        return self.x.exact and self.y.exact

    def intervals(self, bits: int) -> tuple[Interval, ...]:
        xs = tuple(self.x.intervals(bits + self._margin)) + (Interval.point(1),)
        ys = tuple(self.y.intervals(bits + self._margin)) + (Interval.point(1),)
        values = []
        for f in self.forms:
            acc = _ZERO
            for j, row in enumerate(f):
                inner = _linear(row, ys)
                if not (inner.is_point() and inner.lo == 0):
                    acc = acc + xs[j] * inner
            values.append(acc)
        den = values[-1]
        return tuple(v / den for v in values[:-1])


def eval_moebius(source: RealSource, C) -> MoebiusImage:
    return MoebiusImage(source, C)


def eval_bilinear(x: RealSource, y: RealSource, forms) -> BilinearImage:
    return BilinearImage(x, y, forms)


@dataclass
class VerifyReport:
    agree: bool
    checked: int
    mismatch_index: int | None = None
    expected: list = field(default_factory=list)
    undecidable: bool = False
    note: str = ""

    def __bool__(self) -> bool:
        return self.agree


def verify_prefix(engine_outputs: Sequence[Sequence[int]], source: RealSource, budget_bits: int = DEFAULT_BUDGET_BITS) -> VerifyReport:
    """Compare engine outputs against a direct JPA expansion of ``source``."""
    outputs = [tuple(o) for o in engine_outputs]
    expander = JpaExpander(source, budget_bits)
    expected = []
    for k, got in enumerate(outputs):
        try:
            want = expander.next_step()
        except PrecisionExhausted as exc:
            return VerifyReport(False, k, k, expected, undecidable=True, note=f"undecidable at budget: {exc}")
        except Terminated:
            return VerifyReport(False, k, k, expected, note="oracle expansion terminated")
        expected.append(want)
        if want != got:
            return VerifyReport(False, k + 1, k, expected, note=f"expected {want}, engine gave {got}")
    return VerifyReport(True, len(outputs), None, expected)


class ValueTracker:
    """Follows the complete quotients of a transformed value alongside an engine.

    ``advance(b)`` moves to the next complete quotient (the engine just
    emitted ``b``); ``current(bits)`` encloses the current one. Used to check
    that the engine's ratio bracket really contains the value it represents.
    """

    def __init__(self, source: RealSource, budget_bits: int = DEFAULT_BUDGET_BITS):
        self.expander = JpaExpander(source, budget_bits)

    def current(self, extra_bits: int = 256) -> tuple[Interval, ...]:
        return self.expander.complete_quotients(extra_bits)

    def advance(self, b: Sequence[int]) -> None:
        got = self.expander.next_step()
        if got != tuple(b):
            raise AssertionError(f"engine emitted {tuple(b)} but the value's quotient is {got}")
