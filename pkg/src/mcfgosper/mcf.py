"""Multidimensional continued fractions: data model, convergents, JPA.

An :class:`Mcf` is held as a single stream of quotient tuples
``(a_n^(1), ..., a_n^(m))``; the n-th step always consumes one value from each
component, so the m sequences cannot drift apart.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence

from .errors import InputExhausted, PrecisionExhausted, Terminated
from .exactnum import (
    DEFAULT_BUDGET_BITS,
    Interval,
    Matrix,
    identity,
    matmul,
    max_entry_bits,
    transpose,
)

Step = tuple[int, ...]


# -- step matrices ----------------------------------------------------------


def step_matrix(a: Sequence[int]) -> Matrix:
    """Input matrix for one quotient tuple; right-multiplies a Möbius state.

    Column 0 is ``(a^(1), ..., a^(m), 1)``, the remaining columns are the
    unit vectors ``e_1 .. e_m`` so the product over steps is the convergent
    matrix.
    """
    m = len(a)
    rows = []
    for i in range(m):
        row = [0] * (m + 1)
        row[0] = int(a[i])
        row[i + 1] = 1
        rows.append(tuple(row))
    rows.append(tuple([1] + [0] * m))
    return tuple(rows)


def row_step_matrix(a: Sequence[int]) -> Matrix:
    """Transpose of :func:`step_matrix`; left-multiplies a bilinear form."""
    return transpose(step_matrix(a))


def output_matrix(b: Sequence[int]) -> Matrix:
    """Output matrix for an emitted tuple ``b``; the inverse of ``step_matrix(b)``."""
    m = len(b)
    rows = [tuple([0] * m + [1])]
    for i in range(m):
        row = [0] * (m + 1)
        row[i] = 1
        row[m] = -int(b[i])
        rows.append(tuple(row))
    return tuple(rows)


# -- data model -------------------------------------------------------------


def _check_step(step: Iterable[int], m: int) -> Step:
    step = tuple(int(v) for v in step)
    if len(step) != m:
        raise ValueError(f"quotient tuple {step} does not have {m} components")
    return step


class Mcf:
    """Quotient-tuple stream backed by a finite list, a preperiod+period, or a
    generator factory.

    Finite and periodic streams are replayable and shareable. A generator
    stream replays only if built from a factory returning fresh iterators.
    """

    def __init__(
        self,
        m: int,
        preperiod: Iterable[Iterable[int]] = (),
        period: Iterable[Iterable[int]] | None = None,
        factory: Callable[[], Iterator[Iterable[int]]] | None = None,
    ):
        if m < 1:
            raise ValueError("dimension m must be at least 1")
        self.m = m
        self.preperiod: tuple[Step, ...] = tuple(_check_step(s, m) for s in preperiod)
        self.period: tuple[Step, ...] | None = None
        if period is not None:
            self.period = tuple(_check_step(s, m) for s in period)
            if not self.period:
                raise ValueError("period must be non-empty")
        if factory is not None and (self.preperiod or self.period):
            raise ValueError("a generator-backed Mcf takes no explicit quotients")
        self._factory = factory

    @classmethod
    def finite(cls, steps: Iterable[Iterable[int]], m: int | None = None) -> "Mcf":
        steps = [tuple(s) for s in steps]
        if m is None:
            if not steps:
                raise ValueError("cannot infer m from an empty expansion")
            m = len(steps[0])
        return cls(m, steps)

    @classmethod
    def periodic(cls, preperiod, period, m: int | None = None) -> "Mcf":
        period = [tuple(s) for s in period]
        return cls(m or len(period[0]), preperiod, period)

    @classmethod
    def from_generator(cls, m: int, factory: Callable[[], Iterator[Iterable[int]]]) -> "Mcf":
        return cls(m, factory=factory)

    @classmethod
    def from_source(cls, source, budget_bits: int = DEFAULT_BUDGET_BITS) -> "Mcf":
        """Lazy, replayable JPA expansion of a real source."""
        return cls(source.m, factory=lambda: jpa_steps(source, budget_bits=budget_bits))

    @property
    def is_finite(self) -> bool:
        return self._factory is None and self.period is None

    def __iter__(self) -> Iterator[Step]:
        if self._factory is not None:
            return (_check_step(s, self.m) for s in self._factory())
        if self.period is None:
            return iter(self.preperiod)
        return itertools.chain(self.preperiod, itertools.cycle(self.period))

    def take(self, n: int) -> list[Step]:
        steps = list(itertools.islice(iter(self), n))
        if len(steps) < n:
            raise InputExhausted(f"expansion has only {len(steps)} steps, {n} requested")
        return steps

    def __repr__(self) -> str:
        if self._factory is not None:
            return f"Mcf(m={self.m}, <generator>)"
        return f"Mcf(m={self.m}, preperiod={list(self.preperiod)}, period={self.period and list(self.period)})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mcf) or self._factory or other._factory:
            return NotImplemented
        return (self.m, self.preperiod, self.period) == (other.m, other.preperiod, other.period)

    # JSON: outer arrays are components, inner arrays are steps.

    def to_json_obj(self) -> dict:
        if self._factory is not None:
            raise ValueError("generator-backed expansions have no JSON form")
        obj = {"m": self.m, "preperiod": [list(c) for c in _components(self.preperiod, self.m)]}
        if self.period is not None:
            obj["period"] = [list(c) for c in _components(self.period, self.m)]
        return obj

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Mcf":
        m = int(obj["m"])
        pre = _steps(obj.get("preperiod", [[] for _ in range(m)]), m, "preperiod")
        period = obj.get("period")
        return cls(m, pre, None if period is None else _steps(period, m, "period"))

    def dumps(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def loads(cls, text: str) -> "Mcf":
        return cls.from_json_obj(json.loads(text))


def _components(steps: Sequence[Step], m: int) -> list[list[int]]:
    return [[s[i] for s in steps] for i in range(m)]


def _steps(components, m: int, what: str) -> list[Step]:
    if len(components) != m:
        raise ValueError(f"{what} must have {m} component arrays, got {len(components)}")
    lengths = {len(c) for c in components}
    if len(lengths) > 1:
        raise ValueError(f"{what} components have unequal lengths {sorted(lengths)}")
    return [tuple(int(v) for v in col) for col in zip(*components)]


# -- convergents and admissibility -----------------------------------------


def convergents(mcf: Mcf | Iterable[Step], n: int, m: int | None = None) -> Matrix:
    """Product of the first ``n`` step matrices, ``[A_{n-j}^(i)]``."""
    if isinstance(mcf, Mcf):
        steps, m = mcf.take(n), mcf.m
    else:
        steps = list(itertools.islice(mcf, n))
        if len(steps) < n:
            raise InputExhausted(f"expansion has only {len(steps)} steps, {n} requested")
        if m is None:
            if not steps:
                raise ValueError("m is required when n == 0")
            m = len(steps[0])
    cm = identity(m + 1)
    for a in steps:
        cm = matmul(cm, step_matrix(a))
    return cm


def eval_convergent(cm: Matrix) -> tuple[Fraction, ...]:
    """Rational tuple ``A_n^(i) / A_n^(m+1)`` read from the first column."""
    den = cm[-1][0]
    if den == 0:
        raise ZeroDivisionError("convergent denominator A_n^(m+1) is zero")
    return tuple(Fraction(row[0], den) for row in cm[:-1])


@dataclass(frozen=True)
class Violation:
    step: int
    component: int  # 1-based, as in a^(1) .. a^(m)
    reason: str


def check_admissible(mcf: Mcf | Iterable[Step], n: int) -> list[Violation]:
    """Weak Perron admissibility for steps 1..n-1.

    Requires ``a^(1) >= 1`` and ``0 <= a^(i) <= a^(1)``; step 0 is free.
    """
    found = []
    for k, step in enumerate(itertools.islice(iter(mcf), n)):
        if k == 0:
            continue
        first = step[0]
        if first < 1:
            found.append(Violation(k, 1, f"a^(1)={first} < 1"))
        for i, v in enumerate(step[1:], start=2):
            if v < 0:
                found.append(Violation(k, i, f"a^({i})={v} < 0"))
            elif v > first:
                found.append(Violation(k, i, f"a^({i})={v} > a^(1)={first}"))
    return found


# -- Jacobi-Perron on a real source ----------------------------------------


class JpaExpander:
    """Runs the Jacobi-Perron iteration on a :class:`~mcfgosper.sources.RealSource`.

    The n-th complete quotient is an integral projective image of the
    starting tuple: ``(x_n, 1) ~ T_n (x_0, 1)`` with ``T_n`` the inverse of the
    convergent matrix. Keeping ``T_n`` exact means only the source itself is
    ever approximated, and floors are certified by refining it.

    ``budget_bits`` bounds the working precision beyond what the size of
    ``T_n`` already demands.
    """

    def __init__(self, source, budget_bits: int = DEFAULT_BUDGET_BITS):
        self.source = source
        self.m = source.m
        self.budget_bits = budget_bits
        self.transform: Matrix = identity(self.m + 1)
        self.steps: list[Step] = []
        self._extra = 64

    def _base_bits(self) -> int:
        return 2 * max_entry_bits(self.transform) + 32

    def complete_quotients(self, extra_bits: int | None = None) -> tuple[Interval, ...]:
        """Enclosures of the current complete quotient tuple ``x_n``."""
        extra = self._extra if extra_bits is None else extra_bits
        xs = tuple(self.source.intervals(self._base_bits() + extra)) + (Interval.point(1),)
        forms = [sum((c * x for c, x in zip(row, xs)), Interval.point(0)) for row in self.transform]
        den = forms[-1]
        if den.is_point() and den.lo == 0:
            raise Terminated(f"expansion terminates after {len(self.steps)} steps", self.steps)
        return tuple(f / den for f in forms[:-1])

    def next_step(self) -> Step:
        while True:
            try:
                qs = self.complete_quotients()
            except ZeroDivisionError:
                qs = None
            if qs is not None:
                floors = tuple(q.floor() for q in qs)
                if None not in floors:
                    break
            if self._extra > self.budget_bits:
                raise PrecisionExhausted(
                    f"could not certify step {len(self.steps)} within {self.budget_bits} extra bits"
                )
            self._extra *= 2
        self.steps.append(floors)
        # output_matrix(a) is the inverse of step_matrix(a)
        self.transform = matmul(output_matrix(floors), self.transform)
        return floors


def jpa_steps(source, budget_bits: int = DEFAULT_BUDGET_BITS) -> Iterator[Step]:
    """Unbounded JPA stream; ends quietly if the expansion terminates."""
    expander = JpaExpander(source, budget_bits)
    while True:
        try:
            yield expander.next_step()
        except Terminated:
            return


def jpa_expand(source, n_steps: int, budget_bits: int = DEFAULT_BUDGET_BITS) -> Mcf:
    """First ``n_steps`` Jacobi-Perron quotient tuples of ``source``.

    Raises :class:`Terminated` (with ``.partial``) if the expansion stops
    early, :class:`PrecisionExhausted` if a floor cannot be certified.
    """
    expander = JpaExpander(source, budget_bits)
    for _ in range(n_steps):
        expander.next_step()
    return Mcf.finite(expander.steps, m=source.m)
