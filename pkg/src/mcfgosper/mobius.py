"""Streaming Möbius (projective) transform of one MCF.

The state is an integer matrix ``C`` whose row ``i`` holds the coefficients of
the linear form ``L^(i)``. Consuming a quotient tuple right-multiplies ``C`` by
its step matrix; emitting an output tuple left-multiplies by the inverse step
matrix of the output. The next output is known once every ratio at the corners
of the tail domain has the same floor.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InputExhausted
from .exactnum import (
    Matrix,
    as_matrix,
    det,
    floor_div,
    matmul,
    max_entry_bits,
    same_strict_sign,
)
from .mcf import Mcf, output_matrix, step_matrix
from .steplog import StepLog

Tuple = tuple[int, ...]


def corner_vectors(m: int) -> tuple[Tuple, ...]:
    """Homogeneous corners of the tail domain reached after one input.

    For m >= 2 the tails are only known to be non-negative, so the corners are
    the unit vectors and the ratios are the column ratios of ``C``. For m = 1
    the tail is a classical complete quotient >= 1, giving the corners
    ``x = oo`` and ``x = 1``.
    """
    if m == 1:
        return ((1, 0), (1, 1))
    return tuple(tuple(int(i == j) for j in range(m + 1)) for i in range(m + 1))


def bracket(C: Matrix) -> tuple[list[list[int]], list[int]]:
    """Numerators per component and the shared denominators at each corner."""
    m = len(C) - 1
    if m == 1:
        (a, b), (c, d) = C
        return [[a, a + b]], [c, c + d]
    return [list(row) for row in C[:-1]], list(C[-1])


def agreed_floors(nums: Sequence[Sequence[int]], dens: Sequence[int]) -> Tuple | None:
    """Common floors of ``nums[i][k] / dens[k]`` if the denominators share a
    strict sign and every component's floors agree."""
    if not same_strict_sign(dens):
        return None
    out = []
    for row in nums:
        first = floor_div(row[0], dens[0])
        for n, d in zip(row[1:], dens[1:]):
            if floor_div(n, d) != first:
                return None
        out.append(first)
    return tuple(out)


class MobiusState:
    """Live state of the Möbius engine: ``C`` plus the counters r, s, t."""

    def __init__(self, mcf: Mcf, C, *, allow_singular: bool = False, check_det: bool = False):
        self.C: Matrix = as_matrix(C)
        self.m = len(self.C) - 1
        if mcf.m != self.m:
            raise ValueError(f"matrix is {self.m + 1}x{self.m + 1} but the expansion has m={mcf.m}")
        if self.m < 1:
            raise ValueError("matrix must be at least 2x2")
        self.abs_det = abs(det(self.C))
        if self.abs_det == 0 and not allow_singular:
            raise ValueError("transform matrix is singular (det C = 0)")
        self.mcf = mcf
        self.check_det = check_det
        self._steps = iter(mcf)
        self.r = self.s = self.t = 0
        self.outputs: list[Tuple] = []

    def can_output(self) -> Tuple | None:
        return agreed_floors(*bracket(self.C))

    @property
    def stalled(self) -> bool:
        """A zero denominator row stays zero under input, so no output can follow."""
        return not any(self.C[-1])

    def absorb_input(self) -> None:
        try:
            a = next(self._steps)
        except StopIteration:
            raise InputExhausted(f"input expansion exhausted after {self.t} tuples") from None
        self.C = matmul(self.C, step_matrix(a))
        self.t += 1
        self.r += 1
        self._check()

    def emit_output(self, b: Sequence[int]) -> None:
        b = tuple(b)
        self.C = matmul(output_matrix(b), self.C)
        self.outputs.append(b)
        self.s += 1
        self.r += 1
        self._check()

    def _check(self) -> None:
        if self.check_det and abs(det(self.C)) != self.abs_det:
            raise AssertionError(f"|det C| changed from {self.abs_det} at step {self.r}")

    def ratio_bounds(self) -> list[tuple[Fraction, Fraction]] | None:
        """``(min, max)`` of the corner ratios per component, or None if the
        denominators do not share a strict sign."""
        nums, dens = bracket(self.C)
        if not same_strict_sign(dens):
            return None
        out = []
        for row in nums:
            ratios = [Fraction(n, d) for n, d in zip(row, dens)]
            out.append((min(ratios), max(ratios)))
        return out

    def entry_bits(self) -> int:
        return max_entry_bits(self.C)


@dataclass
class RunResult:
    outputs: list[Tuple]
    log: StepLog
    guard_hit: bool
    state: object

    @property
    def components(self) -> list[list[int]]:
        """Outputs regrouped per component, ``[[b_0^(1), ...], ...]``."""
        return [list(col) for col in zip(*self.outputs)] if self.outputs else []


def _record(log: StepLog, kind: str, state: MobiusState) -> None:
    log.record(kind, state.t, state.s, state.entry_bits(), state.C if log.states is not None else None)


def run(
    mcf: Mcf,
    C,
    max_outputs: int,
    max_steps: int | None = None,
    *,
    trace: bool = False,
    check_det: bool = False,
    allow_singular: bool = False,
) -> RunResult:
    """Greedy Möbius transform: emit when the floors agree, else read input.

    The first quotient tuple is always consumed before any output test.
    Stops after ``max_outputs`` outputs or ``max_steps`` transitions, or as
    soon as the denominator row is identically zero (only possible for a
    singular ``C``). Stopping short sets ``guard_hit`` rather than raising. A finite input that
    runs dry raises :class:`InputExhausted` with the partial result attached.
    """
    if max_steps is None:
        max_steps = 50 * max_outputs + 1000
    state = MobiusState(mcf, C, allow_singular=allow_singular, check_det=check_det)
    log = StepLog(states=[] if trace else None)
    try:
        if max_steps > 0 and max_outputs > 0:
            state.absorb_input()
            _record(log, "in", state)
        while state.s < max_outputs and state.r < max_steps and not state.stalled:
            b = state.can_output()
            if b is not None:
                state.emit_output(b)
                _record(log, "out", state)
            else:
                state.absorb_input()
                _record(log, "in", state)
    except InputExhausted as exc:
        exc.result = RunResult(state.outputs, log, False, state)
        raise
    return RunResult(state.outputs, log, state.s < max_outputs, state)
