"""Partial output: subtract the integer part that is already certain.

When a full output is not yet decided, each component's smallest corner floor
is still a lower bound on its next quotient. Shearing it out early shrinks the
matrix entries; the pending amounts are added back when the full output is
emitted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .bilinear import BilinearState, family_bracket
from .errors import InputExhausted
from .exactnum import Matrix, floor_div, matmul, negate, same_strict_sign, scale_sub
from .mcf import Mcf
from .mobius import MobiusState, RunResult, bracket
from .steplog import StepLog


@dataclass
class PartialAccumulator:
    pending: list[int] = field(default_factory=list)

    @classmethod
    def zeros(cls, m: int) -> "PartialAccumulator":
        return cls([0] * m)

    def add(self, part: Sequence[int]) -> None:
        self.pending = [p + q for p, q in zip(self.pending, part)]

    def take(self, residual: Sequence[int]) -> tuple[int, ...]:
        """Full output = pending + residual floors; resets pending to zero."""
        full = tuple(p + q for p, q in zip(self.pending, residual))
        self.pending = [0] * len(self.pending)
        return full


def shear_matrix(parts: Sequence[int]) -> Matrix:
    m = len(parts)
    rows = []
    for i in range(m + 1):
        row = [int(i == j) for j in range(m + 1)]
        if i < m:
            row[m] = -int(parts[i])
        rows.append(tuple(row))
    return tuple(rows)


def _min_floors(nums, dens) -> list[int]:
    return [min(floor_div(n, d) for n, d in zip(row, dens)) for row in nums]


def partial_output_step(state: MobiusState, acc: PartialAccumulator) -> tuple[MobiusState, PartialAccumulator] | None:
    """Apply one partial-output shear in place; None if nothing can be taken."""
    if state.t < 1:
        return None
    nums, dens = bracket(state.C)
    if not same_strict_sign(dens):
        return None
    if dens[0] < 0:
        # global negation leaves every ratio (and |det C|) unchanged
        state.C = negate(state.C)
        nums, dens = bracket(state.C)
    parts = _min_floors(nums, dens)
    if not any(parts):
        return None
    before = state.C
    state.C = matmul(shear_matrix(parts), state.C)
    if state.m > 1:
        # with unit corners every entry of a row with a positive part shrinks
        # toward zero; the m = 1 corner (1, 1) mixes columns, so no such bound
        for i, k in enumerate(parts):
            if k > 0 and max(map(abs, state.C[i])) > max(map(abs, before[i])):
                raise AssertionError(f"partial shear grew row {i}: {before[i]} -> {state.C[i]}")
    acc.add(parts)
    return state, acc


def bilinear_partial_step(state: BilinearState, acc: PartialAccumulator) -> tuple[BilinearState, PartialAccumulator] | None:
    if state.consumed["x"] < 1 or state.consumed["y"] < 1:
        return None
    nums, dens = family_bracket(state.forms)
    if not same_strict_sign(dens):
        return None
    if dens[0] < 0:
        state.forms = tuple(negate(f) for f in state.forms)
        nums, dens = family_bracket(state.forms)
    parts = _min_floors(nums, dens)
    if not any(parts):
        return None
    last = state.forms[-1]
    state.forms = tuple(scale_sub(f, k, last) for f, k in zip(state.forms[:-1], parts)) + (last,)
    acc.add(parts)
    return state, acc


def _drive(state, first_inputs: int, max_outputs: int, max_steps: int, partial_step, trace: bool) -> RunResult:
    # Order per iteration: full output, then partial output, then input.
    # Partial shears are logged but do not count as steps r = s + t.
    log = StepLog(states=[] if trace else None)
    acc = PartialAccumulator.zeros(state.m)
    emitted: list[tuple[int, ...]] = []

    def record(kind):
        snap = None
        if trace:
            snap = state.C if isinstance(state, MobiusState) else state.forms
        log.record(kind, state.t, state.s, state.entry_bits(), snap)

    try:
        while state.t < first_inputs and state.r < max_steps and max_outputs > 0:
            state.absorb_input()
            record("in")
        while state.s < max_outputs and state.r < max_steps and not state.stalled:
            residual = state.can_output()
            if residual is not None:
                state.emit_output(residual)
                emitted.append(acc.take(residual))
                record("out")
            elif partial_step(state, acc) is not None:
                record("partial")
            else:
                state.absorb_input()
                record("in")
    except InputExhausted as exc:
        exc.result = RunResult(emitted, log, False, state)
        raise
    state.outputs = emitted
    return RunResult(emitted, log, state.s < max_outputs, state)


def run_with_partial(
    mcf: Mcf,
    C,
    max_outputs: int,
    max_steps: int | None = None,
    *,
    trace: bool = False,
    check_det: bool = False,
    allow_singular: bool = False,
) -> RunResult:
    """Möbius engine with partial outputs; emits the same full outputs as
    :func:`mcfgosper.mobius.run`."""
    if max_steps is None:
        max_steps = 50 * max_outputs + 1000
    state = MobiusState(mcf, C, allow_singular=allow_singular, check_det=check_det)
    return _drive(state, 1, max_outputs, max_steps, partial_output_step, trace)


def run_bilinear_with_partial(
    x: Mcf,
    y: Mcf,
    forms,
    max_outputs: int,
    max_steps: int | None = None,
    *,
    trace: bool = False,
    check_det: bool = False,
) -> RunResult:
    if max_steps is None:
        max_steps = 50 * max_outputs + 1000
    state = BilinearState(x, y, forms, check_det=check_det)
    return _drive(state, 2, max_outputs, max_steps, bilinear_partial_step, trace)
