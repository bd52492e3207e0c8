"""Streaming bilinear transform of two MCFs (sums, products, and the rest).

The state is a family of m+1 integer matrices; ``C^(i)[j][l]`` is the
coefficient of ``x^(j) y^(l)`` in the bilinear form ``L^(i)``. An input step
left-multiplies every matrix by the transposed step matrix of the active
side's next tuple and then transposes every matrix, so the rows alternate
between indexing x and indexing y and the sides strictly alternate.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import InputExhausted
from .exactnum import Matrix, as_matrix, max_entry_bits, matmul, same_strict_sign, scale_sub, transpose
from .mcf import Mcf, row_step_matrix
from .mobius import RunResult, agreed_floors, corner_vectors
from .steplog import StepLog

Tuple = tuple[int, ...]
SIDES = ("x", "y")


def as_family(forms, m: int | None = None) -> tuple[Matrix, ...]:
    family = tuple(as_matrix(f) for f in forms)
    size = len(family[0])
    if m is None:
        m = size - 1
    if len(family) != m + 1 or any(len(f) != m + 1 for f in family):
        raise ValueError(f"expected {m + 1} matrices of size {m + 1}x{m + 1}")
    return family


def family_bracket(family: Sequence[Matrix]) -> tuple[list[list[int]], list[int]]:
    """Corner values ``u^T C^(i) v`` for each component and the denominator."""
    m = len(family) - 1
    corners = corner_vectors(m)
    if m > 1:
        # unit corners: the values are just the entries
        return (
            [[v for row in f for v in row] for f in family[:-1]],
            [v for row in family[-1] for v in row],
        )

    def values(f):
        return [sum(u[j] * f[j][l] * v[l] for j in range(2) for l in range(2)) for u in corners for v in corners]

    return [values(f) for f in family[:-1]], values(family[-1])


class BilinearState:
    def __init__(self, x: Mcf, y: Mcf, forms, *, check_det: bool = False):
        if x.m != y.m:
            raise ValueError(f"dimension mismatch: x has m={x.m}, y has m={y.m}")
        self.m = x.m
        self.forms: tuple[Matrix, ...] = as_family(forms, self.m)
        self.check_det = check_det
        self._iters = {"x": iter(x), "y": iter(y)}
        self.consumed = {"x": 0, "y": 0}
        self.active = "x"
        self.r = self.s = self.t = 0
        self.outputs: list[Tuple] = []

    @property
    def rows_index_x(self) -> bool:
        """True when matrix rows currently index the x variables."""
        return self.t % 2 == 0

    def forms_xy(self) -> tuple[Matrix, ...]:
        """The family oriented with rows indexing x and columns indexing y."""
        return self.forms if self.rows_index_x else tuple(transpose(f) for f in self.forms)

    def can_output(self) -> Tuple | None:
        return agreed_floors(*family_bracket(self.forms))

    @property
    def stalled(self) -> bool:
        return not any(any(row) for row in self.forms[-1])

    def absorb_input(self) -> None:
        side = self.active
        try:
            a = next(self._iters[side])
        except StopIteration:
            raise InputExhausted(f"{side} expansion exhausted after {self.consumed[side]} tuples", side=side) from None
        step = row_step_matrix(a)
        if self.check_det:
            from .exactnum import det

            if abs(det(step)) != 1:
                raise AssertionError(f"step matrix for {a} is not unimodular")
        self.forms = tuple(transpose(matmul(step, f)) for f in self.forms)
        self.consumed[side] += 1
        self.active = "y" if side == "x" else "x"
        self.t += 1
        self.r += 1

    def emit_output(self, d: Sequence[int]) -> None:
        d = tuple(d)
        last = self.forms[-1]
        self.forms = (last,) + tuple(scale_sub(f, k, last) for f, k in zip(self.forms[:-1], d))
        self.outputs.append(d)
        self.s += 1
        self.r += 1

    def ratio_bounds(self) -> list[tuple[Fraction, Fraction]] | None:
        nums, dens = family_bracket(self.forms)
        if not same_strict_sign(dens):
            return None
        out = []
        for row in nums:
            ratios = [Fraction(n, d) for n, d in zip(row, dens)]
            out.append((min(ratios), max(ratios)))
        return out

    def entry_bits(self) -> int:
        return max_entry_bits(*self.forms)


def _record(log: StepLog, kind: str, state: BilinearState) -> None:
    log.record(kind, state.t, state.s, state.entry_bits(), state.forms if log.states is not None else None)


def run_bilinear(
    x: Mcf,
    y: Mcf,
    forms,
    max_outputs: int,
    max_steps: int | None = None,
    *,
    trace: bool = False,
    check_det: bool = False,
) -> RunResult:
    """Greedy bilinear transform. Both sides absorb one tuple before the first
    output test; afterwards inputs alternate x, y, x, ..."""
    if max_steps is None:
        max_steps = 50 * max_outputs + 1000
    state = BilinearState(x, y, forms, check_det=check_det)
    log = StepLog(states=[] if trace else None)
    try:
        while state.t < 2 and state.r < max_steps and max_outputs > 0:
            state.absorb_input()
            _record(log, "in", state)
        while state.s < max_outputs and state.r < max_steps and not state.stalled:
            d = state.can_output()
            if d is not None:
                state.emit_output(d)
                _record(log, "out", state)
            else:
                state.absorb_input()
                _record(log, "in", state)
    except InputExhausted as exc:
        exc.result = RunResult(state.outputs, log, False, state)
        raise
    return RunResult(state.outputs, log, state.s < max_outputs, state)


def sum_forms(m: int) -> tuple[Matrix, ...]:
    """Family for ``x + y`` componentwise: ``L^(i) = x^(i) + y^(i)``, ``L^(m+1) = 1``."""
    n = m + 1
    family = []
    for i in range(m):
        mat = [[0] * n for _ in range(n)]
        mat[i][m] = 1
        mat[m][i] = 1
        family.append(mat)
    last = [[0] * n for _ in range(n)]
    last[m][m] = 1
    family.append(last)
    return as_family(family)


def product_forms(m: int) -> tuple[Matrix, ...]:
    """Family for ``x * y`` componentwise: ``L^(i) = x^(i) y^(i)``, ``L^(m+1) = 1``."""
    n = m + 1
    family = []
    for i in range(n):
        mat = [[0] * n for _ in range(n)]
        mat[i][i] = 1
        family.append(mat)
    return as_family(family)
