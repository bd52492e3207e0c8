import pytest
from hypothesis import given, settings, strategies as st

from conftest import E1_C, E1_OUT, E1_X, SQRT2, cf_stream, classical_moebius, tuples
from mcfgosper.errors import InputExhausted
from mcfgosper.exactnum import det
from mcfgosper.mcf import Mcf, jpa_expand
from mcfgosper.mobius import MobiusState, bracket, corner_vectors, run
from mcfgosper.oracle import eval_moebius
from mcfgosper.sources import McfSource, cube_root_pair


def test_e1_outputs_and_trace():
    res = run(E1_X, E1_C, 7, trace=True, check_det=True)
    assert res.outputs == tuples(E1_OUT)
    assert res.components == E1_OUT
    assert res.log.inputs_at_output == [3, 5, 8, 8, 9, 11, 13]
    states = res.log.states
    assert states[0] == ((3, 3, 0), (-2, 0, -2), (6, 0, 0))
    assert states[1] == ((3, 3, 3), (-4, -2, 0), (6, 6, 0))
    assert states[2] == ((12, 3, 3), (-10, -4, -2), (18, 6, 6))
    assert states[3] == ((18, 6, 6), (12, 3, 3), (8, 2, 4))
    assert states[4] == ((24, 18, 6), (15, 12, 3), (12, 8, 2))
    assert states[5] == ((72, 24, 18), (45, 15, 12), (34, 12, 8))
    assert states[6] == ((34, 12, 8), (4, 0, 2), (11, 3, 4))
    assert res.log.kinds[:7] == ["in", "in", "in", "out", "in", "in", "out"]


def test_classical_two_sqrt2():
    res = run(SQRT2, ((2, 0), (0, 1)), 10, trace=True)
    assert res.log.inputs_at_output[0] == 3
    assert res.log.states[2] == ((14, 6), (5, 2))
    assert res.log.states[3] == ((5, 2), (4, 2))
    assert [b[0] for b in res.outputs] == [2, 1, 4, 1, 4, 1, 4, 1, 4, 1]


def test_corner_vectors():
    assert corner_vectors(1) == ((1, 0), (1, 1))
    assert corner_vectors(2) == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert bracket(((14, 6), (5, 2))) == ([[14, 20]], [5, 7])


def test_singular_matrix_rejected_unless_allowed():
    C = ((1, -1, 0), (1, -1, 0), (0, 0, 1))
    with pytest.raises(ValueError):
        run(E1_X, C, 3)
    res = run(Mcf.from_source(cube_root_pair(2)), C, 5, allow_singular=True)
    # the zero denominator row ends the run after two outputs
    assert len(res.outputs) == 2 and res.guard_hit


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        run(SQRT2, E1_C, 1)


def test_finite_input_exhausts_with_partial_result():
    # [1; 2, 2, t] with unknown t >= 1 already pins 2x to [2; 1, ...]
    fin = Mcf.finite([(1,), (2,), (2,)])
    with pytest.raises(InputExhausted) as info:
        run(fin, ((2, 0), (0, 1)), 10)
    assert info.value.result is not None
    assert [b[0] for b in info.value.result.outputs] == [2, 1]


def test_step_guard_flags_instead_of_raising():
    res = run(E1_X, E1_C, 7, max_steps=4)
    assert res.guard_hit and len(res.outputs) == 1
    assert run(E1_X, E1_C, 0).outputs == []


def test_log_csv_columns():
    text = run(E1_X, E1_C, 2).log.to_csv()
    assert text.splitlines()[0] == "step,kind,inputs_so_far,outputs_so_far"
    assert text.splitlines()[4] == "4,out,3,1"


def test_det_invariant_detects_tampering():
    state = MobiusState(E1_X, E1_C, check_det=True)
    state.absorb_input()
    state.C = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    with pytest.raises(AssertionError):
        state.absorb_input()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(-30, 30), st.integers(-30, 30), st.integers(-30, 30), st.integers(-30, 30))
def test_matches_classical_transcription(seed, a, b, c, d):
    # only the value matters for outputs, so both must agree where both emit
    if a * d - b * c == 0:
        return
    terms = cf_stream(seed, 40, 60)
    ref = classical_moebius(terms, a, b, c, d, 15, 2000)
    try:
        res = run(Mcf.finite([(t,) for t in terms]), ((a, b), (c, d)), len(ref))
        got = [o[0] for o in res.outputs]
    except InputExhausted as exc:
        got = [o[0] for o in exc.result.outputs]
    n = min(len(got), len(ref))
    assert got[:n] == ref[:n]
    assert n >= min(len(ref), 5)


@settings(max_examples=30, deadline=None)
@given(
    st.integers(2, 60).filter(lambda d: round(d ** (1 / 3)) ** 3 != d),
    st.lists(st.integers(-9, 9), min_size=9, max_size=9),
)
def test_outputs_match_oracle_on_cube_roots(d, flat):
    C = tuple(tuple(flat[3 * i : 3 * i + 3]) for i in range(3))
    if det(C) == 0:
        return
    x = Mcf.from_source(cube_root_pair(d))
    res = run(x, C, 6, check_det=True)
    assert res.outputs == jpa_expand(eval_moebius(cube_root_pair(d), C), 6).take(6)


def test_ratio_bounds_bracket_value_e1():
    state = MobiusState(E1_X, E1_C)
    state.absorb_input()
    state.absorb_input()
    state.absorb_input()
    (lo1, hi1), (lo2, hi2) = state.ratio_bounds()
    src = eval_moebius(McfSource(E1_X), E1_C)
    v1, v2 = src.intervals(64)
    assert lo1 <= v1.lo and v1.hi <= hi1
    assert lo2 <= v2.lo and v2.hi <= hi2

