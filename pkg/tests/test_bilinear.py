import pytest
from hypothesis import given, settings, strategies as st

from conftest import E3_FORMS, E3_OUT, E3_X, E3_Y, SQRT2, cf_stream, classical_bilinear, tuples
from mcfgosper.bilinear import BilinearState, family_bracket, product_forms, run_bilinear, sum_forms
from mcfgosper.errors import InputExhausted
from mcfgosper.exactnum import transpose
from mcfgosper.mcf import Mcf, jpa_expand
from mcfgosper.oracle import eval_bilinear
from mcfgosper.sources import RootSource, cube_root_pair

# Reference family after the 20th input, stored transposed relative to the
# running state (rows index y at that point).
E3_AT_20_T = (
    ((-2707, -2149, -705), (-718, -570, -187), (-1436, -1140, -374)),
    ((-7080, -5620, -1840), (-1770, -1405, -460), (-3894, -3091, -1012)),
    ((2453, 1947, 638), (669, 531, 174), (1338, 1062, 348)),
)
E3_AFTER_OUTPUT = (
    ((2453, 669, 1338), (1947, 531, 1062), (638, 174, 348)),
    ((2199, 620, 1240), (1745, 492, 984), (571, 161, 322)),
    ((279, 237, 120), (221, 188, 95), (74, 62, 32)),
)


def test_e3_outputs():
    res = run_bilinear(E3_X, E3_Y, E3_FORMS, 7, check_det=True)
    assert res.outputs == tuples(E3_OUT)


def test_e3_first_output_after_twenty_inputs():
    res = run_bilinear(E3_X, E3_Y, E3_FORMS, 1, trace=True)
    assert res.log.inputs_at_output == [20]
    at20 = res.log.states[19]
    assert tuple(transpose(f) for f in at20) == E3_AT_20_T
    assert res.log.states[20] == E3_AFTER_OUTPUT


def test_e3_first_two_inputs():
    state = BilinearState(E3_X, E3_Y, E3_FORMS)
    state.absorb_input()
    assert state.forms[0] == ((0, 0, 0), (1, 0, 0), (-2, 1, 0))
    assert state.active == "y" and state.consumed == {"x": 1, "y": 0}


def test_sum_and_product_forms():
    assert sum_forms(1) == (((0, 1), (1, 0)), ((0, 0), (0, 1)))
    assert product_forms(2)[1] == ((0, 0, 0), (0, 1, 0), (0, 0, 0))
    with pytest.raises(ValueError):
        run_bilinear(E3_X, SQRT2, E3_FORMS, 1)


def test_sqrt2_plus_sqrt2():
    res = run_bilinear(SQRT2, SQRT2, sum_forms(1), 9)
    assert [d[0] for d in res.outputs] == [2, 1, 4, 1, 4, 1, 4, 1, 4]


def test_sqrt2_times_sqrt3_against_oracle():
    x, y = Mcf.from_source(RootSource([2], 2)), Mcf.from_source(RootSource([3], 2))
    res = run_bilinear(x, y, product_forms(1), 12)
    # sqrt 6 = [2; 2, 4, 2, 4, ...]
    assert [d[0] for d in res.outputs] == [2, 2, 4, 2, 4, 2, 4, 2, 4, 2, 4, 2]


def test_family_bracket_m1_corners():
    nums, dens = family_bracket((((1, 2), (3, 4)), ((5, 6), (7, 8))))
    assert nums == [[1, 3, 4, 10]] and dens == [5, 11, 12, 26]


def test_finite_side_exhausts():
    fin = Mcf.finite([(1,), (2,)])
    with pytest.raises(InputExhausted) as info:
        run_bilinear(fin, SQRT2, sum_forms(1), 10)
    assert info.value.side == "x"


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.lists(st.integers(0, 12), min_size=8, max_size=8))
def test_matches_classical_transcription(seed, coeffs):
    a, b, c, d, e, f, g, h = coeffs
    if e == f == g == h == 0:
        return
    xs = cf_stream(seed, 30, 80)
    ys = cf_stream(seed + 1, 30, 80)
    ref = classical_bilinear(xs, ys, coeffs, 12, 3000)
    forms = (((a, b), (c, d)), ((e, f), (g, h)))
    try:
        got = [o[0] for o in run_bilinear(Mcf.finite([(v,) for v in xs]), Mcf.finite([(v,) for v in ys]), forms, len(ref)).outputs]
    except InputExhausted as exc:
        got = [o[0] for o in exc.result.outputs]
    n = min(len(got), len(ref))
    assert got[:n] == ref[:n]


@settings(max_examples=10, deadline=None)
@given(st.sampled_from([2, 3, 5, 7]), st.sampled_from([2, 3, 5, 10]), st.sampled_from(["sum", "product"]))
def test_cube_root_pairs_against_oracle(d1, d2, op):
    forms = sum_forms(2) if op == "sum" else product_forms(2)
    x, y = cube_root_pair(d1), cube_root_pair(d2)
    res = run_bilinear(Mcf.from_source(x), Mcf.from_source(y), forms, 5, check_det=True)
    assert res.outputs == jpa_expand(eval_bilinear(x, y, forms), 5).take(5)
