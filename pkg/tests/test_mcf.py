import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import E1_X, SQRT2
from mcfgosper.errors import InputExhausted, PrecisionExhausted, Terminated
from mcfgosper.exactnum import det, matmul
from mcfgosper.mcf import (
    Mcf,
    check_admissible,
    convergents,
    eval_convergent,
    jpa_expand,
    output_matrix,
    step_matrix,
)
from mcfgosper.sources import McfSource, RationalSource, RootSource, cube_root_pair, iroot, is_cube, parse_source


def test_step_matrix_shape():
    assert step_matrix((1, 0)) == ((1, 1, 0), (0, 0, 1), (1, 0, 0))
    assert step_matrix((3,)) == ((3, 1), (1, 0))


@given(st.lists(st.integers(-50, 50), min_size=1, max_size=4))
def test_output_matrix_inverts_step(a):
    n = len(a) + 1
    eye = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    assert matmul(output_matrix(a), step_matrix(a)) == eye
    assert abs(det(step_matrix(a))) == 1


def test_periodic_stream_and_take():
    assert E1_X.take(5) == [(1, 1), (1, 0), (2, 1), (1, 0), (2, 1)]
    assert SQRT2.take(4) == [(1,), (2,), (2,), (2,)]
    fin = Mcf.finite([(1, 0), (2, 1)])
    assert fin.is_finite and not E1_X.is_finite
    with pytest.raises(InputExhausted):
        fin.take(3)


def test_json_round_trip_component_major():
    text = E1_X.dumps()
    assert '"preperiod": [[1], [1]]' in text
    assert Mcf.loads(text) == E1_X
    with pytest.raises(ValueError):
        Mcf.from_json_obj({"m": 2, "preperiod": [[1, 2], [1]]})


@given(st.lists(st.tuples(st.integers(-9, 9), st.integers(-9, 9)), min_size=1, max_size=6))
def test_json_round_trip_property(steps):
    mcf = Mcf.finite(steps)
    assert Mcf.loads(mcf.dumps()).take(len(steps)) == [tuple(s) for s in steps]


def test_generator_stream_replays():
    mcf = Mcf.from_generator(1, lambda: ((k,) for k in itertools.count(1)))
    assert mcf.take(3) == [(1,), (2,), (3,)]
    assert mcf.take(3) == [(1,), (2,), (3,)]


def test_convergents_sqrt2():
    # classical convergents 1, 3/2, 7/5, 17/12
    vals = [eval_convergent(convergents(SQRT2, n))[0] for n in range(1, 5)]
    assert vals == [1, Fraction(3, 2), Fraction(7, 5), Fraction(17, 12)]


def test_admissibility():
    assert check_admissible(E1_X, 20) == []
    bad = Mcf.finite([(5, 9), (0, 0), (2, 3), (1, -1)])
    reasons = {(v.step, v.component) for v in check_admissible(bad, 4)}
    assert reasons == {(1, 1), (2, 2), (3, 2)}


def test_jpa_sqrt2_and_cube_roots():
    assert jpa_expand(RootSource([2], 2), 6).take(6) == [(1,), (2,), (2,), (2,), (2,), (2,)]
    assert jpa_expand(RootSource([7], 2), 5).take(5) == [(2,), (1,), (1,), (1,), (4,)]
    x = jpa_expand(cube_root_pair(2), 30)
    assert x.take(4) == [(1, 1), (1, 0), (2, 1), (1, 0)]
    assert check_admissible(x, 30) == []


def test_jpa_convergents_bracket_the_value():
    # the first convergent column approaches (cbrt 2, cbrt 4)
    x = jpa_expand(cube_root_pair(2), 25)
    approx = eval_convergent(convergents(x, 25))
    assert abs(approx[0] ** 3 - 2) < Fraction(1, 10**6)
    assert abs(approx[1] ** 3 - 4) < Fraction(1, 10**6)


def test_jpa_rational_terminates():
    with pytest.raises(Terminated) as info:
        jpa_expand(RationalSource([Fraction(3, 2)]), 5)
    assert info.value.partial == [(1,), (2,)]


def test_jpa_dependent_pair_exhausts_precision():
    # (sqrt2, sqrt2): second component becomes exactly 1 after one step
    with pytest.raises(PrecisionExhausted):
        jpa_expand(RootSource([2, 2], 2), 3, budget_bits=256)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(1, 30), min_size=2, max_size=8), st.integers(-5, 5))
def test_jpa_recovers_rational_expansion(tail, a0):
    # a finite classical CF evaluated exactly and re-expanded
    steps = [(a0,)] + [(a,) for a in tail]
    if tail[-1] == 1:
        steps[-1] = (2,)
    value = eval_convergent(convergents(Mcf.finite(steps), len(steps)))
    with pytest.raises(Terminated) as info:
        jpa_expand(RationalSource(value), len(steps) + 1)
    assert info.value.partial == steps


def test_mcf_source_encloses_periodic_value():
    src = McfSource(SQRT2)
    iv = src.intervals(64)[0]
    assert iv.lo * iv.lo <= 2 <= iv.hi * iv.hi
    assert iv.width < Fraction(1, 2**60)


def test_iroot_and_cubes():
    assert [iroot(n, 3) for n in (0, 1, 7, 8, 9, 26, 27)] == [0, 1, 1, 2, 2, 2, 3]
    assert iroot(10**40, 2) == 10**20
    assert [d for d in range(2, 30) if is_cube(d)] == [8, 27]


def test_root_source_intervals_nest():
    src = cube_root_pair(5)
    prev = None
    for bits in (16, 32, 64, 128):
        cur = src.intervals(bits)
        assert cur[0].lo ** 3 <= 5 <= cur[0].hi ** 3
        if prev is not None:
            assert prev[0].contains(cur[0]) and prev[1].contains(cur[1])
        prev = cur


def test_parse_source():
    assert parse_source("cbrt:3").m == 2
    assert parse_source("root:2:2,3").m == 2
    assert parse_source("rational:1/3,2").exact
    with pytest.raises(ValueError):
        parse_source("cbrt:3", m=1)
    with pytest.raises(ValueError):
        parse_source("pi:1")
