from __future__ import annotations

import random
from fractions import Fraction

import pytest

from mcfgosper.exactnum import floor_div
from mcfgosper.mcf import Mcf

# Worked examples. JSON layout is component-major: one list per component.
E1_X = Mcf.from_json_obj({"m": 2, "preperiod": [[1], [1]], "period": [[1, 2], [0, 1]]})
E1_C = ((3, 0, 0), (0, -2, 0), (0, 0, 6))
E1_OUT = [[0, 2, 2, 2, 1, 5, 2], [-1, 1, 0, 2, 1, 3, 1]]

E3_X = Mcf.from_json_obj({"m": 2, "preperiod": [[-2], [1]], "period": [[1, 2], [0, 1]]})
E3_Y = Mcf.from_json_obj({"m": 2, "preperiod": [[-3], [0]], "period": [[1, 0], [1, 0]]})
E3_FORMS = (
    ((0, 0, 1), (0, 0, 0), (0, 1, 0)),
    ((0, 0, 0), (1, 0, 0), (0, 0, 0)),
    ((0, 0, 0), (0, 0, 0), (0, 0, 1)),
)
E3_OUT = [[-2, 7, 36, 1, 3, 4, 2], [-3, 7, 26, 0, 0, 0, 1]]

SQRT2 = Mcf.periodic([(1,)], [(2,)])


def tuples(components):
    return [tuple(t) for t in zip(*components)]


@pytest.fixture
def e1():
    return E1_X, E1_C


@pytest.fixture
def e3():
    return E3_X, E3_Y, E3_FORMS


def cf_stream(seed, bound: int, n: int, first_min: int = 1) -> list[int]:
    rng = random.Random(seed)
    return [rng.randint(first_min, bound)] + [rng.randint(1, bound) for _ in range(n - 1)]


def classical_moebius(terms, a, b, c, d, M, N):
    """Line-by-line transcription of the textbook homographic algorithm.

    Valid only when the input value is at least 1, since the output test
    assumes the tail lies in [1, oo) from the very first step.
    """
    out = []
    r = s = t = 0
    while s < M and r < N:
        if c != 0 and c + d != 0 and (c > 0) == (c + d > 0) and floor_div(a, c) == floor_div(a + b, c + d):
            q = floor_div(a, c)
            out.append(q)
            a, b, c, d = c, d, a - c * q, b - d * q
            s += 1
        else:
            if t >= len(terms):
                break
            at = terms[t]
            a, b, c, d = a * at + b, a, c * at + d, c
            t += 1
        r += 1
    return out


def classical_bilinear(xs, ys, coeffs, M, N):
    """Transcription of the textbook bihomographic algorithm, x before y."""
    a, b, c, d, e, f, g, h = coeffs
    out = []
    r = s = u = v = 0
    while s < M and r < N:
        dens = (e, e + f, e + g, e + f + g + h)
        nums = (a, a + b, a + c, a + b + c + d)
        if all(dd > 0 for dd in dens) or all(dd < 0 for dd in dens):
            floors = {floor_div(n, dd) for n, dd in zip(nums, dens)}
        else:
            floors = set()
        if len(floors) == 1:
            q = floors.pop()
            out.append(q)
            a, b, c, d, e, f, g, h = e, f, g, h, a - e * q, b - f * q, c - g * q, d - h * q
            s += 1
        else:
            if u == v:
                if u >= len(xs):
                    break
                p = xs[u]
                a, b, c, d, e, f, g, h = a * p + c, b * p + d, a, b, e * p + g, f * p + h, e, f
                u += 1
            else:
                if v >= len(ys):
                    break
                p = ys[v]
                a, b, c, d, e, f, g, h = a * p + b, a, c * p + d, c, e * p + f, e, g * p + h, g
                v += 1
        r += 1
    return out


def certified_inside(interval_fn, lo: Fraction, hi: Fraction, schedule=(128, 512, 2048)):
    """True/False once interval arithmetic decides lo <= value <= hi; None if it never does."""
    for bits in schedule:
        try:
            iv = interval_fn(bits)
        except ZeroDivisionError:
            continue
        if iv.lo >= lo and iv.hi <= hi:
            return True
        if iv.hi < lo or iv.lo > hi:
            return False
    return None
