import math
from fractions import Fraction as F

import numpy as np
import pytest

from periodred.numeric import (
    Interval,
    combined_agree,
    compile_poly,
    compile_set,
    estimate_integral,
    estimate_volume,
    interval_eval,
    interval_eval_arrays,
    interval_eval_centered,
)
from periodred.parsing import parse_poly, parse_ratfunc, parse_set
from periodred.semialg import IntegralPiece

V = ("x", "y")


def test_interval_arithmetic_is_outward():
    a = Interval(0.1, 0.2)
    s = a + 0.1
    assert s.lo <= 0.2 <= s.hi
    assert (Interval(-1, 2) ** 2).lo == 0.0
    assert (Interval(-2, 3) * Interval(-1, 1)).lo <= -3


def test_interval_eval_encloses_range():
    iv = interval_eval(parse_poly("x^2 - x", ("x",)), [(0, 1)])
    assert iv.lo <= -0.25 and iv.hi >= 0
    with pytest.raises(ValueError):
        interval_eval(parse_poly("x", ("x",)), [(0, 1), (0, 1)])


def test_centered_form_is_tighter_on_small_boxes():
    p = parse_poly("x^2 - 2*x*y + y^2", V)
    los = np.array([[0.5, 0.5]])
    his = np.array([[0.51, 0.51]])
    nlo, nhi = interval_eval_arrays(p, los, his)
    clo, chi = interval_eval_centered(p, los, his)
    assert clo[0] >= nlo[0] and chi[0] <= nhi[0]
    assert chi[0] - clo[0] < 0.01 * (nhi[0] - nlo[0]) + 1e-3


def test_compiled_poly_matches_exact_eval():
    p = parse_poly("3*x^2*y - y^3 + 1/7", V)
    X = np.array([[0.3, -1.2], [2.0, 0.5]])
    got = compile_poly(p)(X)
    want = [float(p.eval((F(a), F(b)))) for a, b in X]
    assert np.allclose(got, want)


def test_membership_vectorized():
    S = parse_set("{x^2 + y^2 < 1} | {x > 2}")
    X = np.array([[0, 0], [1, 1], [3, 5]])
    assert compile_set(S)(X).tolist() == [True, False, True]


def test_disk_volume_estimate():
    e = estimate_volume(parse_set("{x^2 + y^2 < 1}"), [(-1, 1), (-1, 1)], 400_000, seed=1)
    assert abs(e.value - math.pi) < 3 * e.half_width + 1e-3
    assert e.half_width < 0.01


def test_integral_estimate_and_agreement():
    piece = IntegralPiece(parse_set("{0 < x < 1}"), parse_ratfunc("1/(1 + x^2)"))
    e = estimate_integral(piece, [(0, 1)], 200_000, seed=2)
    assert abs(e.value - math.pi / 4) < 3 * e.half_width
    left = estimate_integral(IntegralPiece(parse_set("{0 < x < 1/2}"), piece.integrand), [(0, 1)], 200_000, 3)
    right = estimate_integral(IntegralPiece(parse_set("{1/2 < x < 1}"), piece.integrand), [(0, 1)], 200_000, 4)
    assert combined_agree(e, [left, right], slack=1e-3)


def test_pole_samples_are_flagged():
    piece = IntegralPiece(parse_set("{-1 < x < 1}"), parse_ratfunc("1/x"))
    e = estimate_integral(piece, [(-1, 1)], 10_000, seed=0, pole_eps=0.1)
    assert "pole" in e.warning
