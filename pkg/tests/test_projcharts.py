import math
from fractions import Fraction as F

import numpy as np
import pytest

from periodred.numeric import estimate_integral
from periodred.parsing import parse_poly, parse_ratfunc, parse_set
from periodred.projcharts import ChartMap, chart_poly, compactify_domain, projective_partition
from periodred.semialg import IntegralPiece
from periodred.trace import ReductionTrace

V = ("x", "y")


def test_projective_regions_cover_the_plane_once():
    regions = projective_partition(V)
    rng = np.random.default_rng(0)
    for x, y in rng.normal(scale=3, size=(300, 2)):
        pt = (F(x), F(y))
        assert sum(R.contains(pt) for R in regions) == 1


def test_chart_poly_clears_denominators():
    f, k = chart_poly(parse_poly("x^2 + y - 1", V), 1)
    assert k == 2
    assert f == parse_poly("1 + x*y - x^2", V)


def test_chart_jacobian_matches_finite_differences():
    ch = ChartMap(1, V)
    J = ch.jacobian()
    p = np.array([0.7, -0.4])
    h = 1e-6
    cols = []
    for i in range(2):
        e = np.zeros(2)
        e[i] = h
        cols.append((np.array(ch.forward(p + e)) - np.array(ch.forward(p - e))) / (2 * h))
    det = np.linalg.det(np.column_stack(cols))
    assert det == pytest.approx(float(J.eval((F(0.7), F(-0.4)))), rel=1e-6)


def test_pi_compactification():
    piece = IntegralPiece(parse_set("{ }", ("x",)), parse_ratfunc("1/(1 + x^2)"))
    trace = ReductionTrace()
    pieces = compactify_domain(piece, trace)
    rec = trace.find("compactify-partition")[0]
    assert rec.payload["cuts"] == ["x - 1", "x + 1"]
    chart = trace.find("compactify-chart")[0]
    assert chart.payload["integrands"] == ["1/(x^2 + 1)"]
    assert all(p.integrand == parse_ratfunc("1/(1 + x^2)") for p in pieces)
    total = sum(estimate_integral(p, p.meta["box"], 200_000, seed=k).value for k, p in enumerate(pieces))
    assert total == pytest.approx(math.pi, abs=0.02)


def test_bounded_domain_passes_through():
    piece = IntegralPiece(parse_set("{0 < x < 1, 0 < y < 1}"), parse_ratfunc("1/(2 + x)", V))
    pieces = compactify_domain(piece)
    assert len(pieces) == 1
    assert pieces[0].integrand == piece.integrand


def test_unbounded_area_keeps_its_value():
    # area of {x > 1, 0 < y < 1/x^3} is 1/2
    piece = IntegralPiece(parse_set("{x > 1, 0 < y*x^3 < 1}"), parse_ratfunc("1", V))
    pieces = compactify_domain(piece)
    for p in pieces:
        assert all(lo is not None and hi is not None for lo, hi in p.meta["box"])
    total = sum(estimate_integral(p, p.meta["box"], 400_000, seed=k).value for k, p in enumerate(pieces))
    assert total == pytest.approx(0.5, abs=0.01)
