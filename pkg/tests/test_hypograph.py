import math
from fractions import Fraction as F

import numpy as np
import pytest

from periodred.hypograph import (
    assemble_disjoint,
    fresh_var,
    graph_set,
    integrand_sign,
    reflect_pair,
    translate_set,
    value_bound,
)
from periodred.numeric import compile_set, estimate_volume
from periodred.parsing import parse_ratfunc, parse_set
from periodred.semialg import IntegralPiece

X = ("x",)


def piece(domain, integrand, vars=X):
    return IntegralPiece(parse_set(domain, vars), parse_ratfunc(integrand, vars))


def test_fresh_var_avoids_collisions():
    assert fresh_var(("x", "y")) == "z"
    assert fresh_var(("x", "z")) == "t"
    assert fresh_var(("z", "t", "w", "u", "v", "s")) == "t1"


def test_integrand_sign():
    assert integrand_sign(piece("{0 < x < 1}", "1/(1 + x^2)")) == 1
    assert integrand_sign(piece("{0 < x < 1}", "-x/(x - 2)")) == 1
    assert integrand_sign(piece("{0 < x < 1}", "x - 2")) == -1
    with pytest.raises(ValueError, match="changes sign"):
        integrand_sign(piece("{0 < x < 2}", "x - 1"))


def test_value_bound_is_a_tight_upper_bound():
    b = value_bound(piece("{0 < x < 1}", "1/(1 + x^2)"), [(0, 1)])
    assert 1 <= b <= F(17, 16)
    b = value_bound(piece("{0 < x < 1}", "3*x^2"), [(0, 1)])
    assert 3 <= b <= F(13, 4)


def test_area_under_graph():
    g = graph_set(piece("{0 < x < 1}", "1/(1 + x^2)"))
    assert g.vars == ("x", "z")
    assert str(g.H) == "x^2*z + z - 1"
    e = estimate_volume(g.region, g.box, 400_000, seed=0)
    assert e.value == pytest.approx(math.pi / 4, abs=3 * e.half_width + 1e-3)


def test_negative_graph_sits_below_zero():
    g = graph_set(piece("{0 < x < 1}", "x - 2"), side=-1)
    assert g.box[-1][1] == 0
    assert g.region.contains((F(1, 2), F(-1)))
    assert not g.region.contains((F(1, 2), F(-2)))
    e = estimate_volume(g.region, g.box, 200_000, seed=1)
    assert e.value == pytest.approx(1.5, abs=0.02)


def test_graph_with_negative_denominator():
    g = graph_set(piece("{0 < x < 1}", "1/(x - 2)"), side=-1)
    e = estimate_volume(g.region, g.box, 200_000, seed=2)
    assert e.value == pytest.approx(math.log(2), abs=0.01)


def test_translate_set():
    S = translate_set(parse_set("{0 < x < 1}", X), F(5, 2))
    assert S.contains((3,)) and not S.contains((1,))


def test_assembly_is_disjoint_and_additive():
    g1 = graph_set(piece("{0 < x < 1}", "1/(1 + x^2)"))
    g2 = graph_set(piece("{-1 < x < 0}", "2"))
    a = assemble_disjoint([g1, g2])
    m1 = compile_set(translate_set(g1.region, a.shifts[0]))
    m2 = compile_set(translate_set(g2.region, a.shifts[1]))
    lo = np.array([float(b[0]) for b in a.box])
    hi = np.array([float(b[1]) for b in a.box])
    pts = lo + (hi - lo) * np.random.default_rng(0).random((50_000, 2))
    assert not np.any(m1(pts) & m2(pts))
    e = estimate_volume(a.set, a.box, 400_000, seed=3)
    assert e.value == pytest.approx(math.pi / 4 + 2, abs=0.02)


def test_reflection_of_equal_integrands():
    g1 = graph_set(piece("{-1 < x < 1}", "1/(1 + x^2)"))
    g2 = graph_set(piece("{-1 < x < 0} | {0 < x < 1}", "1/(1 + x^2)"))
    glued = reflect_pair(g1, g2)
    assert glued is not None
    assert glued.box[-1][0] < 0 < glued.box[-1][1]
    e = estimate_volume(glued.region, glued.box, 400_000, seed=4)
    assert e.value == pytest.approx(math.pi, abs=0.02)


def test_reflection_refuses_different_bases():
    g1 = graph_set(piece("{0 < x < 1}", "1"))
    g2 = graph_set(piece("{0 < x < 2}", "1"))
    assert reflect_pair(g1, g2) is None


def test_prism_over_constant():
    g = graph_set(piece("{0 < x < 1, 0 < y < 1}", "1", ("x", "y")))
    assert str(g.region) == "{ x > 0, x - 1 < 0, y > 0, y - 1 < 0, z > 0, z - 1 < 0 }"


def test_two_unit_cubes():
    g = graph_set(piece("{0 < x < 1, 0 < y < 1}", "1", ("x", "y")))
    a = assemble_disjoint([g, g])
    assert a.shifts == [0, 2]
    assert estimate_volume(a.set, a.box, 200_000, seed=5).value == pytest.approx(2, abs=0.02)
    assert assemble_disjoint([g]).set == g.region or str(assemble_disjoint([g]).set) == str(g.region)
