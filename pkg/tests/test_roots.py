from fractions import Fraction as F

from periodred.exactnum import AlgNum
from periodred.parsing import parse_poly
from periodred.roots import cone_real_lines, exact_roots, isolate_real_roots, refine_root

R2 = AlgNum.sqrt(2)


def up(s):
    return parse_poly(s, ("x",))


def test_exact_roots_in_extension():
    roots, residual = exact_roots(up("x^3 - 2*x"), 2)
    assert roots == [(-R2, 1), (AlgNum(0), 1), (R2, 1)]
    assert residual == []


def test_multiplicity_and_residual():
    roots, residual = exact_roots(up("(x - 1)^2*(x^2 - 3)"), 0)
    assert roots == [(AlgNum(1), 2)]
    assert len(residual) == 2


def test_isolation_counts_real_roots():
    ivs = isolate_real_roots(up("x^5 - 5*x^3 + 4*x"))  # roots 0, +-1, +-2
    assert len(ivs) == 5
    assert isolate_real_roots(up("x^2 + 1")) == []


def test_refine_root_narrows():
    ivs = [iv for iv in isolate_real_roots(up("x^2 - 2")) if iv[1] > 0]
    lo, hi = refine_root(up("x^2 - 2"), ivs[0], F(1, 10 ** 8))
    assert lo * lo < 2 < hi * hi
    assert hi - lo <= F(1, 10 ** 8)


def test_cone_lines_need_the_right_field():
    c = parse_poly("x^2 - 2*y^2", ("x", "y"))
    lines = cone_real_lines(c, 2)
    assert not lines.unresolved
    assert sorted(str(b) for (a, b), m in lines) == ["-sqrt(2)", "sqrt(2)"]
    assert cone_real_lines(c, 0).unresolved


def test_cone_lines_with_vertical_factor():
    lines = cone_real_lines(parse_poly("x*y^2", ("x", "y")))
    assert sorted(m for _, m in lines) == [1, 2]
