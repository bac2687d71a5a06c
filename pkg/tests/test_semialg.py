from fractions import Fraction as F

import pytest

from periodred.certify import (
    Unbounded,
    bounding_box,
    certify_empty,
    certify_sign,
    globally_positive,
    is_empty,
    reduce_set,
)
from periodred.parsing import ParseError, parse_poly, parse_problem, parse_ratfunc, parse_set
from periodred.semialg import Condition, IntegralPiece, SemiAlgSet, boundary_zariski, sign_partition

V = ("x", "y")


def test_membership_and_union():
    S = parse_set("{x^2 + y^2 < 1, x > 0} | {y < -2}")
    assert S.contains((F(1, 2), 0))
    assert S.contains((0, -3))
    assert not S.contains((0, 0))  # on the boundary x = 0


def test_complement_is_disjoint_and_covering():
    S = parse_set("{x^2 + y^2 < 1, x > 0} | {y < -2}")
    C = S.complement()
    for pt in [(F(1, 2), 0), (0, 0), (2, 2), (0, -3), (F(-1, 2), F(1, 3)), (1, 0)]:
        assert S.contains(pt) != C.contains(pt)


def test_closure_relaxes_relations():
    S = parse_set("{x^2 + y^2 < 1}")
    assert not S.contains((1, 0))
    assert S.closure().contains((1, 0))


def test_chained_relation_parsing():
    S = parse_set("{0 < x < y < 1}")
    assert S.contains((F(1, 4), F(1, 2)))
    assert not S.contains((F(1, 2), F(1, 4)))
    assert len(S.pieces[0].conditions) == 3


def test_sign_partition_of_signed_integrand():
    piece = IntegralPiece(parse_set("{0 < x < 2}"), parse_ratfunc("x - 1/2"))
    plus, minus = sign_partition(piece)
    assert plus.contains((1,)) and not plus.contains((F(1, 4),))
    assert minus.contains((F(1, 4),)) and not minus.contains((1,))


def test_boundary_polys():
    S = parse_set("{x^2 + y^2 < 1, x > 0} | {y < -2}")
    assert set(map(str, boundary_zariski(S))) == {"x^2 + y^2 - 1", "x", "y + 2"}


def test_certified_emptiness():
    assert is_empty(parse_set("{0 < x < 1, x > 2}"))
    assert is_empty(parse_set("{x^2 + y^2 < 1, x + y > 2}"))
    assert not is_empty(parse_set("{x^2 + y^2 < 1, x + y > 1}"))
    conds = parse_set("{x^2 + y^2 < 1, x > 1}").pieces[0].conditions
    assert certify_empty(conds, V) is True


def test_bounding_box_contains_set():
    (xl, xh), (yl, yh) = bounding_box(parse_set("{x^2 + y^2 < 1}"))
    assert xl <= -1 and xh >= 1 and yl <= -1 and yh >= 1
    assert xh - xl < 4
    with pytest.raises(Unbounded):
        bounding_box(parse_set("{x > 0}"))


def test_certify_sign_and_global_positivity():
    disk = parse_set("{x^2 + y^2 < 1}")
    assert certify_sign(parse_poly("2 + x", V), disk) == 1
    assert certify_sign(parse_poly("-2 + y", V), disk) == -1
    assert certify_sign(parse_poly("x", V), disk) == 0
    assert globally_positive(parse_poly("x^2 + y^2 + 1", V))
    assert not globally_positive(parse_poly("x^2 - y", V))


def test_reduce_drops_only_removable_redundancy():
    S = parse_set("{0 < x < 1, x < 5, x^2 < 4}")
    rem = [Condition(parse_poly(s, ("x",)), r) for s, r in (("x - 5", "<"), ("x^2 - 4", "<"), ("x", ">"))]
    assert str(reduce_set(S, rem)) == "{ x > 0, x - 1 < 0 }"
    assert len(reduce_set(S).pieces[0].conditions) == 4


def test_empty_and_full():
    assert SemiAlgSet.empty(V).is_syntactically_empty()
    assert SemiAlgSet.full(V).contains((7, -7))


def test_problem_file_parsing(problem_path):
    with open(problem_path("zeta2")) as fh:
        prob = parse_problem(fh.read())
    assert prob.vars == ("x", "y")
    assert prob.radicand == 2
    assert prob.integrand == parse_ratfunc("1/((1-x)*y)")


@pytest.mark.parametrize("text", ["{x >}", "{x > 0", "1/(x", "{x ** 2 > 0}", "{x > 0} |"])
def test_parse_errors_have_positions(text):
    with pytest.raises(ParseError) as info:
        parse_set(text, ("x",)) if text.startswith("{") else parse_ratfunc(text, ("x",))
    assert info.value.column >= 1


def test_problem_parse_error_reports_line():
    with pytest.raises(ParseError) as info:
        parse_problem("vars: x\ndomain: {x > 0\nintegrand: 1\n")
    assert info.value.line == 2


def test_bounding_box_away_from_the_origin():
    (xl, xh), (yl, yh) = bounding_box(parse_set("{(x - 2)^2 + (y - 2)^2 <= 1}"))
    assert xl <= 1 and xh >= 3 and yl <= 1 and yh >= 3
    assert xh - xl < 4
