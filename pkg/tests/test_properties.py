from fractions import Fraction as F

import numpy as np
from hypothesis import assume, given
from hypothesis import strategies as st

from periodred.exactnum import AlgNum
from periodred.numeric import compile_set, interval_eval
from periodred.parsing import parse_poly, parse_ratfunc, parse_set
from periodred.poly import Poly, RatFunc, divexact, poly_gcd, resultant
from periodred.semialg import BasicSet, Condition, SemiAlgSet

V = ("x", "y")
fracs = st.fractions(min_value=-20, max_value=20, max_denominator=12)
algnums = st.builds(lambda a, b: AlgNum(a, b, 2), fracs, fracs)


@st.composite
def polys(draw, vars=V, maxdeg=3):
    terms = {}
    for _ in range(draw(st.integers(1, 5))):
        e = tuple(draw(st.integers(0, maxdeg)) for _ in vars)
        if sum(e) <= maxdeg:
            terms[e] = AlgNum(draw(fracs))
    p = Poly(vars, terms)
    assume(not p.is_zero())
    return p


@given(algnums, algnums, algnums)
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    if not b.is_zero():
        assert (a / b) * b == a


@given(algnums)
def test_sign_matches_float(a):
    f = float(a.a) + float(a.b) * 2 ** 0.5
    if abs(f) > 1e-9:
        assert a.sign() == (1 if f > 0 else -1)
    lo, hi = a.enclosure()
    assert lo <= a.a + a.b * F(14142135623730951, 10 ** 16) + F(1, 10 ** 15)


@given(polys(), polys())
def test_ring_laws(p, q):
    assert p * q == q * p
    assert (p + q) - q == p
    assert divexact(p * q, q) == p


@given(polys(), fracs, fracs)
def test_print_parse_round_trip(p, a, b):
    q = parse_poly(str(p), V)
    assert q == p
    assert q.eval((a, b)) == p.eval((a, b))


@given(polys(), polys())
def test_ratfunc_normal_form_is_canonical(p, q):
    r = RatFunc(p * q, q * q)
    assert r == RatFunc(p, q)
    assert parse_ratfunc(str(r), V) == r


@given(polys(maxdeg=2), polys(maxdeg=2))
def test_gcd_divides_both(p, q):
    g = poly_gcd(p, q)
    divexact(p, g)
    divexact(q, g)


@given(polys(("x",), 3), polys(("x",), 3), fracs)
def test_resultant_detects_shared_root(p, q, r):
    assume(p.degree() > 0 and q.degree() > 0)
    x = Poly.var("x", ("x",))
    assert resultant(p * (x - r), q * (x - r), "x").is_zero()


@given(polys(), st.floats(-3, 3), st.floats(-3, 3), st.floats(0, 1), st.floats(0, 1))
def test_interval_contains_values(p, x0, y0, wx, wy):
    box = [(x0, x0 + wx), (y0, y0 + wy)]
    iv = interval_eval(p, box)
    for tx in (0, 0.5, 1):
        for ty in (0, 0.5, 1):
            pt = (F(x0) + F(wx) * F(tx), F(y0) + F(wy) * F(ty))
            val = p.eval(pt).to_fraction()
            assert F(iv.lo) <= val <= F(iv.hi)


rels = st.sampled_from(["<", ">", "<=", ">="])


@st.composite
def sets(draw):
    pieces = []
    for _ in range(draw(st.integers(1, 2))):
        conds = [Condition(draw(polys(maxdeg=2)), draw(rels)) for _ in range(draw(st.integers(1, 3)))]
        pieces.append(BasicSet(V, tuple(conds)))
    return SemiAlgSet(V, pieces)


@given(sets(), st.lists(st.tuples(fracs, fracs), min_size=1, max_size=8))
def test_complement_partitions_points(S, pts):
    C = S.complement()
    for pt in pts:
        assert S.contains(pt) != C.contains(pt)


@given(sets(), st.lists(st.tuples(fracs, fracs), min_size=1, max_size=8))
def test_compiled_membership_agrees_off_boundary(S, pts):
    X = np.array([[float(a), float(b)] for a, b in pts])
    got = compile_set(S)(X)
    for k, pt in enumerate(pts):
        on_boundary = any(p.eval(pt).is_zero() for p in S.polys())
        if not on_boundary:
            assert bool(got[k]) == S.contains(pt)


@given(sets(), st.tuples(fracs, fracs))
def test_closure_contains_set(S, pt):
    if S.contains(pt):
        assert S.closure().contains(pt)


@given(st.integers(0, 4), st.integers(1, 4))
def test_parse_set_chain(a, w):
    S = parse_set(f"{{{a} < x < {a + w}}}", ("x",))
    assert S.contains((F(2 * a + w, 2),))
    assert not S.contains((F(a),))
