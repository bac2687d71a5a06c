import math
import random
from fractions import Fraction as F

import pytest

from periodred.blowup2 import DivergenceError, ScopeError
from periodred.certify import bounding_box
from periodred.diffvol import DifferenceSet
from periodred.numeric import estimate_volume
from periodred.parsing import parse_problem, parse_ratfunc, parse_set
from periodred.pipeline import reduce_period, stage_estimate
from periodred.semialg import IntegralPiece
from periodred.trace import KZ_RULES


def load(problem_path, name):
    with open(problem_path(name)) as fh:
        return parse_problem(fh.read())


def test_every_record_names_a_rule(problem_path):
    prob = load(problem_path, "quarter_pi")
    red = reduce_period(prob.piece(), samples=20_000)
    assert len(red.trace) > 0
    assert all(r.kz_rule in KZ_RULES for r in red.trace)
    assert [r.step for r in red.trace] == list(range(1, len(red.trace) + 1))
    assert red.trace.by_rule("sum-by-integrand")


def test_single_sign_gives_a_union(problem_path):
    prob = load(problem_path, "pi")
    red = reduce_period(prob.piece(), samples=20_000)
    assert red.sign == 1
    assert red.K.vars == ("x", "z")
    assert not isinstance(red.K, DifferenceSet)
    e = red.K_volume(400_000, seed=1)
    assert e.value == pytest.approx(math.pi, abs=0.03)


def test_reflection_glues_the_pi_slabs(problem_path):
    prob = load(problem_path, "pi")
    red = reduce_period(prob.piece(), reflect=True, samples=20_000)
    assert len(red.regions[1]) == 1
    assert red.trace.find("reflect")
    assert red.K_volume(400_000, seed=2).value == pytest.approx(math.pi, abs=0.03)


def test_signed_integrand_uses_a_difference(problem_path):
    prob = load(problem_path, "signed")
    red = reduce_period(prob.piece(), samples=50_000)
    assert isinstance(red.K, DifferenceSet)
    assert red.sign == 1
    assert red.trace.find("diff-permutation")
    e = red.K_volume(1_000_000, seed=3)
    assert e.value == pytest.approx(1.0, abs=0.03)


def test_negative_result_carries_the_sign():
    piece = IntegralPiece(parse_set("{0 < x < 1}"), parse_ratfunc("x - 3/4"))
    red = reduce_period(piece, samples=100_000)
    assert red.sign == -1
    e = red.K_volume(1_000_000, seed=4)
    assert e.value == pytest.approx(0.25, abs=0.02)


def test_stage_sums_agree(problem_path):
    prob = load(problem_path, "zeta2")
    red = reduce_period(prob.piece(), radicand=prob.radicand, samples=20_000)
    for stage in ("compact", "resolved"):
        e = stage_estimate(red.pieces(stage), 400_000, seed=5)
        assert e.value == pytest.approx(math.pi ** 2 / 6, abs=max(3 * e.half_width, 0.02))


def test_empty_domain():
    piece = IntegralPiece(parse_set("{0 < x < 1, x > 2}"), parse_ratfunc("1", ("x",)))
    red = reduce_period(piece)
    assert red.sign == 0


def test_failures_name_their_stage():
    with pytest.raises(DivergenceError) as info:
        reduce_period(IntegralPiece(parse_set("{0 < x < 1, 0 < y < 1}"), parse_ratfunc("1/(x*y)")))
    assert info.value.stage == "resolve"
    with pytest.raises(ScopeError) as info:
        reduce_period(IntegralPiece(parse_set("{0 < x < 1, 0 < y < 1, 0 < z < 1}"),
                                    parse_ratfunc("1/(x + y + z)")))
    assert info.value.stage == "resolve"


def test_three_dimensional_pole_free_volume():
    piece = IntegralPiece(parse_set("{x^2 + y^2 + z^2 < 1}"), parse_ratfunc("1", ("x", "y", "z")))
    red = reduce_period(piece, samples=20_000)
    e = estimate_volume(red.K, red.box, 400_000, seed=6)
    assert e.value == pytest.approx(4 * math.pi / 3, abs=0.05)


def _sample_points(S, k, rng):
    box = bounding_box(S)
    pts = []
    for _ in range(4000):
        q = tuple(lo + (hi - lo) * F(rng.randint(1, 999), 1000) for lo, hi in box)
        if S.contains(q):
            pts.append(q)
            if len(pts) == k:
                break
    return pts


@pytest.mark.parametrize("name", ["pi", "quarter_pi", "zeta2"])
def test_trace_replays_changes_of_variables(problem_path, name):
    """Each recorded substitution maps the 'after' sets into the 'before' set
    and carries the integrand over with |jacobian|, in exact arithmetic."""
    prob = load(problem_path, name)
    red = reduce_period(prob.piece(), radicand=prob.radicand, samples=10_000)
    rng = random.Random(0)
    records = red.trace.find("compactify-chart") + red.trace.find("blowup")
    assert records
    for rec in records:
        vars = prob.vars
        sub = {v: parse_ratfunc(t, vars) for v, t in rec.payload["substitution"].items()}
        jac = parse_ratfunc(rec.payload["jacobian"], vars)
        before_dom, before_f = rec.payload["before"].split(" :: ")
        before = IntegralPiece(parse_set(before_dom, vars), parse_ratfunc(before_f, vars))
        afters = rec.payload["after"]
        afters = afters if isinstance(afters, list) else [afters]
        checked = 0
        for text in afters:
            dom, f = text.split(" :: ")
            after = IntegralPiece(parse_set(dom, vars), parse_ratfunc(f, vars))
            for q in _sample_points(after.domain, 10, rng):
                image = tuple(sub[v].eval(q) for v in vars)
                assert before.domain.contains(image)
                J = jac.eval(q)
                assert after.integrand.eval(q) == before.integrand.eval(image) * (J if J.sign() > 0 else -J)
                checked += 1
        assert checked > 0
