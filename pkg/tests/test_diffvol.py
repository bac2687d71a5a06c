import math
from fractions import Fraction as F

import numpy as np
import pytest

from periodred.diffvol import (
    BudgetExceeded,
    CubePermutation,
    build_permutation,
    difference_set,
    find_n0,
    riemann_classify,
)
from periodred.numeric import compile_set, estimate_volume
from periodred.parsing import parse_set
from periodred.semialg import SemiAlgSet
from periodred.trace import ReductionTrace

V = ("x", "y")
SQUARE = parse_set("{0 <= x <= 2, 0 <= y <= 2}", V)


def test_classification_brackets_the_set():
    K = parse_set("{x^2 + y^2 <= 1}", V)
    shifted = parse_set("{(x - 2)^2 + (y - 2)^2 <= 1}", V)
    hat, check = riemann_classify(shifted, 4, 16)
    assert check <= hat
    side = F(4, 16) ** 2
    assert len(check) * side <= math.pi <= len(hat) * side
    with pytest.raises(ValueError):
        riemann_classify(K, 4, 16)


def test_sweep_stops_at_first_separating_n():
    A = parse_set("{1 <= x <= 3, 1 <= y <= 3}", V)
    B = parse_set("{(x - 2)^2 + (y - 2)^2 <= 1}", V)
    trace = ReductionTrace()
    n, grid = find_n0(A, B, 4, trace=trace)
    sweeps = trace.find("diff-sweep")
    assert sweeps[-1].payload["n"] == n
    assert all(r.payload["hat2"] > r.payload["check1"] for r in sweeps[:-1])
    assert len(grid.hat2) <= len(grid.check1)


def test_sweep_budget():
    A = parse_set("{1 <= x <= 3, 1 <= y <= 3}", V)
    B = parse_set("{(x - 2)^2 + (y - 2)^2 <= 1}", V)
    with pytest.raises(BudgetExceeded):
        find_n0(A, B, 4, max_cubes=64)


def test_permutation_fixes_common_cubes():
    perm = build_permutation({(0, 0), (0, 1), (5, 5)}, {(0, 0), (1, 1), (2, 2), (3, 3)})
    assert perm((0, 0)) == (0, 0)
    assert perm((0, 1)) == (1, 1) and perm((5, 5)) == (2, 2)
    assert perm((9, 9)) == (9, 9)
    full = perm.as_permutation()
    assert sorted(full) == sorted(full.values())
    with pytest.raises(ValueError):
        build_permutation({(0, 0), (0, 1)}, {(0, 0)})


def test_as_permutation_is_a_bijection():
    perm = CubePermutation({(0,): (3,), (1,): (1,), (2,): (4,)}, 5, 1)
    full = perm.as_permutation()
    assert set(full) == set(full.values()) == {(0,), (1,), (2,), (3,), (4,)}


@pytest.fixture(scope="module")
def square_minus_disk():
    disk = parse_set("{x^2 + y^2 <= 1}", V)
    return difference_set(SQUARE, disk)


def test_difference_volume(square_minus_disk):
    D = square_minus_disk
    e = estimate_volume(D, D.box, 1_000_000, seed=5)
    assert e.value == pytest.approx(4 - math.pi, abs=max(3 * e.half_width, 0.01))


def test_psi_transports_k2_membership(square_minus_disk):
    D = square_minus_disk
    rng = np.random.default_rng(6)
    lo = np.array([float(b[0]) for b in D.box])
    hi = np.array([float(b[1]) for b in D.box])
    X = lo + (hi - lo) * rng.random((20_000, 2))
    in2 = compile_set(D.K2)(X)
    Y = D.psi(X)
    assert np.array_equal(D.psi_k2_member(Y), in2)
    # the moved part of K2 lands inside K1
    assert compile_set(D.K1)(Y[in2]).all()


def test_explicit_union_has_the_same_volume():
    K1 = parse_set("{0 <= x <= 1, 0 <= y <= 1}", V)
    K2 = parse_set("{x >= 0, y >= 0, x + y <= 1/2}", V)
    D = difference_set(K1, K2)
    S = D.to_semialg()
    a = estimate_volume(S, D.box, 400_000, seed=7)
    b = estimate_volume(D, D.box, 400_000, seed=7)
    assert a.value == pytest.approx(b.value, abs=0.01)
    assert a.value == pytest.approx(1 - 1 / 8, abs=0.01)


def test_empty_subtrahend():
    D = difference_set(SQUARE, SemiAlgSet.empty(V))
    assert not D.perm.moved()
    assert estimate_volume(D, D.box, 100_000, seed=8).value == pytest.approx(4, abs=0.05)


def test_unit_square_cubes_are_all_inside():
    hat, check = riemann_classify(parse_set("{0 <= x <= 1, 0 <= y <= 1}", V), 1, 2)
    assert hat == check == {(0, 0), (0, 1), (1, 0), (1, 1)}


def test_trivial_permutations():
    assert not build_permutation(set(), {(1, 1)}).moved()
    perm = build_permutation({(0, 0)}, {(3, 0)})
    assert perm((0, 0)) == (3, 0)


def test_rectangle_minus_square():
    K1 = parse_set("{0 <= x <= 2, 0 <= y <= 1}", V)
    K2 = parse_set("{0 <= x <= 1, 0 <= y <= 1}", V)
    D = difference_set(K1, K2)
    assert estimate_volume(D, D.box, 400_000, seed=9).value == pytest.approx(1, abs=0.01)
    assert estimate_volume(D.to_semialg(), D.box, 400_000, seed=9).value == pytest.approx(1, abs=0.01)
