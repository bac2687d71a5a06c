from fractions import Fraction as F

import pytest

from periodred.exactnum import AlgNum, RadicandMismatch, format_algnum, sqrt_in_field, squarefree_part
from periodred.parsing import parse_algnum

R2 = AlgNum.sqrt(2)


def test_inverse_rationalizes():
    assert AlgNum(1) / (1 + R2) == AlgNum(-1, 1, 2)
    assert format_algnum(AlgNum(1) / (1 + R2)) == "-1 + sqrt(2)"


def test_sign_is_exact_near_ties():
    assert (R2 - F(7, 5)).sign() == 1
    assert (R2 - F(17, 12)).sign() == -1
    # 99/70 is an overestimate; the difference is about 7e-5
    assert (F(99, 70) - R2).sign() == 1
    assert (R2 * R2 - 2).sign() == 0


def test_squarefree_normalization():
    assert squarefree_part(72) == (2, 6)
    assert AlgNum.sqrt(8) == 2 * R2
    assert AlgNum.sqrt(9) == AlgNum(3)
    assert AlgNum.sqrt(9).is_rational()
    assert parse_algnum("3 - 2*sqrt(8)") == 3 - 4 * R2


def test_field_operations():
    x = AlgNum(F(1, 3), 2, 2)
    assert x * x.inverse() == 1
    assert x.norm() == F(1, 9) - 8
    assert (x + x.conjugate()).is_rational()
    assert x - x == 0


def test_mixed_radicands_rejected():
    with pytest.raises(RadicandMismatch):
        AlgNum.sqrt(2) + AlgNum.sqrt(3)


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        AlgNum(0).inverse()


def test_sqrt_in_field():
    assert sqrt_in_field(F(9, 4)) == F(3, 2)
    assert sqrt_in_field(8) == 2 * R2
    assert sqrt_in_field(8, 2) == 2 * R2
    assert sqrt_in_field(3, 2) is None
    assert sqrt_in_field(-1) is None


def test_enclosure_brackets_value():
    lo, hi = (3 - 4 * R2).enclosure()
    assert lo <= 3 - 4 * 2 ** 0.5 <= hi
    assert hi - lo < F(1, 10 ** 6)
