from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from semiflow_lab.exact import (
    BudgetExceeded, Tower, TowerSum, bit_budget, int_cmp, int_from_json, int_to_json, materialize, pow2,
    rational, rational_arith, rational_from_json, rational_to_json, simplify,
)
from semiflow_lab.layout import TOWER_EX1, TOWER_EX2

rationals = st.fractions(max_denominator=10**6).filter(lambda q: abs(q) < 10**9)


def test_add():
    assert rational_arith(Fraction(1, 2), Fraction(1, 3), "add") == Fraction(5, 6)


def test_normalization():
    r = rational("-2/-4")
    assert (r.numerator, r.denominator) == (1, 2)
    assert rational({"num": "6", "den": "-4"}) == Fraction(-3, 2)


def test_junction_slope_times_length():
    slope = Fraction(1, 2 * 1 * (2 * 1 - 1))
    assert rational_arith(slope, 2, "mul") == 1


def test_cmp_and_division_by_zero():
    assert rational_arith(Fraction(1, 3), Fraction(1, 2), "cmp") == -1
    assert rational_arith(2, 2, "cmp") == 0
    with pytest.raises(ZeroDivisionError):
        rational_arith(1, 0, "div")
    with pytest.raises(ValueError):
        rational_arith(1, 2, "pow")


def test_negative_zero_is_zero():
    z = rational_arith(Fraction(-1, 2), Fraction(1, 2), "add")
    assert z == 0 and rational_to_json(z) == {"num": "0", "den": "1"}


def test_pow2():
    assert pow2(0) == 1
    assert pow2(18) == 262144
    with pytest.raises(BudgetExceeded):
        pow2(10**9)
    with pytest.raises(ValueError):
        pow2(-1)


def test_budget_is_configurable():
    with bit_budget(100):
        with pytest.raises(BudgetExceeded):
            pow2(200)
    assert pow2(200) == 2**200


def test_json_round_trip():
    for q in (Fraction(0), Fraction(-7, 3), Fraction(10**40, 3)):
        assert rational_from_json(rational_to_json(q)) == q
    assert rational_from_json("5/10") == Fraction(1, 2)


def test_tower_offsets():
    assert [TOWER_EX1.offset_value(m) for m in range(3)] == [0, 2, 18]
    assert TOWER_EX1.offset_value(3) == 18 + 6 * 2**18
    assert TOWER_EX2.offset_value(4) == 70 + 2**70
    with pytest.raises(BudgetExceeded):
        TOWER_EX2.offset_value(5)


def test_towersum_arithmetic_and_value():
    a = TowerSum.pow_term(TOWER_EX1, 2) + 5
    assert a.value() == 2**18 + 5
    assert simplify(a - TowerSum.pow_term(TOWER_EX1, 2)) == 5
    assert str(a * 3 - 1) == "3*2^L2 + 14"


def test_dominance_comparison_past_the_budget():
    big = TowerSum.pow_term(TOWER_EX1, 5)
    lower = TowerSum.pow_term(TOWER_EX1, 4) * 1000 + 10**6
    with pytest.raises(BudgetExceeded):
        big.value()
    assert int_cmp(big, lower) > 0
    assert int_cmp(-big + 1, 0) < 0


def test_towersum_json_and_parse():
    x = TowerSum(TOWER_EX1, -7, {1: 1, 3: 2, 9: -1})
    assert int_from_json(int_to_json(x)) == x
    small = TowerSum.pow_term(TOWER_EX1, 1) + 1
    assert int_to_json(small) == {"expr": "2^L1 + 1", "tower": "ex1", "value": "5"}
    assert int_from_json(int_to_json(small)).value() == 5
    assert materialize(12) == 12


def test_budget_message_stays_short():
    t = Tower("probe", lambda m: 1)
    with pytest.raises(BudgetExceeded) as e:
        t.pow_value(4)
    assert len(str(e.value)) < 200


@given(rationals, rationals, rationals)
def test_field_laws(a, b, c):
    add = lambda x, y: rational_arith(x, y, "add")  # noqa: E731
    mul = lambda x, y: rational_arith(x, y, "mul")  # noqa: E731
    assert add(add(a, b), c) == add(a, add(b, c))
    assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))


@given(rationals, rationals)
def test_cmp_matches_order(a, b):
    assert rational_arith(a, b, "cmp") == (a > b) - (a < b)


@given(st.integers(0, 3000), st.integers(0, 3000))
def test_pow2_homomorphism(a, b):
    assert pow2(a + b) == pow2(a) * pow2(b)


@given(st.dictionaries(st.integers(1, 30), st.integers(-5, 5), max_size=6), st.integers(-10**6, 10**6),
       st.dictionaries(st.integers(1, 30), st.integers(-5, 5), max_size=6), st.integers(-10**6, 10**6))
def test_towersum_order_is_antisymmetric(t1, c1, t2, c2):
    a, b = TowerSum(TOWER_EX1, c1, t1), TowerSum(TOWER_EX1, c2, t2)
    assert int_cmp(a, b) == -int_cmp(b, a)
    assert (int_cmp(a, b) == 0) == (simplify(a - b) == 0)
