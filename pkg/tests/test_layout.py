from fractions import Fraction

import pytest

from semiflow_lab.exact import int_from_json, materialize
from semiflow_lab.intervals import ClosedInterval
from semiflow_lab.layout import (
    GrowthParams, InvalidParams, build_layout, interval_at, length_at, level_ranges, preset_layout,
)

X = preset_layout("ex1_x")
Y = preset_layout("ex1_y")
Z = preset_layout("ex2_x")


def _level_intervals(layout, lvl):
    lo, hi = (materialize(v) for v in level_ranges(layout, lvl))
    return [interval_at(layout, j) for j in range(lo, hi + 1)]


def test_first_ex1_levels():
    assert interval_at(X, 0) == ClosedInterval(0, 1)
    assert _level_intervals(X, 1) == [ClosedInterval(2, Fraction(5, 2)), ClosedInterval(3, Fraction(7, 2))]
    assert _level_intervals(X, 2) == [ClosedInterval(a, a + 2) for a in (18, 21, 24, 27, 30)]


def test_level_ranges():
    assert [materialize(v) for v in level_ranges(X, 1)] == [1, 2]
    assert [materialize(v) for v in level_ranges(X, 3)] == [8, 262152]
    for m in range(6):
        assert level_ranges(Z, m) == (m, m)


def test_deep_intervals():
    l3 = 18 + 6 * 2**18
    assert l3 == 1572882
    assert interval_at(X, 8) == ClosedInterval(l3, l3 + Fraction(1, 4))
    assert length_at(X, 8) == Fraction(1, 4)
    # first interval of level 4: 2^L1 + 2^L2 + 5
    assert length_at(X, 262153) == 4
    assert length_at(X, 262152) == Fraction(1, 4)


def test_ex2_levels():
    assert interval_at(Z, 3) == ClosedInterval(70, 73)
    assert [length_at(Z, 2 * n) for n in range(1, 6)] == [Fraction(1, 2 * n) for n in range(1, 6)]
    assert [length_at(Z, 2 * n - 1) for n in range(2, 6)] == [2 * n - 1 for n in range(2, 6)]


def test_y_is_dual():
    assert Y.role(1) == "grow" and X.role(1) == "shrink"
    assert [Y.level(m).role for m in range(1, 5)] == ["grow", "shrink", "grow", "shrink"]


def test_invalid_params():
    with pytest.raises(InvalidParams):
        GrowthParams("nonsense")
    with pytest.raises(InvalidParams):
        preset_layout("ex1_x", "huge")


@pytest.mark.parametrize("layout, n", [
    (X, 400), (Y, 400), (Z, 5), (preset_layout("ex1_x", "scaled"), 400), (preset_layout("ex2_x", "scaled"), 400),
])
def test_order_and_lengths(layout, n):
    prev = None
    for j in range(n):
        iv = interval_at(layout, j)
        assert iv.hi - iv.lo == length_at(layout, j)
        if prev is not None:
            assert prev.hi < iv.lo
        prev = iv


@pytest.mark.parametrize("which", ["ex1_x", "ex1_y"])
def test_scaled_schedule_alternates(which):
    lay = preset_layout(which, "scaled")
    shrink = [lay.level(m) for m in range(1, 16) if lay.level(m).role == "shrink"]
    grow = [lay.level(m) for m in range(1, 16) if lay.level(m).role == "grow"]
    assert all(a.length > b.length for a, b in zip(shrink, shrink[1:]))
    assert all(a.length < b.length for a, b in zip(grow, grow[1:]))
    assert all(a.count < b.count for a, b in zip(shrink, shrink[1:]))


def test_within_level_stride_is_constant():
    for m in range(1, 3):
        ivs = _level_intervals(X, m)
        strides = {b.lo - a.lo for a, b in zip(ivs, ivs[1:])}
        assert len(strides) == 1 and {b.hi - b.lo for b in ivs} == {ivs[0].hi - ivs[0].lo}


def test_locate_is_bijective():
    for j in range(0, 300):
        li = X.locate(j)
        lo, _ = level_ranges(X, li.level)
        assert materialize(lo) + li.position == j == li.j


def test_json_and_csv_export():
    doc = X.to_json(levels=4)
    assert doc["levels"][1]["count"] == "2"
    assert [int_from_json(v).value() for v in doc["levels"][3]["j_range"]] == [8, 262152]
    rows = X.to_csv(4).splitlines()
    assert len(rows) == 5
    assert build_layout(GrowthParams.paper("ex2_x"), "ex2_x").level(3).base.value() == 70
