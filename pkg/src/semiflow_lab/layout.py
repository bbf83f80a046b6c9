"""Phase spaces as lazily indexed sequences of closed intervals.

Every space here is a union of closed intervals ``I_0 = [0, 1], I_1, I_2, ...``
grouped into *levels*.  Level 0 is ``[0, 1]``; after that levels alternate
between *shrink* levels (many short intervals, stride 1) and *grow* levels
(many long intervals, stride = length + 1).  All intervals of a level share
their length and stride, so the j-th interval is available in closed form.

Three spaces are supported (``which``):

``ex1_x``  odd levels shrink (length 1/(2n) at level 2n-1), even levels grow
           (length 2n at level 2n); counts T(2n-2)+1 and T(2n-1)+1.
``ex1_y``  odd levels grow (length 2n-1), even levels shrink (length 1/(2n));
           counts T(2n-2)+4n-3 and T(2n-1)-4n+3.
``ex2_x``  one interval per level, lengths 2n-1 (odd) and 1/(2n) (even).

For the original parameters ``T(i) = 2**lcal_i`` and level ``l`` starts at
``lcal_l``; the scaled preset replaces ``T`` by a small integer sequence and
packs levels one unit apart.
"""
from __future__ import annotations

import bisect
import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .exact import (
    BudgetExceeded, Int, Tower, TowerSum, get_bit_budget, int_cmp, int_to_json, materialize,
    rational_str, simplify,
)
from .intervals import ClosedInterval

SPACES = ("ex1_x", "ex1_y", "ex2_x")
PRESETS = ("example1_paper", "example2_paper", "scaled")

TOWER_EX1 = Tower("ex1", lambda m: 2 * m)
TOWER_EX2 = Tower("ex2", lambda m: 1)


class InvalidParams(ValueError):
    pass


def _default_shrink_len(n: int) -> Fraction:
    return Fraction(1, 2 * n)


def _default_scaled_count(i: int) -> int:
    return 4 * (i + 1)


@dataclass(frozen=True)
class GrowthParams:
    """Growth schedule of a layout.

    ``count_base(i)`` plays the role of ``2**lcal_i`` for the scaled preset;
    ``shrink_len(n)`` / ``grow_len(n)`` give the n-th shrink / grow length
    (``None`` keeps the original ones).
    """

    kind: str
    count_base: Callable[[int], int] | None = None
    shrink_len: Callable[[int], Fraction] | None = None
    grow_len: Callable[[int], Fraction] | None = None

    def __post_init__(self):
        if self.kind not in PRESETS:
            raise InvalidParams(f"unknown schedule kind {self.kind!r}")

    @classmethod
    def paper(cls, which: str) -> "GrowthParams":
        return cls("example2_paper" if which == "ex2_x" else "example1_paper")

    @classmethod
    def scaled(cls, count_base: Callable[[int], int] = _default_scaled_count, **kw) -> "GrowthParams":
        return cls("scaled", count_base=count_base, **kw)


@dataclass(frozen=True)
class Level:
    index: int
    role: str  # origin | shrink | grow
    count: Int
    length: Fraction
    stride: Fraction
    base: Int  # left endpoint of the first interval
    start: Int  # global index of the first interval
    junction: str | None = None

    @property
    def end(self) -> Int:
        """Global index of the last interval."""
        return simplify(self.start + self.count - 1)

    def to_json(self) -> dict:
        return {
            "level": self.index,
            "role": self.role,
            "count": int_to_json(self.count),
            "length": rational_str(self.length),
            "stride": rational_str(self.stride),
            "base": int_to_json(self.base) if not isinstance(self.base, Fraction) else rational_str(self.base),
            "j_range": [int_to_json(self.start), int_to_json(self.end)],
            "junction": self.junction,
        }


@dataclass(frozen=True)
class LevelIndex:
    level: int
    position: Int
    j: Int


class SpaceLayout:
    """Closed-form enumeration of the intervals of one phase space."""

    def __init__(self, params: GrowthParams, which: str):
        if which not in SPACES:
            raise InvalidParams(f"unknown space {which!r}")
        if params.kind == "example1_paper" and which == "ex2_x":
            raise InvalidParams("example1_paper schedule builds ex1_x or ex1_y")
        if params.kind == "example2_paper" and which != "ex2_x":
            raise InvalidParams("example2_paper schedule builds ex2_x")
        if params.kind == "scaled" and params.count_base is None and which != "ex2_x":
            raise InvalidParams("scaled schedule needs count_base")
        self.params = params
        self.which = which
        self.tower = {"example1_paper": TOWER_EX1, "example2_paper": TOWER_EX2}.get(params.kind)
        self._levels: list[Level] = []
        self._int_starts: list[int] = []
        self._starts_done = False
        self._int_bases: list[int] = []
        self._bases_done = False
        self._int_counts: dict[int, int | None] = {}
        self._meta: dict[int, tuple] = {}
        self._spans: dict[int, int | None] = {}
        self._hint = 0
        # fail early on bad scaled counts
        for lvl in range(1, 9):
            self.level(lvl)

    def __repr__(self):
        return f"SpaceLayout({self.params.kind}, {self.which})"

    @property
    def preset(self) -> str:
        return "scaled" if self.params.kind == "scaled" else "paper"

    @property
    def grow_parity(self) -> int:
        """Parity of the grow levels."""
        return 0 if self.which == "ex1_x" else 1

    # per-level data -------------------------------------------------------
    def role(self, lvl: int) -> str:
        if lvl == 0:
            return "origin"
        return "grow" if lvl % 2 == self.grow_parity else "shrink"

    def level_length(self, lvl: int) -> Fraction:
        if lvl == 0:
            return Fraction(1)
        n = (lvl + 1) // 2  # level 2n-1 or 2n
        if self.role(lvl) == "shrink":
            f = self.params.shrink_len or _default_shrink_len
            # shrink levels are 2n-1 for ex1_x and 2n otherwise; both use 1/(2n)
            return Fraction(f(n))
        f = self.params.grow_len
        default = Fraction(2 * n) if self.which == "ex1_x" else Fraction(2 * n - 1)
        return Fraction(f(n)) if f else default

    def _stride(self, lvl: int, length: Fraction) -> Fraction:
        if lvl == 0 or self.which == "ex2_x":
            return length + 1
        return Fraction(1) if self.role(lvl) == "shrink" else length + 1

    def _T(self, i: int) -> Int:
        if self.tower is not None:
            return TowerSum.pow_term(self.tower, i) if i else 1
        return int(self.params.count_base(i))

    def _count(self, lvl: int) -> Int:
        if lvl == 0 or self.which == "ex2_x":
            return 1
        odd = lvl % 2 == 1
        n = (lvl + 1) // 2
        if self.which == "ex1_x":
            c = self._T(2 * n - 2) + 1 if odd else self._T(2 * n - 1) + 1
        else:
            c = self._T(2 * n - 2) + (4 * n - 3) if odd else self._T(2 * n - 1) - (4 * n - 3)
        c = simplify(c)
        if int_cmp(c, 1) < 0:
            raise InvalidParams(f"level {lvl} of {self.which} would have {c} intervals")
        return c

    def _junction(self, lvl: int) -> str | None:
        if lvl == 0 or self.which == "ex2_x":
            return None
        n = (lvl + 1) // 2
        names = ("A", "B") if self.which == "ex1_x" else ("C", "D")
        return f"{names[0] if lvl % 2 else names[1]}_{n}"

    def level(self, lvl: int) -> Level:
        if lvl < 0:
            raise ValueError("negative level")
        while len(self._levels) <= lvl:
            self._levels.append(self._build_level(len(self._levels)))
        return self._levels[lvl]

    def _build_level(self, lvl: int) -> Level:
        length = self.level_length(lvl)
        stride = self._stride(lvl, length)
        count = self._count(lvl)
        if lvl == 0:
            start, base = 0, 0
        else:
            prev = self._levels[lvl - 1]
            start = simplify(prev.start + prev.count)
            if self.tower is not None:
                base = simplify(self.tower.offset(lvl))
            else:
                last_hi = prev.base + prev.stride * (prev.count - 1) + prev.length
                base = math.ceil(last_hi) + 1
        return Level(lvl, self.role(lvl), count, length, stride, base, start, self._junction(lvl))

    def level_ranges(self, lvl: int) -> tuple[Int, Int]:
        """Global index range ``[j_lo, j_hi]`` of a level."""
        L = self.level(lvl)
        return L.start, L.end

    def level_count_int(self, lvl: int) -> int | None:
        if lvl not in self._int_counts:
            c = self.level(lvl).count
            try:
                self._int_counts[lvl] = materialize(c)
            except BudgetExceeded:
                self._int_counts[lvl] = None
        return self._int_counts[lvl]

    # lookup ---------------------------------------------------------------
    def _extend_starts(self, upto: int) -> None:
        while not self._starts_done and (not self._int_starts or self._int_starts[-1] <= upto):
            try:
                self._int_starts.append(materialize(self.level(len(self._int_starts)).start))
            except BudgetExceeded:
                self._starts_done = True

    def locate(self, j: Int) -> LevelIndex:
        """Level and position of global index ``j``."""
        if int_cmp(j, 0) < 0:
            raise ValueError("negative index")
        if isinstance(j, int):
            self._extend_starts(j)
            lvl = bisect.bisect_right(self._int_starts, j) - 1
            return LevelIndex(lvl, j - self._int_starts[lvl], j)
        top = j.top_index
        lvl = 0
        while int_cmp(self.level(lvl + 1).start, j) <= 0:
            lvl += 1
            if lvl > top + 8:
                raise ValueError(f"cannot place index {j}")
        return LevelIndex(lvl, simplify(j - self.level(lvl).start), j)

    def interval_at(self, j: Int) -> ClosedInterval:
        """The j-th interval; :class:`BudgetExceeded` carries ``.index`` when too large."""
        li = self.locate(j)
        L = self.level(li.level)
        try:
            pos = materialize(li.position)
            base = L.base if isinstance(L.base, (int, Fraction)) else L.base.value()
        except BudgetExceeded as e:
            e.index = li
            raise
        lo = base + L.stride * pos
        return ClosedInterval(lo, lo + L.length)

    def length_at(self, j: Int) -> Fraction:
        return self.level(self.locate(j).level).length

    def tag_at(self, j: Int) -> str | None:
        li = self.locate(j)
        L = self.level(li.level)
        return L.junction if int_cmp(li.j, L.end) == 0 else None

    # point location (used by the step-by-step oracle) ---------------------
    def _extend_bases(self, x) -> None:
        while not self._bases_done and (not self._int_bases or self._int_bases[-1] <= x):
            try:
                b = self.level(len(self._int_bases)).base
                self._int_bases.append(b if isinstance(b, int) else materialize(b))
            except BudgetExceeded:
                self._bases_done = True

    def point_meta(self, lvl: int) -> tuple:
        """(base, stride_num, stride_den, len_num, len_den, count or None) as ints."""
        meta = self._meta.get(lvl)
        if meta is None:
            self._extend_bases(0)
            while len(self._int_bases) <= lvl and not self._bases_done:
                self._extend_bases(self._int_bases[-1])
            if len(self._int_bases) <= lvl:
                raise BudgetExceeded(None, get_bit_budget(), f"base of level {lvl}")
            L = self.level(lvl)
            meta = (self._int_bases[lvl], L.stride.numerator, L.stride.denominator,
                    L.length.numerator, L.length.denominator, self.level_count_int(lvl))
            self._meta[lvl] = meta
        return meta

    def _span(self, lvl: int) -> int | None:
        """base(lvl+1) - base(lvl), or None when level lvl+1 is out of reach."""
        if lvl not in self._spans:
            try:
                self._spans[lvl] = self.point_meta(lvl + 1)[0] - self.point_meta(lvl)[0]
            except BudgetExceeded:
                self._spans[lvl] = None
        return self._spans[lvl]

    def locate_point_pq(self, p: int, q: int) -> tuple[int, int]:
        """(level, position) of the interval containing ``p/q`` (q > 0)."""
        if p < 0:
            raise PointOutsideSpace(Fraction(p, q))
        lvl = self._hint
        base = self.point_meta(lvl)[0]
        rel = p - base * q  # (x - base) * q
        span = self._span(lvl)
        if rel < 0 or (span is not None and rel >= span * q):
            fl = p // q
            bases = self._int_bases
            if not bases or (bases[-1] <= fl and not self._bases_done):
                self._extend_bases(fl)
            lvl = bisect.bisect_right(bases, fl) - 1
            self._hint = lvl
            base = bases[lvl]
            rel = p - base * q
        _, sn, sd, ln, ld, count = self.point_meta(lvl)
        pos = (rel * sd) // (q * sn)
        if pos < 0 or (count is not None and pos >= count) or (rel * sd - pos * sn * q) * ld > ln * q * sd:
            raise PointOutsideSpace(Fraction(p, q))
        return lvl, pos

    def locate_point(self, x: Fraction) -> tuple[int, int]:
        """(level, position) of the interval containing the point ``x``."""
        x = Fraction(x)
        return self.locate_point_pq(x.numerator, x.denominator)

    def point_interval(self, lvl: int, pos: int) -> tuple[Fraction, Fraction]:
        self._extend_bases(0)
        while len(self._int_bases) <= lvl and not self._bases_done:
            self._extend_bases(self._int_bases[-1])
        if len(self._int_bases) <= lvl:
            raise BudgetExceeded(None, 0, f"base of level {lvl}")
        L = self.level(lvl)
        lo = self._int_bases[lvl] + L.stride * pos
        return lo, lo + L.length

    # export ---------------------------------------------------------------
    def to_json(self, levels: int = 8) -> dict:
        return {
            "space": self.which,
            "schedule": self.params.kind,
            "tower": None if self.tower is None else self.tower.name,
            "levels": [self.level(i).to_json() for i in range(levels)],
        }

    def to_csv(self, n: int) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["j", "level", "position", "lo", "hi", "length", "junction"])
        for j in range(n):
            li = self.locate(j)
            iv = self.interval_at(j)
            w.writerow([j, li.level, li.position, rational_str(iv.lo), rational_str(iv.hi),
                        rational_str(iv.length), self.tag_at(j) or ""])
        return buf.getvalue()


class PointOutsideSpace(ValueError):
    pass


def build_layout(params: GrowthParams, which: str) -> SpaceLayout:
    return SpaceLayout(params, which)


_CACHE: dict[tuple[str, str], SpaceLayout] = {}


def preset_layout(which: str, preset: str = "paper") -> SpaceLayout:
    """Shared layout for ``preset`` in {"paper", "scaled"}."""
    key = (which, preset)
    if key not in _CACHE:
        if preset == "paper":
            params = GrowthParams.paper(which)
        elif preset == "scaled":
            params = GrowthParams.scaled()
        else:
            raise InvalidParams(f"unknown preset {preset!r}")
        _CACHE[key] = SpaceLayout(params, which)
    return _CACHE[key]


def interval_at(layout: SpaceLayout, j: Int) -> ClosedInterval:
    return layout.interval_at(j)


def length_at(layout: SpaceLayout, j: Int) -> Fraction:
    return layout.length_at(j)


def level_ranges(layout: SpaceLayout, lvl: int) -> tuple[Int, Int]:
    return layout.level_ranges(lvl)
