"""Cascades on layout spaces, their submonoid restrictions and products.

The transition map sends each interval ``I_j`` onto ``I_{j+1}`` by the
unique increasing affine bijection.  A sub-interval at relative position
``[alpha, beta]`` of ``I_j`` therefore lands at the same relative position
of ``I_{j+1}``, which makes iteration O(1): only the index moves.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .exact import Int, int_cmp, rational, simplify
from .intervals import ClosedInterval
from .layout import PointOutsideSpace, SpaceLayout, preset_layout

DEFAULT_STEP_BUDGET = 10**6


class StepBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class TrackedSet:
    """The piece ``[alpha, beta]`` (relative coordinates) of interval ``I_j``."""

    j: Int = 0
    alpha: Fraction = Fraction(0)
    beta: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "alpha", rational(self.alpha))
        object.__setattr__(self, "beta", rational(self.beta))
        if not 0 <= self.alpha < self.beta <= 1:
            raise ValueError(f"need 0 <= alpha < beta <= 1, got {self.alpha}, {self.beta}")
        if int_cmp(self.j, 0) < 0:
            raise ValueError("negative interval index")

    @property
    def width(self) -> Fraction:
        return self.beta - self.alpha

    def interval(self, layout: SpaceLayout) -> ClosedInterval:
        return layout.interval_at(self.j).sub(self.alpha, self.beta)

    def to_json(self) -> dict:
        from .exact import int_to_json, rational_str
        return {"j": int_to_json(self.j), "alpha": rational_str(self.alpha), "beta": rational_str(self.beta)}


FULL = TrackedSet()


@dataclass(frozen=True)
class LayoutCascade:
    """``(X, f)`` on a layout; ``step`` > 1 is the restriction to ``step``-multiples."""

    layout: SpaceLayout
    step: int = 1

    def __post_init__(self):
        if self.step < 1:
            raise ValueError("step multiplier must be >= 1")

    @property
    def name(self) -> str:
        return self.layout.which if self.step == 1 else f"{self.layout.which}^{self.step}"

    def describe(self) -> dict:
        return {"system": self.layout.which, "preset": self.layout.preset, "step": self.step}

    def iterate(self, s: TrackedSet, n: Int) -> TrackedSet:
        if int_cmp(n, 0) < 0:
            raise ValueError("negative time")
        return TrackedSet(simplify(s.j + self.step * n), s.alpha, s.beta)

    def image_diameter(self, s: TrackedSet, n: Int) -> Fraction:
        """diam f^n(s) = (beta - alpha) * |I_{j + step*n}|."""
        return s.width * self.layout.length_at(self.iterate(s, n).j)

    def restrict(self, k: int) -> "LayoutCascade":
        return restrict_to_submonoid(self, k)


def restrict_to_submonoid(c: LayoutCascade, k: int) -> LayoutCascade:
    """The action of ``k * N_0``: one step is ``k`` steps of ``c``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return c if k == 1 else LayoutCascade(c.layout, c.step * k)


def iterate(c: LayoutCascade, s: TrackedSet, n: Int) -> TrackedSet:
    return c.iterate(s, n)


def image_diameter(c: LayoutCascade, s: TrackedSet, n: Int) -> Fraction:
    return c.image_diameter(s, n)


@dataclass(frozen=True)
class ProductCascade:
    """``f x g`` on ``X x Y`` with the max metric."""

    left: LayoutCascade
    right: LayoutCascade

    @property
    def name(self) -> str:
        return f"{self.left.name}*{self.right.name}"

    def describe(self) -> dict:
        return {"left": self.left.describe(), "right": self.right.describe()}


def product_diameter(pc: ProductCascade, s1: TrackedSet, s2: TrackedSet, n: Int) -> Fraction:
    return max(pc.left.image_diameter(s1, n), pc.right.image_diameter(s2, n))


# --------------------------------------------------------------------------
# step-by-step oracle

def canonical_step_pq(layout: SpaceLayout, p: int, q: int) -> tuple[int, int]:
    """One application of the map to ``p/q``, found from the coordinate alone."""
    lvl, pos = layout.locate_point_pq(p, q)
    base, sn, sd, ln, ld, count = layout.point_meta(lvl)
    if count is None or pos + 1 < count:
        # next interval of the same level: the affine bijection is a translation
        if sd == 1:
            return p + sn * q, q  # integer shift keeps p/q reduced
        p, q = p * sd + sn * q, q * sd
    else:
        # last interval of the level onto the first one of the next level:
        # x -> nbase + (nlen/len) * (x - lo)
        nbase, _, _, nln, nld, _ = layout.point_meta(lvl + 1)
        lo_n, lo_d = base * sd + pos * sn, sd  # lo = base + pos*stride
        # (x - lo) = (p*lo_d - lo_n*q) / (q*lo_d); ratio = (nln*ld)/(nld*ln)
        num = (p * lo_d - lo_n * q) * nln * ld
        den = q * lo_d * nld * ln
        p, q = nbase * den + num, den
    g = math.gcd(p, q)
    return p // g, q // g


def canonical_step(layout: SpaceLayout, x) -> Fraction:
    x = rational(x)
    return Fraction(*canonical_step_pq(layout, x.numerator, x.denominator))


def orbit(c: LayoutCascade, x, n: int, budget: int = DEFAULT_STEP_BUDGET) -> Iterator[Fraction]:
    """Yield ``x, f^m(x), f^{2m}(x), ..., f^{nm}(x)`` by single steps."""
    x = rational(x)
    if n * c.step > budget:
        raise StepBudgetExceeded(f"{n * c.step} steps > budget {budget}")
    yield x
    p, q = x.numerator, x.denominator
    layout = c.layout
    for _ in range(n):
        for _ in range(c.step):
            p, q = canonical_step_pq(layout, p, q)
        yield Fraction(p, q, _normalize=False)


def stepwise_oracle(c: LayoutCascade, x, n: int, budget: int = DEFAULT_STEP_BUDGET) -> Fraction:
    """``f^n(x)`` computed one branch at a time (independent of index arithmetic)."""
    last = None
    for last in orbit(c, x, n, budget):
        pass
    return last


def oracle_diameters(c: LayoutCascade, s: TrackedSet, n_max: int,
                     budget: int = DEFAULT_STEP_BUDGET) -> list[Fraction]:
    """diam f^n(s) for n = 0..n_max from the orbits of both endpoints."""
    iv = s.interval(c.layout)
    lo = orbit(c, iv.lo, n_max, budget)
    hi = orbit(c, iv.hi, n_max, budget)
    return [b - a for a, b in zip(lo, hi)]


# --------------------------------------------------------------------------
# sweeps

SWEEP_COLUMNS = ("n", "diameter_numerator", "diameter_denominator", "level", "j")


def diameter_rows(c: LayoutCascade, s: TrackedSet, n_lo: int, n_hi: int):
    for n in range(n_lo, n_hi + 1):
        t = c.iterate(s, n)
        d = s.width * c.layout.length_at(t.j)
        yield n, d, c.layout.locate(t.j).level, t.j


def diameter_sweep(c: LayoutCascade, s: TrackedSet, n_lo: int, n_hi: int, out=None) -> str:
    """Exact diameter trace as CSV; written to ``out`` (path or file) if given."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for n, d, lvl, j in diameter_rows(c, s, n_lo, n_hi):
        w.writerow([n, d.numerator, d.denominator, lvl, j])
    text = buf.getvalue()
    if out is not None:
        if hasattr(out, "write"):
            out.write(text)
        else:
            with open(out, "w", newline="") as fh:
                fh.write(text)
    return text


def make_cascade(system: str, preset: str = "paper", step: int = 1) -> LayoutCascade:
    return LayoutCascade(preset_layout(system, preset), step)


def make_product(preset: str = "paper") -> ProductCascade:
    return ProductCascade(make_cascade("ex1_x", preset), make_cascade("ex1_y", preset))


__all__ = [
    "TrackedSet", "FULL", "LayoutCascade", "ProductCascade", "iterate", "image_diameter",
    "restrict_to_submonoid", "product_diameter", "stepwise_oracle", "orbit", "oracle_diameters",
    "canonical_step", "diameter_sweep", "make_cascade", "make_product", "PointOutsideSpace",
    "StepBudgetExceeded",
]
