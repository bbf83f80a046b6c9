"""Closed intervals and finite interval unions with exact endpoints."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .exact import rational, rational_to_json, rational_from_json


class EmptySet(ValueError):
    pass


@dataclass(frozen=True, order=True)
class ClosedInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", rational(self.lo))
        object.__setattr__(self, "hi", rational(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    @property
    def degenerate(self) -> bool:
        return self.lo == self.hi

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def sub(self, alpha, beta) -> "ClosedInterval":
        """The piece at relative position [alpha, beta] of this interval."""
        return ClosedInterval(self.lo + alpha * self.length, self.lo + beta * self.length)

    def to_json(self):
        return [rational_to_json(self.lo), rational_to_json(self.hi)]

    @classmethod
    def from_json(cls, pair):
        return cls(rational_from_json(pair[0]), rational_from_json(pair[1]))

    def __str__(self):
        return f"[{self.lo}, {self.hi}]"


def affine_image(i: ClosedInterval, slope, offset) -> ClosedInterval:
    """Image of ``i`` under ``x -> slope*x + offset``."""
    slope, offset = rational(slope), rational(offset)
    a, b = slope * i.lo + offset, slope * i.hi + offset
    return ClosedInterval(min(a, b), max(a, b))


class IntervalUnion:
    """Finite union of closed intervals kept sorted, disjoint and non-touching."""

    __slots__ = ("components",)

    def __init__(self, components: Iterable[ClosedInterval] = ()):
        parts = sorted(components, key=lambda c: (c.lo, c.hi))
        merged: list[ClosedInterval] = []
        for c in parts:
            if merged and c.lo <= merged[-1].hi:
                last = merged[-1]
                merged[-1] = ClosedInterval(last.lo, max(last.hi, c.hi))
            else:
                merged.append(c)
        self.components = tuple(merged)

    def __eq__(self, other):
        return isinstance(other, IntervalUnion) and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __contains__(self, x):
        return any(x in c for c in self.components)

    def __repr__(self):
        return "IntervalUnion(" + ", ".join(map(str, self.components)) + ")"

    def to_json(self):
        return [c.to_json() for c in self.components]


def diameter(u) -> Fraction:
    """Metric diameter (total span) of a nonempty interval or union.

    Half-open sets are passed by their closures; the diameter is unchanged.
    """
    if isinstance(u, ClosedInterval):
        return u.length
    comps = u.components if isinstance(u, IntervalUnion) else tuple(u)
    if not comps:
        raise EmptySet("diameter of the empty set")
    return max(c.hi for c in comps) - min(c.lo for c in comps)
