"""Subsets of the non-negative integers and their syndetic / thick / cofinite type.

Two representations:

* :class:`RangeSet` -- finitely many integer ranges plus an optional
  cofinite tail ``[t, oo)``.  Without a tail the set is read as the visible
  part of an unknown set up to a *horizon* and verdicts are labelled with it.
* :class:`BlockFamilySet` -- a finite head of blocks plus infinite families
  of blocks ``[lo(k), hi(k)]``, ``k >= k0``, with endpoints given as exact
  (possibly tower-sized) integers.  Verdicts about these are asymptotic.

For the monoid of non-negative integers the compact sets are the finite ones,
so a set is syndetic iff its gaps are bounded and thick iff it contains
arbitrarily long runs.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

from .exact import Inconclusive, Int, TowerSum, int_cmp, int_max, int_to_json, materialize, simplify


# --------------------------------------------------------------------------
# finite range sets

class RangeSet:
    """Sorted, disjoint, non-adjacent closed ranges and an optional tail."""

    __slots__ = ("ranges", "tail")

    def __init__(self, ranges: Iterable[tuple[int, int]] = (), tail: int | None = None):
        rs = sorted((int(a), int(b)) for a, b in ranges if a <= b)
        if rs and rs[0][0] < 0:
            raise ValueError("ranges must lie in the non-negative integers")
        if tail is not None:
            tail = max(int(tail), 0)
        merged: list[tuple[int, int]] = []
        for a, b in rs:
            if merged and a <= merged[-1][1] + 1:
                merged[-1] = (merged[-1][0], max(merged[-1][1], b))
            else:
                merged.append((a, b))
        if tail is not None:
            while merged and merged[-1][1] >= tail - 1:
                tail = min(tail, merged.pop()[0])
        self.ranges = tuple(merged)
        self.tail = tail

    # constructors
    @classmethod
    def from_elements(cls, elements: Iterable[int]) -> "RangeSet":
        return cls((e, e) for e in elements)

    @classmethod
    def full(cls) -> "RangeSet":
        return cls((), 0)

    @classmethod
    def empty(cls) -> "RangeSet":
        return cls()

    # protocol
    def __eq__(self, other):
        return isinstance(other, RangeSet) and self.ranges == other.ranges and self.tail == other.tail

    def __hash__(self):
        return hash((self.ranges, self.tail))

    def __repr__(self):
        body = ", ".join(f"[{a},{b}]" for a, b in self.ranges)
        if self.tail is not None:
            body += (", " if body else "") + f"[{self.tail},oo)"
        return "RangeSet{" + body + "}"

    def __contains__(self, n: int) -> bool:
        if self.tail is not None and n >= self.tail:
            return True
        for a, b in self.ranges:
            if a <= n <= b:
                return True
            if a > n:
                break
        return False

    def __or__(self, other: "RangeSet") -> "RangeSet":
        return self.union(other)

    def __and__(self, other: "RangeSet") -> "RangeSet":
        return self.intersect(other)

    def is_empty(self) -> bool:
        return not self.ranges and self.tail is None

    def elements(self, horizon: int) -> Iterator[int]:
        for a, b in self.truncate(horizon).ranges:
            yield from range(a, b + 1)

    def min_element(self, at_least: int = 0) -> int | None:
        for a, b in self.ranges:
            if b >= at_least:
                return max(a, at_least)
        if self.tail is not None:
            return max(self.tail, at_least)
        return None

    # algebra
    def union(self, other: "RangeSet") -> "RangeSet":
        tails = [t for t in (self.tail, other.tail) if t is not None]
        return RangeSet(self.ranges + other.ranges, min(tails) if tails else None)

    def complement(self) -> "RangeSet":
        """Complement inside the non-negative integers."""
        out, nxt = [], 0
        for a, b in self.ranges:
            if a > nxt:
                out.append((nxt, a - 1))
            nxt = b + 1
        if self.tail is None:
            return RangeSet(out, nxt)
        if self.tail > nxt:
            out.append((nxt, self.tail - 1))
        return RangeSet(out)

    def intersect(self, other: "RangeSet") -> "RangeSet":
        return self.complement().union(other.complement()).complement()

    def truncate(self, horizon: int) -> "RangeSet":
        """Intersection with ``[0, horizon]`` (no tail)."""
        rs = [(a, min(b, horizon)) for a, b in self.ranges if a <= horizon]
        if self.tail is not None and self.tail <= horizon:
            rs.append((self.tail, horizon))
        return RangeSet(rs)

    def shift(self, delta: int) -> "RangeSet":
        """``{n + delta}`` restricted to the non-negative integers."""
        rs = [(max(a + delta, 0), b + delta) for a, b in self.ranges if b + delta >= 0]
        tail = None if self.tail is None else max(self.tail + delta, 0)
        return RangeSet(rs, tail)

    def set_algebra(self, other: "RangeSet", op: str) -> "RangeSet":
        if op == "union":
            return self.union(other)
        if op == "intersect":
            return self.intersect(other)
        if op == "complement_in_N0":
            return self.complement()
        raise ValueError(f"unknown op {op!r}")

    # io
    def to_json(self) -> dict:
        return {
            "ranges": [[str(a), str(b)] for a, b in self.ranges],
            "tail": None if self.tail is None else str(self.tail),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "RangeSet":
        tail = obj.get("tail")
        return cls(((int(a), int(b)) for a, b in obj.get("ranges", ())),
                   None if tail is None else int(tail))


def set_algebra(a: RangeSet, b: RangeSet, op: str) -> RangeSet:
    return a.set_algebra(b, op)


def run_threshold(horizon: int) -> int:
    """Run length that counts as 'long' when only ``[0, horizon]`` is visible."""
    return max(2, math.isqrt(horizon + 1))


@dataclass(frozen=True)
class HorizonProfile:
    horizon: int
    longest_run: int
    run_at: int | None
    longest_gap: int
    gap_at: int | None


def horizon_profile(s: RangeSet, horizon: int) -> HorizonProfile:
    """Longest run of ``s`` and of its complement inside ``[0, horizon]``."""
    t = s.truncate(horizon)
    best_run, run_at = 0, None
    for a, b in t.ranges:
        if b - a + 1 > best_run:
            best_run, run_at = b - a + 1, a
    best_gap, gap_at = 0, None
    for a, b in t.complement().truncate(horizon).ranges:
        if b - a + 1 > best_gap:
            best_gap, gap_at = b - a + 1, a
    return HorizonProfile(horizon, best_run, run_at, best_gap, gap_at)


# --------------------------------------------------------------------------
# block families

@dataclass(frozen=True)
class BlockFamily:
    """Blocks ``[lo(k), hi(k)]`` for ``k >= k0``, increasing and separated."""

    lo: Callable[[int], Int]
    hi: Callable[[int], Int]
    k0: int
    label: str = ""
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def block(self, k: int) -> tuple[Int, Int]:
        if k < self.k0:
            raise IndexError(k)
        b = self._cache.get(k)
        if b is None:
            b = (simplify(self.lo(k)), simplify(self.hi(k)))
            self._cache[k] = b
        return b


@dataclass(frozen=True)
class BlockFamilySet:
    """A finite head of blocks, infinite block families and an optional tail."""

    head: tuple[tuple[Int, Int], ...] = ()
    families: tuple[BlockFamily, ...] = ()
    tail: Int | None = None

    def is_finite(self) -> bool:
        return not self.families and self.tail is None

    def is_empty(self) -> bool:
        return self.is_finite() and not self.head

    def window_blocks(self, depth: int) -> list[tuple[Int, Int, str]]:
        out = [(a, b, "head") for a, b in self.head]
        for f in self.families:
            for k in range(f.k0, f.k0 + depth + 1):
                a, b = f.block(k)
                out.append((a, b, f"{f.label}[{k}]"))
        return out

    def contains(self, n: int, depth: int = 64) -> bool:
        if self.tail is not None and int_cmp(n, self.tail) >= 0:
            return True
        for a, b in self.head:
            if int_cmp(a, n) <= 0 <= int_cmp(b, n):
                return True
        for f in self.families:
            for k in range(f.k0, f.k0 + depth + 1):
                a, b = f.block(k)
                if int_cmp(a, n) > 0:
                    break
                if int_cmp(b, n) >= 0:
                    return True
            else:
                raise Inconclusive(f"{n} lies beyond {depth} blocks of {f.label}")
        return False

    def materialize(self, horizon: int, max_blocks: int = 10**6) -> RangeSet:
        """Exact ``RangeSet`` of the members in ``[0, horizon]``."""
        rs = []

        def add(a, b) -> bool:
            if int_cmp(a, horizon) > 0:
                return False
            rs.append((materialize(a), horizon if int_cmp(b, horizon) > 0 else materialize(b)))
            return True

        for a, b in self.head:
            add(a, b)
        for f in self.families:
            k = f.k0
            while k < f.k0 + max_blocks and add(*f.block(k)):
                k += 1
        if self.tail is not None and int_cmp(self.tail, horizon) <= 0:
            rs.append((materialize(self.tail), horizon))
        return RangeSet((max(a, 0), b) for a, b in rs if b >= 0)

    def union(self, other: "BlockFamilySet") -> "BlockFamilySet":
        tails = [t for t in (self.tail, other.tail) if t is not None]
        tail = None
        for t in tails:
            tail = t if tail is None else (t if int_cmp(t, tail) < 0 else tail)
        return BlockFamilySet(self.head + other.head, self.families + other.families, tail)

    def complement(self, depth: int = 4) -> "BlockFamilySet":
        """Complement for at most one family whose blocks follow the head."""
        if len(self.families) > 1:
            raise NotImplementedError("complement of several interleaved families")
        if self.tail is not None:
            raise NotImplementedError("complement of a set with a tail")
        blocks = [(a, b) for a, b in self.head]
        fam = self.families[0] if self.families else None
        if fam is not None:
            first = fam.block(fam.k0)
            for a, b in blocks:
                if int_cmp(b, first[0]) >= 0:
                    raise ValueError("head blocks must precede the family")
            blocks.append(first)
        groups = _merge(sorted(((a, b, "") for a, b in blocks), key=_lo_key))
        head, nxt = [], 0
        for g in groups:
            if int_cmp(g.lo, nxt) > 0:
                head.append((nxt, simplify(g.lo - 1)))
            nxt = simplify(g.hi + 1)
        if fam is None:
            return BlockFamilySet(tuple(head), (), nxt)
        gap = BlockFamily(lambda k, f=fam: f.block(k)[1] + 1,
                          lambda k, f=fam: f.block(k + 1)[0] - 1,
                          fam.k0, f"gaps({fam.label})")
        for k in range(fam.k0, fam.k0 + depth + 1):
            a, b = gap.block(k)
            if int_cmp(a, b) > 0:
                raise ValueError(f"family {fam.label} has touching blocks at k={k}")
        return BlockFamilySet(tuple(head), (gap,))


def _lo_key(block):
    return functools.cmp_to_key(int_cmp)(block[0])


@dataclass
class _Group:
    lo: Int
    hi: Int
    members: list


def _merge(blocks) -> list[_Group]:
    groups: list[_Group] = []
    for a, b, tag in blocks:
        if groups and int_cmp(a, groups[-1].hi + 1) <= 0:
            g = groups[-1]
            g.members.append((tag, simplify(g.hi + 1 - a)))
            g.hi = int_max(g.hi, b)
        else:
            groups.append(_Group(a, b, [(tag, None)]))
    return groups


# --------------------------------------------------------------------------
# classification

@dataclass(frozen=True)
class Classification:
    label: str  # cofinite | syndetic_thick | syndetic | thick | none
    cofinite: bool
    syndetic: bool
    thick: bool
    scope: str | int  # "asymptotic" or a horizon
    certificate: dict

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "cofinite": self.cofinite,
            "syndetic": self.syndetic,
            "thick": self.thick,
            "scope": self.scope if isinstance(self.scope, str) else {"horizon": str(self.scope)},
            "certificate": self.certificate,
        }


def _label(cofinite, syndetic, thick) -> str:
    if cofinite:
        return "cofinite"
    if syndetic and thick:
        return "syndetic_thick"
    if syndetic:
        return "syndetic"
    if thick:
        return "thick"
    return "none"


def classify(s, horizon: int | None = None, depth: int = 12) -> Classification:
    """Strongest of cofinite / syndetic / thick that ``s`` satisfies, with a certificate.

    For a tail-free ``RangeSet`` the answer is relative to ``horizon``: a run
    (or gap) is long when it reaches ``run_threshold(horizon)``.
    """
    if isinstance(s, BlockFamilySet):
        return _classify_blocks(s, depth)
    if s.tail is not None:
        prefix_gap = horizon_profile(s, s.tail).longest_gap if s.tail > 0 else 0
        cert = {"kind": "cofinite", "tail": str(s.tail), "window": str(prefix_gap + 1)}
        return Classification("cofinite", True, True, True, "asymptotic", cert)
    if horizon is None:
        raise ValueError("a tail-free RangeSet needs a horizon")
    return classify_at_horizon(s, horizon)


def classify_at_horizon(s: RangeSet, horizon: int) -> Classification:
    if horizon < 3:
        raise Inconclusive("horizon too short to tell runs from gaps", horizon)
    p = horizon_profile(s, horizon)
    r = run_threshold(horizon)
    syndetic = p.longest_gap < r
    thick = p.longest_run >= r
    cert = {
        "kind": _label(False, syndetic, thick),
        "horizon": str(horizon),
        "long_run_threshold": str(r),
        "window": str(p.longest_gap + 1),
        "max_gap": {"length": str(p.longest_gap), "at": None if p.gap_at is None else str(p.gap_at)},
        "max_run": {"length": str(p.longest_run), "at": None if p.run_at is None else str(p.run_at)},
    }
    return Classification(_label(False, syndetic, thick), False, syndetic, thick, horizon, cert)


def duality_check(s: RangeSet, horizon: int) -> bool:
    """Self-test: syndetic iff the complement is not thick, and vice versa."""
    a = classify_at_horizon(s.truncate(horizon), horizon)
    b = classify_at_horizon(s.truncate(horizon).complement().truncate(horizon), horizon)
    return a.syndetic == (not b.thick) and a.thick == (not b.syndetic)


def _trend(seq: Sequence[Int]) -> tuple[str, str]:
    """('unbounded' | 'bounded' | 'unknown', evidence) for a sampled sequence."""
    if len(seq) >= 2 and all(int_cmp(x, y) < 0 for x, y in zip(seq, seq[1:])):
        tops = [x.top_index if isinstance(x, TowerSum) else 0 for x in seq]
        if all(t1 < t2 for t1, t2 in zip(tops, tops[1:])):
            return "unbounded", "dominance"
        return "unbounded", "sampled"
    if all(isinstance(x, int) for x in seq):
        half = len(seq) // 2
        if not seq or max(seq[half:]) <= max(seq[: half + 1]):
            return "bounded", "sampled"
    return "unknown", "sampled"


def _classify_blocks(s: BlockFamilySet, depth: int) -> Classification:
    if s.tail is not None and not s.families:
        blocks = sorted(((a, b, "head") for a, b in s.head), key=_lo_key)
        groups = _merge(blocks + [(s.tail, s.tail, "tail")])
        tail = groups[-1].lo
        cert = {"kind": "cofinite", "tail": int_to_json(tail), "mode": "exact"}
        return Classification("cofinite", True, True, True, "asymptotic", cert)
    if s.is_finite():
        if not s.head:
            cert = {"kind": "finite", "empty": True}
        else:
            top = functools.reduce(int_max, (b for _, b in s.head))
            cert = {"kind": "finite", "empty": False, "max_element": int_to_json(top)}
        return Classification("none", False, False, False, "asymptotic", cert)

    blocks = s.window_blocks(depth)
    cutoff = None
    for f in s.families:
        lo_last = f.block(f.k0 + depth)[0]
        cutoff = lo_last if cutoff is None or int_cmp(lo_last, cutoff) < 0 else cutoff
    settled = [b for b in blocks if int_cmp(b[0], cutoff) <= 0]
    if s.tail is not None:
        settled.append((s.tail, s.tail, "tail"))
    groups = _merge(sorted(settled, key=_lo_key))
    fam_idx = [i for i, g in enumerate(groups) if any(t != "head" for t, _ in g.members)]
    first = fam_idx[0]
    mode = "sampled+dominance" if any(isinstance(b[1], TowerSum) for b in blocks) else "sampled"

    if first == len(groups) - 1:
        g = groups[-1]
        prefix = [groups[0].lo] + [simplify(groups[i + 1].lo - groups[i].hi - 1)
                                   for i in range(len(groups) - 1)]
        window = functools.reduce(int_max, prefix) + 1
        cert = {
            "kind": "cofinite",
            "tail": int_to_json(g.lo),
            "window": int_to_json(simplify(window)),
            "mode": mode,
            "blocks_checked": depth + 1,
            "interleaving": [{"block": t, "overlap": int_to_json(o)} for t, o in g.members if o is not None],
        }
        return Classification("cofinite", True, True, True, "asymptotic", cert)

    closed = groups[first:-1]
    if len(closed) < 3:
        raise Inconclusive(f"only {len(closed)} settled block groups; increase depth")
    runs = [simplify(g.hi - g.lo + 1) for g in closed]
    gaps = [simplify(groups[i + 1].lo - groups[i].hi - 1) for i in range(first, len(groups) - 1)]
    run_trend, run_ev = _trend(runs)
    gap_trend, gap_ev = _trend(gaps)
    if "unknown" in (run_trend, gap_trend):
        raise Inconclusive(f"run trend {run_trend}, gap trend {gap_trend} over {depth} blocks")
    thick = run_trend == "unbounded"
    syndetic = gap_trend == "bounded"
    prefix = [groups[0].lo] + [simplify(groups[i + 1].lo - groups[i].hi - 1) for i in range(first)]
    cert = {
        "kind": _label(False, syndetic, thick),
        "mode": mode,
        "blocks_checked": depth + 1,
        "runs": [{"lo": int_to_json(g.lo), "hi": int_to_json(g.hi), "width": int_to_json(w)}
                 for g, w in zip(closed, runs)],
        "run_trend": {"trend": run_trend, "evidence": run_ev},
        "gaps": [int_to_json(x) for x in gaps],
        "gap_trend": {"trend": gap_trend, "evidence": gap_ev},
    }
    if syndetic:
        gmax = max(gaps)
        at = gaps.index(gmax)
        cert["gap_bound"] = str(gmax + 1)
        cert["max_gap_witness"] = {"after": int_to_json(groups[first + at].hi), "gap": str(gmax)}
        cert["window"] = int_to_json(simplify(functools.reduce(int_max, prefix + gaps) + 1))
    if not thick:
        cert["run_bound"] = str(max(runs))
    return Classification(_label(False, syndetic, thick), False, syndetic, thick, "asymptotic", cert)
