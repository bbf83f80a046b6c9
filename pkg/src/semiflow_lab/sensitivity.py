"""Sensitivity sets ``N(U, eps)`` and the five sensitivity notions.

Every nonempty open set of a layout space contains an image
``f^p([alpha, beta])`` of a piece of ``I_0``, so open sets are quantified
through *generators* ``TrackedSet(p, alpha, beta)``.  For a generator the
set ``N`` is ``{n : w * |I_{p + m n}| > eps}`` with ``w = beta - alpha``, i.e.
a union of whole level ranges selected by the threshold ``eps / w``.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cascade import FULL, LayoutCascade, ProductCascade, TrackedSet, make_cascade, make_product
from .exact import (
    BudgetExceeded, Inconclusive, Int, TowerSum, int_cmp, int_from_json, int_max, int_to_json, materialize,
    rational,
    rational_str, simplify,
)
from .index_sets import (
    BlockFamily, BlockFamilySet, Classification, RangeSet, _trend, classify, classify_at_horizon,
)
from .layout import SpaceLayout

MAX_LEVELS = 4096
DEFAULT_WIDTHS = (Fraction(1), Fraction(1, 2), Fraction(1, 3), Fraction(1, 10), Fraction(1, 100))
NOTIONS = ("sensitive", "syndetic", "thick", "cofinite")


class NoWitnessFound(Exception):
    """The cascade is sensitive at this eps; ``certificate`` says why."""

    def __init__(self, message: str, certificate: dict):
        super().__init__(message)
        self.certificate = certificate


# --------------------------------------------------------------------------
# verdicts

@dataclass(frozen=True)
class SensitivityVerdict:
    notion: str  # sensitive | syndetic | thick | cofinite | multi | not_sensitive
    holds: bool
    epsilon: Fraction
    scope: str | int
    certificate: dict
    replay: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "notion": self.notion,
            "holds": self.holds,
            "epsilon": rational_str(self.epsilon),
            "scope": self.scope if isinstance(self.scope, str) else {"horizon": str(self.scope)},
            "certificate": self.certificate,
            "replay": self.replay,
        }


def _mode(horizon):
    return "symbolic" if horizon is None else {"horizon": str(horizon)}


def _describe(c) -> dict:
    return c.describe()


# --------------------------------------------------------------------------
# N(U, eps) for one generator

def _n_range(lo: Int, hi: Int, j0: int, m: int) -> tuple[Int, Int] | None:
    """Times ``n >= 0`` with ``lo <= j0 + m n <= hi``."""
    if m == 1:
        a, b = simplify(lo - j0), simplify(hi - j0)
        if int_cmp(b, 0) < 0:
            return None
        return (0 if int_cmp(a, 0) < 0 else a), b
    if isinstance(lo, TowerSum) or isinstance(hi, TowerSum):
        raise Inconclusive("step > 1 needs materialized level boundaries")
    a = max(0, -((j0 - lo) // m))
    b = (hi - j0) // m
    return (a, b) if a <= b and b >= 0 else None


def n_set_horizon(c: LayoutCascade, s: TrackedSet, eps, horizon: int) -> RangeSet:
    """``N`` restricted to ``[0, horizon]``, exact."""
    eps = rational(eps)
    threshold = eps / s.width
    layout, m = c.layout, c.step
    j_max = s.j + m * horizon
    out = []
    lvl = 0
    while int_cmp(layout.level(lvl).start, j_max) <= 0:
        L = layout.level(lvl)
        if L.length > threshold:
            r = _n_range(L.start, L.end, materialize(s.j), m)
            if r is not None:
                a, b = materialize(r[0]), r[1]
                b = horizon if int_cmp(b, horizon) > 0 else materialize(b)
                if a <= b:
                    out.append((a, b))
        lvl += 1
    return RangeSet(out)


def _first_level(layout: SpaceLayout, role: str, pred, start: int = 0) -> int:
    lvl = start
    while layout.role(lvl) != role:
        lvl += 1
    while not pred(layout.level(lvl)):
        lvl += 2
        if lvl > MAX_LEVELS:
            raise Inconclusive(f"no {role} level below {MAX_LEVELS} meets the threshold")
    return lvl


def _tail_level(layout: SpaceLayout, threshold: Fraction, j0: Int) -> int:
    """First grow level from which every grow level qualifies and no shrink level does."""
    g0 = _first_level(layout, "grow", lambda L: L.length > threshold)
    s0 = _first_level(layout, "shrink", lambda L: L.length <= threshold)
    lvl = g0
    while lvl < s0 or int_cmp(layout.level(lvl).start, j0) < 0:
        lvl += 2
    return lvl


def n_set_symbolic(c: LayoutCascade, s: TrackedSet, eps) -> BlockFamilySet:
    """``N`` as a finite head plus one family of grow-level blocks."""
    eps = rational(eps)
    threshold = eps / s.width
    layout, m, j0 = c.layout, c.step, s.j
    if m > 1 and layout.which == "ex2_x":
        return _single_interval_symbolic(c, s, threshold)
    if m > 1 and layout.tower is not None:
        raise Inconclusive("step > 1 on a tower layout: level boundaries are not divisible symbolically")
    t = _tail_level(layout, threshold, j0)
    head = []
    for lvl in range(t):
        L = layout.level(lvl)
        if L.length > threshold:
            r = _n_range(L.start, L.end, j0, m)
            if r is not None:
                head.append(r)

    def lo(k, t=t):
        return _n_range(layout.level(t + 2 * k).start, layout.level(t + 2 * k).end, j0, m)[0]

    def hi(k, t=t):
        return _n_range(layout.level(t + 2 * k).start, layout.level(t + 2 * k).end, j0, m)[1]

    fam = BlockFamily(lo, hi, 0, f"grow levels {t}+2k")
    return BlockFamilySet(tuple(head), (fam,))


def _single_interval_symbolic(c: LayoutCascade, s: TrackedSet, threshold: Fraction) -> BlockFamilySet:
    """One interval per level, so ``I_j`` is level ``j`` and ``n`` is hit iff ``j0 + m n = j``."""
    layout, m, j0 = c.layout, c.step, materialize(s.j)
    t = _tail_level(layout, threshold, j0)
    head = []
    for j in range(j0, t):
        if (j - j0) % m == 0 and layout.level(j).length > threshold:
            n = (j - j0) // m
            head.append((n, n))
    period = math.lcm(2, m)
    first = next((j for j in range(t, t + period) if j % 2 == t % 2 and (j - j0) % m == 0), None)
    if first is None:
        return BlockFamilySet(tuple(head))
    step_n = period // m
    n0 = (first - j0) // m
    fam = BlockFamily(lambda k: n0 + step_n * k, lambda k: n0 + step_n * k, 0,
                      f"grow levels {first}+{period}k")
    return BlockFamilySet(tuple(head), (fam,))


def n_set(c: LayoutCascade, s: TrackedSet, eps, horizon: int | None = None):
    """``{n : diam f^{m n}(s) > eps}``: a ``RangeSet`` up to ``horizon`` or a symbolic ``BlockFamilySet``."""
    if rational(eps) <= 0:
        raise ValueError("eps must be positive")
    if horizon is not None:
        return n_set_horizon(c, s, eps, horizon)
    return n_set_symbolic(c, s, eps)


def product_n_set(pc: ProductCascade, s1: TrackedSet, s2: TrackedSet, eps, horizon: int | None = None):
    """Under the max metric ``N(U x V) = N(U) | N(V)`` exactly."""
    return n_set(pc.left, s1, eps, horizon).union(n_set(pc.right, s2, eps, horizon))


# --------------------------------------------------------------------------
# classification over generators

def _generators(c, shifts: Sequence[int], widths: Sequence[Fraction]):
    if isinstance(c, ProductCascade):
        for p in shifts:
            for q in shifts:
                for w in widths:
                    yield (TrackedSet(p, 0, w), TrackedSet(q, 0, w))
    else:
        for p in shifts:
            for w in widths:
                yield (TrackedSet(p, 0, w),)


def _gen_json(gen) -> list:
    return [g.to_json() for g in gen]


def generator_n_set(c, gen, eps, horizon=None):
    if isinstance(c, ProductCascade):
        return product_n_set(c, gen[0], gen[1], eps, horizon)
    return n_set(c, gen[0], eps, horizon)


def _nonempty(ns) -> bool:
    return not ns.is_empty()


_SUMMARY_KEYS = ("tail", "gap_bound", "window", "run_bound", "run_trend", "gap_trend")


def _summary(cl: Classification) -> dict:
    """Label and the headline fields of a classification certificate."""
    cert = {k: cl.certificate[k] for k in _SUMMARY_KEYS if k in cl.certificate}
    return {"label": cl.label, "scope": cl.to_json()["scope"], "certificate": cert}


def _classify_n(ns, horizon, depth) -> Classification:
    if isinstance(ns, RangeSet):
        return classify_at_horizon(ns, horizon) if ns.tail is None else classify(ns)
    return classify(ns, depth=depth)


def classify_notion(c, eps, notion: str, horizon: int | None = None, *, depth: int = 12,
                    shifts: Sequence[int] | None = None,
                    widths: Sequence[Fraction] = DEFAULT_WIDTHS) -> SensitivityVerdict:
    """Does every generator's ``N`` have the property ``notion``?

    Shifting a generator by ``p`` shifts ``N`` by ``p``, and the width only
    moves the level from which the grow-level family starts, so the asymptotic
    class is decided by the tail family; shifts cover every residue of the step.
    """
    if notion not in NOTIONS:
        raise ValueError(f"unknown notion {notion!r}")
    eps = rational(eps)
    step = c.step if isinstance(c, LayoutCascade) else 1
    if shifts is None:
        shifts = range(max(3, step))
    widths = [rational(w) for w in widths]
    rows, holds, failing = [], True, None
    tail_empty = False
    for gen in _generators(c, shifts, widths):
        ns = generator_n_set(c, gen, eps, horizon)
        nonempty = _nonempty(ns)
        if isinstance(ns, BlockFamilySet) and not ns.families and ns.tail is None:
            tail_empty = True
        try:
            cl = _classify_n(ns, horizon, depth) if nonempty else None
        except Inconclusive:
            if horizon is None:
                raise
            cl = None
        ok = nonempty and (notion == "sensitive" or (cl is not None and getattr(cl, notion)))
        row = {"generator": _gen_json(gen), "nonempty": nonempty, "holds": ok,
               "classification": None if cl is None else (cl.to_json() if not rows else _summary(cl))}
        rows.append(row)
        if not ok and holds:
            holds, failing = False, row
    if notion == "sensitive" and holds and tail_empty:
        holds = False
        failing = next(r for r in rows if r["holds"])
    cert = {
        "kind": f"{notion}_over_generators",
        "reduction": "generator (p, 0, w): N is a p-shift of the p = 0 set at threshold eps / w",
        "shifts": [str(p) for p in shifts],
        "widths": [rational_str(w) for w in widths],
        "generators": rows,
        "failing_generator": failing,
    }
    if isinstance(c, ProductCascade):
        cert["product_metric"] = "max; N(U x V) equals N(U) | N(V)"
    if holds and horizon is None:
        cert["uniformity"] = ("every generator's set ends in the same grow-level family, "
                              "so the verdict does not depend on the sampled width")
    replay = {"cascade": _describe(c), "notion": notion, "epsilon": rational_str(eps),
              "mode": _mode(horizon), "depth": depth, "shifts": [int(p) for p in shifts],
              "widths": [rational_str(w) for w in widths]}
    return SensitivityVerdict(notion, holds, eps, "asymptotic" if horizon is None else horizon, cert, replay)


# --------------------------------------------------------------------------
# the "not syndetic for every eps" schedule certificate

def shrink_run_certificate(c: LayoutCascade, eps_samples: Sequence = (Fraction(1, 4), Fraction(1, 10),
                                                                    Fraction(1, 1000)),
                           depth: int = 12) -> dict:
    """For every eps > 0, ``N([0, 1], eps)`` misses whole shrink levels of unbounded size.

    Shrink lengths tend to 0, so beyond a finite level ``K(eps)`` every shrink
    level is outside ``N``; the level sizes do not depend on eps and increase
    with the tower index (dominance rule).
    """
    if c.step != 1:
        raise ValueError("schedule certificate is for the unrestricted cascade")
    layout = c.layout
    first = _first_level(layout, "shrink", lambda L: True)
    levels = [first + 2 * k for k in range(depth + 1)]
    widths = [layout.level(l).count for l in levels]
    trend, evidence = _trend(widths)
    lengths_decrease = all(layout.level(a).length > layout.level(b).length for a, b in zip(levels, levels[1:]))
    samples = []
    for eps in eps_samples:
        eps = rational(eps)
        k = _first_level(layout, "shrink", lambda L, e=eps: L.length <= e)
        L = layout.level(k)
        samples.append({
            "epsilon": rational_str(eps),
            "first_excluded_shrink_level": k,
            "level_length": rational_str(L.length),
            "gap_in_N": {"lo": int_to_json(L.start), "hi": int_to_json(L.end), "width": int_to_json(L.count)},
        })
    return {
        "kind": "unbounded_gaps_for_all_eps",
        "shrink_levels": levels,
        "shrink_lengths_decrease_to_zero": lengths_decrease,
        "level_sizes": [int_to_json(w) for w in widths],
        "size_trend": {"trend": trend, "evidence": evidence},
        "K_of_eps": "first shrink level whose length is <= eps; finite for every eps > 0",
        "samples": samples,
        "holds": lengths_decrease and trend == "unbounded",
    }


# --------------------------------------------------------------------------
# multi-sensitivity

def _witness(common: RangeSet) -> int | None:
    """Least positive common time, falling back to 0."""
    w = common.min_element(1)
    return common.min_element(0) if w is None else w


def multi_sensitive_check(c: LayoutCascade | ProductCascade, sets: Sequence, eps, horizon: int | None = None,
                          search: int = 10**6) -> SensitivityVerdict:
    """Do the ``N``-sets of ``sets`` share a time?  The witness is the least positive common time if any.

    For a product cascade each entry of ``sets`` is a pair of tracked sets.
    """
    if not sets:
        raise ValueError("need at least one set")
    eps = rational(eps)
    gens = [tuple(s) if isinstance(c, ProductCascade) else (s,) for s in sets]
    replay = {"cascade": _describe(c), "sets": [_gen_json(g) if len(g) > 1 else g[0].to_json() for g in gens],
              "epsilon": rational_str(eps), "mode": _mode(horizon)}
    nss = [generator_n_set(c, g, eps, horizon) for g in gens]
    if horizon is not None:
        common = nss[0]
        for ns in nss[1:]:
            common = common & ns
        w = _witness(common)
        cert = {"kind": "common_time" if w is not None else "empty_over_horizon",
                "witness": None if w is None else str(w), "common": common.to_json()}
        return SensitivityVerdict("multi", w is not None, eps, horizon, cert, replay)

    cls = [classify(ns) if not ns.is_empty() else None for ns in nss]
    if all(cl is not None and cl.cofinite for cl in cls):
        tails = [cl.certificate["tail"] for cl in cls]
        tail = int_to_json(functools.reduce(int_max, (int_from_json(t) for t in tails)))
        cert = {"kind": "cofinite_intersection", "tails": tails, "witness": tail}
        return SensitivityVerdict("multi", True, eps, "asymptotic", cert, replay)
    if any(ns.is_finite() for ns in nss):
        finite = [ns for ns in nss if ns.is_finite()]
        cap = max((materialize(b) for ns in finite for _, b in ns.head), default=-1)
        common = None
        for ns in nss:
            r = ns.materialize(max(cap, 0))
            common = r if common is None else common & r
        w = _witness(common) if cap >= 0 else None
        cert = {"kind": "common_time" if w is not None else "empty_intersection",
                "witness": None if w is None else str(w),
                "finite_sets_bound": str(cap),
                "proof": "one set is finite, so the intersection is decided below its largest element"}
        return SensitivityVerdict("multi", w is not None, eps, "asymptotic", cert, replay)
    h = 16
    while True:
        common = None
        for ns in nss:
            r = ns.materialize(h)
            common = r if common is None else common & r
        w = _witness(common)
        if w is not None:
            break
        if h >= search:
            raise Inconclusive("no common time found", search)
        h = min(4 * h, search)
    cert = {"kind": "common_time", "witness": str(w), "searched_to": str(h)}
    return SensitivityVerdict("multi", True, eps, "asymptotic", cert, replay)


# --------------------------------------------------------------------------
# non-sensitivity witness

def _reachable_sup(c: LayoutCascade, j0: int) -> tuple[Fraction | None, dict]:
    """Sup of ``|I_{j0 + m n}|`` over ``n >= 0`` in closed form, or None if unbounded."""
    layout, m = c.layout, c.step
    if layout.which == "ex2_x":
        grow_hit = any((j - j0) % m == 0 and layout.role(j) == "grow" for j in range(j0, j0 + 2 * m))
        if grow_hit:
            return None, {"reason": "a grow level is reached infinitely often"}
        lens = [layout.level(j).length for j in range(j0, j0 + 2 * m + 1) if (j - j0) % m == 0]
        sup = max(lens)
        return sup, {"reached_levels": f"j = {j0} + {m}n, never a grow level",
                     "sup_attained_at": rational_str(sup),
                     "reason": "reached lengths are 1 at level 0 then the decreasing shrink lengths"}
    return None, {"reason": "every grow level has at least one interval reachable from any start"}


def non_sensitivity_witness(c: LayoutCascade, eps, horizon: int | None = None) -> tuple[TrackedSet, dict]:
    """A generator whose whole forward diameter sequence stays ``<= eps``."""
    eps = rational(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if horizon is not None:
        ns_full = n_set_horizon(c, FULL, Fraction(0) + eps, horizon)
        layout = c.layout
        sup = max(layout.length_at(c.step * n) for n in range(horizon + 1)) if horizon <= 10**5 else None
        if sup is None:
            raise BudgetExceeded(horizon, 10**5, "horizon for a witness scan")
        beta = min(Fraction(1), eps / (2 * sup))
        w = TrackedSet(0, 0, beta)
        assert n_set_horizon(c, w, eps, horizon).is_empty()
        return w, {"kind": "witness_over_horizon", "horizon": str(horizon), "sup": rational_str(sup),
                   "beta": rational_str(beta), "unrestricted_set": ns_full.to_json()}
    for j0 in range(c.step):
        sup, why = _reachable_sup(c, j0)
        if sup is not None:
            beta = min(Fraction(1), eps / (2 * sup))
            w = TrackedSet(j0, 0, beta)
            ns = n_set_symbolic(c, w, eps)
            cert = {"kind": "bounded_orbit_diameters", "generator": w.to_json(), "sup_length": rational_str(sup),
                    "bound": rational_str(beta * sup), "epsilon": rational_str(eps), "detail": why,
                    "n_set_empty": ns.is_empty()}
            if not ns.is_empty():
                raise AssertionError("witness has a nonempty N-set")
            return w, cert
    # sensitive at this eps: every generator eventually exceeds eps
    rows = []
    for beta in (Fraction(1), Fraction(1, 1000)):
        try:
            ns = n_set_symbolic(c, TrackedSet(0, 0, beta), eps)
        except Inconclusive:
            rows.append({"beta": rational_str(beta), "first_growth_time": None,
                         "family": f"first qualifying grow level lies past level {MAX_LEVELS}"})
            continue
        fam = ns.families[0]
        a, _ = fam.block(fam.k0)
        rows.append({"beta": rational_str(beta), "first_growth_time": int_to_json(a),
                     "family": fam.label})
    raise NoWitnessFound(f"{c.name} is sensitive at eps={eps}", {
        "kind": "growth_counter_certificate", "epsilon": rational_str(eps),
        "reason": _reachable_sup(c, 0)[1]["reason"], "examples": rows,
        "argument": "grow lengths are unbounded, so any width beta exceeds eps on a grow level"})


# --------------------------------------------------------------------------
# replay

def replay_verdict(v: SensitivityVerdict | dict) -> bool:
    """Recompute a verdict from its replay parameters and compare."""
    data = v.to_json() if isinstance(v, SensitivityVerdict) else v
    r = data["replay"]
    mode = r["mode"]
    horizon = None if mode == "symbolic" else int(mode["horizon"])
    c = _cascade_from(r["cascade"])
    if "notion" in r:
        again = classify_notion(c, r["epsilon"], r["notion"], horizon, depth=r["depth"],
                                shifts=r["shifts"], widths=[rational(w) for w in r["widths"]])
    else:
        def track(s):
            return TrackedSet(_int_json(s["j"]), s["alpha"], s["beta"])
        sets = [tuple(map(track, s)) if isinstance(s, list) else track(s) for s in r["sets"]]
        again = multi_sensitive_check(c, sets, r["epsilon"], horizon)
    return again.to_json() == data


def _int_json(x):
    return materialize(int_from_json(x))


def _cascade_from(d: dict):
    if "left" in d:
        return ProductCascade(_cascade_from(d["left"]), _cascade_from(d["right"]))
    return make_cascade(d["system"], d["preset"], d["step"])


__all__ = [
    "SensitivityVerdict", "NoWitnessFound", "n_set", "n_set_horizon", "n_set_symbolic", "product_n_set",
    "classify_notion", "multi_sensitive_check", "non_sensitivity_witness", "shrink_run_certificate",
    "replay_verdict", "generator_n_set", "DEFAULT_WIDTHS", "NOTIONS", "make_product",
]
