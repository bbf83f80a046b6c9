"""Property suites; each runs at least 1000 generated cases and counts them."""
from collections import Counter
from fractions import Fraction

from hypothesis import HealthCheck, given, settings, strategies as st

from semiflow_lab.cascade import (
    ProductCascade, TrackedSet, image_diameter, iterate, make_cascade, product_diameter, stepwise_oracle,
)
from semiflow_lab.index_sets import RangeSet, classify, duality_check
from semiflow_lab.sensitivity import NOTIONS, classify_notion, n_set, product_n_set

MIN_CASES = 1000
COUNTS: Counter = Counter()
PROPERTY = settings(max_examples=MIN_CASES, deadline=None, database=None,
                    suppress_health_check=[HealthCheck.too_slow])

SYSTEMS = [make_cascade(w, "scaled", m) for w in ("ex1_x", "ex1_y", "ex2_x") for m in (1, 2, 3)]
SYSTEMS += [make_cascade("ex1_x"), make_cascade("ex1_y"), make_cascade("ex2_x", "paper", 2)]
PAPER_EX2 = make_cascade("ex2_x")

cascades = st.sampled_from(SYSTEMS)
eps_values = st.fractions(min_value=Fraction(1, 1000), max_value=20, max_denominator=1000).filter(lambda e: e > 0)
horizons = st.integers(1, 1500)


@st.composite
def tracks(draw, j_max=60):
    a = draw(st.fractions(0, 1, max_denominator=64))
    b = draw(st.fractions(0, 1, max_denominator=64).filter(lambda x: x > a))
    return TrackedSet(draw(st.integers(0, j_max)), a, b)


@st.composite
def range_sets(draw):
    edges = sorted(set(draw(st.lists(st.integers(0, 3000), max_size=40))))
    ranges = [(edges[i], edges[i + 1]) for i in range(0, len(edges) - 1, 2)]
    tail = draw(st.one_of(st.none(), st.integers(0, 4000)))
    return RangeSet(ranges, tail)


def _subset(a: RangeSet, b: RangeSet) -> bool:
    return (a & b) == a


# ---------------------------------------------------------------- index sets

@PROPERTY
@given(range_sets(), st.integers(4, 3000))
def prop_duality(s, horizon):
    COUNTS["duality"] += 1
    assert duality_check(s, horizon)


# ---------------------------------------------------------------- N-sets

@PROPERTY
@given(cascades, tracks(), eps_values, eps_values, horizons)
def prop_monotone_in_eps(c, s, e1, e2, horizon):
    COUNTS["monotone_eps"] += 1
    lo, hi = min(e1, e2), max(e1, e2)
    assert _subset(n_set(c, s, hi, horizon), n_set(c, s, lo, horizon))


@PROPERTY
@given(cascades, tracks(), st.data(), eps_values, horizons)
def prop_monotone_in_track(c, s, data, eps, horizon):
    COUNTS["monotone_track"] += 1
    a = data.draw(st.fractions(s.alpha, s.beta, max_denominator=256).filter(lambda x: x < s.beta))
    b = data.draw(st.fractions(a, s.beta, max_denominator=256).filter(lambda x: x > a))
    inner = TrackedSet(s.j, a, b)
    assert _subset(n_set(c, inner, eps, horizon), n_set(c, s, eps, horizon))


@PROPERTY
@given(st.sampled_from(SYSTEMS[:9]), st.sampled_from(SYSTEMS[:9]), tracks(), tracks(), eps_values,
       st.integers(1, 400))
def prop_product_law(c1, c2, s1, s2, eps, horizon):
    COUNTS["product"] += 1
    pc = ProductCascade(c1, c2)
    direct = RangeSet.from_elements(n for n in range(horizon + 1) if product_diameter(pc, s1, s2, n) > eps)
    assert product_n_set(pc, s1, s2, eps, horizon) == direct
    assert direct == n_set(c1, s1, eps, horizon) | n_set(c2, s2, eps, horizon)


# ---------------------------------------------------------------- dynamics

@PROPERTY
@given(cascades, tracks(), st.integers(0, 10**12))
def prop_scaling_law(c, s, n):
    COUNTS["scaling"] += 1
    if c.layout.which == "ex2_x":
        n %= 1000  # one level per step, each built in turn
    elif c.layout.preset == "scaled":
        n %= 10**5
    unit = TrackedSet(s.j, 0, 1)
    assert image_diameter(c, s, n) == s.width * image_diameter(c, unit, n)


@PROPERTY
@given(st.sampled_from(SYSTEMS[:9]), tracks(j_max=30), st.integers(0, 40))
def prop_scaling_law_stepwise(c, s, n):
    COUNTS["scaling_stepwise"] += 1
    iv = s.interval(c.layout)
    assert stepwise_oracle(c, iv.hi, n) - stepwise_oracle(c, iv.lo, n) == image_diameter(c, s, n)


@PROPERTY
@given(cascades, tracks(), st.integers(0, 10**15), st.integers(0, 10**15))
def prop_semiflow_law(c, s, a, b):
    COUNTS["semiflow"] += 1
    assert iterate(c, s, a + b) == iterate(c, iterate(c, s, a), b)


@PROPERTY
@given(st.sampled_from(SYSTEMS[:9] + [PAPER_EX2]), st.fractions(0, 3, max_denominator=50), st.integers(0, 25),
       st.integers(0, 25))
def prop_semiflow_law_stepwise(c, x, a, b):
    COUNTS["semiflow_stepwise"] += 1
    if c is PAPER_EX2:
        a, b = a % 2, b % 2  # level 5 of this layout is past the budget
    if x > 1:
        x = c.layout.interval_at(1).lo + (x - 1) * c.layout.length_at(1) / 2
    assert stepwise_oracle(c, x, a + b) == stepwise_oracle(c, stepwise_oracle(c, x, a), b)


# ---------------------------------------------------------------- verdicts

def _respects_hierarchy(cofinite, syndetic, thick, sensitive) -> bool:
    return (not cofinite or (syndetic and thick)) and (not (syndetic or thick) or sensitive)


@PROPERTY
@given(range_sets(), st.integers(4, 3000))
def prop_hierarchy_sets(s, horizon):
    COUNTS["hierarchy_sets"] += 1
    cl = classify(s.truncate(horizon) if s.tail is None else s, None if s.tail is not None else horizon)
    nonempty = not s.truncate(horizon).is_empty() or s.tail is not None
    assert _respects_hierarchy(cl.cofinite, cl.syndetic, cl.thick, nonempty)


@PROPERTY
@given(st.sampled_from(SYSTEMS[:9]), eps_values, st.integers(16, 800),
       st.lists(st.integers(0, 6), min_size=1, max_size=3, unique=True),
       st.lists(st.fractions(Fraction(1, 100), 1, max_denominator=100), min_size=1, max_size=3, unique=True))
def prop_hierarchy_verdicts(c, eps, horizon, shifts, widths):
    COUNTS["hierarchy_verdicts"] += 1
    holds = {n: classify_notion(c, eps, n, horizon, shifts=shifts, widths=widths).holds for n in NOTIONS}
    assert _respects_hierarchy(holds["cofinite"], holds["syndetic"], holds["thick"], holds["sensitive"])


SUITES = {
    "duality": [prop_duality],
    "monotone_eps": [prop_monotone_in_eps],
    "monotone_track": [prop_monotone_in_track],
    "product": [prop_product_law],
    "scaling": [prop_scaling_law, prop_scaling_law_stepwise],
    "semiflow": [prop_semiflow_law, prop_semiflow_law_stepwise],
    "hierarchy": [prop_hierarchy_sets, prop_hierarchy_verdicts],
}


def run_suite(name: str) -> dict:
    """Run every property of a suite; returns the number of cases each one executed."""
    out = {}
    for prop in SUITES[name]:
        key = prop.__name__.removeprefix("prop_")
        before = sum(COUNTS.values())
        prop()
        out[key] = sum(COUNTS.values()) - before
    return out


def _check(name):
    counts = run_suite(name)
    assert all(n >= MIN_CASES for n in counts.values()), counts


def test_duality():
    _check("duality")


def test_monotone_in_eps():
    _check("monotone_eps")


def test_monotone_in_track():
    _check("monotone_track")


def test_product_law():
    _check("product")


def test_scaling_law():
    _check("scaling")


def test_semiflow_law():
    _check("semiflow")


def test_verdict_hierarchy():
    _check("hierarchy")
