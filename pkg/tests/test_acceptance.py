"""Acceptance criteria 1-8; each test prints one PASS/FAIL line."""
import time
from fractions import Fraction

import pytest

from semiflow_lab.cascade import FULL, TrackedSet, image_diameter, make_cascade, make_product, oracle_diameters
from semiflow_lab.claims import CLAIM_IDS, DEFAULT_HORIZON, LONG_RUN, complement_runs, interleaving_rows, verify_claim
from semiflow_lab.exact import BudgetExceeded, int_cmp, int_from_json, materialize
from semiflow_lab.index_sets import classify
from semiflow_lab.layout import TOWER_EX2, preset_layout
from semiflow_lab.literal import item_checks, pow_sum
from semiflow_lab.sensitivity import (
    classify_notion, n_set, non_sensitivity_witness, product_n_set, shrink_run_certificate,
)

from test_properties import MIN_CASES, SUITES, run_suite


@pytest.fixture
def verdict(capsys):
    def emit(number, ok, detail=""):
        with capsys.disabled():
            print(f"\nCRITERION {number}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail
    return emit


def test_criterion_1_plateau_diameters(verdict):
    t0 = time.time()
    x = preset_layout("ex1_x")
    shrink_lo, shrink_hi = 8, 262152
    shrink_ok = all(x.length_at(n) == Fraction(1, 4) for n in range(shrink_lo, shrink_hi + 1))
    # the grow plateau starts right after, at 2^L1 + 2^L2 + 5
    grow_lo = materialize(pow_sum(x, 1, 2) + 5)
    grow_ok = grow_lo == shrink_hi + 1 and all(x.length_at(n) == 4 for n in range(grow_lo, grow_lo + 10**5))
    grow_ok = grow_ok and x.length_at(pow_sum(x, 1, 3) + 5) == 4 and x.length_at(pow_sum(x, 1, 3) + 6) != 4
    symbolic = item_checks(12)
    sym_ok = all(c.agrees for c in symbolic if c.branch != "shrink plateau offset")
    elapsed = time.time() - t0
    ok = shrink_ok and grow_ok and sym_ok and elapsed < 60
    verdict(1, ok, f"shrink k=1 n in [8,262152]: {shrink_ok}; grow block from {grow_lo}: {grow_ok}; "
                   f"symbolic k<=12: {sym_ok}; {elapsed:.1f}s")


def test_criterion_2_oracle_equivalence(verdict):
    t0 = time.time()
    rows = []
    for system, n_max in (("ex1_x", 3 * 10**5), ("ex1_y", 3 * 10**5), ("ex2_x", 4)):
        c = make_cascade(system)
        got = oracle_diameters(c, FULL, n_max)
        bad = sum(d != image_diameter(c, FULL, n) for n, d in enumerate(got))
        rows.append(f"{system} n<={n_max}: {bad} mismatches")
        if system == "ex2_x":
            s = TrackedSet(0, Fraction(1, 3), Fraction(5, 7))
            bad += sum(d != image_diameter(c, s, n) for n, d in enumerate(oracle_diameters(c, s, n_max)))
        rows[-1] = f"{system} n<={n_max}: {bad} mismatches"
    elapsed = time.time() - t0
    ok = all(r.endswith(": 0 mismatches") for r in rows) and elapsed < 300
    verdict(2, ok, "; ".join(rows) + f"; {elapsed:.1f}s")


def test_criterion_3_not_syndetic(verdict):
    runs, symbolic = [], []
    for system in ("ex1_x", "ex1_y"):
        c = make_cascade(system)
        for eps in (Fraction(1, 4), Fraction(1, 10), Fraction(1, 1000)):
            info = complement_runs(c, eps, DEFAULT_HORIZON)
            runs.append((system, str(eps), int(info["longest_run_outside_N"])))
            cl = classify(n_set(c, FULL, eps))
            symbolic.append(not cl.syndetic and cl.certificate["gap_trend"] == {"trend": "unbounded",
                                                                              "evidence": "dominance"})
        symbolic.append(shrink_run_certificate(c)["holds"])
    runs_ok = all(r >= LONG_RUN for _, _, r in runs)
    detail = ", ".join(f"{s} eps={e}: longest run {r}" for s, e, r in runs)
    verdict(3, runs_ok and all(symbolic), f"runs >= 2^18 within {DEFAULT_HORIZON}: {runs_ok} ({detail}); "
                                          f"symbolic not-syndetic: {all(symbolic)}")


def test_criterion_4_product_cofinite(verdict):
    cl = classify(product_n_set(make_product(), FULL, FULL, 1))
    failures, checked = [], 0
    for p in range(3):
        for q in range(3):
            K = 2 * (p + q) + 1
            for row in interleaving_rows(p, q, K, max(10, K + 10)):
                checked += 1
                if not (row["first"] and row["second"]):
                    failures.append((p, q, row["k"]))
    below = sum(not (r["first"] and r["second"])
                for p in range(3) for q in range(3) for r in interleaving_rows(p, q, 1, 2 * (p + q)))
    ok = cl.cofinite and not failures
    verdict(4, ok, f"cofinite: {cl.cofinite} (tail {materialize(int_from_json(cl.certificate['tail']))}); "
                   f"{checked} inequality rows for k >= K, failures {failures}; {below} rows fail below K")


def test_criterion_5_thick(verdict):
    c = make_cascade("ex1_x")
    v = classify_notion(c, 1, "thick")
    runs = classify(n_set(c, FULL, 1), depth=12).certificate["runs"]
    widths = [int_from_json(r["width"]) for r in runs[:13]]
    increasing = len(widths) >= 12 and all(int_cmp(a, b) < 0 for a, b in zip(widths, widths[1:]))
    verdict(5, v.holds and increasing, f"thick verdict: {v.holds}; {len(widths)} run widths strictly increasing: "
                                       f"{increasing}")


def test_criterion_6_ex2_system(verdict):
    c = make_cascade("ex2_x")
    exact = [image_diameter(c, FULL, 2 * n) == Fraction(1, 2 * n) for n in (1, 2)]
    symbolic = all(c.layout.length_at(2 * n) == Fraction(1, 2 * n) for n in range(1, 13))
    l4 = TOWER_EX2.offset_value(4) == 70 + 2**70
    try:
        TOWER_EX2.offset_value(5)
        l5_blocked = False
    except BudgetExceeded:
        l5_blocked = True
    v = classify_notion(c, 1, "syndetic")
    gap = v.certificate["generators"][0]["classification"]["certificate"].get("gap_bound")
    restricted = make_cascade("ex2_x", "paper", 2)
    witnesses = []
    for eps in (Fraction(1), Fraction(1, 2), Fraction(1, 100)):
        s, cert = non_sensitivity_witness(restricted, eps)
        witnesses.append(cert["n_set_empty"] and s.width * Fraction(cert["sup_length"]) <= eps)
    ok = all(exact) and symbolic and l4 and l5_blocked and v.holds and gap == "2" and all(witnesses)
    verdict(6, ok, f"1/(2n) exact n=1,2: {all(exact)}; symbolic n<=12: {symbolic}; L4 materialized: {l4}; "
                   f"L5 over budget: {l5_blocked}; syndetic: {v.holds} gap {gap}; witnesses: {witnesses}")


def test_criterion_7_property_suites(verdict):
    counts = {}
    failed = []
    for name in SUITES:
        try:
            counts.update(run_suite(name))
        except Exception as e:  # a falsified property
            failed.append(f"{name}: {type(e).__name__}")
    ok = not failed and all(n >= MIN_CASES for n in counts.values())
    verdict(7, ok, f"cases per property {counts}; failures {failed or 'none'}")


def test_criterion_8_scaled_preset(verdict):
    rows = {}
    levels = []
    for cid in CLAIM_IDS:
        doc = verify_claim(cid, "scaled").to_json()
        rows[cid] = doc["pass"]
        for chk in doc["checks"]:
            if chk["name"].startswith("stepwise oracle") and isinstance(chk["detail"], dict):
                levels.append(chk["detail"]["levels_reached"])
                rows[cid] = rows[cid] and chk["detail"]["mismatches"] == 0
    blocks = min(levels) // 2 if levels else 0
    ok = all(rows.values()) and blocks >= 6
    verdict(8, ok, f"claims passing on scaled preset: {sum(rows.values())}/8; "
                   f"stepwise-verified blocks: {blocks} (levels {min(levels) if levels else 0})")
