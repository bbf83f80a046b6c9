"""Named, replayable verification jobs producing JSON reports."""
from __future__ import annotations

import functools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .cascade import FULL, LayoutCascade, TrackedSet, make_cascade, make_product, oracle_diameters
from .exact import BudgetExceeded, TowerSum, int_cmp, int_from_json, int_to_json, materialize, rational_str, simplify
from .index_sets import BlockFamily, BlockFamilySet, RangeSet, classify, horizon_profile
from .layout import preset_layout
from .literal import agreement_summary, discrepancy_notes, item_checks, pow_sum
from .sensitivity import (
    NoWitnessFound, SensitivityVerdict, classify_notion, multi_sensitive_check, n_set, n_set_horizon,
    non_sensitivity_witness, product_n_set, replay_verdict, shrink_run_certificate,
)

SCHEMA = "semiflow-lab/claim-report"
SCHEMA_VERSION = 1

CLAIM_IDS = (
    "ex1_claim1", "ex1_claim2", "ex1_claim3", "ex1_claim4",
    "ex2_syndetic", "ex2_restricted_not_sensitive", "remark_thick_not_syndetic", "inclusion_chain",
)
PRESET_NAMES = ("example1_paper", "example2_paper", "scaled")

DEFAULT_HORIZON = 10**6
DEFAULT_BLOCKS = 12
DEFAULT_STEPWISE = 3 * 10**5
EPS_SAMPLES = (Fraction(1, 4), Fraction(1, 10), Fraction(1, 1000))
LONG_RUN = 2**18
SCALED_STEPWISE_LEVELS = 14

STATEMENTS = {
    "ex1_claim1": "(X, f) is not syndetically sensitive",
    "ex1_claim2": "(Y, g) is not syndetically sensitive",
    "ex1_claim3": "(X x Y, f x g) is cofinitely sensitive",
    "ex1_claim4": "(X, f) is thickly sensitive",
    "ex2_syndetic": "the single-interval cascade is syndetically sensitive",
    "ex2_restricted_not_sensitive": "its restriction to the even times is not sensitive",
    "remark_thick_not_syndetic": "a thickly sensitive cascade that is not syndetically sensitive exists",
    "inclusion_chain": "N(W) contains N(U x V), which equals N(U) | N(V) under the max metric",
}


class UnknownClaim(KeyError):
    pass


class CertificateReplayFailure(RuntimeError):
    pass


@dataclass
class ClaimReport:
    claim: str
    parameters: dict
    checks: list = field(default_factory=list)
    verdicts: list = field(default_factory=list)
    discrepancies: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    replayed: bool | None = None

    def check(self, name: str, passed: bool, detail=None, required: bool = True) -> bool:
        self.checks.append({"name": name, "passed": bool(passed), "required": required, "detail": detail})
        return bool(passed)

    def verdict(self, label: str, v: SensitivityVerdict, expect: bool) -> SensitivityVerdict:
        self.verdicts.append({"label": label, "expected_holds": expect, "verdict": v.to_json()})
        self.check(f"verdict: {label}", v.holds == expect)
        return v

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks if c["required"]) and self.replayed is not False

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "version": SCHEMA_VERSION,
            "claim": self.claim,
            "statement": STATEMENTS[self.claim],
            "parameters": self.parameters,
            "pass": self.passed,
            "checks": self.checks,
            "verdicts": self.verdicts,
            "discrepancies": self.discrepancies,
            "notes": self.notes,
            "certificates_replayed": self.replayed,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


# --------------------------------------------------------------------------
# shared sub-checks

@functools.lru_cache(maxsize=None)
def _oracle(system: str, preset: str, step: int, track: tuple, n_max: int) -> tuple:
    c = make_cascade(system, preset, step)
    return tuple(oracle_diameters(c, TrackedSet(*track), n_max))


def stepwise_agreement(c: LayoutCascade, s: TrackedSet, n_max: int) -> dict:
    """Closed-form diameters against one-branch-at-a-time iteration for ``n <= n_max``."""
    track = (s.j, s.alpha, s.beta)
    got = _oracle(c.layout.which, c.layout.preset, c.step, track, n_max)
    mismatches = [n for n, d in enumerate(got) if d != c.image_diameter(s, n)]
    top = c.layout.locate(s.j + c.step * n_max).level
    return {"system": c.name, "track": s.to_json(), "n_max": n_max, "levels_reached": top,
            "mismatches": len(mismatches), "first_mismatch": mismatches[0] if mismatches else None}


def _stepwise_budget(c: LayoutCascade, stepwise: int) -> int:
    if c.layout.preset == "scaled":
        return materialize(c.layout.level(SCALED_STEPWISE_LEVELS).end) // c.step
    return stepwise


def _stepwise_check(rep: ClaimReport, c: LayoutCascade, stepwise: int, tracks=(FULL,)) -> None:
    for s in tracks:
        n = _stepwise_budget(c, stepwise)
        info = stepwise_agreement(c, s, n)
        rep.check(f"stepwise oracle agrees with closed form ({c.name})", info["mismatches"] == 0, info)


def _replay(rep: ClaimReport) -> None:
    ok = True
    for v in rep.verdicts:
        if not replay_verdict(v["verdict"]):
            ok = False
    rep.replayed = ok
    if not ok:
        raise CertificateReplayFailure(rep.claim)


def complement_runs(c: LayoutCascade, eps, horizon: int) -> dict:
    """Longest run of times ``<= horizon`` at which ``diam <= eps``."""
    ns = n_set_horizon(c, FULL, eps, horizon)
    prof = horizon_profile(ns, horizon)
    return {"epsilon": rational_str(Fraction(eps)), "horizon": str(horizon),
            "longest_run_outside_N": str(prof.longest_gap),
            "at": None if prof.gap_at is None else str(prof.gap_at),
            "at_least_2^18": prof.longest_gap >= LONG_RUN}


# --------------------------------------------------------------------------
# jobs

def _not_syndetic(rep: ClaimReport, system: str, preset: str, horizon: int, blocks: int, stepwise: int):
    c = make_cascade(system, preset)
    _stepwise_check(rep, c, stepwise)
    for eps in EPS_SAMPLES:
        cl = classify(n_set(c, FULL, eps), depth=blocks)
        rep.check(f"N([0,1), {eps}) is not syndetic (single open set)", not cl.syndetic,
                  {"label": cl.label, "gap_trend": cl.certificate.get("gap_trend")})
        if preset == "paper":
            info = complement_runs(c, eps, horizon)
            rep.check(f"runs of length >= 2^18 outside N([0,1), {eps}) within the horizon",
                      info["at_least_2^18"], info, required=False)
    cert = shrink_run_certificate(c, depth=blocks)
    rep.check("for every eps > 0, shrink levels give unbounded gaps in N", cert["holds"], cert)
    for eps in (Fraction(1), Fraction(1, 4)):
        rep.verdict(f"syndetic sensitivity at eps={eps} (all generators)",
                    classify_notion(c, eps, "syndetic", depth=blocks), expect=False)


def job_ex1_claim1(rep, preset, horizon, blocks, stepwise):
    _not_syndetic(rep, "ex1_x", preset, horizon, blocks, stepwise)
    if preset == "paper":
        _items(rep, "ex1_x", blocks)
        rep.discrepancies += discrepancy_notes("ex1_x")
        rep.notes.append(agreement_summary("ex1_x"))


def job_ex1_claim2(rep, preset, horizon, blocks, stepwise):
    _not_syndetic(rep, "ex1_y", preset, horizon, blocks, stepwise)
    if preset == "paper":
        _items(rep, "ex1_y", blocks)
        rep.discrepancies += discrepancy_notes("ex1_y")
        rep.notes.append(agreement_summary("ex1_y"))


def _items(rep: ClaimReport, system: str, blocks: int) -> None:
    rows = [c for c in item_checks(blocks) if c.system == system and c.branch != "shrink plateau offset"]
    bad = [c.to_json() for c in rows if not c.agrees]
    rep.check(f"plateau time ranges and diameters for k = 1..{blocks} match the layout",
              not bad, {"checked": len(rows), "failures": bad})


def interleaving_rows(p: int, q: int, k_lo: int, k_hi: int) -> list[dict]:
    """The two inequalities keeping the X-grow and Y-grow families overlapping."""
    x = preset_layout("ex1_x", "paper")
    rows = []
    for k in range(k_lo, k_hi + 1):
        s2k, s2k1 = pow_sum(x, 1, 2 * k), pow_sum(x, 1, 2 * k + 1)
        a = int_cmp(simplify(s2k + 4 * k + 2 - q), simplify(s2k + 2 * k + 3 - p)) > 0
        b = int_cmp(simplify(s2k1 + 2 * k + 3 - p), simplify(s2k1 + 2 - q)) > 0
        rows.append({"k": k, "p": p, "q": q, "first": a, "second": b})
    return rows


def literal_families(p: int, q: int, K: int) -> BlockFamilySet:
    x = preset_layout("ex1_x", "paper")
    S = functools.partial(pow_sum, x, 1)
    P = BlockFamily(lambda k: simplify(S(2 * k) + 2 * k + 3 - p), lambda k: simplify(S(2 * k + 1) + 2 * k + 3 - p),
                    K, "P")
    Q = BlockFamily(lambda k: simplify(S(2 * k - 1) + 2 - q), lambda k: simplify(S(2 * k) + 4 * k + 2 - q), K, "Q")
    return BlockFamilySet((), (P, Q))


def job_ex1_claim3(rep, preset, horizon, blocks, stepwise):
    pc = make_product(preset)
    _stepwise_check(rep, pc.left, stepwise)
    _stepwise_check(rep, pc.right, stepwise)
    full = classify(product_n_set(pc, FULL, FULL, 1), depth=blocks)
    rep.check("N(full x full, 1) is cofinite", full.cofinite,
              {"tail": full.certificate.get("tail"), "window": full.certificate.get("window")})
    rep.verdict("cofinite sensitivity at eps=1 (all generator pairs)",
                classify_notion(pc, 1, "cofinite", depth=blocks), expect=True)
    if preset != "paper":
        return
    ineq = []
    for p in range(3):
        for q in range(3):
            K = 2 * (p + q) + 1
            rows = interleaving_rows(p, q, K, K + 10)
            ok = all(r["first"] and r["second"] for r in rows)
            fam = classify(literal_families(p, q, K), depth=blocks)
            paper_tail = simplify(pow_sum(preset_layout("ex1_x", "paper"), 1, 2 * K - 1) + 2 - q)
            tail_ok = fam.cofinite and fam.certificate["tail"] == int_to_json(paper_tail)
            contained = _families_inside(pc, p, q, K, blocks)
            ineq.append({"p": p, "q": q, "K": K, "inequalities_hold": ok, "union_tail": fam.certificate.get("tail"),
                         "tail_matches_formula": tail_ok, "families_inside_N": contained})
    rep.check("interleaving inequalities hold for k = K..K+10, (p, q) in {0,1,2}^2, K = 2(p+q)+1",
              all(r["inequalities_hold"] for r in ineq), ineq)
    rep.check("P | Q is cofinite with the stated tail", all(r["tail_matches_formula"] for r in ineq))
    rep.check("P and Q lie inside the computed N-sets", all(r["families_inside_N"] for r in ineq))
    early = [r for p in range(3) for q in range(3) for r in interleaving_rows(p, q, 1, 10)
             if not (r["first"] and r["second"])]
    rep.notes.append({"interleaving_for_k_1_to_10": {"failures_below_K": early,
                                                      "comment": "only k >= K > 2(p+q) is required"}})
    paper_tail = simplify(pow_sum(preset_layout("ex1_x", "paper"), 1, 1) + 2)
    rep.notes.append({"tail_for_p_q_0": {"from_families_K_1": int_to_json(paper_tail),
                                         "least_tail_of_N": full.certificate.get("tail")}})


def _families_inside(pc, p: int, q: int, K: int, blocks: int) -> bool:
    """Each literal P/Q block coincides with a grow-level block of the shifted generator's set."""
    fams = literal_families(p, q, K).families
    nx = n_set(pc.left, TrackedSet(p), 1)
    ny = n_set(pc.right, TrackedSet(q), 1)
    want = [(fams[0], nx), (fams[1], ny)]
    for fam, ns in want:
        blocks_n = [ns.families[0].block(k) for k in range(blocks + K + 2)] + list(ns.head)
        for k in range(K, K + blocks):
            a, b = fam.block(k)
            if not any(int_cmp(a, x) == 0 and int_cmp(b, y) == 0 for x, y in blocks_n):
                return False
    return True


def job_ex1_claim4(rep, preset, horizon, blocks, stepwise):
    c = make_cascade("ex1_x", preset)
    _stepwise_check(rep, c, stepwise)
    v = rep.verdict("thick sensitivity at eps=1 (all generators)",
                    classify_notion(c, 1, "thick", depth=blocks), expect=True)
    cl = classify(n_set(c, FULL, 1), depth=blocks)
    widths = [w["width"] for w in cl.certificate["runs"]][:blocks]
    inc = len(widths) >= blocks and all(
        int_cmp(_from_json(a), _from_json(b)) < 0 for a, b in zip(widths, widths[1:]))
    rep.check(f"run family widths strictly increase for k = 1..{blocks}", inc,
              {"widths": widths, "trend": cl.certificate["run_trend"]})
    del v


def _from_json(x):
    return int_from_json(x)


def job_ex2_syndetic(rep, preset, horizon, blocks, stepwise):
    c = make_cascade("ex2_x", preset)
    lay = c.layout
    even = [(n, lay.length_at(2 * n)) for n in range(1, blocks + 1)]
    rep.check(f"diam f^(2n)([0,1]) = 1/(2n) for n = 1..{blocks}",
              all(d == Fraction(1, 2 * n) for n, d in even), [[n, rational_str(d)] for n, d in even])
    if preset == "paper":
        orc = _oracle("ex2_x", preset, 1, (0, Fraction(0), Fraction(1)), 4)
        rep.check("stepwise oracle over levels 0..4", list(orc) == [c.image_diameter(FULL, n) for n in range(5)],
                  [rational_str(d) for d in orc])
        ok4 = lay.level(4).base.try_value() if isinstance(lay.level(4).base, TowerSum) else lay.level(4).base
        try:
            materialize(lay.level(5).base)
            over = False
        except BudgetExceeded:
            over = True
        rep.check("level 4 offset is materializable, level 5 is not", ok4 is not None and over,
                  {"level_4_offset": int_to_json(lay.level(4).base), "level_5_offset": str(lay.level(5).base)})
        rep.discrepancies += discrepancy_notes("ex2_x")
        rep.notes.append(agreement_summary("ex2_x"))
    else:
        _stepwise_check(rep, c, stepwise)
    v = rep.verdict("syndetic sensitivity at eps=1 (all generators)",
                    classify_notion(c, 1, "syndetic", depth=blocks), expect=True)
    full = v.certificate["generators"][0]["classification"]["certificate"]
    rep.check("gap bound 2 for the full interval", full.get("gap_bound") == "2",
              {"gap_bound": full.get("gap_bound"), "window_from_0": full.get("window")})


def job_ex2_restricted(rep, preset, horizon, blocks, stepwise):
    c = make_cascade("ex2_x", preset)
    c2 = c.restrict(2)
    for eps in (Fraction(1), Fraction(1, 2), Fraction(1, 100)):
        w, cert = non_sensitivity_witness(c2, eps)
        rep.check(f"non-sensitivity witness at eps={eps}", cert["n_set_empty"], cert)
        rep.verdict(f"sensitivity of the restriction at eps={eps}", classify_notion(c2, eps, "sensitive"),
                    expect=False)
    try:
        non_sensitivity_witness(c, Fraction(1, 2))
        rep.check("the unrestricted cascade has no witness at eps=1/2", False)
    except NoWitnessFound as e:
        rep.check("the unrestricted cascade has no witness at eps=1/2", True, e.certificate)
    m = multi_sensitive_check(c2, [FULL, TrackedSet(0, 0, Fraction(1, 4))], Fraction(1, 2))
    rep.verdicts.append({"label": "multi-sensitivity of the restriction at eps=1/2", "expected_holds": False,
                         "verdict": m.to_json()})
    rep.check("empty common time set for the restriction", not m.holds, m.certificate)
    if preset == "scaled":
        _stepwise_check(rep, c2, stepwise)


def job_remark(rep, preset, horizon, blocks, stepwise):
    parts = {}
    for cid, job in (("ex1_claim1", job_ex1_claim1), ("ex1_claim4", job_ex1_claim4)):
        sub = ClaimReport(cid, rep.parameters)
        job(sub, preset, horizon, blocks, stepwise)
        _replay(sub)
        parts[cid] = sub.passed
        rep.verdicts += sub.verdicts
    rep.check("not syndetically sensitive (first claim on X)", parts["ex1_claim1"])
    rep.check("thickly sensitive (fourth claim on X)", parts["ex1_claim4"])


def job_inclusion_chain(rep, preset, horizon, blocks, stepwise):
    pc = make_product(preset)
    H = 4000 if preset == "paper" else 2000
    gens = [(TrackedSet(p, a, b), TrackedSet(q, a2, b2))
            for p, q in ((0, 0), (1, 2), (2, 1), (5, 0))
            for (a, b), (a2, b2) in (((0, 1), (0, 1)), ((Fraction(1, 4), Fraction(3, 4)), (0, Fraction(1, 3))))]
    law, chain = True, True
    for s1, s2 in gens:
        for eps in (Fraction(1), Fraction(1, 3)):
            union = product_n_set(pc, s1, s2, eps, H)
            direct = RangeSet(((n, n) for n in range(H + 1)
                               if max(pc.left.image_diameter(s1, n), pc.right.image_diameter(s2, n)) > eps))
            law &= union == direct
            # a larger open set W has a larger N-set
            big1, big2 = TrackedSet(s1.j, 0, 1), TrackedSet(s2.j, 0, 1)
            chain &= (union | product_n_set(pc, big1, big2, eps, H)) == product_n_set(pc, big1, big2, eps, H)
    rep.check("N(U x V) = N(U) | N(V) under the max metric (horizon scan)", law, {"horizon": H, "generators": len(gens)})
    rep.check("N(W) contains N(U x V) for W containing U x V", chain)
    verdicts = {}
    for notion in ("cofinite", "syndetic", "thick", "sensitive"):
        verdicts[notion] = classify_notion(pc, 1, notion, depth=blocks)
        rep.verdict(f"product, {notion} at eps=1", verdicts[notion], expect=True)
    x = make_cascade("ex1_x", preset)
    vx = {n: classify_notion(x, 1, n, depth=blocks) for n in ("cofinite", "syndetic", "thick", "sensitive")}
    hier = all((not v["cofinite"].holds or (v["syndetic"].holds and v["thick"].holds))
               and (not (v["syndetic"].holds or v["thick"].holds) or v["sensitive"].holds)
               for v in (verdicts, vx))
    rep.check("cofinite => syndetic and thick => sensitive on the computed verdicts", hier,
              {"product": {k: v.holds for k, v in verdicts.items()}, "X": {k: v.holds for k, v in vx.items()}})


JOBS: dict[str, Callable] = {
    "ex1_claim1": job_ex1_claim1,
    "ex1_claim2": job_ex1_claim2,
    "ex1_claim3": job_ex1_claim3,
    "ex1_claim4": job_ex1_claim4,
    "ex2_syndetic": job_ex2_syndetic,
    "ex2_restricted_not_sensitive": job_ex2_restricted,
    "remark_thick_not_syndetic": job_remark,
    "inclusion_chain": job_inclusion_chain,
}


def verify_claim(claim_id: str, preset: str = "paper", horizon: int = DEFAULT_HORIZON,
                 blocks: int = DEFAULT_BLOCKS, stepwise: int = DEFAULT_STEPWISE) -> ClaimReport:
    """Run one claim job; certificates are replayed before the report is returned."""
    if claim_id not in JOBS:
        raise UnknownClaim(claim_id)
    if preset not in ("paper", "scaled"):
        raise ValueError(f"unknown preset {preset!r}")
    params = {"preset": preset, "horizon": str(horizon), "blocks": blocks, "stepwise": str(stepwise)}
    rep = ClaimReport(claim_id, params)
    JOBS[claim_id](rep, preset, horizon, blocks, stepwise)
    _replay(rep)
    return rep


def catalog() -> dict:
    return {"claims": [{"id": c, "statement": STATEMENTS[c]} for c in CLAIM_IDS],
            "presets": list(PRESET_NAMES)}
