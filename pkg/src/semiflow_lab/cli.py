"""Command-line entry point: ``semiflow-lab {verify,sweep,classify-set,catalog}``.

Exit status: 0 when everything requested passes, 1 on a failed verification,
2 on usage errors and exhausted budgets.
"""
from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone

from .cascade import StepBudgetExceeded, TrackedSet, diameter_sweep, make_cascade
from .claims import (
    CLAIM_IDS, DEFAULT_BLOCKS, DEFAULT_HORIZON, DEFAULT_STEPWISE, CertificateReplayFailure, catalog, verify_claim,
)
from .exact import BudgetExceeded, Inconclusive
from .index_sets import RangeSet, classify
from .layout import SPACES

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="semiflow-lab", description="Exact verification of sensitivity counterexamples.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run a claim job and print its JSON report")
    v.add_argument("claim", help="claim id, or 'all'")
    v.add_argument("--preset", choices=("paper", "scaled"), default="paper")
    v.add_argument("--horizon", type=int, default=DEFAULT_HORIZON)
    v.add_argument("--blocks", type=int, default=DEFAULT_BLOCKS)
    v.add_argument("--stepwise", type=int, default=DEFAULT_STEPWISE, help="stepwise oracle horizon")
    v.add_argument("--out", help="write the report(s) to this JSON file")

    s = sub.add_parser("sweep", help="exact diameter trace as CSV")
    s.add_argument("system", choices=SPACES)
    s.add_argument("--preset", choices=("paper", "scaled"), default="paper")
    s.add_argument("--from", dest="n_lo", type=int, default=0)
    s.add_argument("--to", dest="n_hi", type=int, default=20)
    s.add_argument("--step", type=int, default=1, help="restrict to multiples of this step")
    s.add_argument("--alpha", default="0")
    s.add_argument("--beta", default="1")
    s.add_argument("--csv", help="output file (default: stdout)")

    c = sub.add_parser("classify-set", help="classify a JSON range set")
    c.add_argument("--json", required=True, dest="path", help="file with {\"ranges\": [...], \"tail\": ...}")
    c.add_argument("--horizon", type=int)

    sub.add_parser("catalog", help="list claim ids and presets")
    return p


def _stamp(obj: dict) -> dict:
    return {"generated_at": datetime.now(timezone.utc).isoformat(timespec="seconds"), **obj}


def _cmd_verify(a) -> int:
    ids = CLAIM_IDS if a.claim == "all" else (a.claim,)
    if any(i not in CLAIM_IDS for i in ids):
        print(f"unknown claim id {a.claim!r}; see 'catalog'", file=sys.stderr)
        return EXIT_USAGE
    reports = []
    for cid in ids:
        try:
            rep = verify_claim(cid, a.preset, a.horizon, a.blocks, a.stepwise)
        except CertificateReplayFailure as e:
            print(f"certificate replay failed for {e}", file=sys.stderr)
            return EXIT_FAIL
        reports.append(_stamp(rep.to_json()))
    out = reports[0] if len(reports) == 1 else {"reports": reports}
    text = json.dumps(out, indent=2, sort_keys=True)
    if a.out:
        with open(a.out, "w") as fh:
            fh.write(text + "\n")
    print(text)
    return EXIT_OK if all(r["pass"] for r in reports) else EXIT_FAIL


def _cmd_sweep(a) -> int:
    if a.n_lo < 0 or a.n_hi < a.n_lo:
        print("need 0 <= --from <= --to", file=sys.stderr)
        return EXIT_USAGE
    c = make_cascade(a.system, a.preset, a.step)
    text = diameter_sweep(c, TrackedSet(0, a.alpha, a.beta), a.n_lo, a.n_hi, a.csv)
    if not a.csv:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_classify(a) -> int:
    with open(a.path) as fh:
        s = RangeSet.from_json(json.load(fh))
    try:
        cl = classify(s, a.horizon)
    except ValueError as e:
        print(str(e), file=sys.stderr)
        return EXIT_USAGE
    print(json.dumps({"set": s.to_json(), "classification": cl.to_json()}, indent=2, sort_keys=True))
    return EXIT_OK


def main(argv=None) -> int:
    a = build_parser().parse_args(argv)
    try:
        if a.command == "catalog":
            print(json.dumps(catalog(), indent=2))
            return EXIT_OK
        if a.command == "verify":
            return _cmd_verify(a)
        if a.command == "sweep":
            return _cmd_sweep(a)
        return _cmd_classify(a)
    except (BudgetExceeded, StepBudgetExceeded, Inconclusive) as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, json.JSONDecodeError) as e:
        print(str(e), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
