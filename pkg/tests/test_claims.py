import json
from pathlib import Path

import pytest

from semiflow_lab.claims import CLAIM_IDS, UnknownClaim, catalog, verify_claim
from semiflow_lab.sensitivity import replay_verdict

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="module")
def reports():
    return {cid: verify_claim(cid) for cid in CLAIM_IDS}


def test_catalog():
    cat = catalog()
    assert len(cat["claims"]) == 8 and len(cat["presets"]) == 3


def test_unknown_claim():
    with pytest.raises(UnknownClaim):
        verify_claim("bogus")


@pytest.mark.parametrize("cid", CLAIM_IDS)
def test_matches_golden(reports, cid):
    assert reports[cid].dumps() + "\n" == (GOLDEN / f"{cid}.json").read_text()


@pytest.mark.parametrize("cid", CLAIM_IDS)
def test_passes_with_replayable_certificates(reports, cid):
    doc = reports[cid].to_json()
    assert doc["pass"] and doc["certificates_replayed"]
    for row in doc["verdicts"]:
        assert row["verdict"]["holds"] == row["expected_holds"]
        assert replay_verdict(row["verdict"])


def test_reports_are_deterministic(reports):
    again = verify_claim("ex1_claim3")
    assert again.dumps() == reports["ex1_claim3"].dumps()
    assert "generated_at" not in reports["ex1_claim3"].to_json()


def test_claim3_records_inequalities_and_tail(reports):
    doc = reports["ex1_claim3"].to_json()
    names = [c["name"] for c in doc["checks"]]
    assert any(n.startswith("interleaving inequalities") for n in names)
    assert any("cofinite" in n for n in names)


def test_remark_tracks_its_parts(reports):
    assert reports["remark_thick_not_syndetic"].passed == (
        reports["ex1_claim1"].passed and reports["ex1_claim4"].passed)


def test_discrepancies_are_report_fields(reports):
    doc = reports["ex1_claim1"].to_json()
    fields = {(d["branch"], d["field"]) for d in doc["discrepancies"]}
    assert ("A_n", "slope") in fields
    assert reports["ex2_syndetic"].to_json()["discrepancies"] == []


def test_restricted_witness_family(reports):
    doc = reports["ex2_restricted_not_sensitive"].to_json()
    text = json.dumps(doc)
    assert '"bounded_orbit_diameters"' in text and '"growth_counter_certificate"' in text


@pytest.mark.parametrize("cid", CLAIM_IDS)
def test_scaled_preset(cid):
    rep = verify_claim(cid, "scaled")
    assert rep.passed, [c for c in rep.to_json()["checks"] if not c["passed"]]
