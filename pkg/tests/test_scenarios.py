"""Verification scenarios: registry, assertions, determinism."""

import json

import pytest

from growthlab.errors import ParameterError
from growthlab.scenarios import (ScenarioReport, full_report, render_text,
                                 run_scenario, scenario_ids)

ALL_IDS = ["claims-a-e", "step-v-nonequiv", "main-thm-family", "qa-cases",
           "lemma-bounds", "kappa-remark"]


@pytest.fixture(scope="module")
def default_reports():
    return full_report()


def test_registry_contents():
    assert scenario_ids() == ALL_IDS


@pytest.mark.parametrize("sid", ALL_IDS)
def test_scenario_passes_with_defaults(sid):
    report = run_scenario(sid)
    assert isinstance(report, ScenarioReport)
    assert report.scenario == sid
    assert report.passed, [a for a in report.assertions if not a.passed]
    assert len(report.assertions) >= 6
    assert report.runtime_seconds > 0.0
    assert report.skipped_reason is None


def test_unknown_scenario_rejected():
    with pytest.raises(ParameterError, match="unknown scenario"):
        run_scenario("no-such-check")


def test_parameter_overrides_flow_through():
    report = run_scenario("claims-a-e", A=2.5, j_max=5)
    assert report.passed
    assert report.inputs["A"] == 2.5
    assert report.inputs["j_max"] == 5
    # five levels drive five ladder-gain rows among the assertions
    gains = [a for a in report.assertions
             if a.description.startswith("ladder gain")]
    assert len(gains) == 5


def test_assertion_record_shape():
    report = run_scenario("lemma-bounds")
    doc = report.to_json_dict()
    assert doc["scenario"] == "lemma-bounds"
    assert doc["pass"] is True
    for row in doc["assertions"]:
        assert set(row) == {"description", "expected", "observed",
                            "residual", "pass"}
    assert "runtime_seconds" not in doc
    timed = report.to_json_dict(include_runtime=True)
    assert "runtime_seconds" in timed


def test_full_report_covers_registry(default_reports):
    assert [r.scenario for r in default_reports] == ALL_IDS
    assert all(r.passed for r in default_reports)


def test_full_report_skips_broken_constructions():
    reports = full_report(A=2.0)
    by_id = {r.scenario: r for r in reports}
    assert by_id["claims-a-e"].skipped_reason == "A must exceed 2"
    assert by_id["qa-cases"].skipped_reason == "A must exceed 2"
    assert not by_id["claims-a-e"].passed
    # scenarios that never touch the staircase parameter still run
    assert by_id["lemma-bounds"].passed
    assert by_id["main-thm-family"].passed


def test_report_json_is_deterministic(default_reports):
    first = json.dumps([r.to_json_dict() for r in default_reports],
                       sort_keys=True)
    second = json.dumps([r.to_json_dict() for r in full_report()],
                        sort_keys=True)
    assert first == second


def test_text_rendering(default_reports):
    text = render_text(default_reports)
    assert "PASS claims-a-e" in text
    assert "6/6 scenarios passed" in text
    skipped = render_text(full_report(A=2.0))
    assert "SKIP claims-a-e: A must exceed 2" in skipped
    assert "(3 skipped)" in skipped
