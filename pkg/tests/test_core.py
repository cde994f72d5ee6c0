"""
Tests for configuration loading and the verification suites.

Core claims:
    - a configuration file fails with io, parse or validation, never silently
    - every suite on a valid configuration reports no unexpected record
    - the bare-J gate is recorded as expected failures once m > 3
    - a suite that aborts is reported with its name
"""

import json

import pytest

from weak_quantum_algebra.check_catalog import anchor, families_for
from weak_quantum_algebra.core import VerificationEngine, load_config, run_suite, validate_environment
from weak_quantum_algebra.exceptions import ConfigError, NotApplicable, SuiteError
from weak_quantum_algebra.models import SUITES, EngineConfig


def engine(**fields):
    fields.setdefault("matrix", [[2]])
    return VerificationEngine(EngineConfig.model_validate(fields))


def test_load_config_defaults(config_file):
    cfg = load_config(config_file())
    assert cfg.m == 2
    assert cfg.selected_suites() == list(SUITES)
    assert cfg.type_flags() == (("one",), ("one",))
    assert cfg.truncation.max_word_length == 12


def test_load_config_rejects_invalid_datum(config_file):
    with pytest.raises(ConfigError) as info:
        load_config(config_file(matrix=[[2, -1], [0, 2]]))
    assert info.value.kind == "validation"
    assert "ZeroPairViolation(1,0)" in str(info.value)
    assert info.value.detail


@pytest.mark.parametrize(
    "fields",
    [
        {"m": 1},
        {"suites": ["nonsense"]},
        {"tau_E": ["one", "zero"]},
        {"tau_F": ["two"]},
        {"truncation": {"module_height": 0}},
    ],
)
def test_load_config_schema_errors(config_file, fields):
    with pytest.raises(ConfigError) as info:
        load_config(config_file(**fields))
    assert info.value.kind == "validation"


def test_load_config_io_and_parse(tmp_path):
    with pytest.raises(ConfigError) as info:
        load_config(tmp_path / "missing.json")
    assert info.value.kind == "io"
    bad = tmp_path / "bad.json"
    bad.write_text("{matrix: [[2]]", encoding="utf-8")
    with pytest.raises(ConfigError) as info:
        load_config(bad)
    assert info.value.kind == "parse"


def test_validate_environment(monkeypatch):
    assert validate_environment() == {}
    monkeypatch.setenv("WQA_BUDGET", "5000")
    assert validate_environment() == {"WQA_BUDGET": 5000}
    for raw in ("many", "0"):
        monkeypatch.setenv("WQA_MAX_WORD_LENGTH", raw)
        with pytest.raises(ConfigError):
            validate_environment()


@pytest.mark.parametrize("m", [2, 3])
def test_gate_passes_for_small_m(m):
    report = engine(m=m).run_suite("gate")
    assert report.ok
    assert set(report.counts) == {"pass"}


def test_gate_records_expected_failures_beyond_three():
    report = engine(m=4).run_suite("gate")
    assert report.ok
    assert report.counts["xfail"] == 2
    statuses = {r.check_id: r.status for r in report.records}
    assert statuses["weak-gate:prediction"] == "pass"
    assert statuses["weak-gate:residue"] == "pass"


@pytest.mark.parametrize("suite", ["datum", "bialgebra", "weak-antipode", "grouplikes"])
def test_structure_suites_sl2(suite):
    report = engine(m=3, random_words=5).run_suite(suite)
    assert report.records
    assert report.failures() == []


def test_datum_suite_sl3():
    report = engine(matrix=[[2, -1], [-1, 2]], random_words=5).run_suite("datum")
    ids = {r.check_id for r in report.records}
    assert {"datum:valid", "serre:E:0,1", "serre:F:1,0", "centrality:J"} <= ids
    assert report.ok


def test_subalgebras_suite():
    skipped = engine(m=3).run_suite("subalgebras")
    assert [r.status for r in skipped.records] == ["skip"]
    report = engine(m=5).run_suite("subalgebras")
    assert report.ok
    assert any(r.check_id.startswith("sub-bialgebra:B3:r=2") for r in report.records)


@pytest.mark.slow
def test_morphisms_suite():
    report = engine(m=5).run_suite("morphisms")
    assert report.ok
    assert report.counts.get("xfail", 0) > 0
    ids = {r.check_id for r in report.records}
    assert {"phi-r-inverse:r=2", "phi-r-inverse:r=3"} <= ids


def test_modules_suite():
    report = engine(m=3, truncation={"module_height": 3}).run_suite("modules")
    assert report.ok
    ids = {r.check_id for r in report.records}
    assert "onedim-wbar:gating" in ids
    assert any(i.startswith("module[unit,n=1,gamma=-1]") for i in ids)
    assert any(i.startswith("module[null]") for i in ids)


def test_characters_suite():
    report = engine(truncation={"module_height": 4}).run_suite("characters")
    assert report.ok
    big = engine(matrix=[[2, -1, 0], [-1, 2, -1], [0, -1, 2]]).run_suite("characters")
    assert [r.status for r in big.records] == ["skip"]


def test_all_prefixes_suite_names():
    cfg = EngineConfig(matrix=[[2]], m=3, suites=["gate", "subalgebras"])
    report = run_suite(cfg, "all")
    assert report.suite == "all"
    assert {r.check_id.split("/")[0] for r in report.records} == {"gate", "subalgebras"}
    assert "subalgebras/subalgebra-exponents" in {r.check_id for r in report.records}


def test_unknown_suite():
    with pytest.raises(NotApplicable):
        engine().run_suite("everything")


def test_aborted_suite_names_itself():
    with pytest.raises(SuiteError) as info:
        engine(truncation={"max_word_length": 1}).run_suite("datum")
    assert info.value.suite == "datum"
    assert "ReductionBudgetExceeded" in str(info.value)


def test_report_serialisation():
    report = engine(m=4).run_suite("gate")
    data = json.loads(report.model_dump_json())
    assert data["ok"] is True
    assert data["counts"]["xfail"] == 2
    frame = report.to_frame()
    assert list(frame.columns) == ["suite", "check_id", "anchor", "status", "residue", "seconds"]
    assert len(frame) == len(report.records)


def test_catalog_lookup():
    assert [f.family for f in families_for("gate")] == ["weak-gate"]
    assert anchor("id-T-id") == "(id * T * id)(X) = X"
    assert anchor("j-idempotency") == "J^m = J"
    assert anchor("no-such-family") == "no-such-family"
