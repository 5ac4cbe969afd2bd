"""Experiment runners: frozen oracle values, report format, CLI round trips."""

import json
import math
from fractions import Fraction

import pytest
from click.testing import CliRunner

from cmprox import experiments, modular
from cmprox.cli import main
from cmprox.experiments import (Case, ExperimentReport, _jsonable,
                                gross_zagier_aggregate, run_prop_approximate,
                                run_selftest, run_sieve, run_warmup_2adic)

# ----------------------------------------------------------------------
# Aggregate identity oracles (ideal counts; no p-adic code involved)
# ----------------------------------------------------------------------

def test_aggregate_frozen_values():
    assert gross_zagier_aggregate(11) == 15
    assert gross_zagier_aggregate(59) == 48


def test_aggregate_matches_polygon_sum():
    rep = run_warmup_2adic(n_list=(1,))
    (case,) = rep.cases
    assert case.verdict == "PASS"
    assert case.values["ell"] == 11
    assert case.values["valuation_sum"] == case.values["aggregate"] == 15
    assert case.values["root_valuations"] == [Fraction(15)]


# ----------------------------------------------------------------------
# Report rendering
# ----------------------------------------------------------------------

def test_jsonable_rendering():
    assert _jsonable(Fraction(9, 2)) == "9/2"
    assert _jsonable(Fraction(3)) == "3/1"
    assert _jsonable(math.inf) == "inf"
    assert _jsonable({"a": [Fraction(1, 7), None, True]}) == \
        {"a": ["1/7", None, True]}
    with pytest.raises(TypeError):
        _jsonable({1, 2})
    with pytest.raises(TypeError):
        _jsonable(object())


def test_report_shape_and_determinism():
    rep = ExperimentReport("demo", {"p": 5})
    rep.cases.append(Case("one", {"x": 1}, {"v": Fraction(1, 2)}, "PASS"))
    rep.cases.append(Case("two", {}, {}, "FAIL", notes="boom"))
    rep.cases.append(Case("three", {}, {}, "SKIP", notes="later"))
    assert rep.summary == {"pass": 1, "fail": 1, "skipped": 1}
    assert rep.has_failures
    blob = rep.to_json()
    assert blob == rep.to_json() and blob.endswith("\n")
    doc = json.loads(blob)
    assert doc["timing_ms"] is None
    assert doc["cases"][0]["values"]["v"] == "1/2"
    assert list(doc) == sorted(doc)


# ----------------------------------------------------------------------
# Runners at reduced sizes
# ----------------------------------------------------------------------

def test_prop_pipeline_first_level():
    rep = run_prop_approximate(5, 1)
    (case,) = rep.cases
    assert case.verdict == "PASS"
    assert case.values["d"] == -503
    assert case.values["class_number"] == 21
    assert case.values["max_valuation"] >= 2
    assert case.values["monitor_sq"] == case.values["running_max_sq"]


def test_prop_pipeline_rejects_bad_prime():
    with pytest.raises(ValueError):
        run_prop_approximate(7, 1)      # 7 = 1 mod 3
    with pytest.raises(ValueError):
        run_prop_approximate(9, 1)


def test_warmup_rejects_even_n():
    with pytest.raises(ValueError):
        run_warmup_2adic(n_list=(2,))


def test_sieve_runner_cases():
    rep = run_sieve(5, 1, y=10 ** 4, L=1000)
    by_id = {c.id: c for c in rep.cases}
    assert set(by_id) == {"dual-count", "euler-product", "minimal-x",
                          "unit-pairs"}
    assert not rep.has_failures
    assert by_id["dual-count"].values["brute"] == \
        by_id["dual-count"].values["mobius"]
    assert by_id["minimal-x"].values["value"] == 503
    assert by_id["euler-product"].values["low"] > Fraction(1, 7)
    assert by_id["unit-pairs"].values["count"] == 1


def test_selftest_all_pass_and_is_deterministic():
    rep1 = run_selftest(seed=42)
    rep2 = run_selftest(seed=42)
    assert [c.id for c in rep1.cases] == [
        "padic-arithmetic", "padic-roots", "class-group", "q-series",
        "modular-tables", "class-polynomial", "conjugator",
        "quaternion-order", "sieve", "distance"]
    assert rep1.summary == {"pass": 10, "fail": 0, "skipped": 0}
    assert rep1.to_json() == rep2.to_json()


def test_selftest_flags_corrupted_table(monkeypatch):
    from importlib import resources
    text = resources.files("cmprox").joinpath("data", "phi_2.txt").read_text()
    out = []
    for ln in text.splitlines():
        parts = ln.split()
        if parts[:2] == ["0", "0"]:
            ln = f"0 0 {int(parts[2]) + 1}"      # parity flip
        out.append(ln)

    class _Files:
        def joinpath(self, *a):
            return self

        def read_text(self):
            return "\n".join(out)

    class _Res:
        def files(self, pkg):
            return _Files()

    monkeypatch.setattr(modular, "resources", _Res())
    modular.modular_poly.cache_clear()
    try:
        rep = run_selftest(seed=42)
        bad = {c.id: c for c in rep.cases}["modular-tables"]
        assert bad.verdict == "FAIL"
        assert "Kronecker" in bad.notes
        assert rep.has_failures
    finally:
        modular.modular_poly.cache_clear()
    monkeypatch.undo()
    modular.modular_poly.cache_clear()
    assert modular.modular_poly(2)(1728, 287496) == 0   # healed


# ----------------------------------------------------------------------
# Command line
# ----------------------------------------------------------------------

def test_cli_selftest_deterministic_bytes():
    runner = CliRunner()
    r1 = runner.invoke(main, ["--seed", "42", "selftest"])
    r2 = runner.invoke(main, ["--seed", "42", "selftest"])
    assert r1.exit_code == 0 and r2.exit_code == 0
    assert r1.output == r2.output
    doc = json.loads(r1.output)
    assert doc["experiment"] == "selftest"
    assert doc["summary"]["fail"] == 0


def test_cli_csv_format():
    runner = CliRunner()
    res = runner.invoke(main, ["--format", "csv", "sieve",
                               "--y", "10000", "--euler-cap", "1000"])
    assert res.exit_code == 0
    rows = [ln.split(",") for ln in res.output.strip().splitlines()]
    assert rows[0][:3] == ["experiment", "case", "verdict"]
    assert {r[1] for r in rows[1:]} == {"dual-count", "euler-product",
                                        "minimal-x", "unit-pairs"}
    assert all(r[2] == "PASS" for r in rows[1:])


def test_cli_out_file(tmp_path):
    target = tmp_path / "report.json"
    runner = CliRunner()
    res = runner.invoke(main, ["--out", str(target), "warmup2", "--n", "1"])
    assert res.exit_code == 0
    doc = json.loads(target.read_text())
    assert doc["experiment"] == "warmup-2adic"
    assert doc["cases"][0]["verdict"] == "PASS"
