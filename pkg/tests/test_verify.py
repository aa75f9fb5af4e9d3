import json
import random
from fractions import Fraction

import jsonschema
import pytest

from rcakit.cherednik import is_good
from rcakit.errors import UnknownSuite
from rcakit.expr import evaluate
from rcakit.verify import MAX_DIFF_TERMS, SUITES, Check, CheckReport, SuiteOptions, _truncated, run_suite
from schema import REPORT_SCHEMA

IDENTITY_SUITES = ["dunkl_commute", "heckman", "cm_appendix", "sc5_radial", "twist_lemma", "good_values"]


def test_registry():
    assert set(SUITES) == {
        "dunkl_commute", "pbw_slices", "heckman", "cm_appendix", "sc5_radial",
        "twist_lemma", "qgr_main", "pgr_main", "good_values",
    }


def test_heckman_passes():
    assert run_suite("heckman", 2).passed


def test_dunkl_commute_check_count():
    assert len(run_suite("dunkl_commute", 2).checks) == 1
    assert len(run_suite("dunkl_commute", 4).checks) == 6


def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        run_suite("nope", 2)
    with pytest.raises(KeyError):
        run_suite("nope", 2)


def test_rank_precondition():
    with pytest.raises(ValueError):
        run_suite("heckman", 1)


@pytest.mark.parametrize("suite", IDENTITY_SUITES)
def test_report_json_is_valid_and_deterministic(suite):
    a = run_suite(suite, 2)
    b = run_suite(suite, 2)
    jsonschema.validate(json.loads(a.to_json()), REPORT_SCHEMA)
    assert a.to_json(timing=False) == b.to_json(timing=False)


def _random_good(rng, n):
    while True:
        r = Fraction(rng.randint(-12, 12), rng.randint(1, 6))
        if is_good(r, n):
            return r


@pytest.mark.parametrize("suite", IDENTITY_SUITES)
def test_identity_suites_at_random_good_rational(suite):
    rng = random.Random(hash(suite) & 0xFFFF)
    r = _random_good(rng, 3)
    report = run_suite(suite, 3, SuiteOptions(param=r))
    assert report.passed
    assert report.as_dict()["param"] == {"mode": "rational", "value": str(r)}
    assert report.checks[0].status == "pass"


@pytest.mark.parametrize("suite", ["heckman", "cm_appendix", "sc5_radial"])
def test_non_good_rational_is_informational(suite):
    report = run_suite(suite, 2, SuiteOptions(param=Fraction(-1, 2)))
    assert report.checks[0].status == "skip"
    assert "not good" in report.checks[0].detail
    assert report.passed


def test_pbw_small():
    report = run_suite("pbw_slices", 2, SuiteOptions(pbw_bounds=(2, 2), spherical_total=4))
    assert report.passed
    assert "rank 72 of 72" in report.checks[0].detail


def test_gr_suite_small():
    report = run_suite("qgr_main", 2, SuiteOptions(bounds=(2, 2), slack=1))
    assert report.passed
    assert [c.name for c in report.checks][1:] == [
        "no overflow", "symbols lie in the target span", "trusted region matches", "untrusted region",
    ]


def test_pass_semantics():
    r = CheckReport("x", 2, None, [Check("a", "pass"), Check("b", "skip", "reason")])
    assert r.passed
    r.checks.append(Check("c", "fail", "boom"))
    assert not r.passed


def test_failure_detail_is_truncated():
    big = evaluate("(1 + d1 + d2 + s(1,2))^6", 2)
    assert len(big.terms) > MAX_DIFF_TERMS
    text = _truncated(big)
    assert text.endswith(f"({len(big.terms) - MAX_DIFF_TERMS} more terms)")
    short = evaluate("x1 + d2", 2)
    assert _truncated(short) == "d2 + x1"
