import json

import pytest

import splitlab


def test_eval_normal_forms():
    assert splitlab.is_zero("Comm(K[1],K[2]) + i*J[3]")
    assert splitlab.is_zero("Dot(P,K) - Dot(K,P) + 3*i*H")
    assert splitlab.evaluate("H*H - Dot(P,P)", mode="massless") == "0"
    assert not splitlab.is_zero("Comm(K[1],K[2])")


def test_eval_error_is_structured():
    with pytest.raises(splitlab.LangError, match="1:11"):
        splitlab.evaluate("Comm(K[1],")


def test_identity_suite_exact():
    results = splitlab.identity_suite()
    assert results
    assert all(r["zero"] for r in results)
    assert {r["ring"] for r in results} == {"massive", "massless"}


def test_chern_numbers():
    for h in (-1, 0, 1):
        value, raw = splitlab.chern_number(h, n_theta=24, n_phi=48)
        assert value == -2 * h
        assert abs(raw - value) < 0.05


def test_algebra_residuals_small():
    res = splitlab.algebra_residuals(spin=1)
    assert max(res.values()) < 1e-3


def test_config_errors_carry_location():
    with pytest.raises(splitlab.ConfigError, match="<string>:2:1"):
        splitlab.parse_config("[run]\nbogus = 1\n")


def test_run_report_is_deterministic():
    a = splitlab.run_suite("holonomy")
    b = splitlab.run_suite("holonomy")
    assert a == b
    report = json.loads(a)
    assert report["schema_version"] == 1
    assert report["summary"]["failures"] == 0
    assert all(r["anchor"] for s in report["suites"] for r in s["records"])
