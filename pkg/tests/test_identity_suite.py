import dataclasses

import pytest

from hankelspec import identity_suite as suite
from hankelspec.cauchy_kernel import weights

FAST = suite.SizeCaps(max_n=4, max_degree=2, max_order=64)


def test_manifest_audit():
    suite.self_audit()
    assert set(suite.MANIFEST) == set(suite.CHECKS) == set(suite.THRESHOLDS)


def test_audit_catches_missing_check(monkeypatch):
    monkeypatch.setattr(suite, "MANIFEST", suite.MANIFEST + ("uncovered_identity",))
    with pytest.raises(AssertionError):
        suite.self_audit()


def test_rejects_zero_trials():
    with pytest.raises(ValueError):
        suite.run_suite(1, 0)


@pytest.mark.parametrize("caps", [{"max_n": 9}, {"max_degree": 4}, {"max_order": 1024}, {"max_order": 100}])
def test_rejects_caps_beyond_limits(caps):
    with pytest.raises(ValueError):
        suite.run_suite(1, 1, caps)


def test_small_run_passes_and_is_deterministic():
    a = suite.run_suite(3, 2, FAST)
    b = suite.run_suite(3, 2, FAST)
    assert [r.name for r in a] == list(suite.MANIFEST)
    assert all(r.passed for r in a), [r.to_json() for r in a if not r.passed]
    assert [r.max_residual for r in a] == [r.max_residual for r in b]
    for r in a:
        assert r.passed == (r.max_residual <= r.threshold)


def test_order_independent():
    names = ["commutator", "cauchy_inverse"]
    a = {r.name: r.max_residual for r in suite.run_suite(5, 3, FAST, only=names)}
    b = {r.name: r.max_residual for r in suite.run_suite(5, 3, FAST, only=names[::-1])}
    assert a == b


def test_corrupted_weights_fail_with_witness():
    def corrupted(spec):
        w = weights(spec)
        return dataclasses.replace(w, tau_sq=1.01 * w.tau_sq)

    (res,) = suite.run_suite(42, 5, FAST, weights_fn=corrupted, only=["cauchy_inverse"])
    assert not res.passed
    assert "spectrum" in res.witness and "trial" in res.witness


def test_seed_42_full_run():
    results = suite.run_suite(42, 25)
    failed = [r.to_json() for r in results if not r.passed]
    assert not failed, failed
