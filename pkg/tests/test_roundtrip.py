import pytest

from conftest import blaschke
from hankelspec.cauchy_kernel import InterlacedSpectrum
from hankelspec.errors import TailTooLarge
from hankelspec.roundtrip import THRESHOLDS, roundtrip
from hankelspec.symbol_synthesis import SpectralData


def test_rational_roundtrip(lam_rational):
    rep = roundtrip(lam_rational, 64)
    assert rep.passed
    assert rep.dominance == ["H", "K"]


def test_identity_symbol_roundtrip(lam_z):
    rep = roundtrip(lam_z, 32)
    assert rep.passed and rep.errors["psi_tilde"] == 0.0


def test_two_level_with_zero_tail():
    spec = InterlacedSpectrum((5.0, 1.5), (3.0, 0.0))
    data = SpectralData(spec, (blaschke(0.2j), blaschke(-0.4, 0.1)), (blaschke(0.3),))
    rep = roundtrip(data, 256)
    assert rep.passed, rep.errors
    assert rep.analysis.sigma_K[-1] == (0.0, 0)


def test_report_json(lam_rational):
    obj = roundtrip(lam_rational, 64).to_json()
    assert obj["passed"] is True
    assert set(obj["errors"]) == set(THRESHOLDS)


def test_mismatch_is_reported():
    # psi_1 carries a zero at radius 0.95: sixteen coefficients cannot resolve it
    spec = InterlacedSpectrum((2.0,), (1.0,))
    data = SpectralData(spec, (blaschke(0.95),), (blaschke(),))
    with pytest.raises(TailTooLarge):
        roundtrip(data, 16)
    rep = roundtrip(data, 16, strict=False)
    assert not rep.passed
    assert not all(rep.errors[k] <= THRESHOLDS[k] for k in THRESHOLDS)
