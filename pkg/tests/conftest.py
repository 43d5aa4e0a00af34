import numpy as np
import pytest

from hankelspec.cauchy_kernel import InterlacedSpectrum
from hankelspec.inner_functions import InnerFunction
from hankelspec.symbol_synthesis import SpectralData


def blaschke(*zeros, phase=0.0):
    return InnerFunction(phase=phase, zeros=zeros)


@pytest.fixture
def lam_z():
    """u(z) = z."""
    return SpectralData(InterlacedSpectrum((1.0,), (0.0,)), (blaschke(0.0),), ())


@pytest.fixture
def lam_rational():
    """u(z) = 3 / (2 - z)."""
    return SpectralData(InterlacedSpectrum((2.0,), (1.0,)), (blaschke(),), (blaschke(),))


@pytest.fixture
def spec_31():
    return InterlacedSpectrum((3.0, 1.0), (2.0, 0.5))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
