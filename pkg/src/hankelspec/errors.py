"""Exception hierarchy.

Every domain error carries a ``kind`` (the class name) so the CLI can emit
``{"error": {"kind": ..., "detail": ...}}`` without a lookup table.
"""

from __future__ import annotations


class HankelSpecError(ValueError):
    """Base class for all domain errors raised by this package."""

    @property
    def kind(self) -> str:
        return type(self).__name__


# dense_linalg
class SingularMatrix(HankelSpecError):
    pass


class NotHermitian(HankelSpecError):
    pass


# inner_functions
class InvalidInnerFunction(HankelSpecError):
    pass


class AtomSingularity(HankelSpecError):
    pass


class GridHitsAtom(HankelSpecError):
    pass


# cauchy_kernel
class InvalidSpectrum(HankelSpecError):
    pass


class DegenerateSpectrum(HankelSpecError):
    pass


class OutOfDisk(HankelSpecError):
    pass


class NumericalBreakdown(HankelSpecError):
    pass


class CertificationFailure(HankelSpecError):
    pass


# symbol_synthesis
class InvalidSpectralData(HankelSpecError):
    pass


class TailTooLarge(HankelSpecError):
    pass


# hankel_analysis
class ClusterAmbiguity(HankelSpecError):
    pass


class DominanceAmbiguity(HankelSpecError):
    pass


class SmallDenominator(HankelSpecError):
    pass


class RootCountMismatch(HankelSpecError):
    pass


class EmptySpectrum(HankelSpecError):
    pass


class InterlacingViolation(HankelSpecError):
    pass


# io
class SchemaError(HankelSpecError):
    pass
