"""Cauchy matrices built from an interlaced pair of singular-value lists.

Notation used throughout: ``s`` are the H-dominant levels, ``s_tilde`` the
K-dominant ones, ``T[j, k] = 1 / (s_j^2 - s_tilde_k^2)`` and

    C(z; zeta; zeta_tilde)[j, k] = (s_j - z s_tilde_k zeta_j zeta_tilde_k) / (s_j^2 - s_tilde_k^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import dense_linalg
from .errors import (
    CertificationFailure,
    DegenerateSpectrum,
    InvalidSpectrum,
    NumericalBreakdown,
    OutOfDisk,
    SingularMatrix,
)

SPECTRUM_MARGIN = 1e-9
DISK_TOL = 1e-12
LOG_SPACE_ABOVE = 8
UNDERFLOW = 1e-300
CERTIFY_FLOOR = 1e-12


@dataclass(frozen=True)
class InterlacedSpectrum:
    """``s_1 > s~_1 > s_2 > ... > s_N > s~_N >= 0``."""

    s: tuple[float, ...]
    s_tilde: tuple[float, ...]

    def __post_init__(self):
        s = tuple(float(x) for x in self.s)
        st = tuple(float(x) for x in self.s_tilde)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "s_tilde", st)
        if len(s) < 1 or len(s) != len(st):
            raise InvalidSpectrum(f"need N >= 1 levels of each kind, got {len(s)} and {len(st)}")
        merged = [x for pair in zip(s, st) for x in pair]
        if not all(math.isfinite(x) for x in merged):
            raise InvalidSpectrum("levels must be finite")
        if merged[-1] < 0:
            raise InvalidSpectrum("s_tilde_N must be non-negative")
        for i, (a, b) in enumerate(zip(merged, merged[1:])):
            if a - b < SPECTRUM_MARGIN:
                raise InvalidSpectrum(
                    f"interlacing violated between positions {i} and {i + 1}: {a!r} vs {b!r}"
                )

    @property
    def n(self) -> int:
        return len(self.s)

    @property
    def s_arr(self) -> np.ndarray:
        return np.array(self.s)

    @property
    def s_tilde_arr(self) -> np.ndarray:
        return np.array(self.s_tilde)

    @property
    def zero_tail(self) -> bool:
        """True when the last K-level is zero."""
        return self.s_tilde[-1] == 0.0

    def scaled(self, factor: float) -> InterlacedSpectrum:
        return InterlacedSpectrum(
            tuple(factor * x for x in self.s), tuple(factor * x for x in self.s_tilde)
        )

    def to_json(self) -> dict:
        return {"s": list(self.s), "s_tilde": list(self.s_tilde)}


@dataclass(frozen=True)
class CauchyWeights:
    tau_sq: np.ndarray
    kappa_sq: np.ndarray

    @property
    def tau(self) -> np.ndarray:
        return np.sqrt(self.tau_sq)

    @property
    def kappa(self) -> np.ndarray:
        return np.sqrt(self.kappa_sq)


def random_spectrum(
    n: int,
    rng=None,
    *,
    margin: float = 0.05,
    max_gap: float = 1.0,
    ratio: tuple[float, float] | None = None,
    zero_tail: bool | None = None,
) -> InterlacedSpectrum:
    """Random interlaced spectrum.

    By default every consecutive gap lies in ``[margin, margin + max_gap]``.
    With ``ratio=(lo, hi)`` the levels are instead spaced geometrically, each
    consecutive ratio drawn from ``[lo, hi]`` and the smallest positive level
    from ``[0.2, 1]``. ``zero_tail=None`` lets a coin flip
    decide whether ``s_tilde_N == 0``.
    """
    rng = np.random.default_rng(rng)
    if zero_tail is None:
        zero_tail = bool(rng.random() < 0.25)
    if ratio is not None:
        ratios = rng.uniform(ratio[0], ratio[1], 2 * n - 1)
        levels = rng.uniform(0.2, 1.0) * np.concatenate([[1.0], np.cumprod(ratios)])[::-1]
        if zero_tail:
            levels = np.concatenate([levels[1:], [0.0]])
        return InterlacedSpectrum(tuple(levels[0::2]), tuple(levels[1::2]))
    gaps = margin + max_gap * rng.random(2 * n)
    if zero_tail:
        gaps[0] = 0.0
    levels = np.cumsum(gaps)[::-1]
    return InterlacedSpectrum(tuple(levels[0::2]), tuple(levels[1::2]))


def build_T(spec: InterlacedSpectrum) -> np.ndarray:
    return 1.0 / (spec.s_arr[:, None] ** 2 - spec.s_tilde_arr[None, :] ** 2)


def _signed_log_product(factors: np.ndarray) -> tuple[float, float]:
    sign = float(np.prod(np.sign(factors)))
    return sign, float(np.sum(np.log(np.abs(factors))))


def weights(spec: InterlacedSpectrum) -> CauchyWeights:
    """Residue weights ``tau_j^2`` and ``kappa_k^2`` of the Cauchy inverse.

    Products are formed directly for N <= 8 and in log-space above that.
    """
    s2 = spec.s_arr**2
    t2 = spec.s_tilde_arr**2
    n = spec.n
    tau_sq = np.empty(n)
    kappa_sq = np.empty(n)
    log_space = n > LOG_SPACE_ABOVE
    log_floor = math.log(UNDERFLOW)
    for j in range(n):
        num = s2[j] - t2
        den = s2[j] - np.delete(s2, j)
        tau_sq[j] = _ratio(num, den, log_space, log_floor)
    for k in range(n):
        num = s2 - t2[k]
        den = np.delete(t2, k) - t2[k]
        kappa_sq[k] = _ratio(num, den, log_space, log_floor)
    if np.any(tau_sq <= 0) or np.any(kappa_sq <= 0):
        raise DegenerateSpectrum("non-positive residue weight; interlacing is numerically lost")
    return CauchyWeights(tau_sq, kappa_sq)


def _ratio(num: np.ndarray, den: np.ndarray, log_space: bool, log_floor: float) -> float:
    if log_space:
        sn, ln = _signed_log_product(num)
        sd, ld = _signed_log_product(den)
        if ln < log_floor or (den.size and ld < log_floor):
            raise DegenerateSpectrum("weight product underflows")
        return sn * sd * math.exp(ln - ld)
    pn = float(np.prod(num))
    pd = float(np.prod(den))
    if abs(pn) < UNDERFLOW or abs(pd) < UNDERFLOW:
        raise DegenerateSpectrum("weight product underflows")
    return pn / pd


def explicit_inverse(spec: InterlacedSpectrum, w: CauchyWeights) -> np.ndarray:
    """``T^{-1} = D(kappa^2) T^T D(tau^2)`` as a dense matrix."""
    return w.kappa_sq[:, None] * build_T(spec).T * w.tau_sq[None, :]


def apply_explicit_inverse(spec: InterlacedSpectrum, w: CauchyWeights, y) -> np.ndarray:
    y = np.asarray(y, dtype=complex)
    if y.shape != (spec.n,):
        raise ValueError(f"rhs must have length {spec.n}")
    return w.kappa_sq * (build_T(spec).T @ (w.tau_sq * y))


def build_V(spec: InterlacedSpectrum, w: CauchyWeights) -> np.ndarray:
    """The real orthogonal matrix ``D(tau) T D(kappa)``."""
    return w.tau[:, None] * build_T(spec) * w.kappa[None, :]


def _check_disk(*arrays) -> None:
    for a in arrays:
        if np.any(np.abs(a) > 1.0 + DISK_TOL):
            raise OutOfDisk("parameter outside the closed unit disk")


def build_C(spec: InterlacedSpectrum, z, zeta, zeta_tilde) -> np.ndarray:
    """Complex Cauchy matrix.

    Broadcasts over leading axes: ``z`` of shape ``(...)`` and ``zeta``,
    ``zeta_tilde`` of shape ``(..., N)`` give a stack ``(..., N, N)``.
    """
    z = np.asarray(z, dtype=complex)
    zeta = np.asarray(zeta, dtype=complex)
    zeta_tilde = np.asarray(zeta_tilde, dtype=complex)
    _check_disk(z, zeta, zeta_tilde)
    T = build_T(spec)
    s = spec.s_arr
    st = spec.s_tilde_arr
    second = (z[..., None, None] * zeta[..., :, None]) * (st * zeta_tilde)[..., None, :]
    return (s[:, None] - second) * T


def build_F(a, b) -> np.ndarray:
    """``F[j, k] = (a_j - b_k) / (|a_j|^2 - |b_k|^2)``, broadcasting over leading axes."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    num = a[..., :, None] - b[..., None, :]
    den = np.abs(a[..., :, None]) ** 2 - np.abs(b[..., None, :]) ** 2
    return num / den


def solve_C(spec: InterlacedSpectrum, z, zeta, zeta_tilde, rhs, transposed: bool = False) -> np.ndarray:
    """Solve ``C x = rhs`` (or ``C^T x = rhs``) with the in-package LU."""
    C = build_C(spec, z, zeta, zeta_tilde)
    if transposed:
        C = C.T
    try:
        return dense_linalg.lu_solve(C, rhs)
    except SingularMatrix as exc:
        raise NumericalBreakdown(f"LU breakdown on the complex Cauchy matrix: {exc}") from exc


def _disk_points(rng, shape) -> np.ndarray:
    r = np.sqrt(rng.uniform(0.0, 1.0, shape))
    return r * np.exp(1j * rng.uniform(0.0, 2 * np.pi, shape))


def _torus_points(rng, shape) -> np.ndarray:
    return np.exp(1j * rng.uniform(0.0, 2 * np.pi, shape))


@dataclass(frozen=True)
class CertificationReport:
    n: int
    samples: int
    min_sigma: float
    worst_point: dict

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "min_sigma": self.min_sigma,
            "samples": self.samples,
            "worst_point": self.worst_point,
        }


def _encode_complex(values) -> list[dict]:
    return [{"re": float(v.real), "im": float(v.imag)} for v in np.atleast_1d(values)]


def certify_invertibility(
    spec: InterlacedSpectrum, sample_count: int, rng_seed=None, *, batch: int = 20000
) -> CertificationReport:
    """Sampled lower bound on ``sigma_min(C)`` over the closed polydisk.

    ``sample_count`` parameter points are drawn from the solid polydisk and
    another ``sample_count`` from the torus ``|z| = |zeta_j| = |zeta~_k| = 1``.
    """
    if sample_count < 1:
        raise ValueError("sample_count must be at least 1")
    rng = np.random.default_rng(rng_seed)
    n = spec.n
    best = math.inf
    worst: dict = {}
    for domain, draw in (("disk", _disk_points), ("torus", _torus_points)):
        done = 0
        while done < sample_count:
            k = min(batch, sample_count - done)
            z = draw(rng, (k,))
            zeta = draw(rng, (k, n))
            zeta_t = draw(rng, (k, n))
            sig = dense_linalg.min_singular_values(build_C(spec, z, zeta, zeta_t))
            i = int(np.argmin(sig))
            if sig[i] < best:
                best = float(sig[i])
                worst = {
                    "domain": domain,
                    "z": _encode_complex(z[i])[0],
                    "zeta": _encode_complex(zeta[i]),
                    "zeta_tilde": _encode_complex(zeta_t[i]),
                }
            if sig[i] <= CERTIFY_FLOOR:
                raise CertificationFailure(
                    f"sigma_min = {sig[i]:.3e} at a sampled {domain} point: {worst}"
                )
            done += k
    return CertificationReport(n=n, samples=2 * sample_count, min_sigma=best, worst_point=worst)
