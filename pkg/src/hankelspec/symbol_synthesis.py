"""Symbols built from spectral data.

For ``z`` in the closed disk the vectors ``h(z)`` and ``u~(z)`` solve

    C(z)^T h = 1,      C(z) u~ = psi(z),

with ``C(z) = C(z; psi(z); psi~(z))``, and the symbol is
``u(z) = <u~(z), 1> = <D(psi(z)) h(z), 1>``. The H-components are
``u_j = psi_j h_j``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from . import cauchy_kernel, dense_linalg
from .cauchy_kernel import InterlacedSpectrum
from .errors import GridHitsAtom, InvalidSpectralData, NumericalBreakdown, TailTooLarge
from .inner_functions import InnerFunction, evaluate, grid_hits_atom, random_inner, root_of_unity_grid

log = logging.getLogger(__name__)

TAIL_RTOL = 1e-6
OVERSAMPLE = 4
CONTOUR_OVERSAMPLE = 64
BOUNDARY_TAIL = 1e-15
MAX_BOUNDARY_POINTS = 2**21


@dataclass(frozen=True)
class SpectralData:
    spectrum: InterlacedSpectrum
    psi: tuple[InnerFunction, ...]
    psi_tilde: tuple[InnerFunction, ...]

    def __post_init__(self):
        object.__setattr__(self, "psi", tuple(self.psi))
        object.__setattr__(self, "psi_tilde", tuple(self.psi_tilde))
        n = self.spectrum.n
        if len(self.psi) != n:
            raise InvalidSpectralData(f"expected {n} psi functions, got {len(self.psi)}")
        allowed = {n, n - 1} if self.spectrum.zero_tail else {n}
        if len(self.psi_tilde) not in allowed:
            raise InvalidSpectralData(
                f"expected {sorted(allowed)} psi_tilde functions, got {len(self.psi_tilde)}"
            )

    @property
    def n(self) -> int:
        return self.spectrum.n

    @property
    def psi_tilde_full(self) -> tuple[InnerFunction, ...]:
        """psi_tilde padded to length N; the padding multiplies s~_N = 0."""
        if len(self.psi_tilde) == self.n:
            return self.psi_tilde
        return self.psi_tilde + (InnerFunction.constant(),)

    @property
    def inner_functions(self) -> tuple[InnerFunction, ...]:
        return self.psi + self.psi_tilde

    @property
    def has_atoms(self) -> bool:
        return any(th.atoms for th in self.inner_functions)

    def to_json(self) -> dict:
        return {
            "v": 1,
            "s": list(self.spectrum.s),
            "s_tilde": list(self.spectrum.s_tilde),
            "psi": [p.to_json() for p in self.psi],
            "psi_tilde": [p.to_json() for p in self.psi_tilde],
        }

    @classmethod
    def from_json(cls, obj: dict) -> SpectralData:
        version = obj.get("v", 1)
        if version != 1:
            raise InvalidSpectralData(f"unsupported schema version {version}")
        try:
            spectrum = InterlacedSpectrum(tuple(obj["s"]), tuple(obj["s_tilde"]))
            psi = tuple(InnerFunction.from_json(p) for p in obj["psi"])
            psi_tilde = tuple(InnerFunction.from_json(p) for p in obj["psi_tilde"])
        except (KeyError, TypeError) as exc:
            raise InvalidSpectralData(f"malformed spectral data JSON: {exc}") from exc
        return cls(spectrum, psi, psi_tilde)


def random_spectral_data(
    n: int,
    rng=None,
    *,
    max_degree: int = 3,
    allow_singular: bool = False,
    margin: float = 0.05,
    ratio: tuple[float, float] | None = None,
    max_radius: float = 0.9,
    zero_tail: bool | None = None,
) -> SpectralData:
    rng = np.random.default_rng(rng)
    spec = cauchy_kernel.random_spectrum(n, rng, margin=margin, ratio=ratio, zero_tail=zero_tail)
    n_tilde = n - 1 if spec.zero_tail else n
    psi, psi_tilde = (
        tuple(random_inner(max_degree, allow_singular, rng, max_radius=max_radius) for _ in range(count))
        for count in (n, n_tilde)
    )
    return SpectralData(spec, psi, psi_tilde)


def _stack(functions, z: np.ndarray) -> np.ndarray:
    """``out[..., j] = functions[j](z)``."""
    if not functions:
        return np.zeros(z.shape + (0,), dtype=complex)
    return np.stack([np.asarray(evaluate(f, z), dtype=complex) for f in functions], axis=-1)


def synthesize_at(data: SpectralData, z: complex) -> tuple[complex, np.ndarray, np.ndarray]:
    """Pointwise ``(u(z), h(z), u~(z))`` using the in-package LU solver."""
    z = complex(z)
    psi = _stack(data.psi, np.asarray(z))
    psi_t = _stack(data.psi_tilde_full, np.asarray(z))
    spec = data.spectrum
    ones = np.ones(data.n, dtype=complex)
    h = cauchy_kernel.solve_C(spec, z, psi, psi_t, ones, transposed=True)
    u_tilde = cauchy_kernel.solve_C(spec, z, psi, psi_t, psi)
    u = complex(np.sum(u_tilde))
    u_dual = complex(np.sum(psi * h))
    if abs(u - u_dual) > 1e-8 * (1.0 + abs(u)):
        log.warning("dual symbol formulas disagree at z=%r: %r vs %r", z, u, u_dual)
    return u, h, u_tilde


@dataclass(frozen=True)
class FamilyValues:
    """Values of the symbol family at a set of points (last axis indexes j or k)."""

    z: np.ndarray
    u: np.ndarray
    h: np.ndarray
    u_tilde: np.ndarray
    psi: np.ndarray
    psi_tilde: np.ndarray

    @property
    def u_j(self) -> np.ndarray:
        return self.psi * self.h

    @property
    def u_dual(self) -> np.ndarray:
        """``<D(psi) h, 1>``, the second formula for the symbol."""
        return np.sum(self.u_j, axis=-1)


class SymbolFamily:
    """The symbol ``u`` together with ``h_j``, ``u_j`` and ``u~_k``.

    Pointwise evaluation is vectorised over arbitrary arrays of points with a
    batched LAPACK solve; :func:`synthesize_at` is the scalar reference path.
    """

    def __init__(self, data: SpectralData):
        self.data = data
        self.spectrum = data.spectrum

    def evaluate(self, z) -> FamilyValues:
        z = np.asarray(z, dtype=complex)
        psi = _stack(self.data.psi, z)
        psi_t = _stack(self.data.psi_tilde_full, z)
        C = cauchy_kernel.build_C(self.spectrum, z, psi, psi_t)
        try:
            h = np.linalg.solve(np.swapaxes(C, -1, -2), np.ones(z.shape + (self.data.n, 1)))[..., 0]
            u_tilde = np.linalg.solve(C, psi[..., None])[..., 0]
        except np.linalg.LinAlgError as exc:
            raise NumericalBreakdown(f"complex Cauchy matrix solve failed: {exc}") from exc
        return FamilyValues(z, np.sum(u_tilde, axis=-1), h, u_tilde, psi, psi_t)

    def __call__(self, z):
        return self.evaluate(z).u


@dataclass(frozen=True)
class FourierSeries:
    coefficients: np.ndarray
    tail: float
    negative_leak: float
    radius: float
    rotation: float
    samples: int

    def to_json(self) -> dict:
        return {
            "coefficients": [{"re": float(c.real), "im": float(c.imag)} for c in self.coefficients],
            "tail": self.tail,
            "negative_leak": self.negative_leak,
            "radius": self.radius,
            "rotation": self.rotation,
            "samples": self.samples,
        }


def contour_grid(data: SpectralData, count: int) -> tuple[np.ndarray, float]:
    """Root-of-unity grid avoiding every atom, rotated by pi/count once if needed."""
    for rotation in (0.0, np.pi / count):
        grid = root_of_unity_grid(count, rotation)
        if not any(grid_hits_atom(th, grid) for th in data.inner_functions):
            return grid, rotation
    raise GridHitsAtom(f"an atom lies on both the plain and rotated {count}-point grid")


def fourier_coefficients(
    data: SpectralData,
    M: int,
    *,
    radius: float | None = None,
    strict: bool = True,
) -> FourierSeries:
    """Taylor coefficients ``u^(0..M-1)`` of the synthesised symbol.

    Without singular atoms the symbol is rational and analytic across the
    circle: it is sampled at ``4M`` boundary points. With atoms the boundary
    trace has essential singularities and slowly decaying coefficients, so by
    default the samples are taken on the circle of radius ``1 - 1/(2M)`` with
    ``64M`` points and rescaled by ``r^{-n}``; aliasing then decays like
    ``exp(-32)``.
    """
    if M < 8 or M & (M - 1):
        raise ValueError("M must be a power of two >= 8")
    if radius is None:
        radius = 1.0 - 0.5 / M if data.has_atoms else 1.0
    if not 0.0 < radius <= 1.0:
        raise ValueError("radius must lie in (0, 1]")
    count = (OVERSAMPLE if radius == 1.0 else CONTOUR_OVERSAMPLE) * M
    grid, rotation = contour_grid(data, count) if radius == 1.0 else (root_of_unity_grid(count), 0.0)
    values = SymbolFamily(data)(radius * grid)
    raw = dense_linalg.dft(values)
    n = np.arange(count)
    # raw[n] for n >= count/2 stands for the frequency n - count
    freq = np.where(n < count // 2, n, n - count).astype(float)
    raw = raw * np.exp(-1j * rotation * freq) * radius ** (-freq)
    coeffs = raw[:M].copy()
    tail = float(np.max(np.abs(raw[M : 2 * M])))
    scale = float(np.max(np.abs(coeffs)))
    negative_leak = float(np.max(np.abs(raw[count // 2 :]))) / scale if scale else 0.0
    norm = float(np.linalg.norm(coeffs))
    if strict and tail > TAIL_RTOL * norm:
        raise TailTooLarge(f"tail {tail:.3e} exceeds {TAIL_RTOL:g}*|u^| = {TAIL_RTOL * norm:.3e}; raise M")
    return FourierSeries(coeffs, tail, negative_leak, radius, rotation, count)


def boundary_quadrature_grid(data: SpectralData, count: int) -> np.ndarray:
    return contour_grid(data, count)[0]


def resolved_boundary_family(
    data: SpectralData, count: int, *, tail_rtol: float = BOUNDARY_TAIL, max_count: int = MAX_BOUNDARY_POINTS
) -> tuple[np.ndarray, FamilyValues]:
    """Boundary samples on a grid fine enough for the symbol's coefficients to have decayed.

    Close interlaced levels put poles of ``u`` just outside the circle. The
    grid is doubled from ``count`` until the DFT of ``u`` over the second
    quarter of frequencies is below ``tail_rtol`` of its largest entry, or
    ``max_count`` is reached. Only meaningful without singular atoms.
    """
    family = SymbolFamily(data)
    while True:
        grid = boundary_quadrature_grid(data, count)
        fam = family.evaluate(grid)
        c = np.abs(dense_linalg.dft(fam.u))
        if np.max(c[count // 4 : count // 2]) <= tail_rtol * np.max(c) or count >= max_count:
            return grid, fam
        count *= 2


def family_norms(data: SpectralData, M: int) -> dict[str, np.ndarray]:
    """``|u_j|^2`` and ``|u~_k|^2`` in L^2 of the circle by the trapezoid rule.

    Starts from ``4M`` points; for Blaschke-only data the grid is refined
    until the samples resolve ``u`` (see :func:`resolved_boundary_family`).
    """
    if M < 8 or M & (M - 1):
        raise ValueError("M must be a power of two >= 8")
    if data.has_atoms:
        fam = SymbolFamily(data).evaluate(boundary_quadrature_grid(data, OVERSAMPLE * M))
    else:
        fam = resolved_boundary_family(data, OVERSAMPLE * M)[1]
    return {
        "norm_u_j_sq": np.mean(np.abs(fam.u_j) ** 2, axis=0),
        "norm_u_tilde_k_sq": np.mean(np.abs(fam.u_tilde) ** 2, axis=0),
    }
