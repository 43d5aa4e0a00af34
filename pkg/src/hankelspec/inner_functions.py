"""Finite Blaschke products times an atomic singular inner factor.

    theta(z) = e^{i phase} * prod_i (z - a_i) / (1 - conj(a_i) z)
                           * prod_atoms exp(-m (w + z) / (w - z)),   w = e^{i angle}
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AtomSingularity, GridHitsAtom, InvalidInnerFunction, OutOfDisk

ZERO_MARGIN = 1e-9
ATOM_TOL = 1e-12
DISK_TOL = 1e-12


@dataclass(frozen=True)
class InnerFunction:
    phase: float = 0.0
    zeros: tuple[complex, ...] = ()
    atoms: tuple[tuple[float, float], ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "phase", float(self.phase))
        object.__setattr__(self, "zeros", tuple(complex(a) for a in self.zeros))
        object.__setattr__(
            self, "atoms", tuple((float(t), float(m)) for t, m in self.atoms)
        )
        if not math.isfinite(self.phase):
            raise InvalidInnerFunction("phase must be finite")
        for a in self.zeros:
            if not (math.isfinite(a.real) and math.isfinite(a.imag)):
                raise InvalidInnerFunction(f"non-finite zero {a}")
            if abs(a) > 1.0 - ZERO_MARGIN:
                raise InvalidInnerFunction(f"zero {a} is not strictly inside the disk")
        points = []
        for angle, mass in self.atoms:
            if not (math.isfinite(angle) and math.isfinite(mass)) or mass <= 0:
                raise InvalidInnerFunction(f"atom ({angle}, {mass}) needs a positive finite mass")
            w = complex(math.cos(angle), math.sin(angle))
            if any(abs(w - p) <= ATOM_TOL for p in points):
                raise InvalidInnerFunction(f"duplicate atom angle {angle}")
            points.append(w)

    @classmethod
    def constant(cls, phase: float = 0.0) -> InnerFunction:
        return cls(phase=phase)

    @classmethod
    def identity(cls) -> InnerFunction:
        """theta(z) = z."""
        return cls(zeros=(0j,))

    @property
    def degree(self) -> int:
        return len(self.zeros)

    @property
    def is_blaschke(self) -> bool:
        return not self.atoms

    @property
    def atom_points(self) -> np.ndarray:
        return np.array([np.exp(1j * t) for t, _ in self.atoms], dtype=complex)

    def __mul__(self, other: InnerFunction) -> InnerFunction:
        if not isinstance(other, InnerFunction):
            return NotImplemented
        merged: list[tuple[float, float]] = list(self.atoms)
        for angle, mass in other.atoms:
            w = np.exp(1j * angle)
            for i, (a0, m0) in enumerate(merged):
                if abs(np.exp(1j * a0) - w) <= ATOM_TOL:
                    merged[i] = (a0, m0 + mass)
                    break
            else:
                merged.append((angle, mass))
        return InnerFunction(
            phase=math.remainder(self.phase + other.phase, 2 * math.pi),
            zeros=self.zeros + other.zeros,
            atoms=tuple(merged),
        )

    def __call__(self, z):
        return evaluate(self, z)

    def to_json(self) -> dict:
        return {
            "phase": self.phase,
            "zeros": [{"re": a.real, "im": a.imag} for a in self.zeros],
            "atoms": [{"angle": t, "mass": m} for t, m in self.atoms],
        }

    @classmethod
    def from_json(cls, obj: dict) -> InnerFunction:
        try:
            return cls(
                phase=obj.get("phase", 0.0),
                zeros=tuple(complex(a["re"], a["im"]) for a in obj.get("zeros", [])),
                atoms=tuple((a["angle"], a["mass"]) for a in obj.get("atoms", [])),
            )
        except (KeyError, TypeError, AttributeError) as exc:
            raise InvalidInnerFunction(f"malformed inner function JSON: {exc}") from exc


def evaluate(theta: InnerFunction, z):
    """Evaluate ``theta`` at a point or an array of points in the closed disk."""
    zz = np.asarray(z, dtype=complex)
    if np.any(np.abs(zz) > 1.0 + DISK_TOL):
        raise OutOfDisk("evaluation point outside the closed unit disk")
    out = np.full(zz.shape, np.exp(1j * theta.phase), dtype=complex)
    for a in theta.zeros:
        out *= (zz - a) / (1.0 - np.conj(a) * zz)
    for angle, mass in theta.atoms:
        w = np.exp(1j * angle)
        gap = w - zz
        if np.any(np.abs(gap) <= ATOM_TOL):
            raise AtomSingularity(f"point coincides with singular atom at angle {angle}")
        out *= np.exp(-mass * (w + zz) / gap)
    if out.ndim == 0:
        return complex(out)
    return out


def root_of_unity_grid(M: int, rotation: float = 0.0) -> np.ndarray:
    return np.exp(1j * (2 * np.pi * np.arange(M) / M + rotation))


def grid_hits_atom(theta: InnerFunction, grid: np.ndarray) -> bool:
    if not theta.atoms:
        return False
    d = np.abs(grid[:, None] - theta.atom_points[None, :])
    return bool(np.any(d <= ATOM_TOL))


def boundary_samples(theta: InnerFunction, M: int, rotation: float = 0.0) -> np.ndarray:
    """Values of ``theta`` on the (optionally rotated) M-th roots of unity."""
    if M < 1:
        raise ValueError("M must be positive")
    grid = root_of_unity_grid(M, rotation)
    if grid_hits_atom(theta, grid):
        raise GridHitsAtom(f"an atom of theta lies on the {M}-point grid")
    return np.atleast_1d(evaluate(theta, grid))


def random_inner(
    max_degree: int, allow_singular: bool = False, rng_seed=None, *, max_radius: float = 0.9
) -> InnerFunction:
    """Random inner function for test data.

    Degree uniform in ``0..max_degree``, zeros uniform (by area) in
    ``|a| <= max_radius``, and when ``allow_singular`` a coin flip decides whether
    to add one atom with mass in ``[0.1, 2]``.
    """
    if max_degree < 0:
        raise ValueError("max_degree must be non-negative")
    rng = np.random.default_rng(rng_seed)
    phase = rng.uniform(-np.pi, np.pi)
    degree = int(rng.integers(0, max_degree + 1))
    if not 0.0 <= max_radius <= 1.0 - ZERO_MARGIN:
        raise ValueError("max_radius must lie in [0, 1)")
    radii = max_radius * np.sqrt(rng.uniform(0.0, 1.0, degree))
    angles = rng.uniform(0.0, 2 * np.pi, degree)
    zeros = tuple(complex(r * np.cos(t), r * np.sin(t)) for r, t in zip(radii, angles))
    atoms: tuple[tuple[float, float], ...] = ()
    if allow_singular and rng.random() < 0.5:
        atoms = ((float(rng.uniform(-np.pi, np.pi)), float(rng.uniform(0.1, 2.0))),)
    return InnerFunction(phase=phase, zeros=zeros, atoms=atoms)
