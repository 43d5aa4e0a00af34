"""Randomised battery of every structural identity the toolkit relies on.

Each check draws fresh spectra and inner functions per trial from an rng
seeded by ``(seed, check index, trial)``, so results do not depend on the
order in which checks run. Failures are reported, never raised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import cauchy_kernel, dense_linalg
from .cauchy_kernel import InterlacedSpectrum, build_C, build_F, build_T, build_V, weights
from .errors import HankelSpecError
from .hankel_analysis import build_hankel, characterize_sigma_tilde
from .symbol_synthesis import (
    SpectralData,
    SymbolFamily,
    fourier_coefficients,
    random_spectral_data,
    resolved_boundary_family,
)

# One row per check: (threshold, what it asserts). Thresholds are copied from
# the invariants of the module that owns the identity.
THRESHOLDS: dict[str, tuple[float, str]] = {
    "cauchy_inverse": (1e-9, "T D(kappa^2) T^T D(tau^2) = I, max-norm"),
    "weights_positive": (0.0, "number of non-positive tau^2, kappa^2"),
    "weights_column_sums": (1e-10, "sum_j tau_j^2 / (s_j^2 - s~_k^2) = 1"),
    "partial_fractions": (1e-9, "A/B = 1 - sum kappa^2/(z - s~^2), B/A = 1 + sum tau^2/(z - s^2), relative"),
    "v_orthogonal": (1e-10, "V^T V = I, max-norm"),
    "commutator": (1e-11, "D(s^2) T - T D(s~^2) = 1 1^T, max-norm"),
    "rank_one_update": (1e-10, "V^T D(s^2) V = D(s~^2) + x x^T, x = D(kappa) 1"),
    "contraction": (1e-10, "|D(s)^-1 V D(s~)| - 1, clipped at 0"),
    "c_decomposition": (1e-12, "C = D(s) T - z D(zeta) T D(s~) D(zeta~)"),
    "c_invertible": (1e12, "1 / sigma_min(C) over disk and torus samples"),
    "f_invertible": (1e12, "condition number of F with distinct moduli"),
    "linear_systems": (1e-9, "C^T h = 1 and C u~ = psi, relative residual"),
    "dual_symbol_formulas": (1e-10, "<u~, 1> = <D(psi) h, 1>"),
    "projection_relations": (1e-9, "u_j = tau_j^2 sum_k u~_k/(s_j^2 - s~_k^2) and dual, relative"),
    "norm_relations": (1e-9, "same relations with |u_j|^2, |u~_k|^2 in place of tau^2, kappa^2, relative"),
    "family_norms": (1e-6, "|u_j|^2 = tau_j^2 and |u~_k|^2 = kappa_k^2, relative"),
    "secular_equations": (1e-8, "sum_j |u_j|^2/(s_j^2 - s~_k^2) = 1 and sum_k |u~_k|^2/(s_j^2 - s~_k^2) = 1"),
    "sigma_tilde_roots": (1e-8, "bisection roots of the secular equation equal s~_k^2"),
    "eigenspace_projections": (1e-8, "H^2 u_j = s_j^2 u_j, K^2 u~_k = s~_k^2 u~_k, u = sum u_j = sum u~_k, Gram matrices"),
    "rank_one_identity": (1e-10, "G conj(G) - G_K conj(G_K) = c c* - c' c'*, relative to |G|^2"),
    "schmidt_action_h": (1e-6, "H_u(f h_j) = s_j conj(f) psi_j h_j for f = H_psi_j q"),
    "schmidt_action_k": (1e-6, "K_u(g u~_k) = s~_k conj(g) psi~_k u~_k for g = H_psi~_k q"),
}

# Every identity the suite must cover; audited against the registry at import.
MANIFEST: tuple[str, ...] = (
    "cauchy_inverse",
    "weights_positive",
    "weights_column_sums",
    "partial_fractions",
    "v_orthogonal",
    "commutator",
    "rank_one_update",
    "contraction",
    "c_decomposition",
    "c_invertible",
    "f_invertible",
    "linear_systems",
    "dual_symbol_formulas",
    "projection_relations",
    "norm_relations",
    "family_norms",
    "secular_equations",
    "sigma_tilde_roots",
    "eigenspace_projections",
    "rank_one_identity",
    "schmidt_action_h",
    "schmidt_action_k",
)

SAMPLES_PER_TRIAL = 200
BOUNDARY_OVERSAMPLE = 32
CAP_LIMITS = {"max_n": 8, "max_degree": 3, "max_order": 512}


@dataclass(frozen=True)
class SizeCaps:
    max_n: int = 8
    max_degree: int = 3
    max_order: int = 512

    def __post_init__(self):
        if not 1 <= self.max_n <= CAP_LIMITS["max_n"]:
            raise ValueError(f"max_n must lie in [1, {CAP_LIMITS['max_n']}]")
        if not 0 <= self.max_degree <= CAP_LIMITS["max_degree"]:
            raise ValueError(f"max_degree must lie in [0, {CAP_LIMITS['max_degree']}]")
        o = self.max_order
        if o < 8 or o > CAP_LIMITS["max_order"] or o & (o - 1):
            raise ValueError(f"max_order must be a power of two in [8, {CAP_LIMITS['max_order']}]")

    @property
    def synthesis_n(self) -> int:
        return min(self.max_n, 4)

    @property
    def boundary_points(self) -> int:
        return BOUNDARY_OVERSAMPLE * self.max_order


@dataclass
class CheckResult:
    name: str
    max_residual: float
    threshold: float
    passed: bool
    witness: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "max_residual": self.max_residual,
            "threshold": self.threshold,
            "passed": self.passed,
            "witness": self.witness,
        }


@dataclass
class _Context:
    caps: SizeCaps
    weights_fn: Callable[[InterlacedSpectrum], cauchy_kernel.CauchyWeights]


# ---------------------------------------------------------------- helpers


def _spectrum(rng, ctx: _Context) -> InterlacedSpectrum:
    return cauchy_kernel.random_spectrum(int(rng.integers(1, ctx.caps.max_n + 1)), rng)


def _data(rng, ctx: _Context, *, allow_singular: bool) -> SpectralData:
    n = int(rng.integers(1, ctx.caps.synthesis_n + 1))
    return random_spectral_data(n, rng, max_degree=ctx.caps.max_degree, allow_singular=allow_singular)


def _interior_points(rng, count: int) -> np.ndarray:
    r = 0.99 * np.sqrt(rng.uniform(0.0, 1.0, count))
    return r * np.exp(1j * rng.uniform(0.0, 2 * np.pi, count))


def _rel(diff, ref) -> float:
    return float(np.max(np.abs(diff))) / max(float(np.max(np.abs(ref))), 1e-300)


def _analytic(samples: np.ndarray) -> np.ndarray:
    """Samples of the Szego projection: drop negative frequencies."""
    c = dense_linalg.dft(samples)
    c[c.shape[0] // 2 :] = 0.0
    return dense_linalg.inverse_dft(c)


def _hankel_h(u: np.ndarray, f: np.ndarray) -> np.ndarray:
    return _analytic(u * np.conj(f))


def _hankel_k(u: np.ndarray, f: np.ndarray, zeta: np.ndarray) -> np.ndarray:
    return _analytic(np.conj(zeta) * u * np.conj(f))


def _analytic_defect(samples: np.ndarray) -> float:
    c = dense_linalg.dft(samples)
    return float(np.max(np.abs(c[c.shape[0] // 2 :])))


def _boundary_family(data: SpectralData, ctx: _Context):
    return resolved_boundary_family(data, ctx.caps.boundary_points)


# ---------------------------------------------------------------- Cauchy-side checks


def _check_cauchy_inverse(rng, ctx):
    spec = _spectrum(rng, ctx)
    w = ctx.weights_fn(spec)
    T = build_T(spec)
    inv = w.kappa_sq[:, None] * T.T * w.tau_sq[None, :]
    return float(np.max(np.abs(T @ inv - np.eye(spec.n)))), {"spectrum": spec.to_json()}


def _check_weights_positive(rng, ctx):
    spec = _spectrum(rng, ctx)
    w = ctx.weights_fn(spec)
    bad = int(np.sum(w.tau_sq <= 0) + np.sum(w.kappa_sq <= 0))
    return float(bad), {"spectrum": spec.to_json()}


def _check_weights_column_sums(rng, ctx):
    spec = _spectrum(rng, ctx)
    w = ctx.weights_fn(spec)
    sums = build_T(spec).T @ w.tau_sq
    return float(np.max(np.abs(sums - 1.0))), {"spectrum": spec.to_json()}


def _check_partial_fractions(rng, ctx):
    spec = _spectrum(rng, ctx)
    w = ctx.weights_fn(spec)
    s2, t2 = spec.s_arr**2, spec.s_tilde_arr**2
    hi = 1.5 * s2[0] + 1.0
    z = rng.uniform(-0.5, hi, 100)
    poles = np.concatenate([s2, t2])
    z = z[np.min(np.abs(z[:, None] - poles[None, :]), axis=1) > 1e-3 * hi]
    A = np.prod(z[:, None] - s2[None, :], axis=1)
    B = np.prod(z[:, None] - t2[None, :], axis=1)
    ab = 1.0 - np.sum(w.kappa_sq / (z[:, None] - t2[None, :]), axis=1)
    ba = 1.0 + np.sum(w.tau_sq / (z[:, None] - s2[None, :]), axis=1)
    res = max(_rel(ab - A / B, A / B), _rel(ba - B / A, B / A))
    return res, {"spectrum": spec.to_json()}


def _check_v_orthogonal(rng, ctx):
    spec = _spectrum(rng, ctx)
    V = build_V(spec, ctx.weights_fn(spec))
    return float(np.max(np.abs(V.T @ V - np.eye(spec.n)))), {"spectrum": spec.to_json()}


def _check_commutator(rng, ctx):
    spec = _spectrum(rng, ctx)
    T = build_T(spec)
    lhs = (spec.s_arr**2)[:, None] * T - T * (spec.s_tilde_arr**2)[None, :]
    return float(np.max(np.abs(lhs - 1.0))), {"spectrum": spec.to_json()}


def _check_rank_one_update(rng, ctx):
    spec = _spectrum(rng, ctx)
    w = ctx.weights_fn(spec)
    V = build_V(spec, w)
    x = w.kappa
    lhs = V.T @ np.diag(spec.s_arr**2) @ V
    rhs = np.diag(spec.s_tilde_arr**2) + np.outer(x, x)
    return _rel(lhs - rhs, rhs), {"spectrum": spec.to_json()}


def _check_contraction(rng, ctx):
    spec = _spectrum(rng, ctx)
    V = build_V(spec, ctx.weights_fn(spec))
    M = (1.0 / spec.s_arr)[:, None] * V * spec.s_tilde_arr[None, :]
    top = float(np.linalg.norm(M, 2))
    return max(top - 1.0, 0.0), {"spectrum": spec.to_json(), "norm": top}


def _random_parameters(rng, n, count):
    z = np.where(rng.random(count) < 0.5, _interior_points(rng, count), np.exp(1j * rng.uniform(0, 2 * np.pi, count)))
    zeta = np.exp(1j * rng.uniform(0, 2 * np.pi, (count, n))) * np.sqrt(rng.uniform(0, 1, (count, n)))
    zeta_t = np.exp(1j * rng.uniform(0, 2 * np.pi, (count, n))) * np.sqrt(rng.uniform(0, 1, (count, n)))
    return z, zeta, zeta_t


def _check_c_decomposition(rng, ctx):
    spec = _spectrum(rng, ctx)
    z, zeta, zeta_t = _random_parameters(rng, spec.n, SAMPLES_PER_TRIAL)
    C = build_C(spec, z, zeta, zeta_t)
    T = build_T(spec)
    first = spec.s_arr[:, None] * T
    second = z[:, None, None] * zeta[:, :, None] * T[None] * (spec.s_tilde_arr[None, :] * zeta_t)[:, None, :]
    return _rel(C - (first - second), C), {"spectrum": spec.to_json()}


def _check_c_invertible(rng, ctx):
    spec = _spectrum(rng, ctx)
    n, k = spec.n, SAMPLES_PER_TRIAL
    disk = _random_parameters(rng, n, k)
    torus = tuple(np.exp(1j * rng.uniform(0, 2 * np.pi, shape)) for shape in ((k,), (k, n), (k, n)))
    sig = np.concatenate([dense_linalg.min_singular_values(build_C(spec, *p)) for p in (disk, torus)])
    return 1.0 / max(float(np.min(sig)), 1e-300), {"spectrum": spec.to_json(), "min_sigma": float(np.min(sig))}


def random_distinct_moduli(rng, n: int, min_gap: float = 1e-3) -> tuple[np.ndarray, np.ndarray]:
    """``a``, ``b`` in C^n whose 2n moduli are pairwise at least ``min_gap`` apart."""
    gaps = min_gap + rng.exponential(0.5, 2 * n)
    moduli = rng.permutation(np.cumsum(gaps))
    phases = np.exp(1j * rng.uniform(0, 2 * np.pi, 2 * n))
    pts = moduli * phases
    return pts[:n], pts[n:]


def _check_f_invertible(rng, ctx):
    n = int(rng.integers(1, min(ctx.caps.max_n, 6) + 1))
    worst, witness = 0.0, {}
    for _ in range(20):
        a, b = random_distinct_moduli(rng, n)
        sv = np.linalg.svd(build_F(a, b), compute_uv=False)
        cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else math.inf
        if cond > worst:
            worst = cond
            witness = {"a": [[x.real, x.imag] for x in a], "b": [[x.real, x.imag] for x in b]}
    return worst, witness


# ---------------------------------------------------------------- synthesis-side checks


def _interior_family(rng, ctx, *, allow_singular=True):
    data = _data(rng, ctx, allow_singular=allow_singular)
    fam = SymbolFamily(data).evaluate(_interior_points(rng, SAMPLES_PER_TRIAL))
    return data, fam


def _check_linear_systems(rng, ctx):
    data, fam = _interior_family(rng, ctx)
    C = build_C(data.spectrum, fam.z, fam.psi, fam.psi_tilde)
    r1 = np.einsum("pkj,pk->pj", C, fam.h) - 1.0
    r2 = np.einsum("pjk,pk->pj", C, fam.u_tilde) - fam.psi
    res = max(float(np.max(np.abs(r1))), float(np.max(np.abs(r2))))
    return res, {"data": data.to_json()}


def _check_dual_symbol_formulas(rng, ctx):
    data, fam = _interior_family(rng, ctx)
    return float(np.max(np.abs(fam.u - fam.u_dual))), {"data": data.to_json()}


def _relations(data, fam, tau_sq, kappa_sq) -> float:
    T = build_T(data.spectrum)
    uj, ut = fam.u_j, fam.u_tilde
    r1 = _rel(uj - tau_sq * (ut @ T.T), uj)
    r2 = _rel(ut - kappa_sq * (uj @ T), ut)
    return max(r1, r2)


def _check_projection_relations(rng, ctx):
    data, fam = _interior_family(rng, ctx)
    w = ctx.weights_fn(data.spectrum)
    return _relations(data, fam, w.tau_sq, w.kappa_sq), {"data": data.to_json()}


def _boundary_norms(fam):
    return np.mean(np.abs(fam.u_j) ** 2, axis=0), np.mean(np.abs(fam.u_tilde) ** 2, axis=0)


def _check_norm_relations(rng, ctx):
    data = _data(rng, ctx, allow_singular=False)
    _, bfam = _boundary_family(data, ctx)
    nu, nt = _boundary_norms(bfam)
    fam = SymbolFamily(data).evaluate(_interior_points(rng, SAMPLES_PER_TRIAL))
    return _relations(data, fam, nu, nt), {"data": data.to_json()}


def _check_family_norms(rng, ctx):
    data = _data(rng, ctx, allow_singular=False)
    _, fam = _boundary_family(data, ctx)
    nu, nt = _boundary_norms(fam)
    w = ctx.weights_fn(data.spectrum)
    res = max(float(np.max(np.abs(nu / w.tau_sq - 1))), float(np.max(np.abs(nt / w.kappa_sq - 1))))
    return res, {"data": data.to_json()}


def _check_secular_equations(rng, ctx):
    data = _data(rng, ctx, allow_singular=False)
    _, fam = _boundary_family(data, ctx)
    nu, nt = _boundary_norms(fam)
    T = build_T(data.spectrum)
    res = max(float(np.max(np.abs(nu @ T - 1))), float(np.max(np.abs(T @ nt - 1))))
    return res, {"data": data.to_json()}


def _check_sigma_tilde_roots(rng, ctx):
    data = _data(rng, ctx, allow_singular=False)
    _, fam = _boundary_family(data, ctx)
    nu, _ = _boundary_norms(fam)
    spec = data.spectrum
    try:
        roots = characterize_sigma_tilde(nu, spec.s_arr)
    except HankelSpecError as exc:
        return math.inf, {"data": data.to_json(), "error": exc.kind}
    res = float(np.max(np.abs(np.sort(roots) - np.sort(spec.s_tilde_arr**2))))
    return res, {"data": data.to_json()}


def _check_eigenspace_projections(rng, ctx):
    data = _data(rng, ctx, allow_singular=False)
    zeta, fam = _boundary_family(data, ctx)
    spec = data.spectrum
    u = fam.u
    scale = float(np.sqrt(np.mean(np.abs(u) ** 2)))
    res = [
        _rel(u - fam.u_j.sum(axis=1), scale),
        _rel(u - fam.u_tilde.sum(axis=1), scale),
    ]
    s1sq = spec.s[0] ** 2
    for j in range(spec.n):
        uj = fam.u_j[:, j]
        h2 = _hankel_h(u, _hankel_h(u, uj))
        res.append(_rel(h2 - spec.s[j] ** 2 * uj, s1sq * np.abs(uj).max()))
    for k in range(spec.n):
        ut = fam.u_tilde[:, k]
        k2 = _hankel_k(u, _hankel_k(u, ut, zeta), zeta)
        res.append(_rel(k2 - spec.s_tilde[k] ** 2 * ut, s1sq * np.abs(ut).max()))
    w = ctx.weights_fn(spec)
    L = zeta.shape[0]
    gram_h = fam.u_j.T @ fam.u_j.conj() / L
    gram_k = fam.u_tilde.T @ fam.u_tilde.conj() / L
    cross = fam.u_j.T @ fam.u_tilde.conj() / L
    res.append(_rel(gram_h - np.diag(w.tau_sq), w.tau_sq))
    res.append(_rel(gram_k - np.diag(w.kappa_sq), w.kappa_sq))
    # (s_j^2 - s~_k^2) (u_j, u~_k) = tau_j^2 kappa_k^2
    expect = np.outer(w.tau_sq, w.kappa_sq) * build_T(spec)
    res.append(_rel(cross - expect, expect))
    return max(res), {"data": data.to_json()}


def _check_rank_one_identity(rng, ctx):
    data = _data(rng, ctx, allow_singular=bool(rng.random() < 0.5))
    M = ctx.caps.max_order
    c = fourier_coefficients(data, 2 * M, strict=False).coefficients
    h = build_hankel(c, M)
    lhs = h.squared() - h.squared(shifted=True)
    tail = c[M : 2 * M]
    rhs = np.outer(h.u, h.u.conj()) - np.outer(tail, tail.conj())
    scale = float(np.linalg.norm(h.gamma, 2)) ** 2
    return float(np.max(np.abs(lhs - rhs))) / scale, {"data": data.to_json(), "order": M}


def _random_poly(rng, zeta):
    q = rng.normal(size=5) + 1j * rng.normal(size=5)
    q /= np.linalg.norm(q)
    return np.polyval(q[::-1], zeta)


def schmidt_action_residuals(
    data: SpectralData, rng, n_functions: int = 1, *, grid_points: int = 16384
) -> tuple[float, float]:
    """Worst coefficient-space residuals of the two Schmidt-action identities.

    For ``n_functions`` random polynomials ``q`` of degree 4 per level, with
    ``f = H_psi_j q`` and ``g = H_psi~_k q``, compares ``H_u(f h_j)`` with
    ``s_j conj(f) psi_j h_j`` and ``K_u(g u~_k)`` with
    ``s~_k conj(g) psi~_k u~_k``. Residuals are max-norm differences of
    boundary samples relative to ``max(1, |rhs|_inf)``, plus any negative
    frequency content of the right-hand side. Blaschke-only data.
    """
    zeta, fam = resolved_boundary_family(data, grid_points)
    spec = data.spectrum
    res_h = res_k = 0.0
    for _ in range(n_functions):
        for j in range(spec.n):
            hj, psi = fam.h[:, j], fam.psi[:, j]
            f = _hankel_h(psi, _random_poly(rng, zeta))
            lhs = _hankel_h(fam.u, f * hj)
            rhs = spec.s[j] * np.conj(f) * psi * hj
            ref = max(float(np.max(np.abs(rhs))), 1.0)
            res_h = max(res_h, _rel(lhs - rhs, ref), _analytic_defect(rhs) / ref)
        for k in range(spec.n):
            ut, psi_t = fam.u_tilde[:, k], fam.psi_tilde[:, k]
            g = _hankel_h(psi_t, _random_poly(rng, zeta))
            lhs = _hankel_k(fam.u, g * ut, zeta)
            rhs = spec.s_tilde[k] * np.conj(g) * psi_t * ut
            ref = max(float(np.max(np.abs(rhs))), 1.0)
            res_k = max(res_k, _rel(lhs - rhs, ref), _analytic_defect(rhs) / ref)
    return res_h, res_k


def _check_schmidt_action_h(rng, ctx):
    data = _data(rng, ctx, allow_singular=False)
    res, _ = schmidt_action_residuals(data, rng, grid_points=ctx.caps.boundary_points)
    return res, {"data": data.to_json()}


def _check_schmidt_action_k(rng, ctx):
    data = _data(rng, ctx, allow_singular=False)
    _, res = schmidt_action_residuals(data, rng, grid_points=ctx.caps.boundary_points)
    return res, {"data": data.to_json()}


CHECKS: dict[str, Callable] = {
    "cauchy_inverse": _check_cauchy_inverse,
    "weights_positive": _check_weights_positive,
    "weights_column_sums": _check_weights_column_sums,
    "partial_fractions": _check_partial_fractions,
    "v_orthogonal": _check_v_orthogonal,
    "commutator": _check_commutator,
    "rank_one_update": _check_rank_one_update,
    "contraction": _check_contraction,
    "c_decomposition": _check_c_decomposition,
    "c_invertible": _check_c_invertible,
    "f_invertible": _check_f_invertible,
    "linear_systems": _check_linear_systems,
    "dual_symbol_formulas": _check_dual_symbol_formulas,
    "projection_relations": _check_projection_relations,
    "norm_relations": _check_norm_relations,
    "family_norms": _check_family_norms,
    "secular_equations": _check_secular_equations,
    "sigma_tilde_roots": _check_sigma_tilde_roots,
    "eigenspace_projections": _check_eigenspace_projections,
    "rank_one_identity": _check_rank_one_identity,
    "schmidt_action_h": _check_schmidt_action_h,
    "schmidt_action_k": _check_schmidt_action_k,
}


def self_audit() -> None:
    """The registry, the threshold table and the manifest must name the same checks."""
    names = set(MANIFEST)
    if len(names) != len(MANIFEST):
        raise AssertionError("manifest lists a check twice")
    for label, other in (("registry", set(CHECKS)), ("threshold table", set(THRESHOLDS))):
        if other != names:
            raise AssertionError(
                f"{label} disagrees with manifest: missing {sorted(names - other)}, extra {sorted(other - names)}"
            )


self_audit()


def _run_check(name: str, index: int, seed: int, n_trials: int, ctx: _Context) -> CheckResult:
    threshold = THRESHOLDS[name][0]
    worst, witness = -math.inf, {}
    for trial in range(n_trials):
        rng = np.random.default_rng([seed, index, trial])
        try:
            value, wit = CHECKS[name](rng, ctx)
        except (HankelSpecError, np.linalg.LinAlgError) as exc:
            value, wit = math.inf, {"error": {"kind": type(exc).__name__, "detail": str(exc)}}
        if math.isnan(value):
            value = math.inf
        if value > worst:
            worst, witness = value, dict(wit, trial=trial)
    passed = bool(worst <= threshold)
    return CheckResult(name, float(worst), threshold, passed, witness)


def run_suite(
    seed: int = 0,
    n_trials: int = 25,
    size_caps: SizeCaps | dict | None = None,
    *,
    weights_fn: Callable = weights,
    only: list[str] | None = None,
) -> list[CheckResult]:
    """Run every check ``n_trials`` times and report the worst residual of each."""
    if n_trials < 1:
        raise ValueError("n_trials must be at least 1")
    if size_caps is None:
        caps = SizeCaps()
    elif isinstance(size_caps, SizeCaps):
        caps = size_caps
    else:
        caps = SizeCaps(**size_caps)
    self_audit()
    names = list(MANIFEST) if only is None else list(only)
    unknown = set(names) - set(MANIFEST)
    if unknown:
        raise ValueError(f"unknown checks: {sorted(unknown)}")
    ctx = _Context(caps, weights_fn)
    return [_run_check(name, MANIFEST.index(name), seed, n_trials, ctx) for name in names]
