"""Spectral data recovered from Taylor coefficients.

Coefficient space stands in for H^2: a function is the vector of its first M
Taylor coefficients. With ``G[n, m] = c[n + m]`` and ``G_K[n, m] = c[n + m + 1]``
the anti-linear Hankel operators act as ``H f = G conj(f)`` and
``K f = G_K conj(f)``, so ``H^2 = G conj(G)`` and ``K^2 = G_K conj(G_K)``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from . import dense_linalg
from .errors import (
    ClusterAmbiguity,
    DominanceAmbiguity,
    EmptySpectrum,
    InterlacingViolation,
    RootCountMismatch,
    SmallDenominator,
)

log = logging.getLogger(__name__)

CLUSTER_RTOL = 1e-6
DOM_TOL = 1e-4
R_MAX = 0.9
DENOMINATOR_FLOOR = 1e-8
ZERO_ROOT_SLACK = 1e-9


@dataclass(frozen=True)
class TruncatedHankel:
    order: int
    coefficients: np.ndarray
    gamma: np.ndarray
    gamma_shifted: np.ndarray
    padded: int = 0

    @property
    def u(self) -> np.ndarray:
        """Coefficient vector of the symbol, ``u = H 1``."""
        return self.coefficients[: self.order]

    def apply_H(self, f) -> np.ndarray:
        return self.gamma @ np.conj(f)

    def apply_K(self, f) -> np.ndarray:
        return self.gamma_shifted @ np.conj(f)

    def squared(self, shifted: bool = False) -> np.ndarray:
        g = self.gamma_shifted if shifted else self.gamma
        return g @ g.conj()


def build_hankel(coeffs, M: int) -> TruncatedHankel:
    """Order-M sections of the Hankel matrices of ``u`` and of ``S* u``.

    Needs ``2M`` coefficients (``2M - 1`` for G alone); shorter input is
    zero-padded and the padding length recorded.
    """
    if M < 1:
        raise ValueError("order must be positive")
    c = np.asarray(coeffs, dtype=complex).ravel()
    padded = max(0, 2 * M - c.shape[0])
    if padded:
        c = np.concatenate([c, np.zeros(padded, dtype=complex)])
    c = c[: 2 * M]
    idx = np.add.outer(np.arange(M), np.arange(M))
    return TruncatedHankel(M, c, c[idx], c[idx + 1], padded)


@dataclass
class EigenspaceBundle:
    level: float
    eigenvalues: np.ndarray
    basis: np.ndarray
    proj_one: np.ndarray
    proj_u: np.ndarray

    @property
    def multiplicity(self) -> int:
        return self.basis.shape[1]

    @property
    def squared_level(self) -> float:
        return self.level**2


def _cluster(values: np.ndarray, tol: float) -> list[np.ndarray]:
    """Split ascending ``values`` at every gap wider than ``tol``; returns index groups."""
    groups = [[0]]
    for i in range(1, values.size):
        if values[i] - values[i - 1] > tol:
            groups.append([i])
        else:
            groups[-1].append(i)
    return [np.array(g) for g in groups]


def squared_spectrum(
    h: TruncatedHankel, cluster_tol: float | None = None, *, shifted: bool = False
) -> list[EigenspaceBundle]:
    """Eigen-clusters of ``H^2`` (or ``K^2`` when ``shifted``), by decreasing level.

    ``cluster_tol`` is absolute, in units of squared levels; the default is
    ``1e-6 * |H^2|``.
    """
    A = h.squared(shifted)
    w, v = dense_linalg.hermitian_eigen(A)
    top = max(float(w[-1]), 0.0)
    if cluster_tol is None:
        cluster_tol = CLUSTER_RTOL * top
    if cluster_tol <= 0:
        if top == 0:
            return [_bundle(h, 0.0, w, v)]
        raise ValueError("cluster_tol must be positive")
    groups = _cluster(w, cluster_tol)
    bundles = []
    for g in groups:
        vals = w[g]
        if vals[-1] - vals[0] > cluster_tol:
            raise ClusterAmbiguity(
                f"cluster spread {vals[-1] - vals[0]:.3e} exceeds cluster_tol {cluster_tol:.3e}"
            )
        level = 0.0 if vals[0] <= cluster_tol else math.sqrt(float(np.mean(vals)))
        bundles.append(_bundle(h, level, vals, v[:, g]))
    for lo, hi in zip(groups, groups[1:]):
        gap = w[hi[0]] - w[lo[-1]]
        if gap < 3 * cluster_tol:
            raise ClusterAmbiguity(f"clusters only {gap:.3e} apart (< 3*cluster_tol)")
    bundles.sort(key=lambda b: b.level, reverse=True)
    return bundles


def _bundle(h: TruncatedHankel, level: float, vals, basis) -> EigenspaceBundle:
    u = h.u
    one = np.zeros(h.order, dtype=complex)
    one[0] = 1.0
    return EigenspaceBundle(
        level=level,
        eigenvalues=np.asarray(vals),
        basis=basis,
        proj_one=basis @ (basis.conj().T @ one),
        proj_u=basis @ (basis.conj().T @ u),
    )


@dataclass
class LevelClass:
    level: float
    kind: str  # "H" or "K"
    h_bundle: EigenspaceBundle | None
    k_bundle: EigenspaceBundle | None
    h_weight: float
    k_weight: float

    @property
    def bundle(self) -> EigenspaceBundle | None:
        return self.h_bundle if self.kind == "H" else self.k_bundle


def classify_dominance(
    h: TruncatedHankel,
    h_bundles: list[EigenspaceBundle],
    k_bundles: list[EigenspaceBundle],
    *,
    dom_tol: float = DOM_TOL,
    match_tol: float | None = None,
) -> list[LevelClass]:
    """Mark every positive level H- or K-dominant; add level 0 to the K side when
    ``u`` is not orthogonal to ``Ker K`` inside ``Ran H``."""
    u = h.u
    unorm = float(np.linalg.norm(u))
    if unorm == 0:
        raise EmptySpectrum("symbol is identically zero")
    if match_tol is None:
        top = max([b.squared_level for b in h_bundles + k_bundles] + [0.0])
        match_tol = 3 * CLUSTER_RTOL * top
    pos_h = [b for b in h_bundles if b.level > 0]
    pos_k = [b for b in k_bundles if b.level > 0]
    pairs: list[tuple[EigenspaceBundle | None, EigenspaceBundle | None]] = []
    used_k = set()
    for hb in pos_h:
        match = None
        for i, kb in enumerate(pos_k):
            if i not in used_k and abs(kb.squared_level - hb.squared_level) <= match_tol:
                match = i
                break
        if match is not None:
            used_k.add(match)
            pairs.append((hb, pos_k[match]))
        else:
            pairs.append((hb, None))
    pairs += [(None, kb) for i, kb in enumerate(pos_k) if i not in used_k]

    out = []
    for hb, kb in pairs:
        wh = float(np.linalg.norm(hb.proj_u)) / unorm if hb is not None else 0.0
        wk = float(np.linalg.norm(kb.proj_u)) / unorm if kb is not None else 0.0
        level = (hb or kb).level
        if wh > dom_tol and wk <= dom_tol:
            kind = "H"
        elif wk > dom_tol and wh <= dom_tol:
            kind = "K"
        else:
            raise DominanceAmbiguity(
                f"level {level:.12g}: |P_H u|/|u| = {wh:.3e}, |P_K u|/|u| = {wk:.3e}, dom_tol = {dom_tol:g}"
            )
        out.append(LevelClass(level, kind, hb, kb, wh, wk))

    # E_K(0) = Ker K  intersected with  Ran H; u lies in Ran H, so its component
    # there is u minus its projection onto Ran K.
    ran_k = sum((kb.proj_u for kb in pos_k), np.zeros_like(u))
    rest = u - ran_k
    w0 = float(np.linalg.norm(rest)) / unorm
    if w0 > dom_tol:
        zero = EigenspaceBundle(0.0, np.zeros(1), (rest / np.linalg.norm(rest))[:, None], np.zeros_like(u), rest)
        out.append(LevelClass(0.0, "K", None, zero, 0.0, w0))
    out.sort(key=lambda c: c.level, reverse=True)
    return out


def disk_grid(r_max: float = R_MAX, n_radii: int = 10, n_angles: int = 64) -> np.ndarray:
    """Polar grid on ``|z| <= r_max``: the origin plus ``n_radii`` circles."""
    radii = np.linspace(r_max / n_radii, r_max, n_radii)
    angles = 2 * np.pi * np.arange(n_angles) / n_angles
    pts = (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()
    return np.concatenate([[0j], pts])


def eval_series(coeffs, z) -> np.ndarray:
    """Evaluate ``sum_n coeffs[n] z^n`` by Horner's rule."""
    z = np.asarray(z, dtype=complex)
    out = np.zeros(z.shape, dtype=complex)
    for c in np.asarray(coeffs, dtype=complex)[::-1]:
        out = out * z + c
    return out


@dataclass
class PsiSamples:
    level: float
    grid: np.ndarray
    values: np.ndarray
    dropped: np.ndarray
    max_modulus: float

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "values": [
                None if d else {"re": float(v.real), "im": float(v.imag)}
                for v, d in zip(self.values, self.dropped)
            ],
            "dropped": int(np.sum(self.dropped)),
            "max_modulus": self.max_modulus,
        }


def _quotient(level: float, num: np.ndarray, den: np.ndarray, grid: np.ndarray) -> PsiSamples:
    top = eval_series(num, grid)
    bottom = eval_series(den, grid)
    dropped = np.abs(bottom) < DENOMINATOR_FLOOR
    if np.all(dropped):
        raise SmallDenominator(f"denominator below {DENOMINATOR_FLOOR:g} on the whole grid")
    if np.any(dropped):
        log.warning("level %.6g: %d grid points dropped for small denominator", level, int(dropped.sum()))
    values = np.where(dropped, np.nan + 0j, top / np.where(dropped, 1.0, bottom))
    return PsiSamples(level, grid, values, dropped, float(np.nanmax(np.abs(values))))


def extract_psi(h: TruncatedHankel, cls: LevelClass, grid) -> PsiSamples:
    """``psi_j = u_j / h_j`` with ``u_j = P u`` and ``h_j = s P 1`` at an H-dominant level."""
    if cls.kind != "H":
        raise ValueError("extract_psi needs an H-dominant level")
    b = cls.h_bundle
    return _quotient(cls.level, b.proj_u, cls.level * b.proj_one, np.asarray(grid, dtype=complex))


def extract_psi_tilde(h: TruncatedHankel, cls: LevelClass, grid) -> PsiSamples | None:
    """``psi~_k = K u~_k / (s~_k u~_k)`` at a K-dominant level; ``None`` at level 0."""
    if cls.kind != "K":
        raise ValueError("extract_psi_tilde needs a K-dominant level")
    if cls.level == 0:
        return None
    ut = cls.k_bundle.proj_u
    return _quotient(cls.level, h.apply_K(ut), cls.level * ut, np.asarray(grid, dtype=complex))


def _secular(x: float, w: np.ndarray, s2: np.ndarray) -> float:
    return float(np.sum(w / (s2 - x))) - 1.0


def _bisect(lo: float, hi: float, w: np.ndarray, s2: np.ndarray, scale: float) -> float:
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi or hi - lo <= 1e-12 * max(abs(mid), 1e-3 * scale):
            break
        if _secular(mid, w, s2) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def characterize_sigma_tilde(norm_u_j_sq, s) -> np.ndarray:
    """Roots ``x = s~^2`` of ``sum_j |u_j|^2 / (s_j^2 - x) = 1``, ascending.

    The secular function increases between consecutive poles, so there is
    exactly one root per gap ``(s_{j+1}^2, s_j^2)`` and one in ``[0, s_N^2)``
    provided ``sum_j |u_j|^2 / s_j^2 <= 1``.
    """
    w = np.asarray(norm_u_j_sq, dtype=float)
    s = np.asarray(s, dtype=float)
    if w.shape != s.shape or w.size == 0:
        raise ValueError("need matching non-empty norm and level lists")
    if np.any(w <= 0):
        raise ValueError("norms must be positive")
    if np.any(np.diff(s) >= 0) or s[-1] <= 0:
        raise ValueError("levels must be positive and strictly decreasing")
    s2 = s**2
    scale = float(s2[0])
    f0 = _secular(0.0, w, s2)
    roots = []
    if f0 > ZERO_ROOT_SLACK:
        raise RootCountMismatch(
            f"sum |u_j|^2/s_j^2 - 1 = {f0:.3e} > 0: no root in [0, s_N^2)"
        )
    roots.append(0.0 if f0 >= 0 else _bisect(0.0, float(s2[-1]), w, s2, scale))
    for j in range(s.size - 2, -1, -1):
        roots.append(_bisect(float(s2[j + 1]), float(s2[j]), w, s2, scale))
    return np.array(roots)


@dataclass
class AnalysisReport:
    order: int
    sigma_H: list[tuple[float, int]]
    sigma_K: list[tuple[float, int]]
    dominance: list[dict]
    grid: np.ndarray
    psi_samples: list[PsiSamples]
    psi_tilde_samples: list[PsiSamples | None]
    norm_u_j_sq: np.ndarray
    norm_u_tilde_k_sq: np.ndarray
    sigma_tilde_roots: np.ndarray
    interlacing: bool
    residuals: dict = field(default_factory=dict)
    attempts: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        def cplx(v):
            return [{"re": float(x.real), "im": float(x.imag)} for x in v]

        return {
            "order": self.order,
            "sigma_H": [{"level": s, "multiplicity": m} for s, m in self.sigma_H],
            "sigma_K": [{"level": s, "multiplicity": m} for s, m in self.sigma_K],
            "dominance": self.dominance,
            "grid": cplx(self.grid),
            "psi_samples": [p.to_json() for p in self.psi_samples],
            "psi_tilde_samples": [None if p is None else p.to_json() for p in self.psi_tilde_samples],
            "norm_u_j_sq": [float(x) for x in self.norm_u_j_sq],
            "norm_u_tilde_k_sq": [float(x) for x in self.norm_u_tilde_k_sq],
            "sigma_tilde_roots": [float(x) for x in self.sigma_tilde_roots],
            "interlacing": self.interlacing,
            "residuals": self.residuals,
            "attempts": self.attempts,
        }

    @classmethod
    def from_json(cls, obj: dict) -> AnalysisReport:
        return report_from_json(obj)


def _interlaces(classes: list[LevelClass], margin: float) -> bool:
    kinds = [c.kind for c in classes]
    if kinds != ["H", "K"] * (len(kinds) // 2) or len(kinds) % 2:
        return False
    levels = [c.level for c in classes]
    return all(a - b > margin for a, b in zip(levels, levels[1:]))


def _analyze_once(coeffs, M, cluster_rtol, dom_tol, grid):
    h = build_hankel(coeffs, M)
    top = float(np.linalg.norm(h.gamma, 2)) ** 2
    tol = cluster_rtol * top
    hb = squared_spectrum(h, tol)
    kb = squared_spectrum(h, tol, shifted=True)
    classes = classify_dominance(h, hb, kb, dom_tol=dom_tol, match_tol=3 * tol)
    return h, tol, classes


def analyze(
    coeffs,
    M: int | None = None,
    *,
    cluster_rtol: float = CLUSTER_RTOL,
    dom_tol: float = DOM_TOL,
    grid=None,
) -> AnalysisReport:
    """Full direct map from Taylor coefficients to an :class:`AnalysisReport`.

    On cluster or dominance ambiguity the order is doubled (when enough
    coefficients are available), then ``cluster_rtol`` is halved, then the
    error propagates.
    """
    c = np.asarray(coeffs, dtype=complex).ravel()
    if c.size == 0 or not np.any(c):
        raise EmptySpectrum("all coefficients are zero; u must not vanish identically")
    if M is None:
        M = max(1, c.size // 2)
    grid = disk_grid() if grid is None else np.asarray(grid, dtype=complex)

    ladder = [(M, cluster_rtol)]
    if c.size >= 4 * M:
        ladder.append((2 * M, cluster_rtol))
    ladder.append((ladder[-1][0], cluster_rtol / 2))
    attempts = []
    for i, (order, rtol) in enumerate(ladder):
        try:
            h, tol, classes = _analyze_once(c, order, rtol, dom_tol, grid)
            attempts.append({"order": order, "cluster_rtol": rtol, "ok": True})
            break
        except (ClusterAmbiguity, DominanceAmbiguity) as exc:
            attempts.append({"order": order, "cluster_rtol": rtol, "ok": False, "error": exc.kind})
            log.info("analysis attempt %d failed: %s", i, exc)
            if i == len(ladder) - 1:
                raise

    h_levels = [cl for cl in classes if cl.kind == "H"]
    k_levels = [cl for cl in classes if cl.kind == "K"]
    if not h_levels:
        raise EmptySpectrum("no H-dominant level found")
    interlacing = _interlaces(classes, margin=tol)
    if not interlacing:
        raise InterlacingViolation(
            "recovered levels do not alternate H, K, H, K, ...: "
            + ", ".join(f"{c.level:.6g}{c.kind}" for c in classes)
        )

    psi = [extract_psi(h, cl, grid) for cl in h_levels]
    psi_t = [extract_psi_tilde(h, cl, grid) for cl in k_levels]
    norm_uj = np.array([np.linalg.norm(cl.h_bundle.proj_u) ** 2 for cl in h_levels])
    norm_ut = np.array([np.linalg.norm(cl.k_bundle.proj_u) ** 2 for cl in k_levels])
    s = np.array([cl.level for cl in h_levels])
    st = np.array([cl.level for cl in k_levels])
    roots = characterize_sigma_tilde(norm_uj, s)
    residuals = {
        "sigma_tilde_roots": float(np.max(np.abs(np.sort(roots) - np.sort(st**2)))),
        "sigma_H_secular": float(
            np.max(np.abs((norm_ut[None, :] / (s[:, None] ** 2 - st[None, :] ** 2)).sum(axis=1) - 1.0))
        ),
        "rank_one": rank_one_residual(h),
        "psi_modulus_excess": max([p.max_modulus - 1.0 for p in psi + [q for q in psi_t if q]] + [0.0]),
        "padded": h.padded,
        "cluster_tol": tol,
    }
    return AnalysisReport(
        order=h.order,
        sigma_H=[(cl.level, cl.h_bundle.multiplicity) for cl in h_levels],
        sigma_K=[(cl.level, cl.k_bundle.multiplicity if cl.level > 0 else 0) for cl in k_levels],
        dominance=[{"level": cl.level, "kind": cl.kind} for cl in classes],
        grid=grid,
        psi_samples=psi,
        psi_tilde_samples=psi_t,
        norm_u_j_sq=norm_uj,
        norm_u_tilde_k_sq=norm_ut,
        sigma_tilde_roots=roots,
        interlacing=interlacing,
        residuals=residuals,
        attempts=attempts,
    )


def rank_one_residual(h: TruncatedHankel, band: int | None = None) -> float:
    """``|K^2 - (H^2 - u u*)|_max / |G|^2`` on the leading ``(M - band)`` block.

    At finite order ``G conj(G) - G_K conj(G_K) = c c* - c' c'*`` with ``c'``
    the coefficients ``M..2M-1``; the second term is the truncation band.
    """
    M = h.order
    band = M // 4 if band is None else band
    keep = max(M - band, 1)
    u = h.u
    lhs = h.squared(shifted=True)
    rhs = h.squared() - np.outer(u, u.conj())
    scale = float(np.linalg.norm(h.gamma, 2)) ** 2 or 1.0
    return float(np.max(np.abs((lhs - rhs)[:keep, :keep]))) / scale


def _decode_complex_list(items) -> np.ndarray:
    return np.array([complex(v["re"], v["im"]) for v in items], dtype=complex)


def _psi_from_json(obj: dict | None, grid: np.ndarray) -> PsiSamples | None:
    if obj is None:
        return None
    dropped = np.array([v is None for v in obj["values"]], dtype=bool)
    values = np.array(
        [complex(np.nan, np.nan) if v is None else complex(v["re"], v["im"]) for v in obj["values"]],
        dtype=complex,
    )
    return PsiSamples(float(obj["level"]), grid, values, dropped, float(obj["max_modulus"]))


def report_from_json(obj: dict) -> AnalysisReport:
    """Inverse of :meth:`AnalysisReport.to_json`."""
    grid = _decode_complex_list(obj["grid"])
    return AnalysisReport(
        order=int(obj["order"]),
        sigma_H=[(float(d["level"]), int(d["multiplicity"])) for d in obj["sigma_H"]],
        sigma_K=[(float(d["level"]), int(d["multiplicity"])) for d in obj["sigma_K"]],
        dominance=[dict(d) for d in obj["dominance"]],
        grid=grid,
        psi_samples=[_psi_from_json(p, grid) for p in obj["psi_samples"]],
        psi_tilde_samples=[_psi_from_json(p, grid) for p in obj["psi_tilde_samples"]],
        norm_u_j_sq=np.array(obj["norm_u_j_sq"], dtype=float),
        norm_u_tilde_k_sq=np.array(obj["norm_u_tilde_k_sq"], dtype=float),
        sigma_tilde_roots=np.array(obj["sigma_tilde_roots"], dtype=float),
        interlacing=bool(obj["interlacing"]),
        residuals=dict(obj.get("residuals", {})),
        attempts=list(obj.get("attempts", [])),
    )
