"""Synthesize a symbol from spectral data, analyze it, and diff the result."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .hankel_analysis import AnalysisReport, analyze, disk_grid
from .inner_functions import evaluate
from .errors import TailTooLarge
from .symbol_synthesis import TAIL_RTOL, SpectralData, fourier_coefficients

THRESHOLDS = {
    "s": 1e-6,
    "s_tilde": 1e-6,
    "psi": 1e-5,
    "psi_tilde": 1e-5,
    "sigma_tilde_roots": 1e-8,
}


@dataclass
class RoundtripReport:
    order: int
    errors: dict
    dominance: list[str]
    dominance_ok: bool
    thresholds: dict = field(default_factory=lambda: dict(THRESHOLDS))
    tail: float = 0.0
    analysis: AnalysisReport | None = None

    @property
    def passed(self) -> bool:
        return self.dominance_ok and all(
            np.isfinite(self.errors[k]) and self.errors[k] <= self.thresholds[k] for k in self.thresholds
        )

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "passed": self.passed,
            "errors": self.errors,
            "thresholds": self.thresholds,
            "dominance": self.dominance,
            "dominance_ok": self.dominance_ok,
            "tail": self.tail,
        }


def _sup_error(samples, theta, grid) -> float:
    exact = evaluate(theta, grid)
    return float(np.nanmax(np.abs(samples.values - exact)))


def roundtrip(data: SpectralData, M: int = 256, *, strict: bool = True, **analyze_kwargs) -> RoundtripReport:
    """Synthesize ``2M`` coefficients, analyze at Hankel order ``M``, compare to ``data``.

    With ``strict`` the coefficients must have decayed by index ``M`` (the
    largest of ``u^(M..2M-1)`` at most ``TAIL_RTOL`` times the norm), since the
    order-M section never sees the rest; otherwise :class:`TailTooLarge`.
    """
    series = fourier_coefficients(data, 2 * M, strict=strict)
    c = series.coefficients
    band = float(np.max(np.abs(c[M:])))
    if strict and band > TAIL_RTOL * float(np.linalg.norm(c)):
        raise TailTooLarge(
            f"coefficients {M}..{2 * M - 1} reach {band:.3e}, above {TAIL_RTOL:g}*|u^|; raise the order"
        )
    grid = analyze_kwargs.pop("grid", None)
    grid = disk_grid() if grid is None else grid
    rep = analyze(series.coefficients, M, grid=grid, **analyze_kwargs)
    s = np.array([lv for lv, _ in rep.sigma_H])
    st = np.array([lv for lv, _ in rep.sigma_K])
    n = data.n
    errors = {}
    if s.size != n or st.size != n:
        errors = {k: float("inf") for k in THRESHOLDS}
    else:
        errors["s"] = float(np.max(np.abs(s - data.spectrum.s_arr)))
        errors["s_tilde"] = float(np.max(np.abs(st - data.spectrum.s_tilde_arr)))
        errors["psi"] = max(_sup_error(p, f, rep.grid) for p, f in zip(rep.psi_samples, data.psi))
        pt = [
            _sup_error(p, f, rep.grid)
            for p, f in zip(rep.psi_tilde_samples, data.psi_tilde)
            if p is not None
        ]
        errors["psi_tilde"] = max(pt, default=0.0)
        errors["sigma_tilde_roots"] = rep.residuals["sigma_tilde_roots"]
    kinds = [d["kind"] for d in rep.dominance]
    return RoundtripReport(
        order=rep.order,
        errors=errors,
        dominance=kinds,
        dominance_ok=kinds == ["H", "K"] * n,
        tail=band,
        analysis=rep,
    )
