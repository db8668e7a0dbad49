"""Adaptive panel quadrature on finite intervals.

Fixed-order Gauss-Legendre rules are applied per panel; a panel's error is
estimated by comparing the one-shot value against the sum over its two
halves, and panels failing their share of the global tolerance are bisected.
Integrands must accept numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .errors import ToleranceNotMet

_GL_ORDER = 20
_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(_GL_ORDER)


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerance and budget knobs for the adaptive integrator.

    abs_tol and rel_tol bound the accepted global error estimate, whichever
    is larger.  truncation_cut is the integrand magnitude below which
    semi-infinite tails may be dropped by callers that build finite windows.
    """

    abs_tol: float = 1e-11
    rel_tol: float = 1e-10
    max_panels: int = 2 ** 14
    truncation_cut: float = 1e-12

    def __post_init__(self):
        if not (self.abs_tol > 0.0 and np.isfinite(self.abs_tol)):
            raise ValueError(f"abs_tol must be positive and finite, got {self.abs_tol}")
        if not (self.rel_tol > 0.0 and np.isfinite(self.rel_tol)):
            raise ValueError(f"rel_tol must be positive and finite, got {self.rel_tol}")
        if int(self.max_panels) < 4:
            raise ValueError(f"max_panels must be at least 4, got {self.max_panels}")
        if not (0.0 < self.truncation_cut <= 1e-6):
            raise ValueError(
                f"truncation_cut must lie in (0, 1e-6], got {self.truncation_cut}"
            )

    def key(self) -> str:
        return (
            f"gl{_GL_ORDER}:a{self.abs_tol:.3e}:r{self.rel_tol:.3e}"
            f":p{int(self.max_panels)}:c{self.truncation_cut:.3e}"
        )


DEFAULT_QUAD = QuadratureSpec()


def _panel_values(f: Callable, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Order-20 Gauss-Legendre value of f on each [lo_i, hi_i]."""
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[:, None] + half[:, None] * _NODES[None, :]
    vals = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    return half * (vals @ _WEIGHTS)


def integrate(
    f: Callable,
    a: float,
    b: float,
    spec: QuadratureSpec = DEFAULT_QUAD,
    breakpoints: Iterable[float] = (),
) -> tuple[float, float]:
    """Integrate f over [a, b]; returns (value, error_estimate).

    breakpoints seed the initial panel layout so that sharply concentrated
    integrands are found before refinement starts.  Raises ToleranceNotMet
    if the panel budget runs out first.
    """
    if not (np.isfinite(a) and np.isfinite(b)):
        raise ValueError("integration endpoints must be finite")
    if b <= a:
        return 0.0, 0.0

    edges = np.array(sorted({float(a), float(b), *(
        float(p) for p in breakpoints if a < p < b)}))
    lo, hi = edges[:-1], edges[1:]

    for _ in range(64):
        coarse = _panel_values(f, lo, hi)
        mid = 0.5 * (lo + hi)
        fine = _panel_values(f, lo, mid) + _panel_values(f, mid, hi)
        err = np.abs(fine - coarse)
        total = float(np.sum(fine))
        err_total = float(np.sum(err))
        tol = max(spec.abs_tol, spec.rel_tol * abs(total))
        if err_total <= tol:
            return total, err_total
        # split every panel holding more than its share of the budget
        share = tol / (2.0 * len(lo))
        mask = err > share
        if not mask.any():
            mask[np.argmax(err)] = True
        n_new = len(lo) + int(mask.sum())
        if n_new > spec.max_panels:
            raise ToleranceNotMet(
                f"needed more than {spec.max_panels} panels on [{a}, {b}] "
                f"(error estimate {err_total:.3e}, tolerance {tol:.3e})"
            )
        keep_lo, keep_hi = lo[~mask], hi[~mask]
        s_lo, s_hi = lo[mask], hi[mask]
        s_mid = 0.5 * (s_lo + s_hi)
        lo = np.concatenate([keep_lo, s_lo, s_mid])
        hi = np.concatenate([keep_hi, s_mid, s_hi])
        order = np.argsort(lo)
        lo, hi = lo[order], hi[order]

    raise ToleranceNotMet(f"refinement stalled on [{a}, {b}]")
