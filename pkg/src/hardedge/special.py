"""Edge profile functions for planar Coulomb systems.

Three scalar functions drive every boundary comparison in this package:

* ``gaussian_kernel``, the standard normal density.
* ``free_boundary_profile``, the Gaussian tail mass. It is the limiting
  intensity profile across an unconstrained (free) boundary.
* ``hard_edge_profile``, the convolution of the Gaussian kernel with the
  reciprocal tail mass restricted to the left half line. It is the limiting
  intensity profile against a hard confining wall.

The hard-edge profile equals log 2 at the wall, tends to 1 deep in the bulk
and to 0 outside. It is not monotone: it overshoots 1 slightly (max about
1.0724 near -1.6) before settling to the bulk value. The approach to 1 as
x -> -infinity is governed by the product of two Gaussian tails and decays
like exp(-x^2/4), far slower than a single Gaussian tail.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.special import erfc

from .errors import InsufficientSupport
from .quadrature import DEFAULT_QUAD, QuadratureSpec, integrate

_INV_SQRT_2PI = 1.0 / np.sqrt(2.0 * np.pi)
_SQRT_2 = np.sqrt(2.0)

# erfc is used directly up to this |t|; beyond it the tail series takes over
_PHI_SWITCH = 27.0


def gaussian_kernel(x):
    """Standard normal density e^{-x^2/2}/sqrt(2 pi), vectorized."""
    x = np.asarray(x, dtype=float)
    out = _INV_SQRT_2PI * np.exp(-0.5 * x * x)
    return float(out) if out.ndim == 0 else out


def _phi_tail_series(t: np.ndarray) -> np.ndarray:
    # asymptotic tail mass for large positive t, relative error ~ 1e3/t^10
    u = 1.0 / (t * t)
    corr = 1.0 + u * (-1.0 + u * (3.0 + u * (-15.0 + u * 105.0)))
    return _INV_SQRT_2PI * np.exp(-0.5 * t * t) / t * corr


def free_boundary_profile(t):
    """Gaussian upper tail mass (1/2)erfc(t/sqrt(2)).

    Strictly decreasing from 1 to 0; equals 1/2 at t = 0. Computed through
    erfc for |t| <= 27 and through the tail series beyond, where erfc
    itself would underflow inside downstream reciprocals.
    """
    t_arr = np.asarray(t, dtype=float)
    scalar = t_arr.ndim == 0
    t_arr = np.atleast_1d(t_arr)
    out = np.empty_like(t_arr)

    core = np.abs(t_arr) <= _PHI_SWITCH
    out[core] = 0.5 * erfc(t_arr[core] / _SQRT_2)
    hi = t_arr > _PHI_SWITCH
    if hi.any():
        out[hi] = _phi_tail_series(t_arr[hi])
    lo = t_arr < -_PHI_SWITCH
    if lo.any():
        out[lo] = 1.0 - _phi_tail_series(-t_arr[lo])
    return float(out[0]) if scalar else out


def _tail_halfwidth(cut: float) -> float:
    # |x - t| beyond which gaussian_kernel(x - t)/phi(t) < cut for t <= 0
    s2 = 2.0 * np.log(2.0 * _INV_SQRT_2PI / cut)
    return max(12.0, np.sqrt(s2) if s2 > 0.0 else 0.0)


def _hard_edge_scalar(x: float, quad: QuadratureSpec) -> float:
    t_min = x - _tail_halfwidth(quad.truncation_cut)
    if t_min >= 0.0:
        return 0.0

    def integrand(t):
        return gaussian_kernel(x - t) / free_boundary_profile(t)

    br = [x + d for d in (-6.0, -3.0, -1.0, 0.0, 1.0, 3.0, 6.0)]
    br.append(-1.5)
    value, _ = integrate(integrand, t_min, 0.0, quad, breakpoints=br)
    return value


def hard_edge_profile(x, quad: QuadratureSpec = DEFAULT_QUAD):
    """Limiting intensity profile at a hard wall.

    Returns integral over t in (-infty, 0] of
    gaussian_kernel(x - t)/free_boundary_profile(t), the Gaussian smoothing
    of the reciprocal tail mass on the left half line. The tail is cut where
    the integrand falls below quad.truncation_cut.

    Raises ToleranceNotMet if the panel budget is exhausted.
    """
    x_arr = np.asarray(x, dtype=float)
    if x_arr.ndim == 0:
        return _hard_edge_scalar(float(x_arr), quad)
    flat = [_hard_edge_scalar(float(v), quad) for v in x_arr.ravel()]
    return np.array(flat).reshape(x_arr.shape)


@dataclass
class SampledFunction:
    """A function known on a finite strictly increasing grid.

    Between grid points the function is interpolated (cubic when at least
    four samples are given, linear otherwise). Outside the grid it takes the
    declared constant extension for that side; a side with extension None
    is undefined there.
    """

    grid: np.ndarray
    values: np.ndarray
    left: Optional[float] = None
    right: Optional[float] = None
    _interp: object = field(init=False, repr=False, default=None)

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.grid.ndim != 1 or self.grid.shape != self.values.shape:
            raise ValueError("grid and values must be 1D arrays of equal length")
        if len(self.grid) < 2:
            raise ValueError("need at least two samples")
        if not np.all(np.diff(self.grid) > 0.0):
            raise ValueError("grid must be strictly increasing")
        if not (np.all(np.isfinite(self.grid)) and np.all(np.isfinite(self.values))):
            raise ValueError("grid and values must be finite")
        if len(self.grid) >= 4:
            self._interp = CubicSpline(self.grid, self.values)
        else:
            self._interp = lambda t: np.interp(t, self.grid, self.values)

    def __call__(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.asarray(self._interp(np.clip(t, self.grid[0], self.grid[-1])),
                         dtype=float)
        below = t < self.grid[0]
        if below.any():
            if self.left is None:
                raise InsufficientSupport("evaluated left of the grid with no extension")
            out[below] = self.left
        above = t > self.grid[-1]
        if above.any():
            if self.right is None:
                raise InsufficientSupport("evaluated right of the grid with no extension")
            out[above] = self.right
        return out


def gaussian_convolve(g: SampledFunction, x: float, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Gaussian smoothing (gaussian_kernel * g)(x) of a sampled function.

    The grid plus declared extensions must cover [x - 10, x + 10]; the
    integral itself runs over a slightly wider window before the Gaussian
    factor drops below quad.truncation_cut. On a side with a declared
    extension the integrand uses that constant beyond the grid.
    """
    x = float(x)
    if g.left is None and g.grid[0] > x - 10.0:
        raise InsufficientSupport(
            f"grid starts at {g.grid[0]:g} > {x - 10.0:g} and no left extension is declared"
        )
    if g.right is None and g.grid[-1] < x + 10.0:
        raise InsufficientSupport(
            f"grid ends at {g.grid[-1]:g} < {x + 10.0:g} and no right extension is declared"
        )

    w = _tail_halfwidth(quad.truncation_cut)
    a, b = x - w, x + w
    if g.left is None:
        a = max(a, float(g.grid[0]))
    if g.right is None:
        b = min(b, float(g.grid[-1]))

    def integrand(t):
        return gaussian_kernel(x - t) * g(t)

    br = [float(g.grid[0]), float(g.grid[-1]), x, x - 3.0, x + 3.0, x - 6.0, x + 6.0]
    value, _ = integrate(integrand, a, b, quad, breakpoints=br)
    return value
