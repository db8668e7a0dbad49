"""Boundary rescaling and convergence of the wall profile to its limit.

Distances are magnified about the wall radius by sqrt(n * density) and the
intensity is divided by n * density, so a unit of the rescaled coordinate
is one mean interparticle spacing at the boundary. In these coordinates
the intensity converges to hard_edge_profile(2x) inside the wall and 0
outside, locally uniformly away from the wall line itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .approximant import edge_intensity_approx
from .errors import DomainError, NonMonotoneError
from .orthopoly import (KernelTable, cached_kernel_table, edge_term_count,
                        one_point, truncated_one_point)
from .potential import DropletFamily, laplacian
from .quadrature import DEFAULT_QUAD, QuadratureSpec
from .special import hard_edge_profile

PROFILE_KINDS = ("exact", "truncated", "approx", "mcmc", "limit")


@dataclass(frozen=True)
class Profile:
    """A sampled nonnegative 1D intensity profile with provenance metadata."""

    grid: np.ndarray
    values: np.ndarray
    kind: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "grid", np.asarray(self.grid, dtype=float))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if self.kind not in PROFILE_KINDS:
            raise DomainError(f"kind must be one of {PROFILE_KINDS}, got {self.kind!r}")
        if self.grid.shape != self.values.shape or self.grid.ndim != 1:
            raise DomainError("grid and values must be 1D arrays of equal length")
        if not np.all(np.diff(self.grid) > 0.0):
            raise DomainError("grid must be strictly increasing")
        if np.any(self.values < 0.0):
            raise DomainError("intensity values must be nonnegative")


@dataclass(frozen=True)
class RescaleMap:
    """Affine chart x -> base_radius + x/factor with factor sqrt(n density)."""

    n: int
    base_radius: float
    factor: float

    def __post_init__(self):
        if not self.factor > 0.0:
            raise DomainError("rescale factor must be positive")

    def to_radius(self, x):
        return self.base_radius + np.asarray(x, dtype=float) / self.factor

    @property
    def intensity_scale(self) -> float:
        return 1.0 / (self.factor * self.factor)


def make_rescale_map(fam: DropletFamily, n: int) -> RescaleMap:
    rho1 = fam.unit_radius
    dens = laplacian(fam.potential, rho1)
    return RescaleMap(n=n, base_radius=rho1, factor=math.sqrt(n * dens))


def _meta(fam: DropletFamily, rmap: RescaleMap) -> dict:
    return {
        "n": rmap.n,
        "potential": fam.potential.name,
        "factor": rmap.factor,
        "base_radius": rmap.base_radius,
    }


def rescaled_profile(tab: KernelTable, fam: DropletFamily, grid) -> Profile:
    """Exact intensity in wall coordinates; identically 0 for x > 0."""
    rmap = make_rescale_map(fam, tab.n)
    r = rmap.to_radius(grid)
    if np.any(r < 0.0):
        raise DomainError("grid reaches below radius 0")
    vals = one_point(tab, r) * rmap.intensity_scale
    return Profile(grid=np.asarray(grid, float), values=vals, kind="exact",
                   meta=_meta(fam, rmap))


def rescaled_truncated_profile(
    tab: KernelTable, fam: DropletFamily, grid, m: int | None = None
) -> Profile:
    """Top-m-degree intensity in wall coordinates; m defaults to the edge band."""
    if m is None:
        m = edge_term_count(tab.n)
    rmap = make_rescale_map(fam, tab.n)
    r = rmap.to_radius(grid)
    if np.any(r < 0.0):
        raise DomainError("grid reaches below radius 0")
    vals = truncated_one_point(tab, r, m) * rmap.intensity_scale
    meta = _meta(fam, rmap)
    meta["terms"] = m
    return Profile(grid=np.asarray(grid, float), values=vals, kind="truncated", meta=meta)


def rescaled_approx_profile(fam: DropletFamily, n: int, grid) -> Profile:
    """Edge-approximant intensity in wall coordinates."""
    rmap = make_rescale_map(fam, n)
    r = rmap.to_radius(grid)
    if np.any(r < 0.0):
        raise DomainError("grid reaches below radius 0")
    vals = edge_intensity_approx(fam, n, r) * rmap.intensity_scale
    meta = _meta(fam, rmap)
    meta["terms"] = edge_term_count(n)
    return Profile(grid=np.asarray(grid, float), values=vals, kind="approx", meta=meta)


def limit_profile(grid, quad: QuadratureSpec = DEFAULT_QUAD) -> Profile:
    """Limiting wall profile hard_edge_profile(2x) for x < 0, 0 for x >= 0."""
    grid = np.asarray(grid, dtype=float)
    vals = np.zeros(grid.shape)
    neg = grid < 0.0
    vals[neg] = hard_edge_profile(2.0 * grid[neg], quad)
    return Profile(grid=grid, values=vals, kind="limit", meta={})


def approx_vs_truncated(tab: KernelTable, fam: DropletFamily, grid):
    """The truncated exact profile and the approximant profile, side by side."""
    return (
        rescaled_truncated_profile(tab, fam, grid),
        rescaled_approx_profile(fam, tab.n, grid),
    )


@dataclass(frozen=True)
class ConvergenceReport:
    """Sup-window errors against the limit profile across a sweep of n."""

    n_values: tuple
    sup_errors: tuple
    window: tuple
    rate_estimate: float

    def to_dict(self) -> dict:
        return {
            "n_values": list(self.n_values),
            "sup_errors": list(self.sup_errors),
            "window": list(self.window),
            "rate_estimate": self.rate_estimate,
        }


def convergence_study(
    fam: DropletFamily,
    n_values,
    window=(-3.0, -0.5),
    grid_step: float = 0.05,
    quad: QuadratureSpec = DEFAULT_QUAD,
    cache_dir=None,
    threads: int = 1,
) -> ConvergenceReport:
    """Sup error of the rescaled profile against the limit, per n.

    The supported window sits inside [-4, -0.25]; windows touching 0 probe
    the discontinuity at the wall line, where errors need not shrink and a
    NonMonotoneError is the expected outcome. Errors must decrease strictly
    along n_values. The fitted rate is the least-squares slope of log error
    against log n.
    """
    n_values = [int(v) for v in n_values]
    if len(n_values) < 2 or any(b <= a for a, b in zip(n_values, n_values[1:])):
        raise DomainError("n_values must be at least two strictly increasing integers")
    lo, hi = float(window[0]), float(window[1])
    if not (-6.0 <= lo < hi <= 0.5):
        raise DomainError(f"window must satisfy -6 <= lo < hi <= 0.5, got {window}")
    if grid_step <= 0.0:
        raise DomainError("grid_step must be positive")

    grid = np.arange(lo, hi + 0.5 * grid_step, grid_step)
    limit = limit_profile(grid, quad)
    errors = []
    for n in n_values:
        tab = cached_kernel_table(fam, n, quad, cache_dir, threads)
        prof = rescaled_profile(tab, fam, grid)
        errors.append(float(np.max(np.abs(prof.values - limit.values))))
    for (n_a, e_a), (n_b, e_b) in zip(zip(n_values, errors), zip(n_values[1:], errors[1:])):
        if not e_b < e_a:
            raise NonMonotoneError(
                f"sup error did not decrease from n={n_a} ({e_a:.3e}) to n={n_b} ({e_b:.3e})"
            )
    slope = float(np.polyfit(np.log(n_values), np.log(errors), 1)[0])
    return ConvergenceReport(
        n_values=tuple(n_values),
        sup_errors=tuple(errors),
        window=(lo, hi),
        rate_estimate=slope,
    )
