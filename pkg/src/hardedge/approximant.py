"""Closed-form edge approximants to the top-degree weighted monomials.

Near the wall the squared weighted monomial of degree j is, to leading
order, a Gaussian bump of height sqrt(n/(2 pi)) * sqrt(density)/radius
centered on the mass-(j/n) circle, cut off hard at the wall. Confinement
removes the outer half of the bump's mass; dividing the amplitude by the
retained mass fraction (a Gaussian tail mass evaluated at the rescaled
degree deficit) restores a unit norm up to O(1/sqrt(n)).

Everything here is explicit in the droplet geometry: no integral equation
is solved. The only quadratures are the diagnostic norms and distances
against the exact monomials.

The obstacle gap also organizes the level geometry: for small t the circle
where sqrt(gap) = |t| (outside for t > 0, inside for t < 0) sweeps out a
nested family of level circles around the boundary, and the parameter at
which the family started at mass tau reaches the wall radius is the
natural lifetime of the mass-tau approximant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NoBracket
from .orthopoly import KernelTable, edge_term_count, log_weighted_monomial_sq
from .potential import DropletFamily, boundary_geometry
from .quadrature import DEFAULT_QUAD, QuadratureSpec, integrate
from .special import free_boundary_profile, gaussian_kernel

from scipy.optimize import brentq

_SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class EdgeParams:
    """Per-degree scalars of the edge approximant.

    deficit is the rescaled degree shortfall (j - n)/sqrt(n), always
    negative in the edge regime. inside_mass is the fraction of the free
    Gaussian bump that survives the wall, the Gaussian tail mass at
    deficit * edge_scale; it lies in (1/2, 1). cut_lo and cut_hi bound the
    smooth bulk cutoff, which vanishes at radii below cut_lo.
    """

    degree: int
    n: int
    tau: float
    radius: float
    density: float
    edge_scale: float
    deficit: float
    inside_mass: float
    stop_time: float
    cut_lo: float
    cut_hi: float

    def __post_init__(self):
        if not self.deficit < 0.0:
            raise DomainError("deficit must be negative (degree below n)")
        if not 0.5 < self.inside_mass < 1.0:
            raise DomainError("inside_mass must lie in (1/2, 1)")
        if not 0.0 < self.cut_lo < self.cut_hi < self.radius:
            raise DomainError("cutoff radii must satisfy 0 < cut_lo < cut_hi < radius")


def in_edge_regime(n: int, j: int) -> bool:
    """True when degree j lies in the top sqrt(n) log n band below n."""
    if n < 2:
        return False
    return n - math.sqrt(n) * math.log(n) <= j < n


def wall_hitting_time(fam: DropletFamily, tau: float) -> float:
    """Gap level sqrt(gap(tau, rho_1)) at which the mass-tau circle family
    reaches the wall; zero at tau = 1, growing like (1 - tau) below."""
    return math.sqrt(max(0.0, fam.gap(tau, fam.unit_radius)))


def edge_params(
    fam: DropletFamily,
    j: int,
    n: int,
    cutoff_center: float = 0.5,
    cutoff_width: float = 0.05,
) -> EdgeParams:
    if not in_edge_regime(n, j):
        raise DomainError(
            f"degree {j} is outside the edge regime [n - sqrt(n) log n, n) for n={n}"
        )
    if not 0.0 < cutoff_width < cutoff_center < 1.0:
        raise DomainError("need 0 < cutoff_width < cutoff_center < 1")
    tau = j / n
    geo = boundary_geometry(fam, tau)
    deficit = (j - n) / math.sqrt(n)
    return EdgeParams(
        degree=j,
        n=n,
        tau=tau,
        radius=geo.radius,
        density=geo.density,
        edge_scale=geo.edge_scale,
        deficit=deficit,
        inside_mass=float(free_boundary_profile(deficit * geo.edge_scale)),
        stop_time=wall_hitting_time(fam, tau),
        cut_lo=(cutoff_center - cutoff_width) * geo.radius,
        cut_hi=cutoff_center * geo.radius,
    )


@dataclass(frozen=True)
class LevelCircle:
    """One circle of the nested gap-level family: sqrt(gap(tau, radius)) = |t|."""

    tau: float
    t: float
    radius: float


def level_radius(fam: DropletFamily, tau: float, t: float) -> float:
    """Radius of the gap level circle at parameter t.

    Positive t selects the branch outside the mass-tau circle, negative t
    the branch inside it; t = 0 returns the circle itself. Raises NoBracket
    when t^2 exceeds the gap range available on the requested branch.
    """
    rho = fam.radius(tau)
    if t == 0.0:
        return rho
    target = t * t

    def f(r):
        return fam.gap(tau, r) - target

    if t > 0.0:
        hi = fam.potential.r_max
        if f(hi) < 0.0:
            raise NoBracket(f"gap stays below t^2={target:g} out to r_max")
        return float(brentq(f, rho, hi, xtol=1e-15, rtol=8.9e-16, maxiter=200))
    lo = 0.5 * rho
    for _ in range(60):
        if f(lo) > 0.0:
            break
        lo *= 0.5
    else:
        raise NoBracket(f"gap stays below t^2={target:g} down to r={lo:g}")
    return float(brentq(f, lo, rho, xtol=1e-15, rtol=8.9e-16, maxiter=200))


def level_circle(fam: DropletFamily, tau: float, t: float) -> LevelCircle:
    return LevelCircle(tau=tau, t=t, radius=level_radius(fam, tau, t))


def bulk_cutoff(p: EdgeParams, r):
    """C^2 smoothstep from 0 below cut_lo to 1 above cut_hi."""
    r = np.asarray(r, dtype=float)
    s = np.clip((r - p.cut_lo) / (p.cut_hi - p.cut_lo), 0.0, 1.0)
    return s * s * s * (s * (6.0 * s - 15.0) + 10.0)


def approximant_sq(fam: DropletFamily, p: EdgeParams, r, hard_edge: bool = True):
    """Squared edge approximant at radius r; exactly 0 beyond the wall.

    With hard_edge the amplitude carries the 1/inside_mass wall correction;
    without it the free-boundary bump is returned instead (same Gaussian
    factor, no mass restored), useful only for contrast runs.
    """
    r_arr = np.asarray(r, dtype=float)
    scalar = r_arr.ndim == 0
    r_arr = np.atleast_1d(r_arr)
    if np.any(r_arr < 0.0):
        raise DomainError("radius must be nonnegative")
    rho1 = fam.unit_radius
    amp = math.sqrt(p.n / (2.0 * math.pi)) * math.sqrt(p.density) / p.radius
    if hard_edge:
        amp /= p.inside_mass
    out = np.zeros(r_arr.shape)
    inside = (r_arr > 0.0) & (r_arr <= rho1)
    rs = r_arr[inside]
    if rs.size:
        chi = bulk_cutoff(p, rs)
        out[inside] = chi * chi * amp * np.exp(-p.n * fam.gap(p.tau, rs))
    return float(out[0]) if scalar else out


def _edge_breakpoints(p: EdgeParams, rho1: float):
    sigma = 0.5 / math.sqrt(p.n * p.density)
    pts = [p.radius + s * sigma for s in (-8, -4, -2, -1, 0, 1, 2, 4, 8)]
    pts += [p.cut_lo, p.cut_hi, rho1 - sigma]
    return pts


def approximant_norm(
    fam: DropletFamily,
    p: EdgeParams,
    quad: QuadratureSpec = DEFAULT_QUAD,
    hard_edge: bool = True,
) -> float:
    """L2 norm of the approximant over the droplet, 1 + O(1/sqrt(n))."""
    rho1 = fam.unit_radius

    def integrand(r):
        return approximant_sq(fam, p, r, hard_edge) * 2.0 * r

    val, _ = integrate(integrand, p.cut_lo, rho1, quad,
                       breakpoints=_edge_breakpoints(p, rho1))
    return math.sqrt(val)


def cross_overlap(tab: KernelTable, fam: DropletFamily, p: EdgeParams, k: int) -> float:
    """Inner product of the exact degree-k monomial with the approximant.

    Distinct degrees are exactly orthogonal by angular symmetry, so the
    value is 0.0 without quadrature for k != degree. At k = degree both
    factors are positive on the outward axis and the product integrates to
    1 + O(1/sqrt(n)).
    """
    if not 0 <= k < tab.n:
        raise DomainError(f"degree {k} outside 0..{tab.n - 1}")
    if k != p.degree:
        return 0.0
    rho1 = fam.unit_radius

    def integrand(r):
        w = np.exp(0.5 * log_weighted_monomial_sq(tab, k, r))
        ws = np.sqrt(approximant_sq(fam, p, r))
        return w * ws * 2.0 * r

    val, _ = integrate(integrand, p.cut_lo, rho1, tab.quad,
                       breakpoints=_edge_breakpoints(p, rho1))
    return val


def approximant_distance(
    tab: KernelTable,
    fam: DropletFamily,
    p: EdgeParams,
    quad: QuadratureSpec = DEFAULT_QUAD,
    hard_edge: bool = True,
) -> float:
    """L2 distance between the exact weighted monomial and its approximant.

    Both are taken positive on the outward axis; the distance decays like
    1/sqrt(n) at fixed deficit.
    """
    rho1 = fam.unit_radius

    def integrand(r):
        w = np.exp(0.5 * log_weighted_monomial_sq(tab, p.degree, r))
        ws = np.sqrt(approximant_sq(fam, p, r, hard_edge))
        d = w - ws
        return d * d * 2.0 * r

    val, _ = integrate(integrand, 0.0, rho1, quad,
                       breakpoints=_edge_breakpoints(p, rho1))
    return math.sqrt(val)


def edge_intensity_approx(
    fam: DropletFamily,
    n: int,
    r,
    cutoff_center: float = 0.5,
    cutoff_width: float = 0.05,
):
    """Sum of the squared approximants over the top sqrt(n) log n degrees.

    Approximates the intensity in the boundary belt; deep bulk radii are
    essentially 0 because every retained bump sits near the edge.
    """
    r_arr = np.asarray(r, dtype=float)
    scalar = r_arr.ndim == 0
    r_arr = np.atleast_1d(r_arr)
    total = np.zeros(r_arr.shape)
    j_lo = max(0, n - edge_term_count(n))
    while not in_edge_regime(n, j_lo):
        j_lo += 1  # ceil in the term count can overshoot the band by one
    for j in range(j_lo, n):
        p = edge_params(fam, j, n, cutoff_center, cutoff_width)
        total += approximant_sq(fam, p, r_arr)
    return float(total[0]) if scalar else total


def edge_riemann_sum(fam: DropletFamily, n: int, x: float, form: str = "kernel") -> float:
    """Degree sum of the rescaled edge intensity written as a Riemann sum.

    Two algebraically identical spellings are provided: form "kernel" uses
    gaussian_kernel directly, form "explicit" spells out the exponential
    over sqrt(2 pi). Their agreement pins down the bookkeeping before the
    sum is compared against the limiting wall profile at 2x.
    """
    if form not in ("kernel", "explicit"):
        raise DomainError(f"unknown form {form!r}")
    geo = boundary_geometry(fam, 1.0)
    ell = geo.edge_scale
    m = edge_term_count(n)
    step = ell / math.sqrt(n)
    total = 0.0
    for k in range(1, m + 1):
        u = 2.0 * x + k * step
        if form == "kernel":
            num = gaussian_kernel(u)
        else:
            num = math.exp(-0.5 * u * u) / _SQRT_2PI
        total += step * num / free_boundary_profile(-k * step)
    return total
