"""Rotationally symmetric confining potentials and their droplet geometry.

A potential is specified by its radial profile q, so that the planar field
is q(|zeta|). Conventions used throughout the package: the Laplacian is the
quarter Laplacian (laplacian of |zeta|^2 equals 1) and area measure is
dx dy / pi, so a radial integral of f against area measure is
2 * integral of f(r) r dr.

With total mass tau in (0, 1], charge fills the disk of radius rho_tau
where rho * q'(rho) = 2 tau. The equilibrium density on that disk is the
quarter Laplacian of the potential. The obstacle gap measures how far the
potential rises above its harmonic continuation from the disk boundary;
it vanishes on the boundary circle and grows quadratically off it with
curvature twice the boundary density.

Only potentials whose droplets are disks around the origin are accepted:
q' must be nonnegative inside and r q'(r) strictly increasing near the
outer radius. Ring-shaped (annular) droplets are rejected at construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, NoBracket
from .quadrature import DEFAULT_QUAD, QuadratureSpec, integrate

_GROWTH_MARGIN = 0.1


@dataclass(frozen=True)
class RadialPotential:
    """Radial profile q with first and second derivatives and an outer cutoff.

    r_max bounds the numerically relevant radial domain; the growth
    condition q(r_max) - 2 (1 + margin) log r_max > q(rho_1) is checked when
    a droplet family is built.
    """

    name: str
    q: Callable
    dq: Callable
    d2q: Callable
    r_max: float

    def laplacian(self, r):
        return laplacian(self, r)


def laplacian(pot: RadialPotential, r):
    """Quarter Laplacian (q''(r) + q'(r)/r)/4, the equilibrium density."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr <= 0.0):
        raise DomainError("laplacian needs r > 0")
    out = 0.25 * (pot.d2q(r_arr) + pot.dq(r_arr) / r_arr)
    return float(out) if out.ndim == 0 else out


def _poly_potential(name: str, coeffs, r_max: float | None) -> RadialPotential:
    # q(r) = sum over k >= 1 of coeffs[k-1] * r^(2k); P below is in u = r^2
    c = np.asarray(coeffs, dtype=float)
    if c.ndim != 1 or len(c) == 0 or not np.all(np.isfinite(c)):
        raise DomainError("coefficients must be a nonempty finite 1D sequence")
    p_coef = np.concatenate([[0.0], c])
    dp_coef = np.polynomial.polynomial.polyder(p_coef)
    d2p_coef = np.polynomial.polynomial.polyder(dp_coef)

    def q(r):
        r = np.asarray(r, dtype=float)
        return np.polynomial.polynomial.polyval(r * r, p_coef)

    def dq(r):
        r = np.asarray(r, dtype=float)
        return 2.0 * r * np.polynomial.polynomial.polyval(r * r, dp_coef)

    def d2q(r):
        r = np.asarray(r, dtype=float)
        u = r * r
        return (4.0 * u * np.polynomial.polynomial.polyval(u, d2p_coef)
                + 2.0 * np.polynomial.polynomial.polyval(u, dp_coef))

    if r_max is None:
        r_max = 1.0
        for _ in range(64):
            if r_max * dq(r_max) > 4.0:
                break
            r_max *= 2.0
        else:
            raise NoBracket("r q'(r) never exceeds 4 on a doubling scan; no unit droplet")
        r_max *= 2.0
    return RadialPotential(name, q, dq, d2q, float(r_max))


def ginibre() -> RadialPotential:
    """q(r) = r^2; unit droplet is the unit disk, density identically 1."""
    return _poly_potential("ginibre", [1.0], 4.0)


def power(p: float) -> RadialPotential:
    """q(r) = r^(2p) for integer p >= 1; unit droplet radius (1/p)^(1/2p)."""
    if p < 1 or int(p) != p:
        raise DomainError(f"power exponent must be an integer >= 1, got {p}")
    p = int(p)
    coeffs = [0.0] * p
    coeffs[-1] = 1.0
    rho1 = (1.0 / p) ** (1.0 / (2 * p))
    return _poly_potential(f"power{p}", coeffs, max(4.0 * rho1, 2.0))


def custom(coeffs, r_max: float | None = None) -> RadialPotential:
    """Polynomial in r^2 with the given coefficients of r^2, r^4, ..."""
    label = "custom(" + ",".join(f"{float(c):.17g}" for c in coeffs) + ")"
    return _poly_potential(label, coeffs, r_max)


class DropletFamily:
    """The nested family of disk droplets of a radial potential.

    Radii are found by bracketed root solving on r q'(r) = 2 tau and cached
    per tau; after construction all queries are read-only. tau_range is the
    advertised regime for boundary geometry, default [0.5, 1].
    """

    def __init__(self, potential: RadialPotential, tau_range=(0.5, 1.0)):
        lo, hi = float(tau_range[0]), float(tau_range[1])
        if not (0.0 < lo < hi <= 1.0):
            raise DomainError(f"tau_range must satisfy 0 < lo < hi <= 1, got {tau_range}")
        self.potential = potential
        self.tau_range = (lo, hi)
        self._radius_cache: dict = {}
        self.unit_radius = self._solve_radius(1.0)
        self._validate_disk_droplet()

    def _solve_radius(self, tau: float) -> float:
        pot = self.potential

        def f(r):
            return r * pot.dq(r) - 2.0 * tau

        lo, hi = 1e-8, pot.r_max
        if not (f(lo) < 0.0 < f(hi)):
            raise NoBracket(
                f"r q'(r) - 2*{tau:g} does not change sign on ({lo:g}, {hi:g})"
            )
        return float(brentq(f, lo, hi, xtol=1e-15, rtol=8.9e-16, maxiter=200))

    def _validate_disk_droplet(self):
        pot = self.potential
        rho1 = self.unit_radius
        inner = np.linspace(rho1 * 1e-3, rho1, 512)
        if np.any(pot.dq(inner) < 0.0):
            raise DomainError(
                f"{pot.name}: q' is negative inside the droplet; "
                "the droplet is not a disk around the origin"
            )
        near = np.linspace(0.8 * rho1, min(1.25 * rho1, pot.r_max), 256)
        if np.any(laplacian(pot, near) <= 0.0):
            raise DomainError(f"{pot.name}: density not positive near the boundary")
        mass = near * pot.dq(near)
        if np.any(np.diff(mass) <= 0.0):
            raise DomainError(f"{pot.name}: r q'(r) not strictly increasing near the boundary")
        growth = pot.q(pot.r_max) - 2.0 * (1.0 + _GROWTH_MARGIN) * math.log(pot.r_max)
        if not growth > pot.q(rho1):
            raise DomainError(f"{pot.name}: potential grows too slowly out to r_max")

    def radius(self, tau: float) -> float:
        """Droplet radius at mass tau in (0, 1], relative accuracy 1e-13."""
        tau = float(tau)
        if not (0.0 < tau <= 1.0):
            raise DomainError(f"tau must lie in (0, 1], got {tau}")
        hit = self._radius_cache.get(tau)
        if hit is None:
            hit = self._radius_cache[tau] = self._solve_radius(tau)
        return hit

    def gap(self, tau: float, r):
        """Obstacle gap q(r) - q(rho_tau) - 2 tau log(r/rho_tau); zero on the circle."""
        r_arr = np.asarray(r, dtype=float)
        if np.any(r_arr <= 0.0):
            raise DomainError("gap needs r > 0")
        rho = self.radius(tau)
        pot = self.potential
        out = pot.q(r_arr) - pot.q(rho) - 2.0 * tau * np.log(r_arr / rho)
        return float(out) if out.ndim == 0 else out

    def edge_offset(self, tau: float) -> float:
        """Signed distance rho_tau - rho_1 of the mass-tau circle from the unit one."""
        return self.radius(tau) - self.unit_radius


def droplet_radius(fam: DropletFamily, tau: float) -> float:
    return fam.radius(tau)


def obstacle_gap(fam: DropletFamily, tau: float, r):
    return fam.gap(tau, r)


def closest_point_gap(fam: DropletFamily, tau: float) -> float:
    return fam.edge_offset(tau)


@dataclass(frozen=True)
class BoundaryGeometry:
    """Scalars attached to the mass-tau boundary circle.

    density is the equilibrium density on the circle, edge_scale the
    intrinsic boundary length unit 1/(rho_tau sqrt(density)), edge_offset
    the signed distance to the unit circle (nonpositive for tau <= 1).
    """

    tau: float
    radius: float
    density: float
    edge_scale: float
    edge_offset: float

    def __post_init__(self):
        if not self.edge_scale > 0.0:
            raise DomainError("edge_scale must be positive")
        if self.tau <= 1.0 and self.edge_offset > 1e-12:
            raise DomainError("edge_offset must be nonpositive for tau <= 1")


def boundary_geometry(fam: DropletFamily, tau: float) -> BoundaryGeometry:
    rho = fam.radius(tau)
    dens = laplacian(fam.potential, rho)
    return BoundaryGeometry(
        tau=tau,
        radius=rho,
        density=dens,
        edge_scale=1.0 / (rho * math.sqrt(dens)),
        edge_offset=fam.edge_offset(tau),
    )


def annulus_moment_residual(
    fam: DropletFamily,
    tau_lo: float,
    tau_hi: float,
    k: int,
    quad: QuadratureSpec = DEFAULT_QUAD,
) -> float:
    """Residual of the k-th harmonic moment over the annulus between droplets.

    Integrates Re(zeta^-k) times the density over the region between the
    mass-tau_lo and mass-tau_hi circles. For k = 0 the exact answer is the
    mass difference and the residual is against that; for k >= 1 the angular
    factor integrates to zero, so the returned value is pure quadrature
    noise. The angular factor is integrated numerically on purpose.
    """
    if not (0.0 < tau_lo < tau_hi <= 1.0):
        raise DomainError(f"need 0 < tau_lo < tau_hi <= 1, got ({tau_lo}, {tau_hi})")
    if k < 0 or int(k) != k:
        raise DomainError(f"k must be a nonnegative integer, got {k}")
    k = int(k)
    r_lo, r_hi = fam.radius(tau_lo), fam.radius(tau_hi)
    pot = fam.potential

    angular, _ = integrate(lambda th: np.cos(k * th), 0.0, 2.0 * math.pi, quad,
                           breakpoints=[math.pi])
    radial, _ = integrate(lambda r: r ** (1 - k) * laplacian(pot, r), r_lo, r_hi, quad)
    value = (angular / math.pi) * radial
    target = (tau_hi - tau_lo) if k == 0 else 0.0
    return abs(value - target)
