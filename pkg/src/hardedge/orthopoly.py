"""Exact correlation kernel of the wall-confined ensemble, in log domain.

For a radial potential the monomials are already orthogonal, so the whole
kernel is determined by the squared norms

    h_j = 2 * integral over [0, rho_1] of r^(2j+1) e^{-n q(r)} dr,

the wall truncating the integral exactly at the unit droplet radius. Each
norm is computed after re-centering the exponent at its interior maximum;
the dynamic range of the raw integrand exceeds thousands of orders of
magnitude at n in the thousands, while the re-centered integrand lives in
[0, 1]. All downstream sums (intensity, kernel values) are accumulated by
log-sum-exp pivoted at the running maximum term.
"""

from __future__ import annotations

import hashlib
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import logsumexp

from .errors import DomainError
from .potential import DropletFamily, laplacian
from .quadrature import DEFAULT_QUAD, QuadratureSpec, integrate

# placeholder for log r at r = 0: large enough that exp underflows, finite
# so that 0 * log r stays 0 for the constant monomial
_LOG_ZERO = -746.0

_CACHE_VERSION = 1


@dataclass(frozen=True)
class KernelTable:
    """Log squared norms of the weighted monomials for one (potential, n)."""

    n: int
    log_norms: np.ndarray
    fam: DropletFamily
    quad: QuadratureSpec

    def __post_init__(self):
        if self.n < 1 or len(self.log_norms) != self.n:
            raise DomainError("log_norms must hold exactly n entries")
        if not np.all(np.isfinite(self.log_norms)):
            raise DomainError("log_norms must be finite")


def _log_norm_single(fam: DropletFamily, n: int, j: int, quad: QuadratureSpec) -> float:
    pot = fam.potential
    rho1 = fam.unit_radius
    # exponent of the full radial integrand, measure factor r included
    a = 2 * j + 1

    def exponent(r):
        return a * np.log(r) - n * pot.q(r)

    r_star = fam.radius((j + 0.5) / n)
    e_star = float(exponent(r_star))
    curv = a / r_star**2 + n * pot.d2q(r_star)
    sigma = 1.0 / math.sqrt(curv) if curv > 0.0 else 0.125 * rho1

    def integrand(r):
        return np.exp(exponent(r) - e_star)

    br = [r_star + s * sigma for s in (-8.0, -4.0, -2.0, -1.0, 1.0, 2.0, 4.0, 8.0)]
    br.append(r_star)
    value, _ = integrate(integrand, 0.0, rho1, quad, breakpoints=br)
    return e_star + math.log(2.0 * value)


def build_kernel_table(
    fam: DropletFamily,
    n: int,
    quad: QuadratureSpec = DEFAULT_QUAD,
    threads: int = 1,
) -> KernelTable:
    """Compute all n log norms; degrees are independent and may run in parallel."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    degrees = range(n)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            logs = list(pool.map(lambda j: _log_norm_single(fam, n, j, quad), degrees))
    else:
        logs = [_log_norm_single(fam, n, j, quad) for j in degrees]
    return KernelTable(n=n, log_norms=np.array(logs), fam=fam, quad=quad)


def table_cache_key(fam: DropletFamily, n: int, quad: QuadratureSpec) -> str:
    raw = f"v{_CACHE_VERSION}|{fam.potential.name}|n={n}|{quad.key()}"
    return hashlib.sha256(raw.encode()).hexdigest()[:16]


def save_kernel_table(tab: KernelTable, path) -> None:
    np.savez(
        path,
        log_norms=tab.log_norms,
        n=np.array([tab.n]),
        key=np.array([table_cache_key(tab.fam, tab.n, tab.quad)]),
    )


def load_kernel_table(path, fam: DropletFamily, quad: QuadratureSpec) -> KernelTable:
    """Load a cached table; the stored key must match (potential, n, quad).

    Stored norms are trusted as-is, so a stale or tampered file surfaces
    through downstream identity checks rather than here.
    """
    with np.load(path, allow_pickle=False) as z:
        n = int(z["n"][0])
        key = str(z["key"][0])
        log_norms = np.array(z["log_norms"], dtype=float)
    if key != table_cache_key(fam, n, quad):
        raise DomainError(f"cache file {path} does not match the requested table")
    return KernelTable(n=n, log_norms=log_norms, fam=fam, quad=quad)


def cached_kernel_table(
    fam: DropletFamily,
    n: int,
    quad: QuadratureSpec = DEFAULT_QUAD,
    cache_dir=None,
    threads: int = 1,
) -> KernelTable:
    if cache_dir is None:
        return build_kernel_table(fam, n, quad, threads)
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    path = cache_dir / f"kt_{table_cache_key(fam, n, quad)}.npz"
    if path.exists():
        return load_kernel_table(path, fam, quad)
    tab = build_kernel_table(fam, n, quad, threads)
    save_kernel_table(tab, path)
    return tab


def _log_r(r: np.ndarray) -> np.ndarray:
    return np.where(r > 0.0, np.log(np.where(r > 0.0, r, 1.0)), _LOG_ZERO)


def log_weighted_monomial_sq(tab: KernelTable, j: int, r):
    """log |w_j|^2(r); -inf outside the droplet where the weight vanishes."""
    if not 0 <= j < tab.n:
        raise DomainError(f"degree {j} outside 0..{tab.n - 1}")
    r_arr = np.asarray(r, dtype=float)
    scalar = r_arr.ndim == 0
    r_arr = np.atleast_1d(r_arr)
    if np.any(r_arr < 0.0):
        raise DomainError("radius must be nonnegative")
    rho1 = tab.fam.unit_radius
    inside = r_arr <= rho1
    out = np.full(r_arr.shape, -np.inf)
    rs = r_arr[inside]
    out[inside] = (2 * j) * _log_r(rs) - tab.n * tab.fam.potential.q(rs) - tab.log_norms[j]
    return float(out[0]) if scalar else out


def weighted_monomial_sq(tab: KernelTable, j: int, r):
    """Squared weighted monomial |w_j|^2(r); exactly 0 beyond the wall."""
    out = np.exp(log_weighted_monomial_sq(tab, j, r))
    return out


def _intensity(tab: KernelTable, r, j_lo: int) -> np.ndarray:
    r_arr = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(r_arr < 0.0):
        raise DomainError("radius must be nonnegative")
    rho1 = tab.fam.unit_radius
    out = np.zeros(r_arr.shape)
    inside = r_arr <= rho1
    rs = r_arr[inside]
    if rs.size:
        degrees = np.arange(j_lo, tab.n, dtype=float)[:, None]
        base = -tab.n * tab.fam.potential.q(rs) - 0.0
        # chunk over grid points to cap the (degree x point) work matrix
        chunk = max(1, (1 << 22) // tab.n)
        vals = np.empty(rs.size)
        for s in range(0, rs.size, chunk):
            rc = rs[s:s + chunk]
            terms = (2.0 * degrees * _log_r(rc)[None, :]
                     - tab.log_norms[j_lo:, None]
                     + base[s:s + chunk][None, :])
            vals[s:s + chunk] = np.exp(logsumexp(terms, axis=0))
        out[inside] = vals
    return out


def one_point(tab: KernelTable, r):
    """Intensity R_n(r), the diagonal of the kernel; 0 beyond the wall."""
    out = _intensity(tab, r, 0)
    return float(out[0]) if np.asarray(r).ndim == 0 else out


def truncated_one_point(tab: KernelTable, r, m: int):
    """Intensity of the top m degrees only; m = n recovers one_point exactly."""
    if not 1 <= m <= tab.n:
        raise DomainError(f"m must lie in 1..{tab.n}, got {m}")
    out = _intensity(tab, r, tab.n - m)
    return float(out[0]) if np.asarray(r).ndim == 0 else out


def kernel(tab: KernelTable, z: complex, w: complex) -> complex:
    """Correlation kernel at a pair of points; 0 if either is beyond the wall.

    Hermitian by construction. The diagonal reproduces one_point.
    """
    z, w = complex(z), complex(w)
    rho1 = tab.fam.unit_radius
    az, aw = abs(z), abs(w)
    if az > rho1 or aw > rho1:
        return 0.0j
    s = z * np.conj(w)
    log_abs_s = math.log(abs(s)) if abs(s) > 0.0 else _LOG_ZERO
    theta = np.angle(s)
    degrees = np.arange(tab.n, dtype=float)
    pot = tab.fam.potential
    log_mag = (degrees * log_abs_s
               - 0.5 * tab.n * (pot.q(az) + pot.q(aw))
               - tab.log_norms)
    pivot = float(np.max(log_mag))
    total = np.sum(np.exp(log_mag - pivot) * np.exp(1j * degrees * theta))
    return complex(math.exp(pivot) * total)


def edge_term_count(n: int) -> int:
    """Number of top degrees carrying the boundary profile, ceil(sqrt(n) log n)."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if n == 1:
        return 1
    return min(n, int(math.ceil(math.sqrt(n) * math.log(n))))


def belt_halfwidth(fam: DropletFamily, n: int, scale: float = 1.0) -> float:
    """Half-width scale/sqrt(n * boundary density) of the boundary belt.

    The default scale 1.0 keeps the belt where the top sqrt(n) log n degrees
    carry all but a vanishing share of the intensity; wider belts reach into
    bulk radii where discarded low degrees still matter.
    """
    dens = laplacian(fam.potential, fam.unit_radius)
    return scale / math.sqrt(n * dens)
