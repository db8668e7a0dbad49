"""Cross-module invariant suite behind the verify command.

Each check produces a measured value and the bound it must meet; the JSON
report lists them all and an overall flag. Kernel tables are pulled through
the on-disk cache, so a tampered cache surfaces here as a failed identity
rather than a crash.
"""

from __future__ import annotations

import datetime
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .approximant import (approximant_distance, approximant_norm, edge_params,
                          wall_hitting_time)
from .config import RunConfig, config_hash, make_family
from .errors import NonMonotoneError
from .orthopoly import cached_kernel_table, one_point
from .potential import (DropletFamily, annulus_moment_residual,
                        boundary_geometry, laplacian)
from .quadrature import integrate
from .scaling import convergence_study

DEFAULT_BELT_SCALE = 1.0


@dataclass(frozen=True)
class CheckResult:
    check: str
    value: float
    bound: float
    passed: bool
    detail: str = ""

    def __post_init__(self):
        # numpy scalars sneak in from the checks; the JSON writer rejects them
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "bound", float(self.bound))
        object.__setattr__(self, "passed", bool(self.passed))


def _check_trace(fam, quad, cache_dir, threads, n_values) -> CheckResult:
    worst = 0.0
    for n in n_values:
        tab = cached_kernel_table(fam, n, quad, cache_dir, threads)
        val, _ = integrate(lambda r: one_point(tab, r) * 2.0 * r,
                           0.0, fam.unit_radius, quad,
                           breakpoints=[fam.unit_radius * s for s in
                                        (0.25, 0.5, 0.75, 0.9, 0.99)])
        worst = max(worst, abs(val - n) / n)
    return CheckResult("trace_identity", worst, 1e-8, worst <= 1e-8,
                       f"n={list(n_values)}")


def _check_mass_law(fam, quad) -> CheckResult:
    worst = 0.0
    for tau in np.linspace(0.5, 1.0, 11):
        rho = fam.radius(tau)
        val, _ = integrate(lambda r: 2.0 * r * laplacian(fam.potential, r),
                           0.0, rho, quad)
        worst = max(worst, abs(val - tau))
    return CheckResult("mass_law", worst, 1e-10, worst <= 1e-10)


def _check_ridge(fam) -> CheckResult:
    worst = 0.0
    for tau in (0.6, 0.8, 1.0):
        rho = fam.radius(tau)
        eps = 1e-3 * rho
        curv = fam.gap(tau, rho + eps) / eps**2
        target = 2.0 * laplacian(fam.potential, rho)
        worst = max(worst, abs(curv / target - 1.0))
    return CheckResult("ridge_curvature", worst, 0.02, worst <= 0.02)


def _check_moments(fam, quad):
    res_mass = annulus_moment_residual(fam, 0.8, 1.0, 0, quad)
    yield CheckResult("annulus_moment_mass", res_mass, 1e-10, res_mass <= 1e-10)
    for k, lo, hi in ((1, 0.85, 0.95), (2, 0.9, 1.0)):
        res = annulus_moment_residual(fam, lo, hi, k, quad)
        yield CheckResult(f"annulus_moment_k{k}", res, 1e-12, res <= 1e-12)


def _check_stop_rate(fam) -> CheckResult:
    ell1 = boundary_geometry(fam, 1.0).edge_scale
    worst = 0.0
    for tau in (0.9, 0.95, 0.99, 0.999):
        t_inf = wall_hitting_time(fam, tau)
        lead = (1.0 - tau) * ell1 / math.sqrt(2.0)
        worst = max(worst, abs(t_inf - lead) / (1.0 - tau) ** 2)
    return CheckResult("stopping_time_rate", worst, 1.0, worst <= 1.0)


def _check_edge_rates(fam, quad, cache_dir, threads, n_values):
    norm_worst = 0.0
    dist_worst = 0.0
    for n in n_values:
        j = n - int(round(math.sqrt(n)))
        p = edge_params(fam, j, n)
        tab = cached_kernel_table(fam, n, quad, cache_dir, threads)
        norm_worst = max(norm_worst,
                         abs(approximant_norm(fam, p, quad) - 1.0) * math.sqrt(n))
        dist_worst = max(dist_worst,
                         approximant_distance(tab, fam, p, quad) * math.sqrt(n))
    detail = f"n={list(n_values)}, deficit ~ -1"
    yield CheckResult("norm_rate", norm_worst, 0.5, norm_worst <= 0.5, detail)
    yield CheckResult("closeness_rate", dist_worst, 0.5, dist_worst <= 0.5, detail)


def _check_monotone(fam, quad, cache_dir, threads, n_values) -> CheckResult:
    try:
        rep = convergence_study(fam, n_values, window=(-3.0, -0.5), grid_step=0.1,
                                quad=quad, cache_dir=cache_dir, threads=threads)
    except NonMonotoneError as exc:
        return CheckResult("error_monotonicity", 0.0, -0.2, False, str(exc))
    return CheckResult("error_monotonicity", rep.rate_estimate, -0.2,
                       rep.rate_estimate <= -0.2,
                       f"sup errors {[f'{e:.3e}' for e in rep.sup_errors]}")


def run_verification(cfg: RunConfig) -> dict:
    fam = make_family(cfg)
    quad = cfg.quadrature
    cache_dir = Path(cfg.out) / "cache"
    opts = cfg.options.get("verify", {})
    trace_n = [int(v) for v in opts.get("trace_n", [4, 16, 64])]
    rate_n = [int(v) for v in opts.get("rate_n", [64, 256])]
    monotone_n = [int(v) for v in opts.get("monotone_n", [64, 256])]

    checks = [
        _check_trace(fam, quad, cache_dir, cfg.threads, trace_n),
        _check_mass_law(fam, quad),
        _check_ridge(fam),
        *_check_moments(fam, quad),
        _check_stop_rate(fam),
        *_check_edge_rates(fam, quad, cache_dir, cfg.threads, rate_n),
        _check_monotone(fam, quad, cache_dir, cfg.threads, monotone_n),
    ]
    return {
        "version": __version__,
        "config_hash": config_hash(cfg),
        "created_utc": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "belt_scale": DEFAULT_BELT_SCALE,
        "checks": [asdict(c) for c in checks],
        "all_pass": all(c.passed for c in checks),
    }
