"""Metropolis sampling of the wall-confined Coulomb gas.

Target density: product over pairs of |z_j - z_k|^2 times exp(-n sum q(|z|)),
restricted to the droplet. Proposals outside the wall are rejected outright.
A full sweep proposes one move per particle; cost is O(n) per move from
incremental pairwise distances, O(n^2) per sweep.

Reproducibility contract: the random stream of sweep s is derived from
(seed, s) alone, and the tuning state rides in the checkpoint, so a resumed
chain continues bit-identically to an uninterrupted one.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np
from scipy.stats import chi2

from .errors import ConfigError, DomainError
from .orthopoly import KernelTable, one_point
from .potential import DropletFamily
from .quadrature import DEFAULT_QUAD, QuadratureSpec, integrate

_CKPT_MAGIC = b"HEGC"
_CKPT_VERSION = 1
_CKPT_HEAD = struct.Struct("<4sIQQQdQQQQ")


@dataclass
class GibbsChain:
    n: int
    positions: np.ndarray
    rng_seed: int
    step_scale: float
    sweeps_done: int = 0
    window_accepts: int = 0
    window_proposals: int = 0
    cum_accepts: int = 0
    cum_proposals: int = 0

    @property
    def accept_rate(self) -> float:
        return self.cum_accepts / max(1, self.cum_proposals)


def log_gibbs_density(fam: DropletFamily, positions: np.ndarray, n: int) -> float:
    """Unnormalized log density of a configuration; -inf outside the wall.

    Brute-force over all pairs; used as the acceptance-ratio oracle in tests
    and nowhere in the hot path.
    """
    pos = np.asarray(positions, dtype=complex)
    if np.any(np.abs(pos) > fam.unit_radius):
        return -np.inf
    total = -n * float(np.sum(fam.potential.q(np.abs(pos))))
    m = len(pos)
    for j in range(m):
        d = np.abs(pos[j + 1:] - pos[j])
        total += 2.0 * float(np.sum(np.log(d)))
    return total


def _sweep_rng(seed: int, sweep_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed,
                                                        spawn_key=(sweep_index + 1,)))


def init_chain(fam: DropletFamily, n: int, seed: int, step_scale: float | None = None) -> GibbsChain:
    """Start from i.i.d. draws of the equilibrium density via its radial inverse CDF.

    The radial mass inside radius r is r q'(r)/2, so a uniform variate u maps
    to the droplet radius at mass u.
    """
    if n < 2:
        raise DomainError(f"need at least 2 particles, got {n}")
    if not 0 <= int(seed) < 2**64:
        raise DomainError("seed must fit in an unsigned 64-bit integer")
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(0,)))
    u = np.clip(rng.random(n), 1e-12, 1.0)
    radii = np.array([fam.radius(v) for v in u])
    angles = rng.random(n) * 2.0 * np.pi
    if step_scale is None:
        step_scale = fam.unit_radius / np.sqrt(n)
    return GibbsChain(
        n=n,
        positions=radii * np.exp(1j * angles),
        rng_seed=int(seed),
        step_scale=float(step_scale),
    )


def sweep(chain: GibbsChain, fam: DropletFamily, rng: np.random.Generator) -> GibbsChain:
    """One Metropolis pass over all particles, in index order. Mutates chain."""
    pos = chain.positions
    n = chain.n
    q = fam.potential.q
    rho1 = fam.unit_radius
    u = rng.random((n, 3))
    for k in range(n):
        chain.window_proposals += 1
        chain.cum_proposals += 1
        cur = pos[k]
        offset = chain.step_scale * np.sqrt(u[k, 0]) * np.exp(2.0j * np.pi * u[k, 1])
        prop = cur + offset
        if abs(prop) > rho1:
            continue
        d_new = np.abs(pos - prop)
        d_old = np.abs(pos - cur)
        d_new[k] = 1.0
        d_old[k] = 1.0
        log_ratio = (2.0 * (np.sum(np.log(d_new)) - np.sum(np.log(d_old)))
                     - n * (q(abs(prop)) - q(abs(cur))))
        if np.log(u[k, 2]) < log_ratio:
            pos[k] = prop
            chain.window_accepts += 1
            chain.cum_accepts += 1
    return chain


def run_chain(
    chain: GibbsChain,
    fam: DropletFamily,
    sweeps: int,
    burn_in: int = 0,
    tune_target: float = 0.35,
    tune_interval: int = 50,
) -> GibbsChain:
    """Advance the chain until `sweeps` total sweeps have been done.

    `sweeps` and `burn_in` count from chain birth, not from this call, so a
    chain resumed from a checkpoint reproduces the uninterrupted trajectory
    bit for bit (each sweep draws from an RNG keyed by the global sweep
    index). A chain already at or past the target is returned unchanged.
    Step size is tuned only inside the burn-in window, so the transition
    kernel is fixed for every retained sample.
    """
    rho1 = fam.unit_radius
    while chain.sweeps_done < sweeps:
        rng = _sweep_rng(chain.rng_seed, chain.sweeps_done)
        sweep(chain, fam, rng)
        chain.sweeps_done += 1
        if chain.sweeps_done <= burn_in and chain.sweeps_done % tune_interval == 0:
            if chain.window_proposals > 0:
                rate = chain.window_accepts / chain.window_proposals
                factor = np.exp(rate - tune_target)
                chain.step_scale = float(np.clip(chain.step_scale * factor,
                                                 1e-6 * rho1, rho1))
            chain.window_accepts = 0
            chain.window_proposals = 0
    return chain


@dataclass(frozen=True)
class RadialHistogram:
    """Radial counts converted to intensity per unit area measure.

    intensity * bin area sums to exactly n: the estimator conserves mass by
    construction, independent of chain quality.
    """

    bin_edges: np.ndarray
    counts: np.ndarray
    sweeps: int
    intensity: np.ndarray

    def __post_init__(self):
        if np.any(self.counts < 0) or np.any(self.intensity < 0.0):
            raise DomainError("histogram counts and intensity must be nonnegative")


def bin_areas(bin_edges: np.ndarray) -> np.ndarray:
    """Area (in the dxdy/pi normalization) of each radial bin."""
    e = np.asarray(bin_edges, dtype=float)
    return e[1:] ** 2 - e[:-1] ** 2


def empirical_profile(
    chain: GibbsChain,
    fam: DropletFamily,
    bins,
    sweeps: int,
    burn_in: int,
    thin: int = 1,
) -> RadialHistogram:
    """Advance the chain to `sweeps` total and histogram retained radii.

    sweeps and burn_in count global sweeps of the chain, so a chain resumed
    from a checkpoint slots into the same schedule (tuning, retention and
    thinning all key off the global sweep index) and its trajectory matches
    an uninterrupted run. A resumed call histograms only its own segment.
    """
    if sweeps <= burn_in:
        raise DomainError("sweeps must exceed burn_in")
    if thin < 1:
        raise DomainError("thin must be >= 1")
    if chain.sweeps_done >= sweeps:
        raise DomainError(
            f"chain has already done {chain.sweeps_done} of {sweeps} sweeps"
        )
    if np.isscalar(bins):
        edges = np.linspace(0.0, fam.unit_radius, int(bins) + 1)
    else:
        edges = np.asarray(bins, dtype=float)
    counts = np.zeros(len(edges) - 1, dtype=np.int64)

    retained = 0
    while chain.sweeps_done < sweeps:
        run_chain(chain, fam, chain.sweeps_done + 1, burn_in=burn_in)
        idx = chain.sweeps_done
        if idx > burn_in and (idx - burn_in - 1) % thin == 0:
            c, _ = np.histogram(np.abs(chain.positions), bins=edges)
            counts += c
            retained += 1
    intensity = counts / (retained * bin_areas(edges))
    return RadialHistogram(bin_edges=edges, counts=counts, sweeps=retained,
                           intensity=intensity)


def kernel_bin_masses(
    tab: KernelTable, bin_edges, quad: QuadratureSpec = DEFAULT_QUAD
) -> np.ndarray:
    """Expected per-configuration mass of each radial bin under the kernel."""
    edges = np.asarray(bin_edges, dtype=float)
    masses = np.empty(len(edges) - 1)
    for i, (lo, hi) in enumerate(zip(edges[:-1], edges[1:])):
        val, _ = integrate(lambda r: one_point(tab, r) * 2.0 * r, lo, hi, quad)
        masses[i] = val
    return masses


@dataclass(frozen=True)
class AgreementSummary:
    statistic: float
    threshold: float
    dof: int
    quantile: float
    bins_used: int
    passed: bool


def chi_square_agreement(
    hist: RadialHistogram,
    expected_masses: np.ndarray,
    quantile: float = 0.99,
    min_expected: float = 100.0,
) -> AgreementSummary:
    """Pearson statistic over bins with enough expected mass.

    Samples from one chain are correlated across sweeps, so this is a
    tolerant consistency check against the kernel prediction, not an exact
    goodness-of-fit test; the generous quantile absorbs the inflation.
    """
    expected_counts = np.asarray(expected_masses, dtype=float) * hist.sweeps
    use = expected_counts >= min_expected
    k = int(np.sum(use))
    if k == 0:
        return AgreementSummary(0.0, 0.0, 0, quantile, 0, True)
    obs = hist.counts[use].astype(float)
    exp = expected_counts[use]
    stat = float(np.sum((obs - exp) ** 2 / exp))
    dof = max(1, k - 1)
    threshold = float(chi2.ppf(quantile, dof))
    return AgreementSummary(stat, threshold, dof, quantile, k, stat <= threshold)


def save_checkpoint(chain: GibbsChain, path) -> None:
    head = _CKPT_HEAD.pack(
        _CKPT_MAGIC, _CKPT_VERSION,
        chain.n, chain.rng_seed, chain.sweeps_done, chain.step_scale,
        chain.window_accepts, chain.window_proposals,
        chain.cum_accepts, chain.cum_proposals,
    )
    body = np.ascontiguousarray(chain.positions).view(np.float64).astype("<f8").tobytes()
    with open(path, "wb") as fh:
        fh.write(head)
        fh.write(body)


def load_checkpoint(path) -> GibbsChain:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _CKPT_HEAD.size:
        raise ConfigError(f"checkpoint {path} is truncated")
    (magic, version, n, seed, sweeps_done, step_scale,
     w_acc, w_prop, c_acc, c_prop) = _CKPT_HEAD.unpack_from(raw)
    if magic != _CKPT_MAGIC:
        raise ConfigError(f"checkpoint {path} has wrong magic {magic!r}")
    if version != _CKPT_VERSION:
        raise ConfigError(f"checkpoint {path} has unsupported version {version}")
    body = raw[_CKPT_HEAD.size:]
    if len(body) != 16 * n:
        raise ConfigError(f"checkpoint {path} has {len(body)} payload bytes, wanted {16 * n}")
    flat = np.frombuffer(body, dtype="<f8").astype(np.float64)
    positions = flat[0::2] + 1j * flat[1::2]
    return GibbsChain(
        n=int(n), positions=positions, rng_seed=int(seed),
        step_scale=float(step_scale), sweeps_done=int(sweeps_done),
        window_accepts=int(w_acc), window_proposals=int(w_prop),
        cum_accepts=int(c_acc), cum_proposals=int(c_prop),
    )
