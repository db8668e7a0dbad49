"""Numerical laboratory for wall-confined planar Coulomb ensembles.

Computes the exact correlation kernel of radially symmetric ensembles
confined to their droplet, closed-form approximants to the edge degrees,
rescaled boundary intensity profiles and their limiting wall profile, and
a Metropolis sampler for cross-validation.
"""

__version__ = "0.1.0"

from .errors import (ConfigError, DomainError, InsufficientSupport, NoBracket,
                     NonMonotoneError, ToleranceNotMet)
from .quadrature import DEFAULT_QUAD, QuadratureSpec, integrate
from .special import (SampledFunction, free_boundary_profile, gaussian_convolve,
                      gaussian_kernel, hard_edge_profile)
from .potential import (BoundaryGeometry, DropletFamily, RadialPotential,
                        annulus_moment_residual, boundary_geometry,
                        closest_point_gap, custom, droplet_radius, ginibre,
                        laplacian, obstacle_gap, power)
from .orthopoly import (KernelTable, belt_halfwidth, build_kernel_table,
                        cached_kernel_table, edge_term_count, kernel,
                        load_kernel_table, log_weighted_monomial_sq, one_point,
                        save_kernel_table, truncated_one_point,
                        weighted_monomial_sq)
from .approximant import (EdgeParams, LevelCircle, approximant_distance,
                          approximant_norm, approximant_sq, bulk_cutoff,
                          cross_overlap, edge_intensity_approx, edge_params,
                          edge_riemann_sum, in_edge_regime, level_circle,
                          level_radius, wall_hitting_time)
from .scaling import (ConvergenceReport, Profile, RescaleMap,
                      approx_vs_truncated, convergence_study, limit_profile,
                      make_rescale_map, rescaled_approx_profile,
                      rescaled_profile, rescaled_truncated_profile)
from .sampler import (AgreementSummary, GibbsChain, RadialHistogram,
                      bin_areas, chi_square_agreement, empirical_profile,
                      init_chain, kernel_bin_masses, load_checkpoint,
                      log_gibbs_density, run_chain, save_checkpoint, sweep)
from .config import (RunConfig, build_grid, config_hash, load_config_file,
                     make_family, make_potential, resolve_config)
