import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardedge import (BoundaryGeometry, DomainError, DropletFamily, NoBracket,
                      annulus_moment_residual, boundary_geometry,
                      closest_point_gap, custom, droplet_radius, ginibre,
                      laplacian, obstacle_gap, power)

TAUS = st.floats(min_value=0.02, max_value=1.0, allow_nan=False)


def test_laplacian_ginibre_is_one():
    pot = ginibre()
    r = np.linspace(0.05, 3.0, 40)
    assert np.allclose(laplacian(pot, r), 1.0, rtol=0, atol=1e-14)


@given(st.floats(min_value=0.05, max_value=2.0, allow_nan=False))
@settings(max_examples=50, deadline=None)
def test_laplacian_quartic_closed_form(r):
    pot = power(2)
    assert laplacian(pot, r) == pytest.approx(4.0 * r * r, rel=1e-12)


def test_laplacian_rejects_origin():
    with pytest.raises(DomainError):
        laplacian(ginibre(), 0.0)
    with pytest.raises(DomainError):
        laplacian(ginibre(), -0.5)


@given(st.floats(min_value=0.2, max_value=1.8, allow_nan=False))
@settings(max_examples=40, deadline=None)
def test_derivatives_match_finite_differences(r):
    pot = custom([0.5, 0.25, 0.05])
    h = 1e-6
    dq_fd = (pot.q(r + h) - pot.q(r - h)) / (2 * h)
    d2q_fd = (pot.q(r + h) - 2 * pot.q(r) + pot.q(r - h)) / h ** 2
    assert pot.dq(r) == pytest.approx(dq_fd, rel=2e-9, abs=1e-9)
    assert pot.d2q(r) == pytest.approx(d2q_fd, rel=2e-4, abs=1e-4)


def test_power_validation():
    with pytest.raises(DomainError):
        power(0)
    with pytest.raises(DomainError):
        power(1.5)
    with pytest.raises(DomainError):
        custom([])


@given(TAUS)
@settings(max_examples=60, deadline=None)
def test_radius_closed_form_ginibre(tau):
    fam = DropletFamily(ginibre())
    assert fam.radius(tau) == pytest.approx(math.sqrt(tau), rel=1e-13)


@given(TAUS)
@settings(max_examples=60, deadline=None)
def test_radius_closed_form_quartic(tau):
    fam = DropletFamily(power(2))
    assert fam.radius(tau) == pytest.approx((tau / 2.0) ** 0.25, rel=1e-13)


def test_radius_rejects_bad_tau(gin_family):
    for tau in (0.0, -0.1, 1.0001):
        with pytest.raises(DomainError):
            gin_family.radius(tau)


def test_radius_monotone(gin_family, quartic_family):
    taus = np.linspace(0.05, 1.0, 60)
    for fam in (gin_family, quartic_family):
        rhos = np.array([fam.radius(t) for t in taus])
        assert np.all(np.diff(rhos) > 0.0)


def test_mass_identity_exact(gin_family, quartic_family):
    # construction solves rho q'(rho) = 2 tau; verify the residual directly
    for fam in (gin_family, quartic_family):
        for tau in np.linspace(0.1, 1.0, 19):
            rho = fam.radius(tau)
            assert rho * fam.potential.dq(rho) == pytest.approx(2 * tau, rel=1e-13)


def test_mass_law_by_quadrature(gin_family, quartic_family):
    from hardedge.quadrature import integrate
    for fam in (gin_family, quartic_family):
        worst = 0.0
        for tau in np.linspace(0.5, 1.0, 11):
            rho = fam.radius(tau)
            val, _ = integrate(lambda r: 2.0 * r * laplacian(fam.potential, r),
                               0.0, rho)
            worst = max(worst, abs(val - tau))
        assert worst <= 1e-10


def test_annular_potential_rejected():
    # local well in q' creates a ring-shaped support; constructor must refuse
    with pytest.raises((DomainError, NoBracket)):
        DropletFamily(custom([1.0, -0.6, 0.08], r_max=4.0))


def test_slow_growth_rejected():
    with pytest.raises((DomainError, NoBracket)):
        DropletFamily(custom([1e-9], r_max=2.0))


def test_gap_closed_form_ginibre(gin_family):
    want = 0.21 - 2.0 * math.log(1.1)
    assert gin_family.gap(1.0, 1.1) == pytest.approx(want, rel=1e-14)
    assert obstacle_gap(gin_family, 1.0, 1.1) == pytest.approx(want, rel=1e-14)


def test_gap_vanishes_on_its_circle(gin_family, quartic_family):
    for fam in (gin_family, quartic_family):
        for tau in (0.5, 0.8, 1.0):
            assert abs(fam.gap(tau, fam.radius(tau))) <= 1e-14


@given(TAUS, st.floats(min_value=0.05, max_value=1.4, allow_nan=False))
@settings(max_examples=80, deadline=None)
def test_gap_nonnegative(tau, r):
    fam = DropletFamily(ginibre())
    assert fam.gap(tau, r) >= -1e-14


def test_gap_vectorized(gin_family):
    r = np.array([0.5, 1.0, 1.2])
    g = gin_family.gap(1.0, r)
    assert g.shape == r.shape
    assert g[1] == pytest.approx(0.0, abs=1e-14)


def test_gap_rejects_nonpositive_radius(gin_family):
    with pytest.raises(DomainError):
        gin_family.gap(0.9, 0.0)


def test_ridge_curvature(gin_family, quartic_family):
    # gap(tau, rho+eps)/eps^2 approaches twice the density at the circle
    for fam in (gin_family, quartic_family):
        for tau in (0.6, 0.8, 1.0):
            rho = fam.radius(tau)
            eps = 1e-3 * rho
            curv = fam.gap(tau, rho + eps) / eps ** 2
            target = 2.0 * laplacian(fam.potential, rho)
            assert curv == pytest.approx(target, rel=0.02)


def test_edge_offset_ginibre(gin_family):
    assert gin_family.edge_offset(0.9) == pytest.approx(math.sqrt(0.9) - 1.0, abs=1e-14)
    assert closest_point_gap(gin_family, 1.0) == pytest.approx(0.0, abs=1e-14)


def test_edge_offset_first_order_rate(gin_family, quartic_family):
    # offset ~ -(1-tau)/(2 rho_1 density(rho_1)), quadratic remainder
    for fam in (gin_family, quartic_family):
        rho1 = fam.unit_radius
        lead = 1.0 / (2.0 * rho1 * laplacian(fam.potential, rho1))
        for tau in np.linspace(0.9, 0.999, 12):
            resid = abs(fam.edge_offset(tau) + lead * (1.0 - tau))
            assert resid <= 0.5 * (1.0 - tau) ** 2


def test_boundary_geometry_fixtures(gin_family, quartic_family):
    g = boundary_geometry(gin_family, 1.0)
    assert g.radius == pytest.approx(1.0, rel=1e-14)
    assert g.density == pytest.approx(1.0, rel=1e-14)
    assert g.edge_scale == pytest.approx(1.0, rel=1e-14)
    q = boundary_geometry(quartic_family, 1.0)
    assert q.radius == pytest.approx(0.5 ** 0.25, rel=1e-13)
    assert q.density == pytest.approx(2.0 * math.sqrt(2.0), rel=1e-13)
    assert q.edge_scale == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-13)


def test_boundary_geometry_validation():
    with pytest.raises(DomainError):
        BoundaryGeometry(tau=0.9, radius=1.0, density=1.0,
                         edge_scale=0.0, edge_offset=-0.1)
    with pytest.raises(DomainError):
        BoundaryGeometry(tau=0.9, radius=1.0, density=1.0,
                         edge_scale=1.0, edge_offset=0.2)


def test_droplet_radius_alias(gin_family):
    assert droplet_radius(gin_family, 0.81) == pytest.approx(0.9, rel=1e-13)


def test_moment_residuals_small(gin_family, quartic_family):
    for fam in (gin_family, quartic_family):
        assert annulus_moment_residual(fam, 0.8, 1.0, 0) <= 1e-10
        assert annulus_moment_residual(fam, 0.85, 0.95, 1) <= 1e-12
        assert annulus_moment_residual(fam, 0.9, 1.0, 2) <= 1e-12


def test_moment_residual_validation(gin_family):
    with pytest.raises(DomainError):
        annulus_moment_residual(gin_family, 0.9, 0.8, 0)
    with pytest.raises(DomainError):
        annulus_moment_residual(gin_family, 0.8, 0.9, -1)


def test_tau_range_validation():
    with pytest.raises(DomainError):
        DropletFamily(ginibre(), tau_range=(0.9, 0.5))
    with pytest.raises(DomainError):
        DropletFamily(ginibre(), tau_range=(0.0, 1.0))
