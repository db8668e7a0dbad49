import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardedge import (DomainError, DropletFamily, NoBracket, approximant_distance,
                      approximant_norm, approximant_sq, bulk_cutoff,
                      cross_overlap, edge_intensity_approx, edge_params,
                      edge_riemann_sum, ginibre, in_edge_regime, level_circle,
                      level_radius, make_rescale_map, wall_hitting_time)
from hardedge.special import hard_edge_profile


def test_regime_boundaries():
    assert in_edge_regime(1024, 992)
    assert in_edge_regime(1024, 1023)
    assert not in_edge_regime(1024, 1024)
    assert not in_edge_regime(1024, 801)
    assert not in_edge_regime(1, 0)


def test_edge_params_fields(gin_family):
    p = edge_params(gin_family, 240, 256)
    assert p.tau == pytest.approx(240.0 / 256.0)
    assert p.deficit == pytest.approx(-1.0)
    assert 0.5 < p.inside_mass < 1.0
    assert 0.0 < p.cut_lo < p.cut_hi < p.radius
    assert p.stop_time > 0.0


def test_edge_params_validation(gin_family):
    with pytest.raises(DomainError):
        edge_params(gin_family, 100, 256)
    with pytest.raises(DomainError):
        edge_params(gin_family, 240, 256, cutoff_center=0.5, cutoff_width=0.6)


@given(st.floats(min_value=0.5, max_value=0.995, allow_nan=False))
@settings(max_examples=50, deadline=None)
def test_wall_hitting_time_closed_form(tau):
    # above 0.995 the subtraction loses digits; that window is covered by
    # the quadratic-rate test below
    fam = DropletFamily(ginibre())
    u = 1.0 - tau
    want = math.sqrt(u + (1.0 - u) * math.log1p(-u))
    assert wall_hitting_time(fam, tau) == pytest.approx(want, rel=1e-10, abs=1e-12)


def test_wall_hitting_time_vanishes_at_full_mass(gin_family, quartic_family):
    assert wall_hitting_time(gin_family, 1.0) == 0.0
    assert wall_hitting_time(quartic_family, 1.0) == 0.0


def test_wall_hitting_time_quadratic_rate(gin_family, quartic_family):
    # t_inf = edge_scale*(1-tau)/sqrt(2) + O((1-tau)^2), both potentials
    from hardedge import boundary_geometry
    for fam in (gin_family, quartic_family):
        ell = boundary_geometry(fam, 1.0).edge_scale
        for tau in (0.9, 0.95, 0.99, 0.999):
            dev = abs(wall_hitting_time(fam, tau) - ell * (1.0 - tau) / math.sqrt(2.0))
            assert dev <= 1.0 * (1.0 - tau) ** 2


def test_level_radius_identity(gin_family, quartic_family):
    for fam in (gin_family, quartic_family):
        for tau in (0.9, 0.95, 0.99):
            rho = fam.radius(tau)
            assert level_radius(fam, tau, 0.0) == pytest.approx(rho, rel=1e-13)
            hit = level_radius(fam, tau, wall_hitting_time(fam, tau))
            assert hit == pytest.approx(fam.unit_radius, rel=1e-12)


def test_level_radius_monotone_and_branches(gin_family):
    taus = 0.94
    ts = np.linspace(-0.02, 0.05, 12)
    rr = [level_radius(gin_family, taus, float(t)) for t in ts]
    assert np.all(np.diff(rr) > 0.0)
    # inner branch really solves gap = t^2 below the circle
    r_in = level_radius(gin_family, taus, -0.01)
    assert r_in < gin_family.radius(taus)
    assert gin_family.gap(taus, r_in) == pytest.approx(1e-4, rel=1e-8)


def test_level_radius_out_of_range(gin_family):
    with pytest.raises(NoBracket):
        level_radius(gin_family, 0.9, 100.0)
    with pytest.raises(NoBracket):
        level_radius(gin_family, 0.9, -100.0)


def test_level_circle_struct(gin_family):
    c = level_circle(gin_family, 0.95, 0.01)
    assert c.tau == 0.95 and c.t == 0.01
    assert gin_family.gap(0.95, c.radius) == pytest.approx(1e-4, rel=1e-8)


def test_bulk_cutoff_shape(gin_family):
    p = edge_params(gin_family, 240, 256)
    r = np.linspace(0.0, 1.0, 300)
    chi = bulk_cutoff(p, r)
    assert np.all(chi[r <= p.cut_lo] == 0.0)
    assert np.all(chi[r >= p.cut_hi] == 1.0)
    assert np.all(np.diff(chi) >= 0.0)
    # C1 joins at both ends of the ramp
    h = 1e-7
    for edge in (p.cut_lo, p.cut_hi):
        slope_out = (bulk_cutoff(p, edge + h) - bulk_cutoff(p, edge - h)) / (2 * h)
        assert abs(slope_out) <= 1e-4


def test_approximant_zero_beyond_wall(gin_family):
    p = edge_params(gin_family, 240, 256)
    r = np.array([1.0 + 1e-9, 1.3])
    assert np.all(approximant_sq(gin_family, p, r) == 0.0)


def test_approximant_on_circle_value(gin_family):
    # gap term is 1 on the mass circle, leaving the amplitude constants
    n, j = 256, 240
    p = edge_params(gin_family, j, n)
    want = (math.sqrt(n / (2.0 * math.pi)) * math.sqrt(p.density)
            / p.radius / p.inside_mass)
    got = approximant_sq(gin_family, p, p.radius)
    assert got == pytest.approx(want, rel=1e-12)


def test_approximant_tracks_exact_mode(table_store, gin_family):
    # pointwise comparison near the boundary where both are O(sqrt(n))
    from hardedge.orthopoly import weighted_monomial_sq
    n, j = 1024, 992
    tab = table_store(gin_family, n)
    p = edge_params(gin_family, j, n)
    r = np.linspace(0.94, 1.0, 61)
    w = weighted_monomial_sq(tab, j, r)
    ws = approximant_sq(gin_family, p, r)
    assert np.max(np.abs(w - ws)) <= 0.05 * np.max(w)


@pytest.mark.parametrize("n,j", [(256, 240), (1024, 992)])
def test_norm_rate(gin_family, n, j):
    p = edge_params(gin_family, j, n)
    nr = approximant_norm(gin_family, p)
    assert abs(nr - 1.0) * math.sqrt(n) <= 0.5


@pytest.mark.parametrize("n,j", [(256, 240), (1024, 992)])
def test_distance_rate(table_store, gin_family, n, j):
    tab = table_store(gin_family, n)
    p = edge_params(gin_family, j, n)
    d = approximant_distance(tab, gin_family, p)
    assert d * math.sqrt(n) <= 0.5


def test_free_boundary_variant_misses_mass(table_store, gin_family):
    # dropping the inside-mass division leaves norm^2 near inside_mass
    n, j = 256, 240
    tab = table_store(gin_family, n)
    p = edge_params(gin_family, j, n)
    free_norm = approximant_norm(gin_family, p, hard_edge=False)
    assert abs(free_norm ** 2 - p.inside_mass) <= 0.05
    d_hard = approximant_distance(tab, gin_family, p)
    d_free = approximant_distance(tab, gin_family, p, hard_edge=False)
    assert d_free > 5.0 * d_hard


def test_cross_overlap_orthogonality(table_store, gin_family):
    n, j = 256, 240
    tab = table_store(gin_family, n)
    p = edge_params(gin_family, j, n)
    for k in (0, 100, 239, 241, 255):
        assert cross_overlap(tab, gin_family, p, k) == 0.0
    ov = cross_overlap(tab, gin_family, p, j)
    nr = approximant_norm(gin_family, p)
    assert ov <= nr + 1e-12
    assert nr - ov <= 1e-10


def test_distance_consistent_with_overlap(table_store, gin_family):
    # dist^2 = 1 + norm^2 - 2 overlap for unit-norm exact modes
    n, j = 256, 240
    tab = table_store(gin_family, n)
    p = edge_params(gin_family, j, n)
    d = approximant_distance(tab, gin_family, p)
    nr = approximant_norm(gin_family, p)
    ov = cross_overlap(tab, gin_family, p, j)
    assert d ** 2 == pytest.approx(1.0 + nr ** 2 - 2.0 * ov, abs=1e-10)


def test_edge_intensity_deep_bulk_negligible(gin_family):
    # lowest retained degree at n=256 peaks near r=0.81; r=0.45 is far inside
    assert edge_intensity_approx(gin_family, 256, 0.45) <= 1e-30
    assert edge_intensity_approx(gin_family, 1024, np.array([0.5, 0.55])).max() <= 1e-50


def test_edge_intensity_matches_limit_in_belt(gin_family):
    n = 1024
    rm = make_rescale_map(gin_family, n)
    for x in (-2.0, -1.0, -0.5):
        got = edge_intensity_approx(gin_family, n, rm.to_radius(x)) * rm.intensity_scale
        assert got == pytest.approx(hard_edge_profile(2.0 * x), abs=0.02)


def test_riemann_sum_forms_agree(gin_family):
    for n in (64, 256, 1024):
        for x in (-2.5, -1.0, -0.25):
            a = edge_riemann_sum(gin_family, n, x, form="kernel")
            b = edge_riemann_sum(gin_family, n, x, form="explicit")
            assert abs(a - b) <= 1e-8


@given(st.floats(min_value=-3.0, max_value=0.0, allow_nan=False))
@settings(max_examples=40, deadline=None)
def test_riemann_sum_forms_agree_property(x):
    fam = DropletFamily(ginibre())
    a = edge_riemann_sum(fam, 256, x, form="kernel")
    b = edge_riemann_sum(fam, 256, x, form="explicit")
    assert abs(a - b) <= 1e-8


def test_riemann_sum_approaches_wall_profile(gin_family):
    # the sum itself carries an O(n^-1/2) discretization bias
    for x in (-1.5, -1.0, -0.5):
        s = edge_riemann_sum(gin_family, 4096, x)
        assert s == pytest.approx(hard_edge_profile(2.0 * x), abs=5e-3)


def test_riemann_sum_near_intensity_sum(gin_family):
    # same degrees, per-term first-order expansion: gap is O(n^-1/2)
    n = 1024
    rm = make_rescale_map(gin_family, n)
    for x in (-1.5, -1.0, -0.5):
        a = edge_intensity_approx(gin_family, n, rm.to_radius(x)) * rm.intensity_scale
        b = edge_riemann_sum(gin_family, n, x)
        assert abs(a - b) <= 1e-2


def test_riemann_sum_rejects_unknown_form(gin_family):
    with pytest.raises(DomainError):
        edge_riemann_sum(gin_family, 256, -1.0, form="fancy")
