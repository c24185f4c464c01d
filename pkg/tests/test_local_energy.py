import math

import numpy as np
import pytest
from scipy.integrate import quad

from _oracles import gauss_overlap, gauss_virial_overlap
from wavegrowth.local_energy import (
    data_overlap,
    data_virial_overlap,
    flux_functionals,
    initial_energy,
    local_energy,
    local_energy_report,
    morawetz_residual,
    prop41_check,
    thm42_envelope,
    virial_constant,
)
from wavegrowth.oracles import GridField, HorizonError, grid_solve
from wavegrowth.profiles import Profile, ProfilePair


# ----------------------------------------------------------- data overlaps
def test_data_overlap_closed_forms(gauss_pair_1d, gauss_pair_2d):
    for pair in (gauss_pair_1d, gauss_pair_2d):
        a0, s0 = pair.u0.amplitude, pair.u0.sigma
        a1, s1 = pair.u1.amplitude, pair.u1.sigma
        assert data_overlap(pair) == pytest.approx(
            gauss_overlap(pair.dimension, a0, s0, a1, s1), rel=1e-12
        )
        assert data_virial_overlap(pair) == pytest.approx(
            gauss_virial_overlap(pair.dimension, a0, s0, a1, s1), rel=1e-12
        )


def test_overlaps_vanish_with_zero_data(gauss1d_vel, gauss2d_vel):
    for pair in (gauss1d_vel, gauss2d_vel):
        assert data_overlap(pair) == 0.0
        assert data_virial_overlap(pair) == 0.0


def test_virial_overlap_needs_a_gradient():
    pair = ProfilePair(1, Profile.indicator_interval(1.0), Profile.gaussian(1, 1.0))
    with pytest.raises(ValueError, match="gradient"):
        data_virial_overlap(pair)


def test_initial_energy_values(example, gauss2d_vel):
    assert initial_energy(example) == pytest.approx(4.0, rel=1e-14)
    assert initial_energy(gauss2d_vel) == pytest.approx(math.pi / 2.0, rel=1e-14)
    bad = ProfilePair(1, Profile.indicator_interval(1.0), Profile.gaussian(1, 1.0))
    with pytest.raises(ValueError, match="H1"):
        initial_energy(bad)


def test_virial_constant_is_dimension_aware(gauss_pair_1d, gauss_pair_2d, gauss2d_vel):
    ov = data_overlap(gauss_pair_1d)
    ovg = data_virial_overlap(gauss_pair_1d)
    assert virial_constant(gauss_pair_1d) == pytest.approx(
        ovg + initial_energy(gauss_pair_1d), rel=1e-12
    )
    ov2 = data_overlap(gauss_pair_2d)
    ovg2 = data_virial_overlap(gauss_pair_2d)
    assert virial_constant(gauss_pair_2d) == pytest.approx(
        ovg2 + 0.5 * ov2 + initial_energy(gauss_pair_2d), rel=1e-12
    )
    assert ov != 0.0 and ovg2 != 0.0
    assert virial_constant(gauss2d_vel) == pytest.approx(math.pi / 2.0, rel=1e-12)


# ------------------------------------------------------------ local energy
def test_local_energy_of_the_whole_box(gauss_pair_1d):
    field = grid_solve(gauss_pair_1d, 0.0, 64.0, 1024)
    # the ball energy carries no 1/2, the conserved energy does
    assert local_energy(field, 63.0) == pytest.approx(2.0 * field.energy(), rel=1e-12)


def test_local_energy_matches_profile_quadrature(gauss2d_vel):
    field = grid_solve(gauss2d_vel, 0.0, 64.0, 1024)
    u1 = gauss2d_vel.u1
    want = 2.0 * math.pi * quad(lambda r: r * float(u1.value(np.array([r, 0.0]))) ** 2, 0.0, 5.0)[0]
    assert local_energy(field, 5.0) == pytest.approx(want, rel=1e-9)


def test_local_energy_validation(gauss_pair_1d):
    field = grid_solve(gauss_pair_1d, 10.0, 64.0, 1024)
    with pytest.raises(ValueError, match="cells"):
        local_energy(field, 0.05)
    n = 1024
    stale = GridField(1, 64.0, n, 130.0, np.zeros(n), np.zeros(n), 8.0)
    with pytest.raises(HorizonError, match="horizon"):
        local_energy(stale, 5.0)


# ------------------------------------------------------------------- flux
def test_flux_at_time_zero_reduces_to_overlaps(gauss_pair_2d):
    field = grid_solve(gauss_pair_2d, 0.0, 64.0, 1024)
    f_val, g_val = flux_functionals(field)
    assert f_val == pytest.approx(data_overlap(gauss_pair_2d), rel=1e-10)
    assert g_val == pytest.approx(data_virial_overlap(gauss_pair_2d), rel=1e-10)


def test_flux_vanishes_for_pure_velocity_data(gauss2d_vel):
    field = grid_solve(gauss2d_vel, 0.0, 64.0, 512)
    f_val, g_val = flux_functionals(field)
    assert f_val == 0.0
    assert g_val == 0.0


def test_flux_rejects_boundary_contamination():
    n = 1024
    field = GridField(1, 64.0, n, 20.0, np.full(n, 1e-6), np.zeros(n), 8.0)
    with pytest.raises(HorizonError, match="boundary"):
        flux_functionals(field)


# --------------------------------------------------------------- identity
def test_morawetz_residual_is_tiny(gauss_pair_1d, gauss_pair_2d):
    f1 = grid_solve(gauss_pair_1d, 8.0, 64.0, 1024)
    r1 = morawetz_residual(f1, gauss_pair_1d)
    assert isinstance(r1, float)
    assert abs(r1) <= 1e-12
    fields = [grid_solve(gauss_pair_2d, t, 64.0, 1024) for t in (10.0, 20.0)]
    r2 = morawetz_residual(fields, gauss_pair_2d)
    assert np.shape(r2) == (2,)
    assert float(np.max(np.abs(r2))) <= 1e-12


def test_decay_inequality_slack_algebra():
    assert prop41_check(0.1, -0.3, 10.0, 2.0, 1.0) == pytest.approx(1.0 + 0.15 - 0.8)
    with pytest.raises(ValueError, match="t > R"):
        prop41_check(0.1, 0.0, 2.0, 2.0, 1.0)


def test_envelope_algebra():
    assert thm42_envelope(math.e, 0.5, 2.0, 1.0, 0.0, 0.7) == pytest.approx(2.0 / (math.e - 0.5))
    want = (2.0 + 0.5 * 0.7 * math.sqrt(2.0) * 3.0 * math.sqrt(math.log(100.0))) / 95.0
    assert thm42_envelope(100.0, 5.0, 2.0, 1.0, 3.0, 0.7) == pytest.approx(want, rel=1e-13)
    with pytest.raises(ValueError, match="t > R"):
        thm42_envelope(0.9, 0.5, 2.0, 1.0, 0.0, 0.7)


# ----------------------------------------------------------------- report
def test_report_2d_small(gauss2d_vel, consts):
    rep = local_energy_report(gauss2d_vel, 5.0, (20.0, 40.0), lam=64.0, n_points=512, consts=consts)
    assert rep.k0 == pytest.approx(math.pi / 2.0, rel=1e-10)
    assert rep.e0 == pytest.approx(math.pi / 2.0, rel=1e-10)
    assert rep.weighted_h1 == pytest.approx(math.pi**1.5 / 2.0, rel=1e-9)
    assert rep.c_assembled > 0.0
    # the data constant alone already dominates at these times
    assert rep.c_fitted == 0.0
    assert rep.min_f_slack > 0.0
    for s in rep.samples:
        assert abs(s.residual) <= 1e-12
        assert s.slack >= -1e-8 * (1.0 + rep.k0)
        assert s.e_r <= s.envelope
        assert s.e_r <= 2.0 * rep.e0
    assert [s.t for s in rep.samples] == [20.0, 40.0]
    assert rep.samples[1].e_r < rep.samples[0].e_r
    assert rep.CSV_HEADER == ("t", "E_R", "F", "G", "residual", "slack", "envelope")
    rows = rep.rows()
    assert len(rows) == 2 and len(rows[0]) == len(rep.CSV_HEADER)


def test_report_1d_has_no_envelope(gauss1d_vel, consts):
    rep = local_energy_report(gauss1d_vel, 5.0, (20.0, 40.0), lam=64.0, n_points=512, consts=consts)
    assert math.isnan(rep.c_assembled)
    assert math.isnan(rep.c_fitted)
    for s in rep.samples:
        assert math.isnan(s.envelope)
        assert abs(s.residual) <= 1e-12
        assert s.slack >= -1e-8 * (1.0 + rep.k0)


def test_report_validation(gauss2d_vel):
    with pytest.raises(ValueError, match="exceed"):
        local_energy_report(gauss2d_vel, 5.0, (4.0,), lam=64.0, n_points=512)
    with pytest.raises(HorizonError):
        local_energy_report(gauss2d_vel, 5.0, (60.0,), lam=64.0, n_points=512)
    bad = ProfilePair(2, Profile.indicator_disk(1.0), Profile.gaussian(2, 1.0))
    with pytest.raises(ValueError, match="weighted H1"):
        local_energy_report(bad, 5.0, (20.0,), lam=64.0, n_points=512)
