import math

import numpy as np
import pytest
from scipy.integrate import dblquad, quad

from _oracles import TWO_PI, ft_quadrature
from wavegrowth.profiles import (
    DataNorms,
    Profile,
    ProfileError,
    ProfilePair,
    bessel_j,
    fourier_transform,
    moments,
    unit_sphere_measure,
)

CATALOG_1D = [
    Profile.gaussian(1, 1.0),
    Profile.gaussian(1, 0.7, 0.5, center=0.4),
    Profile.indicator_interval(1.0, 2.0),
    Profile.indicator_interval(0.5, 1.5),
    Profile.polynomial_gaussian(1, 1.0),
    Profile.polynomial_gaussian(1, 0.8, 1.3),
]
CATALOG_2D = [
    Profile.gaussian(2, 1.0),
    Profile.gaussian(2, 0.8, 0.5, center=(0.3, -0.2)),
    Profile.indicator_disk(1.0, 2.0),
    Profile.indicator_disk(1.5, 0.7),
    Profile.polynomial_gaussian(2, 1.0),
    Profile.polynomial_gaussian(2, 1.0 / math.sqrt(2.0)),
]


def _ids(catalog):
    return [f"{p.kind}-{i}" for i, p in enumerate(catalog)]


# ------------------------------------------------------------ transforms
@pytest.mark.parametrize("p", CATALOG_1D, ids=_ids(CATALOG_1D))
def test_ft_matches_quadrature_1d(p):
    """Closed-form transforms agree with quadrature of the defining integral.

    Below 1e-8 of the L1 norm the quadrature oracle cannot certify eight
    relative digits in float64, so tiny values are only checked for
    consistency with zero at the oracle's resolution.
    """
    rng = np.random.default_rng(2024)
    cutoff = 1e-8 * p.l1()
    for xi in rng.uniform(-10.0, 10.0, size=20):
        got = complex(p.ft(xi))
        want = ft_quadrature(p, xi)
        if abs(got) >= cutoff:
            assert got == pytest.approx(want, rel=1e-8)
        else:
            assert abs(want) <= 2.0 * cutoff


@pytest.mark.parametrize("p", CATALOG_2D, ids=_ids(CATALOG_2D))
def test_ft_matches_quadrature_2d(p):
    rng = np.random.default_rng(2024)
    cutoff = 1e-8 * p.l1()
    radius = rng.uniform(0.0, 10.0, size=20)
    angle = rng.uniform(0.0, TWO_PI, size=20)
    for rho, th in zip(radius, angle):
        xi = np.array([rho * math.cos(th), rho * math.sin(th)])
        got = complex(p.ft(xi))
        want = ft_quadrature(p, xi)
        if abs(got) >= cutoff:
            assert got == pytest.approx(want, rel=1e-8)
        else:
            assert abs(want) <= 2.0 * cutoff


def test_ft_at_zero_is_the_integral():
    assert complex(Profile.indicator_interval(1.0, 2.0).ft(0.0)) == 4.0 + 0.0j
    assert complex(Profile.gaussian(1, 1.0).ft(0.0)) == pytest.approx(math.sqrt(TWO_PI), rel=1e-14)
    assert complex(Profile.indicator_disk(1.0, 2.0).ft(np.zeros(2))) == pytest.approx(
        2.0 * math.pi, rel=1e-14
    )
    g2 = Profile.gaussian(2, 1.3, 0.6)
    assert complex(g2.ft(np.zeros(2))) == pytest.approx(0.6 * TWO_PI * 1.3**2, rel=1e-14)
    assert complex(Profile.polynomial_gaussian(2, 1.0).ft(np.zeros(2))) == 0.0


@pytest.mark.parametrize("p", CATALOG_1D + CATALOG_2D, ids=_ids(CATALOG_1D + CATALOG_2D))
def test_transform_continuous_at_zero_frequency(p):
    """Near zero frequency the transform approaches the profile mean."""
    if p.dimension == 1:
        mean = complex(p.ft(0.0))
        probes = [np.array(1e-8), np.array(-1e-8)]
    else:
        mean = complex(p.ft(np.zeros(2)))
        probes = [1e-8 * np.array([math.cos(a), math.sin(a)]) for a in (0.3, 2.0, 4.5)]
    for xi in probes:
        assert abs(complex(p.ft(xi)) - mean) <= 1e-6 * (1.0 + abs(mean))


def test_disk_transform_series_matches_bessel_branch():
    disk = Profile.indicator_disk(1.0, 2.0)
    # the series branch below 1e-8 must join the J1 branch continuously
    lo = complex(disk.ft(np.array([9.9e-9, 0.0])))
    hi = complex(disk.ft(np.array([1.1e-8, 0.0])))
    assert lo == pytest.approx(hi, rel=1e-12)
    assert lo == pytest.approx(2.0 * math.pi, rel=1e-8)


def test_fourier_transform_wrapper_matches_method():
    p = Profile.gaussian(2, 0.8, 0.5, center=(0.3, -0.2))
    xi = np.array([0.7, -1.1])
    assert complex(fourier_transform(p, xi)) == complex(p.ft(xi))


def test_amplitude_scaling_covariance():
    """Scaling the amplitude scales every norm with its homogeneity."""
    base = [
        Profile.gaussian(1, 0.9),
        Profile.indicator_interval(1.0, 2.0),
        Profile.polynomial_gaussian(2, 1.1),
    ]
    scaled = [
        Profile.gaussian(1, 0.9, 3.0),
        Profile.indicator_interval(1.0, 6.0),
        Profile.polynomial_gaussian(2, 1.1, 3.0),
    ]
    for p, q in zip(base, scaled):
        xi = 0.37 if p.dimension == 1 else np.array([0.37, -0.2])
        assert complex(q.ft(xi)) == pytest.approx(3.0 * complex(p.ft(xi)), rel=1e-12)
        assert q.l1() == pytest.approx(3.0 * p.l1(), rel=1e-12)
        assert q.l2_sq() == pytest.approx(9.0 * p.l2_sq(), rel=1e-12)
        assert q.l11() == pytest.approx(3.0 * p.l11(), rel=1e-12)
        rho = 0.8
        assert float(q.sq_ft_sphere(rho)) == pytest.approx(
            9.0 * float(p.sq_ft_sphere(rho)), rel=1e-12
        )
        if p.in_h1:
            assert q.grad_l2_sq() == pytest.approx(9.0 * p.grad_l2_sq(), rel=1e-12)


# ----------------------------------------------------------------- norms
@pytest.mark.parametrize("p", CATALOG_1D, ids=_ids(CATALOG_1D))
def test_norms_match_quadrature_1d(p):
    r = p.effective_radius(1e-16)
    pts = sorted({0.0} | {q for q in p.kinks() if -r < q < r})
    l1_num, _ = quad(lambda x: abs(float(p.value(x))), -r, r, points=pts, limit=200)
    l2_num, _ = quad(lambda x: float(p.value(x)) ** 2, -r, r, points=pts, limit=200)
    l11_num, _ = quad(
        lambda x: (1.0 + abs(x)) * abs(float(p.value(x))), -r, r, points=pts, limit=200
    )
    assert p.l1() == pytest.approx(l1_num, rel=1e-10)
    assert p.l2_sq() == pytest.approx(l2_num, rel=1e-10)
    assert p.l11() == pytest.approx(l11_num, rel=1e-10)


@pytest.mark.parametrize("p", CATALOG_2D, ids=_ids(CATALOG_2D))
def test_norms_match_quadrature_2d(p):
    r = p.effective_radius(1e-16)
    if p.is_radial:
        f = lambda s: float(p.value(np.array([s, 0.0])))
        l1_num = TWO_PI * quad(lambda s: s * abs(f(s)), 0.0, r, limit=200)[0]
        l2_num = TWO_PI * quad(lambda s: s * f(s) ** 2, 0.0, r, limit=200)[0]
        l11_num = TWO_PI * quad(lambda s: s * (1.0 + s) * abs(f(s)), 0.0, r, limit=200)[0]
        assert p.l11() == pytest.approx(l11_num, rel=1e-10)
    elif p.kind == "polynomial_gaussian":
        # |h| = |cos th| |v(r)| with v the first-axis slice; the angular
        # factors integrate to 4 and pi
        v = lambda s: float(p.value(np.array([s, 0.0])))
        l1_num = 4.0 * quad(lambda s: s * abs(v(s)), 0.0, r, limit=200)[0]
        l2_num = math.pi * quad(lambda s: s * v(s) ** 2, 0.0, r, limit=200)[0]
        l11_num = 4.0 * quad(lambda s: (1.0 + s) * s * abs(v(s)), 0.0, r, limit=200)[0]
        assert p.l11() == pytest.approx(l11_num, rel=1e-10)
    else:
        centered = Profile.gaussian(2, p.sigma, p.amplitude)
        l1_num = centered.l1()
        l2_num = centered.l2_sq()
        l11_num, _ = dblquad(
            lambda y, x: (1.0 + math.hypot(x, y)) * abs(float(p.value(np.array([x, y])))),
            -r, r, -r, r, epsabs=1e-10, epsrel=1e-10,
        )
        assert p.l11() == pytest.approx(l11_num, rel=1e-8)
    assert p.l1() == pytest.approx(l1_num, rel=1e-10)
    assert p.l2_sq() == pytest.approx(l2_num, rel=1e-10)


def test_gradient_norms_closed_values():
    assert Profile.gaussian(1, 1.0).grad_l2_sq() == pytest.approx(math.sqrt(math.pi) / 2.0)
    assert Profile.gaussian(2, 0.7, 2.0).grad_l2_sq() == pytest.approx(4.0 * math.pi)
    assert math.isinf(Profile.indicator_interval(1.0).grad_l2_sq())
    assert math.isinf(Profile.indicator_disk(1.0).grad_l2_sq())
    assert Profile.zero(2).grad_l2_sq() == 0.0


def test_weighted_norms_closed_values():
    # int |x| e^{-x^2} style moments reduce to gamma integrals
    assert Profile.gaussian(2, 1.0).weighted_l2() == pytest.approx(math.pi**1.5 / 2.0, rel=1e-9)
    assert Profile.gaussian(1, 1.0).weighted_grad_sq() == pytest.approx(1.0, rel=1e-9)
    assert Profile.gaussian(2, 1.0).weighted_grad_sq() == pytest.approx(
        0.75 * math.pi**1.5, rel=1e-8
    )
    assert math.isinf(Profile.indicator_disk(1.0).weighted_grad_sq())
    assert Profile.indicator_interval(1.0, 2.0).weighted_l2() == pytest.approx(4.0, rel=1e-9)


def test_gradient_matches_finite_differences():
    h = 1e-6
    for p in (Profile.gaussian(1, 0.8, 1.2, center=0.3), Profile.polynomial_gaussian(1, 1.1)):
        for x in (-1.3, 0.2, 0.9):
            num = (float(p.value(x + h)) - float(p.value(x - h))) / (2.0 * h)
            assert float(p.grad(np.array(x))[0]) == pytest.approx(num, rel=2e-9, abs=1e-9)
    for p in (Profile.gaussian(2, 0.9, 0.7, center=(0.2, -0.4)), Profile.polynomial_gaussian(2, 1.0)):
        for pt in ([0.3, 0.5], [-0.7, 0.1]):
            x = np.array(pt)
            g = p.grad(x)
            for axis in (0, 1):
                e = np.zeros(2)
                e[axis] = h
                num = (float(p.value(x + e)) - float(p.value(x - e))) / (2.0 * h)
                assert float(g[axis]) == pytest.approx(num, rel=2e-9, abs=1e-9)


def test_gradient_rejects_indicators():
    with pytest.raises(ProfileError, match="gradient"):
        Profile.indicator_interval(1.0).grad(np.array(0.5))
    with pytest.raises(ProfileError, match="gradient"):
        Profile.indicator_disk(1.0).grad(np.array([0.1, 0.2]))


def test_antiderivative_consistency():
    h = 1e-6
    for p in (
        Profile.gaussian(1, 0.9, 1.4, center=0.2),
        Profile.indicator_interval(1.0, 2.0),
        Profile.polynomial_gaussian(1, 1.2),
    ):
        assert float(p.antiderivative(0.0)) == 0.0
        for x in (-1.7, 0.4, 2.3):
            if p.kind == "indicator_interval" and abs(abs(x) - p.radius) < 1e-3:
                continue
            num = (float(p.antiderivative(x + h)) - float(p.antiderivative(x - h))) / (2.0 * h)
            assert num == pytest.approx(float(p.value(x)), rel=1e-8, abs=1e-9)
    with pytest.raises(ProfileError):
        Profile.gaussian(2, 1.0).antiderivative(0.5)


def test_effective_radius_bounds_the_support():
    for p in CATALOG_1D + CATALOG_2D:
        r = p.effective_radius(1e-12) + 1e-9
        x = np.array(r) if p.dimension == 1 else np.array([r / math.sqrt(2.0)] * 2)
        assert abs(float(p.value(x))) <= 1e-12
    assert Profile.indicator_interval(1.5).effective_radius() == 1.5
    assert Profile.indicator_disk(0.5).effective_radius() == 0.5
    assert Profile.zero(1).effective_radius() == 0.0


def test_kinks_and_structure_flags():
    ind = Profile.indicator_interval(1.0, 2.0)
    assert ind.kinks() == (-1.0, 1.0)
    assert not ind.in_h1
    assert ind.is_radial
    assert Profile.gaussian(1, 1.0).kinks() == ()
    assert Profile.gaussian(2, 1.0).is_radial
    assert not Profile.gaussian(2, 1.0, center=(0.1, 0.0)).is_radial
    assert not Profile.polynomial_gaussian(2, 1.0).is_radial
    assert Profile.zero(2).is_zero
    assert Profile.gaussian(1, 1.0, amplitude=0.0).is_zero


def test_sphere_integrated_transform():
    # equispaced angles integrate the (trigonometric) angular dependence exactly
    th = np.linspace(0.0, TWO_PI, 64, endpoint=False)
    for p in CATALOG_2D:
        for rho in (0.3, 1.7, 6.0):
            xi = rho * np.stack([np.cos(th), np.sin(th)], axis=-1)
            ring = TWO_PI * float(np.mean(np.abs(p.ft(xi)) ** 2))
            assert float(p.sq_ft_sphere(rho)) == pytest.approx(ring, rel=1e-10)
    g = Profile.gaussian(1, 1.1, 0.8)
    assert float(g.sq_ft_sphere(0.9)) == pytest.approx(2.0 * abs(complex(g.ft(0.9))) ** 2, rel=1e-12)


@pytest.mark.parametrize(
    "p",
    [Profile.gaussian(1, 1.0), Profile.polynomial_gaussian(1, 0.8, 1.3),
     Profile.gaussian(2, 1.0), Profile.polynomial_gaussian(2, 1.0),
     Profile.indicator_interval(1.0, 2.0), Profile.indicator_disk(1.0, 2.0)],
    ids=["g1", "p1", "g2", "p2", "i1", "d2"],
)
def test_tail_bound_dominates_the_tail(p):
    n = p.dimension
    for weight in (n - 3.0, n - 1.0, n + 1.0):
        bound = p.sq_ft_sphere_tail(2.5, weight)
        if math.isinf(bound):
            continue
        num, _ = quad(
            lambda s: float(p.sq_ft_sphere(s)) * s**weight, 2.5, 2.5 + 200.0, limit=400
        )
        assert num <= bound * (1.0 + 1e-9)


def test_tail_bound_divergent_cases():
    assert math.isinf(Profile.indicator_interval(1.0).sq_ft_sphere_tail(1.0, 1.0))
    assert math.isinf(Profile.indicator_disk(1.0).sq_ft_sphere_tail(1.0, 2.0))
    assert Profile.zero(1).sq_ft_sphere_tail(1.0, 0.0) == 0.0
    with pytest.raises(ProfileError, match="rho > 0"):
        Profile.gaussian(1, 1.0).sq_ft_sphere_tail(0.0, 0.0)


# ------------------------------------------------------------ validation
def test_constructor_validation():
    with pytest.raises(ProfileError):
        Profile.gaussian(3, 1.0)
    with pytest.raises(ProfileError):
        Profile.gaussian(1, -1.0)
    with pytest.raises(ProfileError):
        Profile.indicator_interval(0.0)
    with pytest.raises(ProfileError, match="one-dimensional"):
        Profile("indicator_interval", 2, 1.0, radius=1.0)
    with pytest.raises(ProfileError, match="two-dimensional"):
        Profile("indicator_disk", 1, 1.0, radius=1.0)
    with pytest.raises(ProfileError, match="center 0"):
        Profile("indicator_interval", 1, 1.0, radius=1.0, center=(0.5,))
    with pytest.raises(ProfileError, match="center 0"):
        Profile("polynomial_gaussian", 1, 1.0, sigma=1.0, center=(0.5,))
    with pytest.raises(ProfileError, match="kind"):
        Profile("bump", 1, 1.0)


def test_center_handling():
    assert Profile.gaussian(1, 1.0, center=0.5).center == (0.5,)
    assert Profile.gaussian(2, 1.0, center=(0.5, -1.0)).center == (0.5, -1.0)
    with pytest.raises(ProfileError, match="scalar center"):
        Profile.gaussian(2, 1.0, center=0.5)
    with pytest.raises(ProfileError, match="length"):
        Profile.gaussian(2, 1.0, center=(0.5,))


def test_dimension_mismatch_checks():
    with pytest.raises(ProfileError):
        ProfilePair(1, Profile.zero(1), Profile.gaussian(2, 1.0))
    with pytest.raises(ProfileError):
        Profile.gaussian(2, 1.0).ft(np.array([1.0, 2.0, 3.0]))
    with pytest.raises(ProfileError):
        Profile.gaussian(2, 1.0).value(np.zeros(3))
    with pytest.raises(ProfileError, match="not radial"):
        Profile.gaussian(2, 1.0, center=(0.4, 0.0)).ft_radial(1.0)
    with pytest.raises(ProfileError):
        Profile.gaussian(1, 1.0).polar_factor()


def test_pair_effective_radius_is_the_max():
    pair = ProfilePair(1, Profile.indicator_interval(2.0), Profile.indicator_interval(0.5))
    assert pair.effective_radius() == 2.0
    assert not pair.is_zero
    assert ProfilePair(1, Profile.zero(1), Profile.zero(1)).is_zero


# ---------------------------------------------------------- data moments
def test_example_moments_closed(example):
    norms = moments(example)
    assert norms.l1_u1 == pytest.approx(4.0, rel=1e-14)
    assert norms.l2_u1 == pytest.approx(math.sqrt(8.0), rel=1e-14)
    assert norms.l11_u1 == pytest.approx(6.0, rel=1e-14)
    assert norms.mean_u1 == pytest.approx(4.0, rel=1e-14)
    assert norms.l1_u0 == 0.0
    assert norms.l2_u0 == 0.0
    assert norms.i0n == pytest.approx(4.0 + math.sqrt(8.0), rel=1e-14)
    assert norms.weighted_h1 == pytest.approx(4.0, rel=1e-9)
    assert norms.has_moment_norm


def test_mean_velocity_vanishes_for_odd_data(p0_2d):
    norms = moments(p0_2d)
    assert norms.mean_u1 == 0.0
    assert norms.l11_u1 is not None and norms.l11_u1 > 0.0


def test_moments_flag_infinite_entries():
    pair = ProfilePair(2, Profile.indicator_disk(1.0), Profile.gaussian(2, 1.0))
    norms = moments(pair)
    assert norms.weighted_h1 is None
    assert norms.l11_u1 is not None
    assert isinstance(norms, DataNorms)


# -------------------------------------------------------------- utilities
def test_unit_sphere_measure():
    assert unit_sphere_measure(1) == 2.0
    assert unit_sphere_measure(2) == pytest.approx(TWO_PI)
    with pytest.raises(ProfileError):
        unit_sphere_measure(3)


def test_bessel_j_basics():
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(1, 0.0) == 0.0
    # first positive zero of J0
    assert bessel_j(0, 2.404825557695773) == pytest.approx(0.0, abs=1e-12)
    arr = bessel_j(1, np.array([0.5, 1.0, 2.0]))
    assert arr.shape == (3,)
    with pytest.raises(ProfileError):
        bessel_j(2, 1.0)
    with pytest.raises(ProfileError):
        bessel_j(0, -0.5)
