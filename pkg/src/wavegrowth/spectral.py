"""Frequency-side representation of free waves and their L2 norms.

With the transform convention h^(xi) = int e^{-i x.xi} h(x) dx, the wave
with initial position u0 and velocity u1 evolves as

    w^(t, xi) = sin(t |xi|)/|xi| u1^(xi) + cos(t |xi|) u0^(xi),
    dt w^(t, xi) = cos(t |xi|) u1^(xi) - |xi| sin(t |xi|) u0^(xi),

and the physical L2 norm is M(t) = (2 pi)^{-n/2} || w^(t, .) ||_{L2}.
Angular integration reduces every norm here to a half-line integral

    int_0^inf rho^{n-1} [ sin^2(t rho)/rho^2 A1 + cos^2(t rho) A0
                          + sin(2 t rho)/rho X ] drho

with sphere-integrated amplitudes A1, A0 and cross term X, which the
oscillatory quadrature engine evaluates at any t without resolving the
O(t) oscillations pointwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .profiles import Profile, ProfilePair, ProfileError, unit_sphere_measure
from .quadrature import (
    OscillatoryIntegrand,
    QuadConfig,
    QuadResult,
    _initial_edges,
    _ANALYSIS,
    _NODES,
    _WEIGHTS,
)

__all__ = [
    "ProofConstants",
    "SpectralState",
    "NormCurve",
    "EnergyResult",
    "evolve",
    "multiplier_solution",
    "dt_multiplier",
    "norm_sq_fourier",
    "l2_norm",
    "frequency_split",
    "energy",
    "norm_curve",
    "moment_remainder",
    "moment_remainder_ratio",
]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ProofConstants:
    """Constants entering the explicit growth envelopes.

    ``sinc_floor`` must satisfy |sin s / s| >= sinc_floor on (0, delta0]
    and ``sinc_sup`` must dominate |sin s / s| everywhere; both facts are
    re-verified numerically on construction so a bad delta0 fails fast.
    ``moment_coeff`` bounds |h^(xi) - h^(0)| by
    moment_coeff * |xi| * int |x| |h| dx.
    """

    delta0: float = 0.99
    sinc_floor: float = 0.5
    sinc_sup: float = 1.0
    moment_coeff: float = math.sqrt(2.0)

    def __post_init__(self):
        if not 0.0 < self.delta0 < 1.0:
            raise ValueError("delta0 must lie in (0, 1)")
        s = np.linspace(self.delta0 / 10_000.0, self.delta0, 10_000)
        ratio = np.sin(s) / s
        if not np.all(ratio >= self.sinc_floor):
            raise ValueError("sinc_floor is not a lower bound on (0, delta0]")
        if not np.all(np.abs(ratio) <= self.sinc_sup) or self.sinc_sup < 1.0:
            raise ValueError("sinc_sup must dominate |sin s / s|")
        if self.moment_coeff < math.sqrt(2.0):
            raise ValueError("moment_coeff below sqrt(2) is not a valid bound")

    def sphere_measure(self, n: int) -> float:
        return unit_sphere_measure(n)

    def low_cut(self, t: float) -> float:
        """Upper edge of the low-frequency block at time t."""
        if t <= 0.0:
            raise ValueError("frequency split needs t > 0")
        return self.delta0 / t


@dataclass(frozen=True)
class SpectralState:
    """w^ and dt w^ sampled on an explicit frequency set at one time."""

    t: float
    xi: np.ndarray
    w_hat: np.ndarray
    wt_hat: np.ndarray


def multiplier_solution(pair: ProfilePair, t: float, xi) -> np.ndarray:
    """w^(t, xi) evaluated with a sinc-safe multiplier at |xi| = 0."""
    xi = np.asarray(xi, dtype=float)
    rho = np.sqrt(np.sum(xi * xi, axis=-1)) if pair.dimension == 2 else np.abs(xi)
    h1 = pair.u1.ft(xi)
    h0 = pair.u0.ft(xi)
    return t * np.sinc(t * rho / math.pi) * h1 + np.cos(t * rho) * h0


def dt_multiplier(pair: ProfilePair, t: float, xi) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    rho = np.sqrt(np.sum(xi * xi, axis=-1)) if pair.dimension == 2 else np.abs(xi)
    h1 = pair.u1.ft(xi)
    h0 = pair.u0.ft(xi)
    return np.cos(t * rho) * h1 - rho * np.sin(t * rho) * h0


def evolve(pair: ProfilePair, t: float, xi) -> SpectralState:
    xi = np.asarray(xi, dtype=float)
    return SpectralState(t, xi, multiplier_solution(pair, t, xi), dt_multiplier(pair, t, xi))


# --------------------------------------------------------------- reduction
@dataclass(frozen=True)
class _ReducedSpectrum:
    """Sphere-integrated amplitudes of a pair as functions of rho = |xi|."""

    dimension: int
    a1: Callable[[np.ndarray], np.ndarray]
    a0: Callable[[np.ndarray], np.ndarray]
    cross: Callable[[np.ndarray], np.ndarray]
    width_hint: Callable[[np.ndarray], np.ndarray]
    u1: Profile
    u0: Profile

    def tail(self, rho: float, extra_weight: float = 0.0) -> float:
        """Upper bound for the truncated part of the norm integrand beyond rho.

        ``extra_weight`` shifts both amplitude weights, which is what the
        energy integrand needs (two extra powers on A0, none on A1 after
        the multiplier is squared away).
        """
        n = self.dimension
        t1 = self.u1.sq_ft_sphere_tail(rho, n - 3 + extra_weight)
        t0 = self.u0.sq_ft_sphere_tail(rho, n - 1 + extra_weight)
        cross = math.sqrt(t1 * t0) if (t1 > 0.0 and t0 > 0.0 and not math.isinf(t1 + t0)) else (
            math.inf if math.isinf(t1) or math.isinf(t0) else 0.0
        )
        return t1 + t0 + cross

    def energy_tail(self, rho: float) -> float:
        n = self.dimension
        return self.u1.sq_ft_sphere_tail(rho, n - 1) + self.u0.sq_ft_sphere_tail(rho, n + 1)


def _polar_amplitudes(p: Profile):
    m, g = p.polar_factor()
    if m == 0:
        return m, g, lambda rho: TWO_PI * np.abs(g(rho)) ** 2
    return m, g, lambda rho: math.pi * np.asarray(rho, float) ** 2 * np.abs(g(rho)) ** 2


def reduce_pair(pair: ProfilePair) -> _ReducedSpectrum:
    """Build the angular reduction; rejects 2D cross terms it cannot reduce."""
    u0, u1 = pair.u0, pair.u1

    def hint(rho):
        return np.minimum(u0.ft_width_hint(rho), u1.ft_width_hint(rho))

    if pair.dimension == 1:

        def a1(rho):
            return 2.0 * np.abs(u1.ft(np.asarray(rho, float))) ** 2

        def a0(rho):
            return 2.0 * np.abs(u0.ft(np.asarray(rho, float))) ** 2

        def cross(rho):
            rho = np.asarray(rho, float)
            return 2.0 * np.real(u1.ft(rho) * np.conj(u0.ft(rho)))

        return _ReducedSpectrum(1, a1, a0, cross, hint, u1, u0)

    m1, g1, a1 = _polar_amplitudes(u1)
    m0, g0, a0 = _polar_amplitudes(u0)
    if not (u0.is_zero or u1.is_zero):
        c0 = u0.center if u0.kind == "gaussian" else (0.0, 0.0)
        c1 = u1.center if u1.kind == "gaussian" else (0.0, 0.0)
        if c0 != c1:
            raise ProfileError(
                "2D pairs with different centers have no reduced cross term; "
                "shift both profiles to a common center"
            )
    if m1 == m0:
        scale = (lambda rho: TWO_PI * np.ones(np.shape(rho))) if m1 == 0 else (
            lambda rho: math.pi * np.asarray(rho, float) ** 2
        )

        def cross(rho):
            rho = np.asarray(rho, float)
            return scale(rho) * np.real(g1(rho) * np.conj(g0(rho)))

    else:
        # odd in the angle against even: the sphere average vanishes
        def cross(rho):
            return np.zeros(np.shape(rho))

    return _ReducedSpectrum(pair.dimension, a1, a0, cross, hint, u1, u0)


def _norm_integrand(red: _ReducedSpectrum, t: float) -> OscillatoryIntegrand:
    n = red.dimension

    def pointwise(rho):
        rho = np.asarray(rho, float)
        s2 = (t * np.sinc(t * rho / math.pi)) ** 2
        sin2t = 2.0 * t * np.sinc(2.0 * t * rho / math.pi)
        return rho ** (n - 1) * (
            s2 * red.a1(rho) + np.cos(t * rho) ** 2 * red.a0(rho) + sin2t * red.cross(rho)
        )

    def smooth(rho):
        rho = np.asarray(rho, float)
        return 0.5 * (red.a1(rho) * rho ** (n - 3) + red.a0(rho) * rho ** (n - 1))

    def cos_amp(rho):
        rho = np.asarray(rho, float)
        return 0.5 * (red.a0(rho) * rho ** (n - 1) - red.a1(rho) * rho ** (n - 3))

    def sin_amp(rho):
        rho = np.asarray(rho, float)
        return red.cross(rho) * rho ** (n - 2)

    return OscillatoryIntegrand(
        omega=2.0 * t,
        smooth=smooth,
        cos_amp=cos_amp,
        sin_amp=sin_amp,
        pointwise=pointwise,
        width_hint=red.width_hint,
    )


def norm_sq_fourier(
    pair: ProfilePair,
    t: float,
    cfg: QuadConfig | None = None,
    lo: float = 0.0,
    hi: float = math.inf,
) -> QuadResult:
    """int over lo <= |xi| <= hi of |w^(t, xi)|^2 dxi (Fourier side, no 2 pi)."""
    from .quadrature import integrate_oscillatory

    if pair.is_zero:
        return QuadResult(0.0, 0.0, 0)
    red = reduce_pair(pair)
    integrand = _norm_integrand(red, float(t))
    return integrate_oscillatory(integrand, lo, hi, cfg, tail_bound=red.tail)


def l2_norm(pair: ProfilePair, t: float, cfg: QuadConfig | None = None) -> float:
    """Physical M(t) = ||u(t, .)||_{L2(R^n)} via Plancherel."""
    res = norm_sq_fourier(pair, t, cfg)
    return math.sqrt(max(res.value, 0.0)) / (TWO_PI ** (pair.dimension / 2.0))


def frequency_split(
    pair: ProfilePair,
    t: float,
    consts: ProofConstants | None = None,
    cfg: QuadConfig | None = None,
) -> tuple[QuadResult, QuadResult]:
    """Norm split at |xi| = delta0 / t into (low, high) blocks.

    Requires t > delta0 so the split radius sits below 1; the envelopes
    are stated in that regime only.
    """
    consts = consts or ProofConstants()
    if t <= consts.delta0:
        raise ValueError(f"frequency split needs t > delta0 = {consts.delta0}")
    cut = consts.low_cut(t)
    low = norm_sq_fourier(pair, t, cfg, lo=0.0, hi=cut)
    high = norm_sq_fourier(pair, t, cfg, lo=cut, hi=math.inf)
    return low, high


# ------------------------------------------------------------------ energy
@dataclass(frozen=True)
class EnergyResult:
    """Energies at the requested times plus one shared error bound.

    All times share one frequency partition, so differences between the
    returned values carry only roundoff, never quadrature error.
    """

    t: np.ndarray
    values: np.ndarray
    error: float
    rho_max: float
    panels: int


def _fixed_partition(red: _ReducedSpectrum, cfg: QuadConfig, e_scale: float) -> tuple[np.ndarray, float]:
    """A t-independent partition of [0, rho_max] for the energy integrand."""
    rho_max = 2.0
    budget = cfg.max_panels
    while True:
        tail = red.energy_tail(rho_max)
        if math.isinf(tail):
            raise ProfileError("energy integrand diverges: initial position is not in H1")
        if tail <= cfg.target(e_scale):
            break
        approx = rho_max / float(red.width_hint(np.asarray(rho_max / 2.0)))
        if rho_max >= 2.0**24 or approx > 0.5 * budget:
            break  # accept the truncation, report it in the error bound
        rho_max *= 2.0
    edges = _initial_edges(0.0, rho_max, red.width_hint, math.inf, budget)
    return np.asarray(edges), rho_max


def energy(pair: ProfilePair, ts, cfg: QuadConfig | None = None) -> EnergyResult:
    """Physical energy E(t) = (1/2)(||dt u||^2 + ||grad u||^2) at each time.

    Evaluated spectrally as (1/2) (2 pi)^{-n} int (|dt w^|^2 + |xi|^2 |w^|^2),
    written out in its oscillatory pieces on purpose: conservation is then a
    property of the implementation being correct, not of the formula having
    been simplified by hand.
    """
    cfg = cfg or QuadConfig()
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    n = pair.dimension
    if pair.is_zero:
        return EnergyResult(ts, np.zeros(ts.shape), 0.0, 0.0, 0)
    red = reduce_pair(pair)
    scale = 0.5 / TWO_PI**n

    # rough magnitude for the truncation target
    e_scale = max((red.u1.l2_sq() + red.u0.grad_l2_sq() if red.u0.in_h1 else red.u1.l2_sq()), 1e-30)
    e_scale *= TWO_PI**n * 2.0  # back to the Fourier side
    edges, rho_max = _fixed_partition(red, cfg, e_scale)

    mids = 0.5 * (edges[1:] + edges[:-1])
    halfs = 0.5 * (edges[1:] - edges[:-1])
    nodes = mids[:, None] + halfs[:, None] * _NODES[None, :]
    rho = nodes.ravel()
    a1 = red.a1(rho)
    a0 = red.a0(rho)
    x = red.cross(rho)
    w = rho ** (n - 1)

    values = np.empty(ts.shape)
    indicator = 0.0
    for j, t in enumerate(ts):
        c = np.cos(t * rho)
        s = np.sin(t * rho)
        dt_part = c * c * a1 + rho * rho * s * s * a0 - rho * 2.0 * s * c * x
        grad_part = s * s * a1 + rho * rho * c * c * a0 + rho * 2.0 * s * c * x
        f = (w * (dt_part + grad_part)).reshape(nodes.shape)
        values[j] = float(np.sum(halfs * (f @ _WEIGHTS)))
        if j == 0:
            coef = _ANALYSIS @ f.T
            indicator = float(np.sum(2.0 * halfs * (np.abs(coef[-2]) + np.abs(coef[-1]))))
    error = indicator + red.energy_tail(rho_max)
    return EnergyResult(ts, values * scale, error * scale, rho_max, len(edges) - 1)


# -------------------------------------------------------------- norm curve
@dataclass(frozen=True)
class NormCurve:
    """M(t) sampled on a time grid, kept on both sides of Plancherel."""

    dimension: int
    t: np.ndarray
    fourier_sq: np.ndarray
    errors: np.ndarray = field(repr=False, default=None)

    @property
    def msq(self) -> np.ndarray:
        return self.fourier_sq / TWO_PI**self.dimension

    @property
    def m(self) -> np.ndarray:
        return np.sqrt(np.maximum(self.msq, 0.0))


def norm_curve(pair: ProfilePair, ts, cfg: QuadConfig | None = None) -> NormCurve:
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    vals = np.empty(ts.shape)
    errs = np.empty(ts.shape)
    for i, t in enumerate(ts):
        res = norm_sq_fourier(pair, float(t), cfg)
        vals[i] = res.value
        errs[i] = res.error
    return NormCurve(pair.dimension, ts, vals, errs)


# ------------------------------------------------------------ moment bound
def moment_remainder(p: Profile, xi) -> np.ndarray:
    """h^(xi) - h^(0): the deviation of the transform from the mean."""
    xi = np.asarray(xi, dtype=float)
    origin = np.zeros(2) if p.dimension == 2 else 0.0
    return p.ft(xi) - p.ft(origin)


def moment_remainder_ratio(p: Profile, xi) -> np.ndarray:
    """|h^(xi) - h^(0)| / (|xi| ||h||_{1,1}); bounded by moment_coeff.

    The denominator uses the full weighted norm int (1+|x|)|h|, so the
    bound has extra room beyond the moment inequality it certifies.
    """
    xi = np.asarray(xi, dtype=float)
    rho = np.sqrt(np.sum(xi * xi, axis=-1)) if p.dimension == 2 else np.abs(xi)
    m1 = p.l11()
    if m1 <= 0.0:
        raise ProfileError("profile has no mass; the ratio is undefined")
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.abs(moment_remainder(p, xi)) / (rho * m1)
    return np.where(rho == 0.0, 0.0, out)
