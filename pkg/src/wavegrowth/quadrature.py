"""Adaptive Gauss-Legendre quadrature with a Filon path for oscillatory tails.

Frequency-side integrands here all have the shape

    F(rho) = G(rho) + C(rho) cos(omega rho) + S(rho) sin(omega rho)

with smooth amplitudes G, C, S and omega growing linearly with the
evaluation time, so resolving every oscillation pointwise costs O(omega)
panels.  The default rule ("half-angle") instead integrates the
oscillatory parts exactly against a degree-15 Legendre interpolant of the
amplitude on each panel, which keeps the panel count tied to the
amplitude's variation only.  The alternative rule ("panel-per-period")
places quarter-period panels and evaluates F pointwise; it is the slow
reference used for cross checks and it fails loudly, by exceeding the
panel budget, when omega is large.

Per-panel error indicators come from the decay of the top Legendre
coefficients.  Refinement bisects the worst panel until the summed
indicator clears a quarter of the requested tolerance, or the panel
budget is exhausted, in which case a :class:`QuadratureError` carrying the
best estimate is raised.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import spherical_jn

__all__ = [
    "QuadConfig",
    "QuadResult",
    "QuadratureError",
    "OscillatoryIntegrand",
    "integrate_oscillatory",
    "integrate_smooth",
]

_GL_ORDER = 16
_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(_GL_ORDER)

# Row k maps samples at the nodes to the k-th Legendre coefficient of the
# degree-15 interpolant: c_k = (2k+1)/2 * sum_i w_i P_k(x_i) f(x_i).
_VANDER = np.polynomial.legendre.legvander(_NODES, _GL_ORDER - 1)
_ANALYSIS = ((2.0 * np.arange(_GL_ORDER) + 1.0) / 2.0)[:, None] * (_WEIGHTS[None, :] * _VANDER.T)

_TWO_PI_LD = 2.0 * np.longdouble("3.14159265358979323846264338327950288")

_K = np.arange(_GL_ORDER)
_COS_SIGN = np.where(_K % 2 == 0, (-1.0) ** (_K // 2), 0.0)
_SIN_SIGN = np.where(_K % 2 == 1, (-1.0) ** ((_K - 1) // 2), 0.0)


class QuadratureError(RuntimeError):
    """Tolerance could not be met within the panel budget.

    ``achieved`` holds the best available estimate and ``error_estimate``
    its indicator, so callers can decide whether to accept a degraded
    answer or fail.
    """

    def __init__(self, message: str, achieved: float | None = None, error_estimate: float | None = None):
        super().__init__(message)
        self.achieved = achieved
        self.error_estimate = error_estimate


@dataclass(frozen=True)
class QuadConfig:
    """Tolerance and budget knobs shared by every quadrature in the package."""

    abs_tol: float = 1e-13
    rel_tol: float = 1e-9
    max_panels: int = 32768
    oscillation_rule: str = "half-angle"

    def __post_init__(self):
        if self.abs_tol <= 0.0 or self.rel_tol <= 0.0:
            raise ValueError("tolerances must be positive")
        if self.max_panels < 1024:
            raise ValueError("max_panels below 1024 defeats the refinement loop")
        if self.oscillation_rule not in ("half-angle", "panel-per-period"):
            raise ValueError(f"unknown oscillation rule {self.oscillation_rule!r}")

    def target(self, magnitude: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(magnitude))


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    panels: int


@dataclass(frozen=True)
class OscillatoryIntegrand:
    """Integrand split F = smooth + cos_amp cos(omega rho) + sin_amp sin(omega rho).

    ``pointwise`` evaluates F directly and must stay finite where the
    split amplitudes blow up (removable singularities at rho = 0).
    ``width_hint`` maps rho to a panel width on which the amplitudes are
    well approximated by low-degree polynomials.
    """

    omega: float
    smooth: Callable[[np.ndarray], np.ndarray]
    cos_amp: Callable[[np.ndarray], np.ndarray]
    sin_amp: Callable[[np.ndarray], np.ndarray]
    pointwise: Callable[[np.ndarray], np.ndarray]
    width_hint: Callable[[np.ndarray], np.ndarray]


def _phase_cos_sin(omega: float, m: float) -> tuple[float, float]:
    """cos and sin of omega*m with the product reduced in extended precision.

    At omega*m ~ 2e9 a float64 product already carries ~1e-7 of phase
    error; the 64-bit mantissa of longdouble brings that down to ~2e-10.
    """
    z = np.longdouble(omega) * np.longdouble(m)
    z = z - np.floor(z / _TWO_PI_LD) * _TWO_PI_LD
    zf = float(z)
    return math.cos(zf), math.sin(zf)


def _osc_moments(theta: float) -> tuple[np.ndarray, np.ndarray]:
    """Moments int_-1^1 P_k(x) cos(theta x) dx and the sine analog.

    From int P_k e^{i theta x} dx = 2 i^k j_k(theta): even k feed the
    cosine moment with sign (-1)^{k/2}, odd k the sine moment.
    """
    jk = spherical_jn(_K, theta)
    return 2.0 * _COS_SIGN * jk, 2.0 * _SIN_SIGN * jk


def _pointwise_panel(f, a: float, b: float) -> tuple[float, float]:
    m, h = 0.5 * (a + b), 0.5 * (b - a)
    vals = np.asarray(f(m + h * _NODES), dtype=float)
    coef = _ANALYSIS @ vals
    value = h * float(_WEIGHTS @ vals)
    err = 2.0 * h * (abs(coef[-2]) + abs(coef[-1]))
    return value, err


def _filon_panel(integrand: OscillatoryIntegrand, a: float, b: float) -> tuple[float, float]:
    m, h = 0.5 * (a + b), 0.5 * (b - a)
    x = m + h * _NODES
    cg = _ANALYSIS @ np.asarray(integrand.smooth(x), dtype=float)
    cc = _ANALYSIS @ np.asarray(integrand.cos_amp(x), dtype=float)
    cs = _ANALYSIS @ np.asarray(integrand.sin_amp(x), dtype=float)
    chat, shat = _osc_moments(integrand.omega * h)
    cos_m, sin_m = _phase_cos_sin(integrand.omega, m)
    cos_part = cos_m * float(cc @ chat) - sin_m * float(cc @ shat)
    sin_part = sin_m * float(cs @ chat) + cos_m * float(cs @ shat)
    value = h * (2.0 * cg[0] + cos_part + sin_part)
    err = 2.0 * h * sum(abs(c[-2]) + abs(c[-1]) for c in (cg, cc, cs))
    return value, err


@dataclass(order=True)
class _Panel:
    neg_err: float
    a: float
    b: float
    value: float
    filon: bool


def _initial_edges(lo: float, hi: float, width_at, cap: float, budget: int) -> list[float]:
    """March from lo to hi taking the hinted width, capped geometrically."""
    edges = [lo]
    x = lo
    while x < hi:
        w = float(width_at(np.asarray(x)))
        w = min(w, cap, 0.45 * max(abs(x), 1e-3) + 1e-6)
        w = max(w, (hi - lo) * 1e-9, 1e-300)
        x = min(x + w, hi)
        edges.append(x)
        if len(edges) > budget:
            raise QuadratureError(
                f"panel budget {budget} exceeded by the initial partition of [{lo:g}, {hi:g}]"
            )
    return edges


def _eval_panel(integrand: OscillatoryIntegrand, a: float, b: float, filon: bool) -> _Panel:
    if filon:
        value, err = _filon_panel(integrand, a, b)
    else:
        value, err = _pointwise_panel(integrand.pointwise, a, b)
    return _Panel(-err, a, b, value, filon)


def _refine(panels: list[_Panel], integrand: OscillatoryIntegrand, cfg: QuadConfig) -> tuple[float, float, list[_Panel]]:
    heapq.heapify(panels)
    total = sum(p.value for p in panels)
    err = sum(-p.neg_err for p in panels)
    frozen: list[_Panel] = []
    frozen_err = 0.0
    while err + frozen_err > 0.25 * cfg.target(total):
        if len(panels) + len(frozen) >= cfg.max_panels:
            raise QuadratureError(
                f"panel budget {cfg.max_panels} exhausted with error {err + frozen_err:.3e}",
                achieved=total,
                error_estimate=err + frozen_err,
            )
        if not panels:
            raise QuadratureError(
                "all panels at width underflow before reaching tolerance",
                achieved=total,
                error_estimate=frozen_err,
            )
        worst = heapq.heappop(panels)
        err -= -worst.neg_err
        if worst.b - worst.a <= 1e-15 * max(1.0, abs(worst.b)):
            # cannot split further; keep the panel and carry its indicator
            frozen.append(worst)
            frozen_err += -worst.neg_err
            continue
        mid = 0.5 * (worst.a + worst.b)
        left = _eval_panel(integrand, worst.a, mid, worst.filon)
        right = _eval_panel(integrand, mid, worst.b, worst.filon)
        total += left.value + right.value - worst.value
        err += (-left.neg_err) + (-right.neg_err)
        heapq.heappush(panels, left)
        heapq.heappush(panels, right)
    panels.extend(frozen)
    return total, err + frozen_err, panels


def integrate_oscillatory(
    integrand: OscillatoryIntegrand,
    lo: float,
    hi: float,
    cfg: QuadConfig | None = None,
    tail_bound: Callable[[float], float] | None = None,
) -> QuadResult:
    """Integrate F over [lo, hi], hi possibly infinite.

    An infinite upper limit requires ``tail_bound(rho)``, an upper bound
    for the absolute integral beyond rho; blocks are doubled until the
    bound drops below a quarter of the tolerance.
    """
    cfg = cfg or QuadConfig()
    if not lo < hi:
        if lo == hi:
            return QuadResult(0.0, 0.0, 0)
        raise ValueError("need lo < hi")
    omega = integrand.omega
    infinite = math.isinf(hi)
    if infinite and tail_bound is None:
        raise ValueError("infinite range needs a tail_bound")

    if infinite:
        block_hi = max(2.0 * max(lo, 1.0), lo + 1.0)
    else:
        block_hi = hi

    panels: list[_Panel] = []
    if cfg.oscillation_rule == "panel-per-period" and omega > 0.0:
        cap = 0.5 * math.pi / omega
        zone1_end = block_hi
    else:
        cap = math.inf
        zone1_end = block_hi if omega == 0.0 else min(block_hi, lo + 20.0 * math.pi / omega)
    quarter = 0.5 * math.pi / omega if omega > 0.0 else math.inf

    edges = _initial_edges(lo, zone1_end, integrand.width_hint, min(cap, quarter), cfg.max_panels)
    for a, b in zip(edges[:-1], edges[1:]):
        panels.append(_eval_panel(integrand, a, b, filon=False))
    if zone1_end < block_hi:
        edges = _initial_edges(zone1_end, block_hi, integrand.width_hint, cap, cfg.max_panels)
        for a, b in zip(edges[:-1], edges[1:]):
            panels.append(_eval_panel(integrand, a, b, filon=True))

    total, err, panels = _refine(panels, integrand, cfg)

    while infinite:
        tail = tail_bound(block_hi)
        if math.isinf(tail):
            raise QuadratureError("tail bound is infinite; integral diverges", achieved=total)
        if tail <= 0.25 * cfg.target(total):
            err += tail
            break
        next_hi = 2.0 * block_hi
        filon = cfg.oscillation_rule == "half-angle" and omega > 0.0
        edges = _initial_edges(block_hi, next_hi, integrand.width_hint, cap, cfg.max_panels)
        for a, b in zip(edges[:-1], edges[1:]):
            panels.append(_eval_panel(integrand, a, b, filon=filon))
        total, err, panels = _refine(panels, integrand, cfg)
        block_hi = next_hi

    return QuadResult(total, err, len(panels))


def integrate_smooth(
    f: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    cfg: QuadConfig | None = None,
    width_hint: Callable[[np.ndarray], np.ndarray] | None = None,
    tail_bound: Callable[[float], float] | None = None,
) -> QuadResult:
    """Adaptive panel integration of a non-oscillatory integrand."""
    if width_hint is None:
        width_hint = lambda rho: np.full(np.shape(rho), math.inf)
    zero = lambda rho: np.zeros(np.shape(rho))
    integrand = OscillatoryIntegrand(
        omega=0.0, smooth=f, cos_amp=zero, sin_amp=zero, pointwise=f, width_hint=width_hint
    )
    return integrate_oscillatory(integrand, lo, hi, cfg, tail_bound=tail_bound)
