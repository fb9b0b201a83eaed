"""Scalar-curvature certificates for hypersurfaces of revolution.

Two routes are exposed side by side and never merged:

* a certified lower bound assembled from ambient curvature constants, whose
  bend term carries the single (n-1)/r coefficient;
* the exact flat-model value, whose bend term carries 2(n-1)/r.

The sufficient bend condition sin(theta)/(4r) > k certifies positivity on
either route, so the coefficient discrepancy is surfaced in reports rather
than reconciled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curve_core import CurveSamples, CurveState
from .errors import BlendNotPositive
from .smoothstep import smoothstep, smoothstep_d1, smoothstep_d2

__all__ = [
    "KappaBreakdown",
    "EndBlendSpec",
    "BlendResult",
    "kappa_lower_bound",
    "bound_profile",
    "condition_margin",
    "kappa_exact_flat",
    "kappa_exact_profile",
    "kappa_warped",
    "end_blend",
]


@dataclass(frozen=True)
class KappaBreakdown:
    """Certified lower bound for the scalar curvature, term by term."""

    total: float
    term_ambient: float
    term_sphere: float
    term_bend: float
    condition_margin: float


def _bound_terms(r, theta, k, model, safety_factor=0.0):
    """Vectorized lower-bound terms; negative contributions are inflated
    by (1 + safety_factor)."""
    n = model.n
    sin_t = np.sin(theta)
    grow = 1.0 + safety_factor
    term_ambient = model.kappa_D_min - grow * 2.0 * model.ric_sup * sin_t ** 2
    term_sphere = (n - 1) * (n - 2) * (1.0 / r ** 2 - grow * model.c1) * sin_t ** 2
    term_bend = -grow * (n - 1) * (1.0 / r + model.c2 * r) * k * sin_t
    return term_ambient, term_sphere, term_bend


def kappa_lower_bound(state: CurveState, k: float, model,
                      safety_factor: float = 0.0) -> KappaBreakdown:
    """Lower bound for the scalar curvature at one point of the neck.

    Valid whenever the model constants dominate the ambient geometry:
    kappa_D_min below the ambient scalar curvature, ric_sup above the radial
    Ricci component, c1/c2 above the curvature corrections to the round
    sphere terms.
    """
    amb, sph, bend = _bound_terms(
        np.float64(state.r), np.float64(state.theta), np.float64(k),
        model, safety_factor,
    )
    margin = math.sin(state.theta) / (4.0 * state.r) - k
    return KappaBreakdown(
        total=float(amb + sph + bend),
        term_ambient=float(amb),
        term_sphere=float(sph),
        term_bend=float(bend),
        condition_margin=margin,
    )


def bound_profile(samples: CurveSamples, model,
                  safety_factor: float = 0.0) -> np.ndarray:
    """Lower-bound totals along sampled states."""
    amb, sph, bend = _bound_terms(samples.r, samples.theta, samples.k,
                                  model, safety_factor)
    return amb + sph + bend


def condition_margin(samples: CurveSamples, s_from: float) -> tuple[float, float]:
    """Minimum of sin(theta)/(4r) - k over samples with s >= s_from.

    Returns (min margin, arc length at the minimum).  Strict positivity of
    the margin is the certification condition for the bent region.  The
    cutoff is exact: samples even one ulp below s_from belong to the region
    before it and are excluded.
    """
    mask = samples.s >= s_from
    if not np.any(mask):
        raise ValueError(f"no samples at or beyond s_from={s_from!r}")
    margins = np.sin(samples.theta[mask]) / (4.0 * samples.r[mask]) - samples.k[mask]
    i = int(np.argmin(margins))
    return float(margins[i]), float(samples.s[mask][i])


def kappa_exact_flat(state: CurveState, k: float, n: int) -> float:
    """Exact scalar curvature of the revolved profile in the flat model.

    With the sign convention used throughout (theta increasing bends the
    curve toward the axis), a round sphere of radius R is the profile
    r(s) = R cos(s/R) with k = -1/R and comes out as n(n-1)/R^2.
    """
    sr = math.sin(state.theta) / state.r
    return (n - 1) * sr * ((n - 2) * sr - 2.0 * k)


def kappa_exact_profile(samples: CurveSamples, n: int) -> np.ndarray:
    """Vectorized exact flat-model scalar curvature along samples."""
    sr = np.sin(samples.theta) / samples.r
    return (n - 1) * sr * ((n - 2) * sr - 2.0 * samples.k)


def kappa_warped(rho, t, n: int, d1=None, d2=None):
    """Scalar curvature of the warped product dt^2 + rho(t)^2 * (unit sphere).

    kappa(t) = (n-1) * [ (n-2) * (1 - rho'^2) / rho^2 - 2 rho'' / rho ].

    ``rho`` may be a callable with explicit derivative callables ``d1``m
    ``d2``, or an object with a ``derivative`` method (scipy splines).
    """
    if d1 is None or d2 is None:
        if not hasattr(rho, "derivative"):
            raise TypeError("rho needs derivative callables or a .derivative method")
        d1 = rho.derivative(1)
        d2 = rho.derivative(2)
    t = np.asarray(t, dtype=float)
    val = np.asarray(rho(t), dtype=float)
    dv = np.asarray(d1(t), dtype=float)
    ddv = np.asarray(d2(t), dtype=float)
    out = (n - 1) * ((n - 2) * (1.0 - dv ** 2) / val ** 2 - 2.0 * ddv / val)
    return out if out.ndim else float(out)


class _QuinticCutoff:
    """Cutoff rising 0 -> 1 on [0, 3/4] as a quintic smoothstep, then flat."""

    plateau_start = 0.75

    def __call__(self, u):
        return smoothstep(np.asarray(u, dtype=float) / self.plateau_start)

    def d1(self, u):
        return smoothstep_d1(np.asarray(u, dtype=float) / self.plateau_start) \
            / self.plateau_start

    def d2(self, u):
        return smoothstep_d2(np.asarray(u, dtype=float) / self.plateau_start) \
            / self.plateau_start ** 2


QUINTIC_CUTOFF = _QuinticCutoff()


@dataclass(frozen=True)
class EndBlendSpec:
    """Rotationally symmetric blend from the neck end to the round tube.

    The radius over [a, b] is rho(t) = epsilon * (1 + q * (1 - phi(t))) with
    phi(t) = psi((t - a)/(b - a)); q is the relative radius deviation of the
    neck cross-section from round.
    """

    a: float
    b: float
    epsilon: float
    q: float
    psi_shape: object = QUINTIC_CUTOFF

    def __post_init__(self):
        if not self.b > self.a:
            raise ValueError("blend interval must have b > a")
        if not self.epsilon > 0.0:
            raise ValueError("epsilon must be positive")
        if not self.epsilon <= (self.b - self.a) * (1.0 + 1e-12):
            raise ValueError(
                f"epsilon={self.epsilon!r} exceeds the blend width "
                f"{self.b - self.a!r}"
            )

    def rho(self, t):
        u = (np.asarray(t, dtype=float) - self.a) / (self.b - self.a)
        return self.epsilon * (1.0 + self.q * (1.0 - self.psi_shape(u)))

    def rho_d1(self, t):
        u = (np.asarray(t, dtype=float) - self.a) / (self.b - self.a)
        return -self.epsilon * self.q * self.psi_shape.d1(u) / (self.b - self.a)

    def rho_d2(self, t):
        u = (np.asarray(t, dtype=float) - self.a) / (self.b - self.a)
        return -self.epsilon * self.q * self.psi_shape.d2(u) / (self.b - self.a) ** 2


@dataclass(frozen=True)
class BlendResult:
    min_kappa: float
    t_at_min: float
    round_kappa: float
    q: float
    positive: bool


def _blend_scan(spec: EndBlendSpec, n: int, grid: int = 4097) -> BlendResult:
    t = np.linspace(spec.a, spec.b, grid)
    kap = kappa_warped(spec.rho, t, n, d1=spec.rho_d1, d2=spec.rho_d2)
    i = int(np.argmin(kap))
    # densify around the coarse minimum so narrow dips are not missed
    lo = t[max(i - 2, 0)]
    hi = t[min(i + 2, grid - 1)]
    tf = np.linspace(lo, hi, 513)
    kf = kappa_warped(spec.rho, tf, n, d1=spec.rho_d1, d2=spec.rho_d2)
    j = int(np.argmin(kf))
    min_k, at = (float(kap[i]), float(t[i]))
    if kf[j] < min_k:
        min_k, at = float(kf[j]), float(tf[j])
    round_kappa = (n - 1) * (n - 2) / spec.epsilon ** 2
    return BlendResult(min_kappa=min_k, t_at_min=at, round_kappa=round_kappa,
                       q=spec.q, positive=min_k > 0.0)


def end_blend(spec: EndBlendSpec, n: int,
              max_rel_deviation: float | None = None) -> BlendResult:
    """Certify positivity of the blended tube end.

    ``max_rel_deviation`` is the admissible |q| (typically c_metric times
    epsilon squared); a q beyond it is rejected outright.  Raises
    BlendNotPositive when the minimum curvature over the blend is <= 0,
    which signals that the collar scale is too large for the given metric
    deviation constant.
    """
    if n < 3:
        raise ValueError(f"dimension must be >= 3, got {n!r}")
    if max_rel_deviation is not None and abs(spec.q) > max_rel_deviation * (1.0 + 1e-12):
        raise ValueError(
            f"|q|={abs(spec.q)!r} exceeds the admissible deviation "
            f"{max_rel_deviation!r}"
        )
    result = _blend_scan(spec, n)
    if not result.positive:
        raise BlendNotPositive(
            f"blend curvature reaches {result.min_kappa!r} at t={result.t_at_min!r}; "
            f"shrink the collar scale or the deviation constant",
            min_kappa=result.min_kappa,
        )
    return result
