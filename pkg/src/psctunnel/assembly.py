"""Necks, tunnels, measurements, and scaling sweeps.

A neck is one certified profile (plan + smoothed curve + audit samples); a
tunnel is two necks joined through a cylinder of the common end radius.  All
sizes are measured on the audit samples: volumes by quadrature of the
cross-section area, the diameter as an explicit upper bound (axial distance
plus half the largest cross-section circumference).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .bend_planner import (AmbientModel, BendPlan, PlanCertificate,
                           build_plan, check_plan)
from .curve_core import CurveSamples, integrate_profile
from .curvature_models import (BlendResult, EndBlendSpec, bound_profile,
                               condition_margin, end_blend,
                               kappa_exact_profile)
from .errors import (BlendNotPositive, InsufficientGrid, LTooSmall,
                     RadiusMismatch)
from .smoother import (SmoothedCertificate, SmoothingParams, bend_margins,
                       smooth_profile, verify_smoothed)

__all__ = [
    "NeckProfile",
    "Tunnel",
    "SizeReport",
    "NeighborhoodResult",
    "SlopeFit",
    "SweepResult",
    "sphere_area",
    "build_neck",
    "assemble",
    "telescope",
    "measure",
    "neighborhood_check",
    "scaling_sweep",
]


def sphere_area(n: int) -> float:
    """Area of the unit (n-1)-sphere: 2 pi^(n/2) / Gamma(n/2)."""
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


@dataclass(frozen=True)
class NeckProfile:
    """One certified neck: schedule, smoothed curve, samples, and audits."""

    plan: BendPlan
    smoothed: object
    samples: CurveSamples
    r_inf: float
    model: AmbientModel
    plan_certificate: PlanCertificate
    smoothed_certificate: SmoothedCertificate
    blend: BlendResult
    margin_min: float
    margin_at: float
    kappa_exact_min: float
    kappa_exact_at: float
    bound_min: float

    @property
    def length(self) -> float:
        return self.plan.total_length

    @property
    def certified(self) -> bool:
        return (self.plan_certificate.passed
                and self.smoothed_certificate.passed
                and self.blend.positive
                and self.margin_min > 0.0
                and self.kappa_exact_min > 0.0)

    def failed_checks(self) -> list[str]:
        out = [f"plan:{it.name}" for it in self.plan_certificate.items
               if not it.passed]
        out += [f"smoothing:{it.name}" for it in self.smoothed_certificate.items
                if not it.passed]
        if not self.blend.positive:
            out.append("blend:positive")
        if not self.margin_min > 0.0:
            out.append("curvature:condition_margin")
        if not self.kappa_exact_min > 0.0:
            out.append("curvature:kappa_exact")
        return out


def build_neck(model: AmbientModel, *, theta_bar: float = 1.2,
               window_position: float = 0.5, margin: float = 0.0,
               safety_factor: float = 0.0, k_init: float = 1.0,
               smoothing: SmoothingParams | None = None,
               audit_step: float | None = None) -> NeckProfile:
    """Run the full pipeline for one neck and audit everything.

    A failed certification does not raise; it is recorded on the profile so
    callers can report all findings at once.
    """
    plan = build_plan(model, theta_bar, margin, window_position,
                      safety_factor=safety_factor, k_init=k_init)
    plan_cert = check_plan(plan)
    smoothed = smooth_profile(plan, smoothing)
    S = plan.total_length
    step = audit_step if audit_step is not None \
        else S / max(2048.0, math.ceil(S * 1e4))
    smooth_cert = verify_smoothed(plan, smoothed, step)
    run = smoothed.pieces.integrate(plan.start, step)
    samples = run.samples

    # audit region: everything past the initial arc, identified by the
    # schedule segment owning each node (arc-length cutoffs misattribute
    # nodes where breakpoint positions collapse to adjacent floats)
    audit = run.seg_idx >= 1
    margin_min, margin_at = bend_margins(samples, audit)
    kappa = kappa_exact_profile(samples, model.n)[audit]
    s_audit = samples.s[audit]
    i = int(np.argmin(kappa))
    bound_min = float(np.min(bound_profile(samples, model,
                                           safety_factor=safety_factor)))

    r_inf = smooth_cert.r_inf
    a = float(samples.t[np.argmax(
        (run.seg_idx == len(plan.segment_values()) - 1)
        & (samples.s - plan.state_full_bend.s >= plan.delta0 * (1.0 - 1e-12))
    )])
    b = float(samples.t[-1])
    q = model.c_metric * r_inf ** 2
    blend = _worst_blend(a, b, r_inf, q, model.n)

    return NeckProfile(
        plan=plan,
        smoothed=smoothed,
        samples=samples,
        r_inf=r_inf,
        model=model,
        plan_certificate=plan_cert,
        smoothed_certificate=smooth_cert,
        blend=blend,
        margin_min=margin_min,
        margin_at=margin_at,
        kappa_exact_min=float(kappa[i]),
        kappa_exact_at=float(s_audit[i]),
        bound_min=bound_min,
    )


def _worst_blend(a: float, b: float, epsilon: float, q: float,
                 n: int) -> BlendResult:
    """Blend audit at the worst admissible deviation (both signs of q)."""
    worst = None
    for sign in (1.0, -1.0):
        spec = EndBlendSpec(a=a, b=b, epsilon=epsilon, q=sign * q)
        try:
            res = end_blend(spec, n, max_rel_deviation=abs(q))
        except BlendNotPositive as exc:
            res = BlendResult(min_kappa=exc.min_kappa, t_at_min=math.nan,
                              round_kappa=(n - 1) * (n - 2) / epsilon ** 2,
                              q=sign * q, positive=False)
        if worst is None or res.min_kappa < worst.min_kappa:
            worst = res
        if q == 0.0:
            break
    return worst


@dataclass(frozen=True)
class Tunnel:
    """Two necks joined end to end through a cylinder of length l."""

    neck1: NeckProfile
    neck2: NeckProfile
    cylinder_length: float
    n: int
    delta: float
    delta0: float

    @property
    def r_inf(self) -> float:
        return self.neck1.r_inf

    @property
    def dist_collars(self) -> float:
        """Meridian distance between the two collar boundaries."""
        return self.neck1.length + self.cylinder_length + self.neck2.length

    @property
    def max_radius(self) -> float:
        return max(float(np.max(self.neck1.samples.r)),
                   float(np.max(self.neck2.samples.r)),
                   self.r_inf)


def assemble(neck1: NeckProfile, neck2: NeckProfile, l: float = 0.0) -> Tunnel:
    """Join two necks through a cylinder of length l >= 0."""
    if l < 0.0:
        raise ValueError(f"cylinder length must be nonnegative, got {l!r}")
    scale = max(abs(neck1.r_inf), abs(neck2.r_inf))
    if abs(neck1.r_inf - neck2.r_inf) > 1e-12 * scale:
        raise RadiusMismatch(
            f"end radii differ: {neck1.r_inf!r} vs {neck2.r_inf!r}"
        )
    if neck1.model != neck2.model:
        raise ValueError("necks were built from different ambient models")
    return Tunnel(
        neck1=neck1, neck2=neck2, cylinder_length=l,
        n=neck1.model.n, delta=neck1.model.delta, delta0=neck1.model.delta0,
    )


def telescope(neck1: NeckProfile, neck2: NeckProfile, L: float) -> Tunnel:
    """Insert the cylinder that makes the collar distance exactly L.

    The meridian distance is the neck lengths plus the cylinder, so the
    required insertion is the affine solve l = L - (S1 + S2).
    """
    base = neck1.length + neck2.length
    l = L - base
    if l < 0.0:
        raise LTooSmall(
            f"requested collar distance {L!r} is below the bare tunnel "
            f"length {base!r}"
        )
    return assemble(neck1, neck2, l)


@dataclass(frozen=True)
class SizeReport:
    neck_length: float
    dist_collars: float
    diam_upper: float
    vol_Uprime: float
    vol_U: float
    vol_U_low: float
    vol_U_high: float
    tube_radius_needed: float
    cylinder_length: float
    r_inf: float
    min_kappa_exact: float
    min_bound_total: float
    min_condition_margin: float
    blend_min_kappa: float
    certified: bool
    n: int
    delta: float
    delta0: float


def _neck_volume_integral(neck: NeckProfile, n: int) -> float:
    return float(np.trapezoid(neck.samples.r ** (n - 1), neck.samples.s))


def measure(tunnel: Tunnel) -> SizeReport:
    """Size and certification summary of an assembled tunnel."""
    n = tunnel.n
    sigma = sphere_area(n)
    dist = tunnel.dist_collars
    max_r = tunnel.max_radius
    diam_upper = dist + math.pi * max_r

    vol_necks = _neck_volume_integral(tunnel.neck1, n) \
        + _neck_volume_integral(tunnel.neck2, n)
    vol_cyl = tunnel.r_inf ** (n - 1) * tunnel.cylinder_length
    vol_uprime = sigma * (vol_necks + vol_cyl)

    collar = 2.0 * sigma * (tunnel.delta ** n - tunnel.delta0 ** n) / n
    # collar volume in a curved ambient deviates from flat by the metric
    # deviation bound at the outer radius
    c_rel = 0.5 * (n - 1) * tunnel.neck1.model.c_metric * tunnel.delta ** 2
    vol_u = vol_uprime + collar

    margin = min(tunnel.neck1.margin_min, tunnel.neck2.margin_min,
                 1.0 / (4.0 * tunnel.r_inf))
    kappa_cyl = (n - 1) * (n - 2) / tunnel.r_inf ** 2
    kappa = min(tunnel.neck1.kappa_exact_min, tunnel.neck2.kappa_exact_min,
                kappa_cyl)
    bound_min = min(tunnel.neck1.bound_min, tunnel.neck2.bound_min)
    blend_min = min(tunnel.neck1.blend.min_kappa, tunnel.neck2.blend.min_kappa)
    blend_ok = tunnel.neck1.blend.positive and tunnel.neck2.blend.positive

    certified = (margin > 0.0 and kappa > 0.0 and blend_ok
                 and tunnel.neck1.certified and tunnel.neck2.certified)

    return SizeReport(
        neck_length=tunnel.neck1.length,
        dist_collars=dist,
        diam_upper=diam_upper,
        vol_Uprime=vol_uprime,
        vol_U=vol_u,
        vol_U_low=vol_uprime + collar * (1.0 - c_rel),
        vol_U_high=vol_uprime + collar * (1.0 + c_rel),
        tube_radius_needed=math.pi * max_r,
        cylinder_length=tunnel.cylinder_length,
        r_inf=tunnel.r_inf,
        min_kappa_exact=kappa,
        min_bound_total=bound_min,
        min_condition_margin=margin,
        blend_min_kappa=blend_min,
        certified=certified,
        n=n,
        delta=tunnel.delta,
        delta0=tunnel.delta0,
    )


@dataclass(frozen=True)
class NeighborhoodResult:
    passed: bool
    slack: float
    max_radius: float
    tube_radius: float


def neighborhood_check(tunnel: Tunnel) -> NeighborhoodResult:
    """Check that the tube around any boundary-connecting curve covers U.

    Any point shares a cross-section with some point of the curve (cross
    sections are connected and the curve meets every one), and the distance
    within a cross-section of radius r is at most pi * r, so the check is
    pi * max r <= 2 pi delta.
    """
    needed = math.pi * tunnel.max_radius
    allowed = 2.0 * math.pi * tunnel.delta
    return NeighborhoodResult(
        passed=needed <= allowed,
        slack=allowed - needed,
        max_radius=tunnel.max_radius,
        tube_radius=allowed,
    )


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    residual_ss: float


@dataclass(frozen=True)
class SweepPoint:
    delta0: float
    neck_length: float
    diam_upper: float
    vol_Uprime: float
    r_inf: float
    certified: bool


@dataclass(frozen=True)
class SweepResult:
    points: tuple[SweepPoint, ...]
    slopes: dict

    @property
    def all_certified(self) -> bool:
        return all(p.certified for p in self.points)


def _fit_slope(x: np.ndarray, y: np.ndarray) -> SlopeFit:
    coeffs, residuals, *_ = np.polyfit(np.log(x), np.log(y), 1, full=True)
    ss = float(residuals[0]) if len(residuals) else 0.0
    return SlopeFit(slope=float(coeffs[0]), intercept=float(coeffs[1]),
                    residual_ss=ss)


def scaling_sweep(model: AmbientModel, delta0_grid, theta_bar: float = 1.2,
                  **build_kwargs) -> SweepResult:
    """Build one neck per collar scale and fit log-log size exponents."""
    grid = [float(d) for d in delta0_grid]
    if len(grid) < 2:
        raise InsufficientGrid(
            f"scaling fit needs at least 2 grid points, got {len(grid)}"
        )
    points = []
    for d0 in grid:
        sub = replace(model, delta0=d0)
        neck = build_neck(sub, theta_bar=theta_bar, **build_kwargs)
        tunnel = assemble(neck, neck, 0.0)
        report = measure(tunnel)
        points.append(SweepPoint(
            delta0=d0,
            neck_length=neck.length,
            diam_upper=report.diam_upper,
            vol_Uprime=report.vol_Uprime,
            r_inf=neck.r_inf,
            certified=report.certified,
        ))
    x = np.array([p.delta0 for p in points])
    slopes = {
        "neck_length": _fit_slope(x, np.array([p.neck_length for p in points])),
        "diam_upper": _fit_slope(x, np.array([p.diam_upper for p in points])),
        "vol_Uprime": _fit_slope(x, np.array([p.vol_Uprime for p in points])),
    }
    return SweepResult(points=tuple(points), slopes=slopes)
