"""Planar profile curves prescribed by geodesic curvature.

A profile curve lives in the (t, r) half-plane with r > 0 and is driven by
its normal angle theta(s):

    d(theta)/ds = k(s),   dt/ds = sin(theta),   dr/ds = -cos(theta).

Circular arcs (constant k) update in closed form, so chained arcs carry no
integration error.  Smooth curvature profiles are integrated with a classical
fourth-order rule; when the profile exposes an exact cumulative integral of k
the angle is taken from it directly and only (t, r) are quadratures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import NonpositiveRadius, OutOfRange, StepTooLarge

__all__ = [
    "HALF_PI",
    "CurveState",
    "ArcSegment",
    "CurveSamples",
    "PiecewiseProfile",
    "SmoothProfile",
    "extend_by_arc",
    "integrate_profile",
    "theta_at",
    "r_at",
    "t_at",
]

# the representable quarter turn encodes "exactly horizontal": cos snaps to
# zero there, so straight horizontal runs hold their radius bit for bit
# instead of drifting by length * cos(fl(pi/2)) ~ 6e-17 * length
HALF_PI = math.pi / 2.0


def _cos_dir(theta: float) -> float:
    return 0.0 if theta == HALF_PI else math.cos(theta)


def _sin_dir(theta: float) -> float:
    return 1.0 if theta == HALF_PI else math.sin(theta)


@dataclass(frozen=True)
class CurveState:
    """Point of the profile curve: arc length, position and normal angle."""

    s: float
    t: float
    r: float
    theta: float

    def __post_init__(self):
        if not self.r > 0.0:
            raise NonpositiveRadius(
                f"curve state at s={self.s!r} has r={self.r!r} <= 0"
            )


@dataclass(frozen=True)
class ArcSegment:
    """Circular arc piece: signed curvature k over length delta_s."""

    k: float
    delta_s: float

    def __post_init__(self):
        if not self.delta_s > 0.0:
            raise ValueError(f"delta_s must be positive, got {self.delta_s!r}")


def extend_by_arc(state: CurveState, seg: ArcSegment) -> CurveState:
    """Advance a state along one circular arc in closed form.

    Uses the chord form t' = t + c*sin(theta + h), r' = r - c*cos(theta + h)
    with h = k*delta_s/2 and chord c = 2*sin(h)/k, which is algebraically
    identical to integrating sin/cos of a linear angle but stays stable as
    k -> 0.  Raises NonpositiveRadius if the endpoint is on or below the axis.
    """
    k, ds = seg.k, seg.delta_s
    theta1 = state.theta + k * ds
    if k == 0.0:
        t1 = state.t + ds * _sin_dir(state.theta)
        r1 = state.r - ds * _cos_dir(state.theta)
    else:
        half = 0.5 * k * ds
        chord = 2.0 * math.sin(half) / k
        mid = state.theta + half
        t1 = state.t + chord * math.sin(mid)
        r1 = state.r - chord * math.cos(mid)
    if not r1 > 0.0:
        raise NonpositiveRadius(
            f"arc of k={k!r}, delta_s={ds!r} from s={state.s!r} "
            f"drives r to {r1!r}"
        )
    return CurveState(s=state.s + ds, t=t1, r=r1, theta=theta1)


@dataclass(frozen=True)
class CurveSamples:
    """Sampled curve: parallel arrays of s, t, r, theta and the local k."""

    s: np.ndarray
    t: np.ndarray
    r: np.ndarray
    theta: np.ndarray
    k: np.ndarray
    step: float | None = None

    def __len__(self) -> int:
        return len(self.s)

    def state(self, i: int) -> CurveState:
        return CurveState(
            s=float(self.s[i]), t=float(self.t[i]),
            r=float(self.r[i]), theta=float(self.theta[i]),
        )

    @property
    def states(self) -> list[CurveState]:
        return [self.state(i) for i in range(len(self.s))]


@dataclass(frozen=True)
class PiecewiseProfile:
    """Piecewise-constant curvature schedule (an ordered run of arcs)."""

    segments: tuple[ArcSegment, ...]

    kind = "piecewise_constant"

    def __post_init__(self):
        if not self.segments:
            raise ValueError("a profile needs at least one segment")

    @property
    def total_length(self) -> float:
        return math.fsum(seg.delta_s for seg in self.segments)

    def breakpoints(self) -> np.ndarray:
        """Arc-length positions of segment boundaries, starting at 0."""
        out = np.empty(len(self.segments) + 1)
        out[0] = 0.0
        np.cumsum([seg.delta_s for seg in self.segments], out=out[1:])
        return out

    def boundary_states(self, initial: CurveState) -> list[CurveState]:
        """Exact states at every segment boundary, chained arc by arc."""
        states = [initial]
        for seg in self.segments:
            states.append(extend_by_arc(states[-1], seg))
        return states

    def k_at(self, s: np.ndarray, initial_s: float = 0.0) -> np.ndarray:
        """Curvature at given arc lengths; right-continuous at boundaries."""
        bounds = self.breakpoints() + initial_s
        ks = np.array([seg.k for seg in self.segments])
        idx = np.clip(np.searchsorted(bounds, s, side="right") - 1, 0, len(ks) - 1)
        return ks[idx]

    def states_at(self, initial: CurveState, s: np.ndarray) -> CurveSamples:
        """Exact states at arbitrary arc lengths inside the profile range."""
        s = np.asarray(s, dtype=float)
        bounds = self.breakpoints() + initial.s
        if np.any(s < bounds[0] - 1e-12) or np.any(s > bounds[-1] + 1e-12):
            raise OutOfRange("requested arc length outside the profile")
        anchors = self.boundary_states(initial)
        idx = np.clip(np.searchsorted(bounds, s, side="right") - 1,
                      0, len(self.segments) - 1)
        t = np.empty_like(s)
        r = np.empty_like(s)
        theta = np.empty_like(s)
        kv = np.empty_like(s)
        for j, seg in enumerate(self.segments):
            mask = idx == j
            if not np.any(mask):
                continue
            a = anchors[j]
            # offsets clamped to the segment: where boundary positions
            # collapse in float, a coordinate stands for a whole range of
            # true arc lengths and any in-segment state is faithful
            ds = np.clip(s[mask] - a.s, 0.0, seg.delta_s)
            if seg.k == 0.0:
                theta[mask] = a.theta
                t[mask] = a.t + ds * _sin_dir(a.theta)
                r[mask] = a.r - ds * _cos_dir(a.theta)
            else:
                half = 0.5 * seg.k * ds
                chord = 2.0 * np.sin(half) / seg.k
                mid = a.theta + half
                theta[mask] = a.theta + seg.k * ds
                t[mask] = a.t + chord * np.sin(mid)
                r[mask] = a.r - chord * np.cos(mid)
            kv[mask] = seg.k
        if np.any(r <= 0.0):
            bad = int(np.argmax(r <= 0.0))
            raise NonpositiveRadius(f"profile touches the axis near s={s[bad]!r}")
        return CurveSamples(s=s, t=t, r=r, theta=theta, k=kv, step=None)


@dataclass(frozen=True)
class SmoothProfile:
    """Twice continuously differentiable curvature profile k(s) on [0, S].

    ``integral_fn``, when given, must return the exact cumulative integral
    of k from 0; the integrator then reproduces theta without quadrature
    error.  ``knots`` forces integration nodes at the listed arc lengths so
    that narrow features are always resolved; ``eta`` is the width of the
    narrowest feature and bounds the step between knots.
    """

    k_fn: Callable[[np.ndarray], np.ndarray]
    total_length: float
    eta: float
    integral_fn: Callable[[np.ndarray], np.ndarray] | None = None
    knots: tuple[float, ...] | None = None
    pieces: object | None = None
    nodes_per_span: int = 16

    kind = "smoothed"

    def integration_nodes(self, step: float) -> np.ndarray:
        """Node grid: uniform at ``step`` plus refinement between knots."""
        S = self.total_length
        n_uniform = max(int(math.ceil(S / step)), 1)
        nodes = [np.linspace(0.0, S, n_uniform + 1)]
        if self.knots is None:
            h = self.eta / 10.0
            if h < step:
                n = int(math.ceil(S / h))
                nodes.append(np.linspace(0.0, S, n + 1))
        else:
            knots = np.asarray(self.knots, dtype=float)
            nodes.append(knots)
            for lo, hi in zip(knots[:-1], knots[1:]):
                width = hi - lo
                if width <= 0.0:
                    continue
                n = max(self.nodes_per_span,
                        min(int(math.ceil(width / step)), 4096))
                nodes.append(np.linspace(lo, hi, n + 1))
        merged = np.unique(np.concatenate(nodes))
        # drop near-duplicate nodes that would produce zero-length steps
        keep = np.empty(len(merged), dtype=bool)
        keep[0] = True
        keep[1:] = np.diff(merged) > 1e-15 * max(S, 1.0)
        merged = merged[keep]
        merged[0], merged[-1] = 0.0, S
        return merged


CurvatureProfile = PiecewiseProfile | SmoothProfile


def _integrate_smooth(profile: SmoothProfile, initial: CurveState,
                      step: float) -> CurveSamples:
    if profile.pieces is not None:
        return profile.pieces.integrate(initial, step).samples
    s = profile.integration_nodes(step) + initial.s
    rel = s - initial.s
    mid = 0.5 * (rel[:-1] + rel[1:])
    h = np.diff(rel)

    if profile.integral_fn is not None:
        theta = initial.theta + profile.integral_fn(rel)
        theta_mid = initial.theta + profile.integral_fn(mid)
        # Simpson increments == classical RK4 for pure quadratures
        dt = h / 6.0 * (np.sin(theta[:-1]) + 4.0 * np.sin(theta_mid)
                        + np.sin(theta[1:]))
        dr = -h / 6.0 * (np.cos(theta[:-1]) + 4.0 * np.cos(theta_mid)
                         + np.cos(theta[1:]))
        t = initial.t + np.concatenate([[0.0], np.cumsum(dt)])
        r = initial.r + np.concatenate([[0.0], np.cumsum(dr)])
    else:
        k_lo = np.asarray(profile.k_fn(rel[:-1]), dtype=float)
        k_mid = np.asarray(profile.k_fn(mid), dtype=float)
        k_hi = np.asarray(profile.k_fn(rel[1:]), dtype=float)
        theta = np.empty_like(rel)
        t = np.empty_like(rel)
        r = np.empty_like(rel)
        theta[0], t[0], r[0] = initial.theta, initial.t, initial.r
        for i in range(len(h)):
            hi = h[i]
            th = theta[i]
            k1t, k1r = math.sin(th), -math.cos(th)
            th2 = th + 0.5 * hi * k_lo[i]
            k2t, k2r = math.sin(th2), -math.cos(th2)
            th3 = th + 0.5 * hi * k_mid[i]
            k3t, k3r = math.sin(th3), -math.cos(th3)
            th4 = th + hi * k_mid[i]
            k4t, k4r = math.sin(th4), -math.cos(th4)
            theta[i + 1] = th + hi / 6.0 * (k_lo[i] + 4.0 * k_mid[i] + k_hi[i])
            t[i + 1] = t[i] + hi / 6.0 * (k1t + 2.0 * (k2t + k3t) + k4t)
            r[i + 1] = r[i] + hi / 6.0 * (k1r + 2.0 * (k2r + k3r) + k4r)

    if np.any(r <= 0.0):
        bad = int(np.argmax(r <= 0.0))
        raise NonpositiveRadius(f"smoothed curve touches the axis near s={s[bad]!r}")
    k = np.asarray(profile.k_fn(rel), dtype=float)
    return CurveSamples(s=s, t=t, r=r, theta=theta, k=k, step=step)


def integrate_profile(profile: CurvatureProfile, initial: CurveState,
                      step: float) -> CurveSamples:
    """Sample the curve driven by ``profile`` starting from ``initial``.

    Piecewise profiles are evaluated exactly (chained closed-form arcs);
    smoothed profiles use fixed fourth-order steps refined against the
    profile's feature scale.
    """
    if not step > 0.0:
        raise ValueError(f"step must be positive, got {step!r}")
    S = profile.total_length
    if step > S:
        raise StepTooLarge(f"step {step!r} exceeds curve length {S!r}")
    if isinstance(profile, PiecewiseProfile):
        n = int(math.ceil(S / step - 1e-9))
        s = initial.s + np.minimum(np.arange(n + 1) * step, S)
        s[-1] = initial.s + S
        out = profile.states_at(initial, s)
        return CurveSamples(s=out.s, t=out.t, r=out.r, theta=out.theta,
                            k=out.k, step=step)
    return _integrate_smooth(profile, initial, step)


def _interp(samples: CurveSamples, values: np.ndarray, s: float) -> float:
    lo, hi = samples.s[0], samples.s[-1]
    slack = 1e-12 * max(1.0, abs(hi - lo))
    if s < lo - slack or s > hi + slack:
        raise OutOfRange(f"s={s!r} outside sampled range [{lo!r}, {hi!r}]")
    return float(np.interp(min(max(s, lo), hi), samples.s, values))


def theta_at(samples: CurveSamples, s: float) -> float:
    """Linearly interpolated normal angle at arc length s."""
    return _interp(samples, samples.theta, s)


def r_at(samples: CurveSamples, s: float) -> float:
    """Linearly interpolated radius at arc length s."""
    return _interp(samples, samples.r, s)


def t_at(samples: CurveSamples, s: float) -> float:
    """Linearly interpolated axial coordinate at arc length s."""
    return _interp(samples, samples.t, s)
