"""Construction of the full bend: initial arc, induction, final arc, tail.

The profile starts tangent to the vertical axis at radius delta0, runs a
unit-curvature arc just long enough that the ambient curvature bound stays
positive, then bends inductively (each arc turning by sin(theta)/16 while
halving the remaining radius budget) until the cutoff angle theta_bar, and
finishes with a single arc to the horizontal followed by a straight tail of
length 2*delta0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .curve_core import (HALF_PI, ArcSegment, CurveState, PiecewiseProfile,
                         extend_by_arc)
from .curvature_models import _bound_terms
from .errors import AxisCrossed, NoPositiveStart, ThetaBarTooSmall

__all__ = [
    "AmbientModel",
    "BendPlan",
    "CheckItem",
    "PlanCertificate",
    "choose_s0",
    "inductive_bend",
    "final_arc",
    "build_plan",
    "check_plan",
]

# sin(theta_bar) must exceed this for the final-arc window to be nonempty
_WINDOW_SIN = 0.8


@dataclass(frozen=True)
class AmbientModel:
    """Ambient geometry reduced to the constants the construction consumes.

    All curvature-type constants (kappa_D_min, ric_sup, c1, c2, c_metric)
    scale as 1/length^2; delta and delta0 are lengths.  The flat model is
    ric_sup = c1 = c2 = c_metric = 0 with any positive kappa_D_min.
    """

    n: int
    delta: float
    delta0: float
    kappa_D_min: float = 1.0
    ric_sup: float = 0.0
    c1: float = 0.0
    c2: float = 0.0
    c_metric: float = 0.0

    def __post_init__(self):
        if not (isinstance(self.n, int) and self.n >= 3):
            raise ValueError(f"dimension n must be an integer >= 3, got {self.n!r}")
        if not self.delta0 > 0.0:
            raise ValueError(f"delta0 must be positive, got {self.delta0!r}")
        if not self.delta > self.delta0:
            raise ValueError(
                f"delta must exceed delta0, got delta={self.delta!r}, "
                f"delta0={self.delta0!r}"
            )
        if not self.kappa_D_min > 0.0:
            raise ValueError(f"kappa_D_min must be positive, got {self.kappa_D_min!r}")
        for name in ("ric_sup", "c1", "c2", "c_metric"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be nonnegative")


def _initial_arc_states(model: AmbientModel, s: np.ndarray, k_init: float):
    """Exact states along the starting arc from (t, r, theta) = (0, delta0, 0)."""
    theta = k_init * s
    r = model.delta0 - np.sin(theta) / k_init
    t = (1.0 - np.cos(theta)) / k_init
    return t, r, theta


def choose_s0(model: AmbientModel, margin: float = 0.0, *,
              safety_factor: float = 0.0, k_init: float = 1.0,
              grid_points: int = 4097) -> tuple[float, float]:
    """Length of the initial arc and the angle it reaches.

    Returns the largest s0 <= delta0/2 such that the ambient curvature lower
    bound stays >= margin along the whole arc, located by a dense scan plus
    bisection of the first crossing.  The cap delta0/2 keeps the arc short
    against the collar scale.
    """
    if margin < 0.0:
        raise ValueError(f"margin must be nonnegative, got {margin!r}")
    if not k_init > 0.0:
        raise ValueError(f"k_init must be positive, got {k_init!r}")
    if k_init * model.delta0 >= math.pi:
        raise ValueError("initial arc would wrap past the vertical")
    cap = model.delta0 / 2.0

    def bound(s):
        t, r, theta = _initial_arc_states(model, np.asarray(s, dtype=float), k_init)
        amb, sph, bend = _bound_terms(r, theta, k_init, model, safety_factor)
        return amb + sph + bend

    grid = np.linspace(0.0, cap, grid_points)
    values = bound(grid)
    failing = np.nonzero(values < margin)[0]
    if failing.size == 0:
        s0 = cap
    else:
        first = int(failing[0])
        if first == 0:
            raise NoPositiveStart(
                f"curvature bound {values[0]!r} is below margin {margin!r} "
                f"already at s=0; the model constants are inconsistent"
            )
        lo, hi = grid[first - 1], grid[first]
        for _ in range(100):
            if hi - lo <= 1e-10 * max(hi, 1e-30):
                break
            mid = 0.5 * (lo + hi)
            if bound(mid) >= margin:
                lo = mid
            else:
                hi = mid
        s0 = lo
        if s0 <= 0.0:
            raise NoPositiveStart(
                f"no positive initial arc keeps the bound above {margin!r}"
            )
    return float(s0), float(k_init * s0)


def inductive_bend(start: CurveState, theta_bar: float
                   ) -> tuple[list[ArcSegment], list[CurveState]]:
    """Run the bend induction from ``start`` until the angle hits theta_bar.

    Each step uses curvature sin(theta)/(8r) over length r/2, turning by
    sin(theta)/16; the last step is truncated so the final angle is exactly
    theta_bar.  Returns the arc segments and the states at every breakpoint
    (the first entry is ``start``).
    """
    if not 0.0 < start.theta < theta_bar:
        raise ValueError(
            f"start angle {start.theta!r} must lie in (0, theta_bar={theta_bar!r})"
        )
    if not theta_bar < math.pi / 2.0:
        raise ValueError(f"theta_bar must be below pi/2, got {theta_bar!r}")
    max_steps = int(math.ceil((theta_bar - start.theta) * 16.0
                              / math.sin(start.theta))) + 8
    segments: list[ArcSegment] = []
    states = [start]
    for _ in range(max_steps):
        cur = states[-1]
        k = math.sin(cur.theta) / (8.0 * cur.r)
        ds = cur.r / 2.0
        done = cur.theta + k * ds >= theta_bar
        if done:
            ds = (theta_bar - cur.theta) / k
        seg = ArcSegment(k=k, delta_s=ds)
        try:
            nxt = extend_by_arc(cur, seg)
        except Exception as exc:  # by construction r stays above r/2 > 0
            raise AxisCrossed(f"bend recursion failed at s={cur.s!r}: {exc}") from exc
        segments.append(seg)
        states.append(nxt)
        if done:
            break
    else:
        raise AxisCrossed("bend recursion failed to reach theta_bar")
    return segments, states


def final_arc(state_at_theta_bar: CurveState, theta_bar: float,
              window_position: float = 0.5) -> tuple[float, float, float]:
    """Single arc completing the bend from theta_bar to the horizontal.

    The product k * r must land strictly inside (1 - sin(theta_bar),
    sin(theta_bar)/4): above the lower end so the curve stays off the axis,
    below the upper end so the bend condition keeps certifying positivity.
    ``window_position`` picks the point inside that window.
    """
    sin_tb = math.sin(theta_bar)
    if not sin_tb > _WINDOW_SIN:
        raise ThetaBarTooSmall(
            f"sin(theta_bar)={sin_tb!r} <= 4/5: the final-arc curvature window "
            f"(1 - sin(theta_bar), sin(theta_bar)/4) is empty"
        )
    if not 0.0 < window_position < 1.0:
        raise ValueError(
            f"window_position must be in (0, 1), got {window_position!r}"
        )
    r_m = state_at_theta_bar.r
    lo = 1.0 - sin_tb
    hi = sin_tb / 4.0
    k_final = ((1.0 - window_position) * lo + window_position * hi) / r_m
    delta_s_final = (math.pi / 2.0 - theta_bar) / k_final
    r_inf = r_m - (1.0 - sin_tb) / k_final
    return k_final, delta_s_final, r_inf


@dataclass(frozen=True)
class BendPlan:
    """Complete curvature schedule of one neck profile."""

    s0: float
    theta0: float
    k_init: float
    segments: tuple[ArcSegment, ...]
    breakpoints: tuple[CurveState, ...]
    theta_bar: float
    k_final: float
    delta_s_final: float
    r_inf: float
    tail_length: float
    total_length: float
    delta0: float
    truncated_last: bool
    end_state: CurveState
    end_theta_raw: float

    @property
    def m(self) -> int:
        return len(self.segments)

    @property
    def start(self) -> CurveState:
        return CurveState(s=0.0, t=0.0, r=self.delta0, theta=0.0)

    @property
    def state_theta_bar(self) -> CurveState:
        return self.breakpoints[-1]

    @property
    def s_full_bend(self) -> float:
        """Arc length where the profile becomes horizontal."""
        return self.breakpoints[-1].s + self.delta_s_final

    @property
    def state_full_bend(self) -> CurveState:
        """State at the end of the final arc, with the angle snapped to the
        exact quarter turn the construction targets (raw residual in
        ``end_theta_raw``)."""
        return self.end_state

    def to_profile(self) -> PiecewiseProfile:
        segs = (ArcSegment(k=self.k_init, delta_s=self.s0),) + self.segments + (
            ArcSegment(k=self.k_final, delta_s=self.delta_s_final),
            ArcSegment(k=0.0, delta_s=self.tail_length),
        )
        return PiecewiseProfile(segments=segs)

    def segment_lengths(self) -> list[float]:
        """Lengths of every run of constant curvature, in order."""
        return [self.s0] + [seg.delta_s for seg in self.segments] \
            + [self.delta_s_final, self.tail_length]

    def segment_values(self) -> list[float]:
        """Curvature of every run, aligned with segment_lengths()."""
        return [self.k_init] + [seg.k for seg in self.segments] \
            + [self.k_final, 0.0]


def build_plan(model: AmbientModel, theta_bar: float = 1.2,
               margin: float = 0.0, window_position: float = 0.5, *,
               safety_factor: float = 0.0, k_init: float = 1.0) -> BendPlan:
    """Assemble the full curvature schedule for one neck."""
    if not math.sin(theta_bar) > _WINDOW_SIN:
        raise ThetaBarTooSmall(
            f"sin(theta_bar)={math.sin(theta_bar)!r} <= 4/5: final-arc window empty"
        )
    s0, theta0 = choose_s0(model, margin, safety_factor=safety_factor,
                           k_init=k_init)
    start = CurveState(s=0.0, t=0.0, r=model.delta0, theta=0.0)
    after_initial = extend_by_arc(start, ArcSegment(k=k_init, delta_s=s0))
    segments, states = inductive_bend(after_initial, theta_bar)
    # the last step counts as truncated when it was shortened by the cutoff
    full_ds = states[-2].r / 2.0
    truncated = segments[-1].delta_s < full_ds * (1.0 - 1e-12)
    k_final, delta_s_final, r_inf = final_arc(states[-1], theta_bar,
                                              window_position)
    tail = 2.0 * model.delta0
    total = states[-1].s + delta_s_final + tail
    raw_end = extend_by_arc(states[-1],
                            ArcSegment(k=k_final, delta_s=delta_s_final))
    if abs(raw_end.theta - HALF_PI) > 1e-12:
        raise AxisCrossed(
            f"final arc missed the quarter turn by {raw_end.theta - HALF_PI!r}"
        )
    end_state = CurveState(s=raw_end.s, t=raw_end.t, r=raw_end.r,
                           theta=HALF_PI)
    return BendPlan(
        s0=s0,
        theta0=theta0,
        k_init=k_init,
        segments=tuple(segments),
        breakpoints=tuple(states),
        theta_bar=theta_bar,
        k_final=k_final,
        delta_s_final=delta_s_final,
        r_inf=r_inf,
        tail_length=tail,
        total_length=total,
        delta0=model.delta0,
        truncated_last=truncated,
        end_state=end_state,
        end_theta_raw=raw_end.theta,
    )


@dataclass(frozen=True)
class CheckItem:
    name: str
    passed: bool
    observed: float
    bound: float
    slack: float
    note: str = ""


@dataclass(frozen=True)
class PlanCertificate:
    contraction: float
    items: tuple[CheckItem, ...]

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.items)

    def item(self, name: str) -> CheckItem:
        for it in self.items:
            if it.name == name:
                return it
        raise KeyError(name)


def check_plan(plan: BendPlan, theta_bar: float | None = None) -> PlanCertificate:
    """Verify the quantitative estimates the construction promises.

    Ratio and angle-step items skip the truncated last inductive step (its
    shortened length weakens those per-step statements without affecting the
    summed length budget, which is checked for the whole plan).
    """
    tb = plan.theta_bar if theta_bar is None else theta_bar
    C = 1.0 - math.cos(tb) / 2.0
    states = plan.breakpoints
    segs = plan.segments
    m = plan.m
    tol = 1e-12

    last_full = m if not plan.truncated_last else m - 1
    items = []

    r_ratios = [states[i + 1].r / states[i].r for i in range(last_full)]
    worst = max(r_ratios) if r_ratios else -math.inf
    items.append(CheckItem(
        name="radius_ratio",
        passed=(not r_ratios) or worst <= C + tol,
        observed=worst,
        bound=C,
        slack=C - worst if r_ratios else math.inf,
        note="r_i / r_{i-1} <= C over untruncated bend steps",
    ))

    ds_ratios = [segs[i].delta_s / segs[i - 1].delta_s for i in range(1, m)]
    worst_ds = max(ds_ratios) if ds_ratios else -math.inf
    items.append(CheckItem(
        name="length_ratio",
        passed=(not ds_ratios) or worst_ds <= C + tol,
        observed=worst_ds,
        bound=C,
        slack=C - worst_ds if ds_ratios else math.inf,
        note="step length contracts at least as fast as the radius bound",
    ))

    s_m = states[-1].s
    budget = plan.s0 + states[0].r / (2.0 * (1.0 - C))
    items.append(CheckItem(
        name="length_budget",
        passed=s_m <= budget + tol,
        observed=s_m,
        bound=budget,
        slack=budget - s_m,
        note="geometric-series bound on the bend length",
    ))

    floor = math.sin(plan.theta0) / 16.0
    dthetas = [states[i + 1].theta - states[i].theta for i in range(last_full)]
    worst_dt = min(dthetas) if dthetas else math.inf
    items.append(CheckItem(
        name="angle_step",
        passed=(not dthetas) or worst_dt >= floor - tol,
        observed=worst_dt,
        bound=floor,
        slack=worst_dt - floor if dthetas else math.inf,
        note="every untruncated step turns by at least sin(theta0)/16",
    ))

    r_m = states[-1].r
    ds_cap = r_m * (math.pi / 2.0 - tb) / (1.0 - math.sin(tb))
    items.append(CheckItem(
        name="final_arc_length",
        passed=plan.delta_s_final <= ds_cap + tol,
        observed=plan.delta_s_final,
        bound=ds_cap,
        slack=ds_cap - plan.delta_s_final,
        note="final arc stays within its window-implied length",
    ))

    ks = [seg.k for seg in segs]
    increasing = all(ks[i] < ks[i + 1] for i in range(len(ks) - 1))
    min_gap = min((ks[i + 1] - ks[i] for i in range(len(ks) - 1)), default=math.inf)
    items.append(CheckItem(
        name="curvature_increasing",
        passed=increasing,
        observed=min_gap,
        bound=0.0,
        slack=min_gap,
        note="inductive curvatures are strictly increasing",
    ))

    x = plan.k_final * r_m
    lo = 1.0 - math.sin(tb)
    hi = math.sin(tb) / 4.0
    items.append(CheckItem(
        name="final_arc_window",
        passed=lo < x < hi,
        observed=x,
        bound=hi,
        slack=min(x - lo, hi - x),
        note="k_final * r_m strictly inside (1 - sin(theta_bar), sin(theta_bar)/4)",
    ))

    end_theta = plan.end_theta_raw
    err = abs(end_theta - math.pi / 2.0)
    items.append(CheckItem(
        name="full_bend_angle",
        passed=err <= tol,
        observed=end_theta,
        bound=math.pi / 2.0,
        slack=tol - err,
        note="the profile ends horizontal",
    ))

    items.append(CheckItem(
        name="radius_positive",
        passed=plan.r_inf > 0.0,
        observed=plan.r_inf,
        bound=0.0,
        slack=plan.r_inf,
        note="the cylinder radius is positive",
    ))

    thetas = [st.theta for st in states]
    mono = all(b > a for a, b in zip(thetas, thetas[1:]))
    items.append(CheckItem(
        name="angle_monotone",
        passed=mono and thetas[-1] == tb,
        observed=thetas[-1],
        bound=tb,
        slack=0.0 if mono else -1.0,
        note="bend angles increase strictly and stop exactly at theta_bar",
    ))

    return PlanCertificate(contraction=C, items=tuple(items))
