"""C^2 replacement of the piecewise-constant curvature schedule.

Each curvature jump is bridged by a quintic smoothstep placed entirely on
the side of the larger value (rising jumps start late, falling jumps finish
early), so the smoothed curvature never exceeds the scheduled one on the
bent part of the curve.  On the tail the curvature holds a short plateau and
drops to zero; plateau and drop are solved so the total turn matches the
schedule's quarter revolution, which lands the curve horizontal.

Numerical constraints that shape the implementation:

* Segment lengths contract geometrically along the bend, far below the
  floating-point resolution of absolute arc length near the end, so all
  bookkeeping runs on exact per-piece widths and local coordinates;
  absolute positions are only a lookup aid.

* One-sided transitions delay the turn, which lowers the curve by up to
  (turn deficit) x (curve length).  The end radius is exponentially small,
  so default transition widths are capped by a sizing rule keeping the lost
  turn well below (end radius)/(curve length); otherwise the smoothed curve
  would cross the axis before completing the bend.

* The smoothed curve is integrated as a deviation from its closed-form
  piecewise parent: the turn lag is exact per piece, and the tiny (t, r)
  corrections are quadratures of that lag.  Accumulating the curve directly
  would bury the end radius under rounding noise from the early, large
  segments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .bend_planner import BendPlan, CheckItem
from .curve_core import HALF_PI, CurveSamples, CurveState, SmoothProfile
from .errors import EtaTooLarge, NonpositiveRadius, NormalizationFailed
from .smoothstep import smoothstep, smoothstep_d1, smoothstep_d2, \
    smoothstep_integral

__all__ = [
    "SmoothingParams",
    "PieceTable",
    "SmoothedRun",
    "SmoothedCertificate",
    "smooth_profile",
    "verify_smoothed",
]

# bound on (turn deficit) * (curve length) relative to the end radius
_DEFICIT_SAFETY = 0.125


@dataclass(frozen=True)
class SmoothingParams:
    """Transition sizing for the smoother.

    ``eta``: explicit transition width, must fit inside every pair of
    adjacent segments (half of the shorter one), otherwise EtaTooLarge.
    ``None`` selects per-junction widths of ``eta_fraction`` times the
    shorter adjacent segment, shrunk further when needed to keep the
    smoothed curve clear of the axis.  ``drop_fraction``: fraction of the
    first collar length of the tail available to the terminal drop.
    """

    eta: float | None = None
    drop_fraction: float = 0.5
    eta_fraction: float = 0.125

    def __post_init__(self):
        if self.eta is not None and not self.eta > 0.0:
            raise ValueError(f"eta must be positive, got {self.eta!r}")
        if not 0.0 < self.drop_fraction <= 1.0:
            raise ValueError(
                f"drop_fraction must be in (0, 1], got {self.drop_fraction!r}"
            )
        if not 0.0 < self.eta_fraction < 0.5:
            raise ValueError(
                f"eta_fraction must be in (0, 0.5), got {self.eta_fraction!r}"
            )


@dataclass(frozen=True)
class _Piece:
    """One run of the smoothed curvature in local coordinates.

    ``width`` is exact; ``seg_idx``/``seg_off`` locate the piece start
    inside the schedule segment that hosts it.
    """

    width: float
    c0: float
    c1: float
    seg_idx: int
    seg_off: float

    @property
    def is_blend(self) -> bool:
        return self.c0 != self.c1

    @property
    def area(self) -> float:
        return 0.5 * (self.c0 + self.c1) * self.width


@dataclass(frozen=True)
class SmoothedRun:
    """Smoothed curve and its piecewise parent sampled at the same nodes."""

    samples: CurveSamples
    parent: CurveSamples
    seg_idx: np.ndarray
    lag: np.ndarray


class PieceTable:
    """Contiguous pieces with exact widths plus closed-form calculus."""

    def __init__(self, pieces: list[_Piece], schedule):
        if not pieces:
            raise ValueError("empty piece table")
        self.pieces = tuple(pieces)
        self.schedule = schedule   # (values, lengths, anchor CurveStates)
        self.width = np.array([p.width for p in pieces])
        if np.any(self.width <= 0.0):
            raise ValueError("pieces must have positive width")
        self.c0 = np.array([p.c0 for p in pieces])
        self.c1 = np.array([p.c1 for p in pieces])
        self.seg = np.array([p.seg_idx for p in pieces], dtype=np.intp)
        self.lo = np.concatenate([[0.0], np.cumsum(self.width)[:-1]])
        areas = [p.area for p in pieces]
        self.cum = np.empty(len(pieces) + 1)
        self.cum[0] = 0.0
        for i in range(len(areas)):
            self.cum[i + 1] = math.fsum(areas[: i + 1])
        self.total_length = float(self.lo[-1] + self.width[-1])
        self.total_turn = float(self.cum[-1])

    # ---- global-coordinate views (resolution-limited where pieces collapse)

    def _locate(self, s):
        s = np.asarray(s, dtype=float)
        i = np.clip(np.searchsorted(self.lo, s, side="right") - 1,
                    0, len(self.pieces) - 1)
        u = np.clip((s - self.lo[i]) / self.width[i], 0.0, 1.0)
        return i, u

    def k(self, s) -> np.ndarray:
        i, u = self._locate(s)
        return self.c0[i] + (self.c1[i] - self.c0[i]) * smoothstep(u)

    def d1(self, s) -> np.ndarray:
        i, u = self._locate(s)
        return (self.c1[i] - self.c0[i]) * smoothstep_d1(u) / self.width[i]

    def d2(self, s) -> np.ndarray:
        i, u = self._locate(s)
        return (self.c1[i] - self.c0[i]) * smoothstep_d2(u) / self.width[i] ** 2

    def integral(self, s) -> np.ndarray:
        i, u = self._locate(s)
        partial = self.c0[i] * self.width[i] * u \
            + (self.c1[i] - self.c0[i]) * self.width[i] * smoothstep_integral(u)
        return self.cum[i] + partial

    @property
    def knots(self) -> np.ndarray:
        return np.concatenate([self.lo, [self.total_length]])

    @property
    def min_blend_width(self) -> float:
        blend = self.c0 != self.c1
        return float(self.width[blend].min()) if np.any(blend) \
            else self.total_length

    # ---- exact local-coordinate machinery

    def piece_turn(self, idx: int, x) -> np.ndarray:
        """Turn accumulated inside piece ``idx`` up to local coordinate x."""
        p = self.pieces[idx]
        x = np.asarray(x, dtype=float)
        return p.c0 * p.width * x \
            + (p.c1 - p.c0) * p.width * smoothstep_integral(x)

    def _lag_delta(self, idx: int, x, v: float) -> np.ndarray:
        """Lag gained inside piece ``idx``: schedule turn minus smoothed turn.

        Factored as (v - c0) * w * x - (c1 - c0) * w * integral(sigma) so a
        constant piece matching its schedule value contributes exactly zero;
        subtracting two independently rounded turn totals would leave noise
        far above the lag scale.
        """
        p = self.pieces[idx]
        x = np.asarray(x, dtype=float)
        return (v - p.c0) * (p.width * x) \
            - (p.c1 - p.c0) * p.width * smoothstep_integral(x)

    def integrate(self, initial: CurveState, step: float) -> SmoothedRun:
        """Sample the smoothed curve as parent-plus-deviation.

        The parent comes from closed-form partial arcs anchored at the
        schedule breakpoints; the deviation (turn lag and the induced t, r
        shifts) is integrated piece by piece with fourth-order quadrature of
        exactly evaluated integrands.  Nodes sit at every piece boundary
        plus interior refinement at most ``step`` apart.
        """
        values, lengths, anchors = self.schedule
        if initial.r != anchors[0].r or initial.theta != anchors[0].theta:
            raise ValueError(
                "initial state does not match the plan this profile smooths"
            )
        s_shift = initial.s - anchors[0].s
        t_shift = initial.t - anchors[0].t

        cols = {name: [] for name in
                ("s", "t", "r", "theta", "k", "tp", "rp", "thetap",
                 "kp", "seg", "lag")}
        lag_run = 0.0
        dr_run = 0.0
        dt_run = 0.0
        for j, p in enumerate(self.pieces):
            v = values[p.seg_idx]
            a = anchors[p.seg_idx]
            if p.is_blend:
                n = max(8, min(int(math.ceil(p.width / step)), 4096))
            else:
                n = max(1, min(int(math.ceil(p.width / step)), 1 << 20))
            x = np.arange(n) / n
            xm = x + 0.5 / n
            x1 = x + 1.0 / n

            off = p.seg_off + p.width * x
            theta_pw = a.theta + v * off
            t_pw, r_pw = _partial_arc(a, v, off)

            lag = lag_run + self._lag_delta(j, x, v)
            lag_m = lag_run + self._lag_delta(j, xm, v)
            lag_1 = lag_run + self._lag_delta(j, x1, v)
            th_m = a.theta + v * (p.seg_off + p.width * xm)
            th_1 = a.theta + v * (p.seg_off + p.width * x1)

            h = p.width / n
            gr0, gt0 = _deviation_rates(theta_pw, lag)
            grm, gtm = _deviation_rates(th_m, lag_m)
            gr1, gt1 = _deviation_rates(th_1, lag_1)
            inc_r = h / 6.0 * (gr0 + 4.0 * grm + gr1)
            inc_t = h / 6.0 * (gt0 + 4.0 * gtm + gt1)
            dr = dr_run + np.concatenate([[0.0], np.cumsum(inc_r)[:-1]])
            dt = dt_run + np.concatenate([[0.0], np.cumsum(inc_t)[:-1]])

            r = r_pw + dr
            if np.any(r <= 0.0):
                raise NonpositiveRadius(
                    f"smoothed curve touches the axis inside piece {j}"
                )
            cols["s"].append(a.s + s_shift + off)
            cols["t"].append(t_pw + t_shift + dt)
            cols["r"].append(r)
            cols["theta"].append(theta_pw - lag)
            cols["k"].append(p.c0 + (p.c1 - p.c0) * smoothstep(x))
            cols["tp"].append(t_pw + t_shift)
            cols["rp"].append(r_pw)
            cols["thetap"].append(theta_pw)
            cols["kp"].append(np.full(n, v))
            cols["seg"].append(np.full(n, p.seg_idx, dtype=np.intp))
            cols["lag"].append(lag)

            lag_run += float(self._lag_delta(j, np.float64(1.0), v))
            dr_run += float(np.sum(inc_r))
            dt_run += float(np.sum(inc_t))

        # closing node at the very end of the tail
        last = self.pieces[-1]
        v = values[last.seg_idx]
        a = anchors[last.seg_idx]
        off_end = np.array([last.seg_off + last.width])
        t_pw, r_pw = _partial_arc(a, v, off_end)
        theta_pw = a.theta + v * off_end
        r_end = r_pw + dr_run
        if r_end[0] <= 0.0:
            raise NonpositiveRadius("smoothed curve ends on the axis")
        cols["s"].append(a.s + s_shift + off_end)
        cols["t"].append(t_pw + t_shift + dt_run)
        cols["r"].append(r_end)
        cols["theta"].append(theta_pw - lag_run)
        cols["k"].append(np.array([last.c1]))
        cols["tp"].append(t_pw + t_shift)
        cols["rp"].append(r_pw)
        cols["thetap"].append(theta_pw)
        cols["kp"].append(np.array([v]))
        cols["seg"].append(np.array([last.seg_idx], dtype=np.intp))
        cols["lag"].append(np.array([lag_run]))

        merged = {name: np.concatenate(parts) for name, parts in cols.items()}
        samples = CurveSamples(s=merged["s"], t=merged["t"], r=merged["r"],
                               theta=merged["theta"], k=merged["k"], step=step)
        parent = CurveSamples(s=merged["s"], t=merged["tp"], r=merged["rp"],
                              theta=merged["thetap"], k=merged["kp"],
                              step=step)
        return SmoothedRun(samples=samples, parent=parent,
                           seg_idx=merged["seg"], lag=merged["lag"])


def _partial_arc(anchor: CurveState, k: float, ds: np.ndarray):
    """Closed-form (t, r) a distance ds along a constant-curvature arc."""
    if k == 0.0:
        if anchor.theta == HALF_PI:
            t = anchor.t + ds
            r = np.full_like(ds, anchor.r)
        else:
            t = anchor.t + ds * math.sin(anchor.theta)
            r = anchor.r - ds * math.cos(anchor.theta)
    else:
        half = 0.5 * k * ds
        chord = np.where(ds != 0.0, 2.0 * np.sin(half) / k, 0.0)
        t = anchor.t + chord * np.sin(anchor.theta + half)
        r = anchor.r - chord * np.cos(anchor.theta + half)
    return t, r


def _deviation_rates(theta_pw: np.ndarray, lag: np.ndarray):
    """d/ds of (r_eta - r_pw) and (t_eta - t_pw) for turn lag ``lag``.

    Written with 2 sin^2(lag/2) instead of 1 - cos(lag) so the rates keep
    full relative accuracy when the lag is at round-off scale; the parent
    direction snaps to exactly horizontal at the representable quarter turn.
    """
    horizontal = theta_pw == HALF_PI
    cos_pw = np.where(horizontal, 0.0, np.cos(theta_pw))
    sin_pw = np.where(horizontal, 1.0, np.sin(theta_pw))
    versine = 2.0 * np.sin(0.5 * lag) ** 2
    sin_lag = np.sin(lag)
    g_r = cos_pw * versine - sin_pw * sin_lag
    g_t = -sin_pw * versine - cos_pw * sin_lag
    return g_r, g_t


def _schedule(plan: BendPlan):
    """Schedule segments as (values, lengths, anchor states), in order."""
    values = plan.segment_values()
    lengths = plan.segment_lengths()
    anchors = [plan.start] + list(plan.breakpoints) + [plan.state_full_bend]
    return values, lengths, anchors


def _junction_widths(values, lengths, params: SmoothingParams,
                     scale_fraction: float) -> list[float]:
    """Transition width per junction (junction j sits before segment j).

    Junction 0 is the rise from the straight pre-curve run into the first
    arc; the drop onto the tail is not listed (the terminal drop covers it).
    """
    widths = []
    for j in range(len(values)):
        left_len = lengths[j - 1] if j > 0 else math.inf
        right_len = lengths[j]
        cap = min(left_len, right_len) / 2.0
        if params.eta is not None:
            if params.eta >= cap:
                raise EtaTooLarge(
                    f"eta={params.eta!r} does not fit at junction {j} "
                    f"(needs < {cap!r})"
                )
            w = params.eta
        else:
            w = min(left_len, right_len) * scale_fraction
        if not w > 0.0:
            raise NormalizationFailed(
                f"transition width underflowed at junction {j}"
            )
        widths.append(w)
    return widths


def smooth_profile(plan: BendPlan, params: SmoothingParams | None = None
                   ) -> SmoothProfile:
    """Replace the plan's curvature schedule by a C^2 profile.

    The result never exceeds the scheduled curvature on the bent part, is
    zero after the terminal drop, and integrates to the schedule's total
    turn (a quarter revolution up to representation error).  Raises
    EtaTooLarge when an explicit width does not fit, NormalizationFailed
    when the tail cannot absorb the turn lost to the transitions.
    """
    params = params or SmoothingParams()
    schedule = _schedule(plan)
    values, lengths, _ = schedule
    bent_values = values[:-1]
    bent_lengths = lengths[:-1]
    njunc = len(bent_values)   # junction j sits at the start of segment j

    jumps = [bent_values[0]] + [bent_values[j] - bent_values[j - 1]
                                for j in range(1, njunc)]

    if params.eta is None:
        # size the deficit against the end radius: the smoothed curve sits
        # lower than its parent by at most (turn deficit) * (curve length)
        deficit_unit = math.fsum(
            abs(jumps[j]) * min(bent_lengths[max(j - 1, 0)], bent_lengths[j]) / 2.0
            for j in range(njunc)
        )
        safe = _DEFICIT_SAFETY * plan.r_inf \
            / (plan.total_length * deficit_unit)
        fraction = min(params.eta_fraction, safe)
    else:
        fraction = params.eta_fraction   # unused when eta is explicit
    widths = _junction_widths(bent_values, bent_lengths, params, fraction)

    pieces: list[_Piece] = []
    for j, (value, length) in enumerate(zip(bent_values, bent_lengths)):
        head = widths[j] if jumps[j] > 0.0 else 0.0
        if jumps[j] < 0.0:
            # falling jump finishes early inside the previous segment
            pieces.append(_Piece(width=widths[j], c0=bent_values[j - 1],
                                 c1=value, seg_idx=j - 1,
                                 seg_off=bent_lengths[j - 1] - widths[j]))
        tail = 0.0
        if j + 1 < njunc and jumps[j + 1] < 0.0:
            tail = widths[j + 1]
        if jumps[j] > 0.0:
            left = bent_values[j - 1] if j > 0 else 0.0
            pieces.append(_Piece(width=head, c0=left, c1=value,
                                 seg_idx=j, seg_off=0.0))
        mid = length - head - tail
        if mid < 0.0:
            raise EtaTooLarge(
                f"transitions overlap inside segment {j} of length {length!r}"
            )
        if mid > 0.0:
            pieces.append(_Piece(width=mid, c0=value, c1=value,
                                 seg_idx=j, seg_off=head))

    deficit = math.fsum(abs(jumps[j]) * widths[j] / 2.0 for j in range(njunc))
    if not deficit > 0.0:
        raise NormalizationFailed("no turn deficit to restore; schedule corrupt")

    # tail: plateau at the final curvature, quintic drop to zero, then flat
    k_tail = values[-2]
    delta0 = plan.delta0
    tail_len = lengths[-1]
    tail_idx = len(values) - 1
    drop0 = params.drop_fraction * delta0
    if k_tail * drop0 / 2.0 > deficit:
        # a zero plateau already oversupplies turn: shrink the drop instead
        width = brentq(lambda w: k_tail * w / 2.0 - deficit, 0.0, drop0,
                       xtol=5e-324, rtol=8.9e-16, maxiter=200)
        plateau = 0.0
    else:
        p_max = delta0 - drop0
        supply_max = k_tail * (p_max + drop0 / 2.0)
        if deficit > supply_max:
            raise NormalizationFailed(
                f"transitions lose {deficit!r} of turn but the tail can "
                f"restore at most {supply_max!r}; shrink eta or enlarge "
                f"drop_fraction"
            )
        width = drop0
        plateau = brentq(lambda p: k_tail * (p + drop0 / 2.0) - deficit,
                         0.0, p_max, xtol=5e-324, rtol=8.9e-16, maxiter=200)

    off = 0.0
    if plateau > 0.0:
        pieces.append(_Piece(width=plateau, c0=k_tail, c1=k_tail,
                             seg_idx=tail_idx, seg_off=0.0))
        off = plateau
    pieces.append(_Piece(width=width, c0=k_tail, c1=0.0,
                         seg_idx=tail_idx, seg_off=off))
    rest = tail_len - off - width
    if rest > 0.0:
        pieces.append(_Piece(width=rest, c0=0.0, c1=0.0,
                             seg_idx=tail_idx, seg_off=off + width))

    table = PieceTable(pieces, schedule)
    target = math.fsum(v * l for v, l in zip(values, lengths))
    if abs(table.total_turn - target) > 1e-12:
        raise NormalizationFailed(
            f"turn normalization missed: integral={table.total_turn!r}, "
            f"target={target!r}"
        )
    return SmoothProfile(
        k_fn=table.k,
        total_length=table.total_length,
        eta=table.min_blend_width,
        integral_fn=table.integral,
        knots=tuple(float(x) for x in table.knots),
        pieces=table,
    )


@dataclass(frozen=True)
class SmoothedCertificate:
    sup_dtheta: float
    sup_dr: float
    sup_dt: float
    l1_diff: float
    turn_integral: float
    end_theta: float
    margin_min: float
    margin_at: float
    margin_min_piecewise: float
    r_tail_variation: float
    r_inf: float
    lipschitz_estimate: float
    items: tuple[CheckItem, ...]

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.items)

    def item(self, name: str) -> CheckItem:
        for it in self.items:
            if it.name == name:
                return it
        raise KeyError(name)


def bend_margins(samples: CurveSamples, mask) -> tuple[float, float]:
    """Minimum of sin(theta)/(4r) - k over masked samples, with location."""
    margins = np.sin(samples.theta[mask]) / (4.0 * samples.r[mask]) \
        - samples.k[mask]
    i = int(np.argmin(margins))
    return float(margins[i]), float(samples.s[mask][i])


def verify_smoothed(plan: BendPlan, smoothed: SmoothProfile,
                    step: float | None = None) -> SmoothedCertificate:
    """Compare the smoothed curve against its piecewise parent.

    Integrates the smoothed curve (with the parent evaluated at the same
    nodes) and reports deviation suprema, the turn total, the bend-condition
    margin past the initial arc, and tail flatness.  All findings are
    reported; nothing raises.

    The audit region "past the initial arc" is identified structurally (by
    the schedule segment owning each node) rather than by comparing arc
    lengths, which would misattribute nodes where breakpoint positions
    collapse to adjacent floats.
    """
    table: PieceTable = smoothed.pieces
    if table is None:
        raise ValueError("verify_smoothed needs a piece-backed profile")
    S = plan.total_length
    if step is None:
        step = S / max(2048.0, math.ceil(S * 1e4))
    run = table.integrate(plan.start, step)
    samples, parent = run.samples, run.parent

    dtheta = np.abs(samples.theta - parent.theta)
    dr = np.abs(samples.r - parent.r)
    dt = np.abs(samples.t - parent.t)

    turn = table.total_turn
    values, lengths, _ = _schedule(plan)
    l1 = _l1_distance(table, values)

    audit = run.seg_idx >= 1   # everything past the initial arc
    margin_s, margin_s_at = bend_margins(samples, audit)
    margin_p, _ = bend_margins(parent, audit)

    tail_mask = run.seg_idx == len(values) - 1
    off_tail = samples.s[tail_mask] - plan.state_full_bend.s
    last_collar = tail_mask.copy()
    last_collar[tail_mask] = off_tail >= plan.delta0 * (1.0 - 1e-12)
    r_tail = samples.r[last_collar]
    r_var = float(np.max(r_tail) - np.min(r_tail))
    r_inf = float(samples.r[-1])

    lip = float(np.max(
        np.cos(samples.theta[audit]) / (4.0 * samples.r[audit])
        + np.sin(samples.theta[audit]) / (4.0 * samples.r[audit] ** 2)
    ))

    end_theta = float(samples.theta[-1])
    min_k = float(np.min(samples.k))
    items = (
        CheckItem(
            name="turn_total",
            passed=abs(turn - math.pi / 2.0) <= 1e-12,
            observed=turn, bound=math.pi / 2.0,
            slack=1e-12 - abs(turn - math.pi / 2.0),
            note="total turn is a quarter revolution",
        ),
        CheckItem(
            name="end_horizontal",
            passed=abs(end_theta - math.pi / 2.0) <= 1e-9,
            observed=end_theta, bound=math.pi / 2.0,
            slack=1e-9 - abs(end_theta - math.pi / 2.0),
            note="the smoothed curve ends horizontal",
        ),
        CheckItem(
            name="theta_deviation",
            passed=float(np.max(dtheta)) <= l1 + 1e-9,
            observed=float(np.max(dtheta)), bound=l1,
            slack=l1 + 1e-9 - float(np.max(dtheta)),
            note="angle deviation is controlled by the L1 curvature distance",
        ),
        CheckItem(
            name="margin_positive",
            passed=margin_s > 0.0,
            observed=margin_s, bound=0.0, slack=margin_s,
            note="bend condition margin stays positive past the initial arc",
        ),
        CheckItem(
            name="margin_survival",
            passed=margin_s >= margin_p - lip * l1,
            observed=margin_s, bound=margin_p - lip * l1,
            slack=margin_s - (margin_p - lip * l1),
            note="smoothing degrades the margin at most Lipschitz * L1",
        ),
        CheckItem(
            name="tail_flat",
            passed=r_var <= 1e-12,
            observed=r_var, bound=1e-12, slack=1e-12 - r_var,
            note="radius constant over the final collar of the tail",
        ),
        CheckItem(
            name="curvature_nonnegative",
            passed=min_k >= 0.0,
            observed=min_k, bound=0.0, slack=min_k,
            note="smoothed curvature never goes negative",
        ),
    )
    return SmoothedCertificate(
        sup_dtheta=float(np.max(dtheta)),
        sup_dr=float(np.max(dr)),
        sup_dt=float(np.max(dt)),
        l1_diff=l1,
        turn_integral=turn,
        end_theta=end_theta,
        margin_min=margin_s,
        margin_at=margin_s_at,
        margin_min_piecewise=margin_p,
        r_tail_variation=r_var,
        r_inf=r_inf,
        lipschitz_estimate=lip,
        items=items,
    )


def _l1_distance(table: PieceTable, values) -> float:
    """Exact integral of |smoothed - scheduled| curvature.

    On the bent part each blend loses half its jump times its width; on the
    tail the schedule is zero, so the whole plateau-plus-drop area counts.
    """
    tail_idx = len(values) - 1
    lost = math.fsum(
        abs(p.c1 - p.c0) * p.width / 2.0
        for p in table.pieces if p.is_blend and p.seg_idx != tail_idx
    )
    restored = math.fsum(
        p.area for p in table.pieces if p.seg_idx == tail_idx
    )
    return lost + restored
