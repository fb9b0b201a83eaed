"""Figure rendering for build and sweep reports.

All figures are written as self-contained SVG with fixed metadata so that
identical runs emit identical files.
"""

from __future__ import annotations

import numpy as np

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "psctunnel"

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

__all__ = [
    "save_profile_plot",
    "save_curvature_plot",
    "save_tunnel_plot",
    "save_scaling_plot",
]

_SAVE_KW = dict(format="svg", metadata={"Date": None})


def _annotate(ax, neck):
    ax.set_title(
        f"delta0={neck.model.delta0:g}, theta_bar={neck.plan.theta_bar:g}, "
        f"r_inf={neck.r_inf:.3e}",
        fontsize=9,
    )


def save_profile_plot(neck, path: str) -> None:
    """Side view of the profile curve in the (t, r) half-plane."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(neck.samples.t, neck.samples.r, lw=1.2, color="tab:blue")
    ax.axhline(neck.model.delta0, color="0.6", lw=0.7, ls="--",
               label="delta0")
    ax.axhline(neck.r_inf, color="0.3", lw=0.7, ls=":", label="r_inf")
    ax.set_xlabel("t")
    ax.set_ylabel("r")
    ax.legend(loc="upper right", fontsize=8)
    _annotate(ax, neck)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def save_curvature_plot(neck, path: str) -> None:
    """Curvature schedule over arc length, log scale (it spans decades)."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    s, k = neck.samples.s, neck.samples.k
    pos = k > 0.0
    ax.semilogy(s[pos], k[pos], lw=1.0, color="tab:red")
    ax.set_xlabel("s")
    ax.set_ylabel("k")
    _annotate(ax, neck)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def save_tunnel_plot(tunnel, report, path: str) -> None:
    """Axial radius of the full tunnel: neck, cylinder, mirrored neck."""
    n1, n2 = tunnel.neck1, tunnel.neck2
    s1 = n1.samples.s
    r1 = n1.samples.r
    l = tunnel.cylinder_length
    s2 = s1[-1] + l + (n2.samples.s[-1] - n2.samples.s[::-1])
    r2 = n2.samples.r[::-1]
    fig, ax = plt.subplots(figsize=(7.0, 3.5))
    ax.plot(s1, r1, lw=1.0, color="tab:blue")
    ax.plot([s1[-1], s1[-1] + l], [tunnel.r_inf, tunnel.r_inf],
            lw=1.0, color="tab:green")
    ax.plot(s2, r2, lw=1.0, color="tab:blue")
    ax.set_xlabel("arc length through the tunnel")
    ax.set_ylabel("r")
    ax.set_title(
        f"dist_collars={report.dist_collars:g}, "
        f"diam_upper={report.diam_upper:g}",
        fontsize=9,
    )
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def save_scaling_plot(sweep, path: str) -> None:
    """Log-log sizes against the collar scale with fitted slopes."""
    d0 = np.array([p.delta0 for p in sweep.points])
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    for name, color in (("neck_length", "tab:blue"),
                        ("diam_upper", "tab:green"),
                        ("vol_Uprime", "tab:red")):
        y = np.array([getattr(p, name) for p in sweep.points])
        fit = sweep.slopes[name]
        ax.loglog(d0, y, "o", ms=4, color=color,
                  label=f"{name}: slope {fit.slope:.4f}")
        ax.loglog(d0, np.exp(fit.intercept) * d0 ** fit.slope,
                  "-", lw=0.8, color=color)
    ax.set_xlabel("delta0")
    ax.set_ylabel("measured size")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)
