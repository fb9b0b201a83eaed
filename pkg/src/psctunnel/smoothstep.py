"""Quintic smoothstep and its calculus.

sigma(u) = 6u^5 - 15u^4 + 10u^3 rises from 0 to 1 on [0, 1] with first and
second derivatives vanishing at both ends, so piecewise constructions glued
with it are C^2.  The antiderivative is closed form, which keeps turn-angle
bookkeeping exact.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "smoothstep",
    "smoothstep_d1",
    "smoothstep_d2",
    "smoothstep_integral",
]


def smoothstep(u):
    u = np.clip(u, 0.0, 1.0)
    return u ** 3 * (10.0 + u * (-15.0 + 6.0 * u))


def smoothstep_d1(u):
    inside = (u > 0.0) & (u < 1.0)
    u = np.clip(u, 0.0, 1.0)
    return np.where(inside, 30.0 * u ** 2 * (u - 1.0) ** 2, 0.0)


def smoothstep_d2(u):
    inside = (u > 0.0) & (u < 1.0)
    u = np.clip(u, 0.0, 1.0)
    return np.where(inside, 60.0 * u * (2.0 * u - 1.0) * (u - 1.0), 0.0)


def smoothstep_integral(u):
    """Integral of smoothstep from 0 to u; equals u - 1/2 for u >= 1."""
    u = np.asarray(u, dtype=float)
    cl = np.clip(u, 0.0, 1.0)
    inner = cl ** 4 * (2.5 + cl * (-3.0 + cl))
    return inner + np.maximum(u - 1.0, 0.0)
