"""Cumulative Filon-Simpson quadrature for integrands slow(u) * exp(-i c u).

Plain Newton-Cotes rules need step sizes far below the carrier period, which
becomes hopeless once the carrier packs thousands of cycles into the pulse
window.  Here the oscillatory factor exp(-i c u) is integrated exactly per
panel against a quadratic fit of the slow factor, so the node count tracks
only the smoothness of the slow part.

A panel is a pair of grid intervals [u0, u1, u2] with uniform spacing h.
Writing x = u - u1, the slow part is fitted as a + b x + q x^2 and the
panel integral needs the moments

    M_j = integral x^j exp(-i c x) dx  over [-h, h]   (full panel)
    H_j = integral x^j exp(-i c x) dx  over [-h, 0]   (first half)

which have closed forms in theta = c h; a power series takes over for small
theta where the closed forms cancel catastrophically.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

_SERIES_THETA = 0.5
_SERIES_TERMS = 18


def _moments_series(theta: float, h: float) -> tuple[complex, ...]:
    """Power series in (-i theta) for the six panel moments."""
    full = [0j, 0j, 0j]
    half = [0j, 0j, 0j]
    term = 1.0 + 0j  # (-i theta)^k / k!
    for k in range(_SERIES_TERMS):
        for j in range(3):
            m = j + k
            half[j] += term * ((-1.0) ** m) / (m + 1)
            if m % 2 == 0:
                full[j] += term * 2.0 / (m + 1)
        term *= -1j * theta / (k + 1)
    scale = [h, h * h, h * h * h]
    return tuple(full[j] * scale[j] for j in range(3)) + tuple(
        half[j] * scale[j] for j in range(3)
    )


def _moments_closed(theta: float, h: float) -> tuple[complex, ...]:
    s, c = math.sin(theta), math.cos(theta)
    eit = cmath.exp(1j * theta)
    t2, t3 = theta * theta, theta * theta * theta
    m0 = 2.0 * h * s / theta
    m1 = -2.0j * h * h * (s - theta * c) / t2
    m2 = 2.0 * h**3 * ((t2 - 2.0) * s + 2.0 * theta * c) / t3
    h0 = h * (eit - 1.0) / (1j * theta)
    h1 = h * h * (1.0 + eit * (1j * theta - 1.0)) / t2
    h2 = h**3 * (2.0 - eit * (2.0 - t2 - 2.0j * theta)) / (1j * t3)
    return m0, m1, m2, h0, h1, h2


def panel_moments(c: float, h: float) -> tuple[complex, ...]:
    """(M0, M1, M2, H0, H1, H2) for frequency c and half-width h."""
    theta = c * h
    if abs(theta) < _SERIES_THETA:
        return _moments_series(theta, h)
    return _moments_closed(theta, h)


def filon_cumulative(u: np.ndarray, slow: np.ndarray, c: float) -> np.ndarray:
    """Running integral of slow(u') exp(-i c u') from u[0] to every node.

    u must be uniform with an odd number of points (an even panel count).
    """
    n = u.size
    if n < 3 or n % 2 == 0:
        raise ValueError("grid must have an odd number of nodes (>= 3)")
    h = (u[-1] - u[0]) / (n - 1)
    m0, m1, m2, h0, h1, h2 = panel_moments(c, h)

    y0 = slow[0:-2:2]
    y1 = slow[1::2]
    y2 = slow[2::2]
    a = y1
    b = (y2 - y0) / (2.0 * h)
    q = (y0 - 2.0 * y1 + y2) / (2.0 * h * h)
    phase = np.exp(-1j * c * u[1::2])

    full = phase * (a * m0 + b * m1 + q * m2)
    half = phase * (a * h0 + b * h1 + q * h2)

    out = np.empty(n, dtype=complex)
    running = np.concatenate(([0.0 + 0j], np.cumsum(full)))
    out[0::2] = running
    out[1::2] = running[:-1] + half
    return out


def filon_panel_tail(
    u0: float, u2: float, y0: complex, y1: complex, y2: complex, c: float
) -> complex:
    """Integral of the quadratic through (y0, y1, y2) times exp(-i c u) on [u0, u2]."""
    h = 0.5 * (u2 - u0)
    if h <= 0.0:
        return 0.0 + 0j
    mid = 0.5 * (u0 + u2)
    m0, m1, m2, _, _, _ = panel_moments(c, h)
    a = y1
    b = (y2 - y0) / (2.0 * h)
    q = (y0 - 2.0 * y1 + y2) / (2.0 * h * h)
    return cmath.exp(-1j * c * mid) * (a * m0 + b * m1 + q * m2)
