"""Airy function Ai on the real line.

For moderate arguments the integral ``Ai(x) = (1/2pi i) int exp(t^3/3 - x t) dt``
is taken along the vertical line ``t = a + i s``; the integrand then decays like
``exp(-a s^2)`` and the trapezoid rule converges geometrically.  Beyond
``|x| >= SWITCH`` the classical asymptotic series take over.
"""

import math

import numpy as np
from scipy.special import gamma

SWITCH = 12.0
AI0 = 1.0 / (3 ** (2.0 / 3.0) * gamma(2.0 / 3.0))


def _asymptotic_coeffs(n):
    # u_k = Gamma(3k + 1/2) / (54^k k! Gamma(k + 1/2)), by the ratio recurrence
    u = [1.0]
    for k in range(1, n):
        u.append(u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / (216.0 * k * (2 * k - 1)))
    return np.array(u)


_U = _asymptotic_coeffs(24)


def _ai_asymptotic(x):
    x = np.asarray(x, float)
    out = np.empty_like(x)
    pos = x > 0
    if pos.any():
        xp = x[pos]
        zeta = (2.0 / 3.0) * xp ** 1.5
        k = np.arange(_U.size)
        series = np.sum(((-1.0) ** k * _U)[:, None] / zeta[None, :] ** k[:, None], axis=0)
        out[pos] = np.exp(-zeta) / (2 * math.sqrt(math.pi) * xp ** 0.25) * series
    neg = ~pos
    if neg.any():
        y = -x[neg]
        zeta = (2.0 / 3.0) * y ** 1.5
        ke = np.arange(0, _U.size, 2)
        ko = np.arange(1, _U.size, 2)
        even = np.sum(((-1.0) ** (ke // 2) * _U[ke])[:, None] / zeta[None, :] ** ke[:, None], axis=0)
        odd = np.sum(((-1.0) ** (ko // 2) * _U[ko])[:, None] / zeta[None, :] ** ko[:, None], axis=0)
        phase = zeta - 0.25 * math.pi
        out[neg] = (np.cos(phase) * even + np.sin(phase) * odd) / (math.sqrt(math.pi) * y ** 0.25)
    return out


def _contour_params(x):
    """Line offset a, half-width S and step h for the vertical contour."""
    a = np.where(x >= 0, np.sqrt(np.maximum(x, 1.0)), 1.0 / np.sqrt(np.maximum(-x, 1.0)))
    # stop once exp(-a s^2) has fallen 40 e-folds below the integrand's peak
    peak = a ** 3 / 3.0 - x * a
    S = np.sqrt((40.0 + np.maximum(peak, 0.0)) / a)
    rate = S ** 2 + np.abs(x) + a ** 2
    h = np.minimum(0.25 / np.sqrt(a), 0.5 / rate)
    return a, S, h


def _ai_contour(x, chunk=64):
    x = np.asarray(x, float)
    out = np.empty_like(x)
    order = np.argsort(x)
    a_all, S_all, h_all = _contour_params(x)
    for start in range(0, x.size, chunk):
        idx = order[start:start + chunk]
        xs, a, S, h = x[idx], a_all[idx], S_all[idx], h_all[idx]
        n = int(np.ceil(np.max(S / h))) + 1
        j = np.arange(n)
        s = j[None, :] * h[:, None]
        t = a[:, None] + 1j * s
        f = np.exp(t ** 3 / 3.0 - xs[:, None] * t).real
        f[:, 0] *= 0.5
        f[s > S[:, None]] = 0.0
        out[idx] = h * f.sum(axis=1) / math.pi
    return out


def airy_ai(x):
    """Ai evaluated elementwise on real input; absolute accuracy about 1e-12."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    flat = x.reshape(-1)
    out = np.empty_like(flat)
    far = np.abs(flat) >= SWITCH
    if far.any():
        out[far] = _ai_asymptotic(flat[far])
    if (~far).any():
        out[~far] = _ai_contour(flat[~far])
    out = out.reshape(x.shape)
    return float(out) if scalar else out


def airy_ai_oscillatory(x, upper=None, n=None):
    """Ai(x) from the real oscillatory integral ``(1/pi) int_0^inf cos(s^3/3 + x s) ds``.

    Slow but independent of the contour route; the tail past ``upper`` is
    added through two integrations by parts.  Used only as a cross-check.
    """
    x = float(x)
    if upper is None:
        upper = 40.0 + math.sqrt(abs(x))
    if n is None:
        n = int(upper ** 3 * 40)
    s = np.linspace(0.0, upper, n + 1)
    f = np.cos(s ** 3 / 3 + x * s)
    h = upper / n
    body = np.trapezoid(f, s)
    # Euler-Maclaurin end correction; f'(0) = 0 since phi(0) = 0
    body -= h ** 2 / 12 * (-math.sin(upper ** 3 / 3 + x * upper) * (upper ** 2 + x))
    # two integrations by parts of int_U^inf cos(phi) ds, phi' = s^2 + x
    phi = upper ** 3 / 3 + x * upper
    d1 = upper ** 2 + x
    tail = -math.sin(phi) / d1 + math.cos(phi) * 2 * upper / d1 ** 3
    return (body + tail) / math.pi
