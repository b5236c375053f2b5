"""Axisymmetric Green's function of (Laplacian + 2) on the unit sphere.

G solves (Delta + 2) G = delta(north pole) + A * J with A fixing
L2-orthogonality to the kernel function J = cos(theta); equivalently
(Delta + 2) G = -(3/4pi) u away from the pole, u = cos(theta).

Two routes are provided: the Legendre coefficient table

    g_l = (2l+1) / (4pi (2 - l(l+1))),  g_1 = 0,

and the exact resummation

    G(u) = (u/4pi) ln(1-u) + 1/(4pi) + a u,  a = (4/3 - ln 2)/(4pi),

which the tests verify against each other.  Graph construction uses the
closed form: the truncated series has the right values but its Gibbs
ripple near the truncation radius carries O(1) second derivatives, which
would contaminate curvature.  The south-pole source is G(-u).
"""

from __future__ import annotations

import numpy as np

from ._kernels import legendre_series
from .errors import InvalidArgument

#: coefficient of the linear term making G orthogonal to cos(theta)
A_LIN = (4.0 / 3.0 - np.log(2.0)) / (4.0 * np.pi)

#: regular value at the unsourced pole: G(-1) = 1/4pi - a
#: (u ln(1-u) -> -ln 2 at u = -1 cancels against the expansion constants)


def green_coefficients(l_max: int) -> np.ndarray:
    """Legendre coefficients g_l, l = 0..l_max, with the kernel mode zeroed."""
    if l_max < 8:
        raise InvalidArgument("need l_max >= 8")
    l = np.arange(l_max + 1, dtype=float)
    with np.errstate(divide="ignore"):
        g = (2 * l + 1) / (4.0 * np.pi * (2.0 - l * (l + 1)))
    g[1] = 0.0
    return g


def green_closed(u):
    """Exact G(u); singular (log) at u = +1, regular at u = -1."""
    u = np.asarray(u, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = u / (4 * np.pi) * np.log1p(-u) + 1.0 / (4 * np.pi) + A_LIN * u
    return val


def green_closed_deriv(u):
    """dG/du of the closed form."""
    u = np.asarray(u, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return (np.log1p(-u) - u / (1.0 - u)) / (4 * np.pi) + A_LIN


def green_series(coeffs: np.ndarray, u):
    """Partial sum of the coefficient series and its u-derivative."""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    val, der = legendre_series(np.ascontiguousarray(coeffs), np.ascontiguousarray(u))
    return val, der


def green_source_smooth(u):
    """The smooth part of (Delta+2)G, i.e. -(3/4pi) u (the A*J term)."""
    return -3.0 * np.asarray(u, dtype=float) / (4.0 * np.pi)


def default_l_max(rho_trunc: float) -> int:
    """Series length used for stored coefficients: max(200, ceil(8/rho))."""
    return max(200, int(np.ceil(8.0 / rho_trunc)))
