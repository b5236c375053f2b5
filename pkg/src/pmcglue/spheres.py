"""Green's-function-perturbed spheres with truncated polar caps.

The graph function is G_k = eps_plus * G(north) + eps_minus * G(south),
applied along the *inward* normal (outward displacement -G_k): G -> -inf
at the sourced pole, so positive source strengths open an outward funnel
toward the neck, matching the catenoid's log expansion.  Sourced poles
are truncated at polar radius rho_k = eps^(3/4) / 4, keeping the sphere
graph alive across the blending annulus [rho'/2, rho'].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument
from .greens import (
    default_l_max,
    green_closed,
    green_closed_deriv,
    green_coefficients,
)
from .profiles import ProfileCurve, validate_profile

#: truncation radius as a fraction of the matching radius rho' = eps^(3/4)
TRUNC_FRACTION = 0.25

#: source strength per unit neck scale: the catenoid end grows like
#: eps*log(rho) while G ~ log(rho)/(2 pi) at its pole, so matching log
#: coefficients against the strength-one delta normalization needs 2 pi
SOURCE_PER_EPS = 2.0 * np.pi


@dataclass(frozen=True)
class SphereGraph:
    """Record of one perturbed sphere."""

    k: int
    eps_plus: float
    eps_minus: float
    A_k: float
    coeffs: np.ndarray
    rho_k: float
    rho_k_minus: float
    center_s: float


def truncation_radius(source: float) -> float:
    """Polar truncation radius for a pole with graph source ``source``.

    Scales with the implied neck scale eps = source / SOURCE_PER_EPS as
    eps^(3/4)/4, keeping the cap alive across the blending annulus.
    """
    if source <= 0:
        return 0.0
    return TRUNC_FRACTION * (source / SOURCE_PER_EPS) ** 0.75


def _green_second_deriv(u):
    with np.errstate(divide="ignore", invalid="ignore"):
        return (-1.0 / (1.0 - u) - 1.0 / (1.0 - u) ** 2) / (4 * np.pi)


def _graph_theta(eps_plus, eps_minus, theta):
    """G_k and its first two theta-derivatives on the sphere."""
    u = np.cos(theta)
    s = np.sin(theta)
    g = np.zeros_like(theta)
    g1 = np.zeros_like(theta)
    g2 = np.zeros_like(theta)
    if eps_plus > 0:
        G, Gp, Gpp = green_closed(u), green_closed_deriv(u), _green_second_deriv(u)
        g += eps_plus * G
        g1 += eps_plus * (-s) * Gp
        g2 += eps_plus * (Gpp * s**2 - Gp * u)
    if eps_minus > 0:
        G, Gp, Gpp = green_closed(-u), green_closed_deriv(-u), _green_second_deriv(-u)
        g += eps_minus * G
        g1 += eps_minus * s * Gp
        g2 += eps_minus * (Gpp * s**2 + Gp * u)
    return g, g1, g2


def graph_function(eps_plus: float, eps_minus: float, theta):
    """The spec's graph G_k as a function of polar angle."""
    return _graph_theta(eps_plus, eps_minus, np.asarray(theta, dtype=float))[0]


def _theta_grid(theta_lo, theta_hi, n, refine_lo, refine_hi, rho_p_lo, rho_p_hi, m: int = 320):
    """Base grid plus log refinement (in pole distance) at sourced poles.

    Built from half-grids so that mirrored source patterns produce
    bit-mirrored grids (keeps symmetric configurations symmetric).
    """
    half = n // 2 + 1
    pieces = [
        np.linspace(theta_lo, np.pi / 2, half),
        np.pi - np.linspace(np.pi - theta_hi, np.pi / 2, half),
    ]
    d_max = min(0.6, 0.45 * (theta_hi - theta_lo))
    if refine_lo and rho_p_lo < d_max:
        pieces.append(np.geomspace(rho_p_lo, d_max, m))
    if refine_hi and rho_p_hi < d_max:
        pieces.append(np.pi - np.geomspace(rho_p_hi, d_max, m))
    grid = np.unique(np.concatenate(pieces))
    grid = grid[(grid >= theta_lo - 1e-15) & (grid <= theta_hi + 1e-15)]
    # collapse near-duplicate nodes from overlapping pieces
    keep = np.concatenate([[True], np.diff(grid) > 1e-13])
    return grid[keep]


def perturbed_sphere(
    k: int,
    center_s: float,
    eps_plus: float,
    eps_minus: float,
    l_max: int | None = None,
    n: int = 512,
    interior: bool | None = None,
) -> tuple[SphereGraph, ProfileCurve]:
    """Build the perturbed sphere; poles with a source lose a polar cap.

    ``eps_plus`` sources the +x0 pole (t = 0), ``eps_minus`` the -x0 pole.
    """
    if eps_plus < 0 or eps_minus < 0:
        raise InvalidArgument("source strengths must be >= 0")
    if interior and eps_plus == 0 and eps_minus == 0:
        raise InvalidArgument("interior spheres need at least one source")
    rho_p = truncation_radius(eps_plus)
    rho_m = truncation_radius(eps_minus)
    theta_lo = rho_p if eps_plus > 0 else 0.0
    theta_hi = np.pi - rho_m if eps_minus > 0 else np.pi

    if l_max is None:
        smallest = min(x for x in (rho_p, rho_m) if x > 0) if (rho_p or rho_m) else 1.0
        l_max = default_l_max(smallest) if smallest < 1.0 else 200
    coeffs = green_coefficients(l_max)
    sgn = (-1.0) ** np.arange(l_max + 1)
    combined = eps_plus * coeffs + eps_minus * coeffs * sgn
    a_k = -np.sqrt(3.0 / (4 * np.pi)) * (eps_plus - eps_minus)

    theta = _theta_grid(theta_lo, theta_hi, n, eps_plus > 0, eps_minus > 0, rho_p, rho_m)
    g, g1, g2 = _graph_theta(eps_plus, eps_minus, theta)
    h, h1, h2 = -g, -g1, -g2  # outward displacement is minus the graph

    ct, st = np.cos(theta), np.sin(theta)
    a = center_s + (1.0 + h) * ct
    b = (1.0 + h) * st
    ap = h1 * ct - (1.0 + h) * st
    bp = h1 * st + (1.0 + h) * ct
    app = h2 * ct - 2.0 * h1 * st - (1.0 + h) * ct
    bpp = h2 * st + 2.0 * h1 * ct - (1.0 + h) * st

    sig = np.hypot(ap, bp)
    # cumulative arc length via Simpson on each interval (midpoint refinement)
    tm = 0.5 * (theta[1:] + theta[:-1])
    _, g1m, _ = _graph_theta(eps_plus, eps_minus, tm)
    hm = -_graph_theta(eps_plus, eps_minus, tm)[0]
    h1m = -g1m
    apm = h1m * np.cos(tm) - (1.0 + hm) * np.sin(tm)
    bpm = h1m * np.sin(tm) + (1.0 + hm) * np.cos(tm)
    sig_m = np.hypot(apm, bpm)
    seg = np.diff(theta) / 6.0 * (sig[:-1] + 4.0 * sig_m + sig[1:])
    t = np.concatenate([[0.0], np.cumsum(seg)])

    sig_p = (ap * app + bp * bpp) / sig
    curve = ProfileCurve(
        t=t,
        x0=a,
        rho=np.maximum(b, 0.0),
        dx0=ap / sig,
        drho=bp / sig,
        outward_sign=1,
        analytic_tag=None if (eps_plus or eps_minus) else "sphere",
        tag_params=(float(center_s),),
        d2x0=(app * sig - ap * sig_p) / sig**3,
        d2rho=(bpp * sig - bp * sig_p) / sig**3,
    )
    validate_profile(curve)
    graph = SphereGraph(
        k=k,
        eps_plus=float(eps_plus),
        eps_minus=float(eps_minus),
        A_k=float(a_k),
        coeffs=combined,
        rho_k=float(rho_p),
        rho_k_minus=float(rho_m),
        center_s=float(center_s),
    )
    return graph, curve


def translate_profile(curve: ProfileCurve, dx: float) -> ProfileCurve:
    from dataclasses import replace

    if curve.analytic_tag == "sphere":
        params = (curve.tag_params[0] + dx,)
    elif curve.analytic_tag == "catenoid":
        params = (curve.tag_params[0], curve.tag_params[1] + dx)
    else:
        params = curve.tag_params
    return replace(curve, x0=curve.x0 + dx, tag_params=params)
