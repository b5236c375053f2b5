"""F-moments of spheres and sphere trains, and the balanced-center search.

The moment of a surface S is the integral of F(x, N) * <e0, N> over S
with the outward normal.  For a unit sphere centered on the axis the
angular integral is exact by symmetry, leaving a 1D Gauss-Legendre
quadrature in u = cos(theta).  Flipping the normal negates every moment,
so the balanced center below is orientation-free while the derivative of
the moment sum negates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .errors import (
    DegenerateRoot,
    InvalidArgument,
    NoRoot,
    QuadratureNonconvergence,
)
from .pmc import PMCFunction, eval_pmc_invariant
from .profiles import ProfileCurve

_DOUBLING_TOL = 1e-8


@dataclass(frozen=True)
class MomentVector:
    """Per-sphere moments mu_k for a train with base center s and gaps sigma."""

    mu: np.ndarray
    s: float
    sigma: np.ndarray
    quad_order: int

    @property
    def total(self) -> float:
        return float(np.sum(self.mu))


def _sphere_moment_raw(F: PMCFunction, center_s: float, order: int) -> float:
    u, w = np.polynomial.legendre.leggauss(order)
    rho = np.sqrt(np.maximum(1.0 - u**2, 0.0))
    # points on the unit sphere at (center_s,0,0); outward normal (u, rho-dir)
    vals = eval_pmc_invariant(F, center_s + u, rho, u, rho)
    return float(2.0 * np.pi * np.dot(w, np.asarray(vals) * u))


def f_moment(F: PMCFunction, center_s: float, quad_order: int = 32) -> float:
    """Moment of the unit sphere centered at (center_s, 0, 0)."""
    if quad_order < 4:
        raise InvalidArgument("need quad_order >= 4")
    val = _sphere_moment_raw(F, center_s, quad_order)
    val2 = _sphere_moment_raw(F, center_s, 2 * quad_order)
    if abs(val2 - val) > _DOUBLING_TOL:
        raise QuadratureNonconvergence(
            f"moment moved by {abs(val2 - val):.3e} when doubling the order"
        )
    return val2


def f_moment_general(F: PMCFunction, curve: ProfileCurve, quad_order: int = 0) -> float:
    """Moment of an arbitrary revolution surface by trapezoidal quadrature.

    Open curves integrate over what is sampled (boundary-truncated).
    ``quad_order`` is accepted for interface symmetry; the rule is fixed
    by the curve's sampling.
    """
    n0, _ = curve.normal_components()
    vals = eval_pmc_invariant(F, curve.x0, curve.rho, *curve.normal_components())
    integrand = np.asarray(vals) * n0 * 2.0 * np.pi * curve.rho
    return float(simpson(integrand, x=curve.t))


def sphere_centers(s: float, K: int, sigma) -> np.ndarray:
    """Centers s_k = s + 2(k-1) + sum_{l<k} sigma_l."""
    sigma = np.asarray(sigma, dtype=float)
    if sigma.shape != (K - 1,):
        raise InvalidArgument(f"sigma must have {K - 1} entries")
    gaps = np.concatenate([[0.0], np.cumsum(sigma)])
    return s + 2.0 * np.arange(K) + gaps


def moment_sum(
    F: PMCFunction, s: float, K: int, sigma=None, quad_order: int = 32
) -> tuple[float, MomentVector]:
    """Total moment of the K-sphere train plus the per-sphere breakdown."""
    if K < 1:
        raise InvalidArgument("need K >= 1")
    sigma = np.zeros(K - 1) if sigma is None else np.asarray(sigma, dtype=float)
    if np.any(sigma < 0):
        raise InvalidArgument("sigma entries must be >= 0")
    centers = sphere_centers(s, K, sigma)
    mu = np.array([f_moment(F, c, quad_order) for c in centers])
    vec = MomentVector(mu=mu, s=float(s), sigma=sigma, quad_order=quad_order)
    return vec.total, vec


def find_balanced_s(
    F: PMCFunction,
    K: int,
    bracket: tuple[float, float],
    quad_order: int = 32,
) -> tuple[float, float]:
    """Solve sum_k mu_F(S_k(s)) = 0 for s (tangent spheres, sigma = 0).

    Returns (s0, dsum) where dsum is the centered-difference derivative of
    the sum at s0.  Raises NoRoot when no sign change exists in the
    bracket and DegenerateRoot when |dsum| < 1e-6.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not lo < hi:
        raise InvalidArgument("bracket must satisfy lo < hi")

    def total(s):
        return moment_sum(F, s, K, quad_order=quad_order)[0]

    f_lo, f_hi = total(lo), total(hi)
    a, b, fa, fb = lo, hi, f_lo, f_hi
    if f_lo == 0.0 and f_hi == 0.0:
        raise NoRoot("moment sum is identically zero on the bracket")
    if f_lo * f_hi > 0:
        grid = np.linspace(lo, hi, 64)
        vals = np.array([total(s) for s in grid])
        idx = np.nonzero(vals[:-1] * vals[1:] < 0)[0]
        exact = np.nonzero(vals == 0.0)[0]
        if len(idx) == 0 and len(exact) == 0:
            raise NoRoot("no balanced center in bracket")
        if len(idx) == 0:
            a = b = grid[exact[0]]
            fa = fb = 0.0
        else:
            a, b = grid[idx[0]], grid[idx[0] + 1]
            fa, fb = vals[idx[0]], vals[idx[0] + 1]

    # bisection to a narrow interval, then a short Newton polish
    while b - a > 1e-8:
        m = 0.5 * (a + b)
        fm = total(m)
        if fm == 0.0:
            a = b = m
            break
        if fa * fm < 0:
            b, fb = m, fm
        else:
            a, fa = m, fm
    s0 = 0.5 * (a + b)
    h = 1e-5
    for _ in range(5):
        f0 = total(s0)
        if abs(f0) <= 1e-10:
            break
        d = (total(s0 + h) - total(s0 - h)) / (2 * h)
        if d == 0.0:
            break
        s0 = s0 - f0 / d

    dsum = (total(s0 + h) - total(s0 - h)) / (2 * h)
    if abs(dsum) < 1e-6:
        raise DegenerateRoot(f"moment-sum derivative {dsum:.3e} vanishes at s0")
    return float(s0), float(dsum)
