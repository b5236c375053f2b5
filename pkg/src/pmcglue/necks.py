"""Catenoidal neck fitting between perturbed spheres, and the sigma <-> eps map.

``fit_neck`` least-squares matches heights and slopes of the catenoid
graph x0 = p_flat +/- eps*arccosh(rho/eps) against the two sphere-side
graphs on the annulus rho in [rho'/2, rho'], rho' = eps^(3/4), by nested
golden-section over (eps, p_flat).  Running the fit between canonical
tangent unit spheres defines Lambda: sigma = Lambda(eps), cached on a
log grid with monotone interpolation; the inverse is a root solve on the
same interpolant so the pair is consistent to solver tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.interpolate import CubicSpline, PchipInterpolator
from scipy.optimize import brentq

from .errors import FitFailure, InvalidArgument, OutOfRange
from .profiles import ProfileCurve
from .spheres import SOURCE_PER_EPS, perturbed_sphere, translate_profile

EPS_DOMAIN = (1e-8, 0.45)
_N_ANNULUS = 12
_FIT_TOL = 1e-11


@dataclass(frozen=True)
class NeckSpec:
    """Fitted neck: waist scale, flat point, displacement, matching radius."""

    k: int
    eps_k: float
    p_flat: float
    delta_k: float
    rho_prime: float
    mismatch: float = 0.0


def catenoid_height(eps: float, rho: np.ndarray) -> np.ndarray:
    """Axial offset |x0 - center| of the catenoid branch at radius rho."""
    return eps * np.arccosh(np.maximum(rho / eps, 1.0))


def catenoid_slope(eps: float, rho: np.ndarray) -> np.ndarray:
    """d|x0 - center|/d rho on the branch (positive quantity)."""
    return eps / np.sqrt(np.maximum(rho**2 - eps**2, 1e-300))


def _cap_spline(curve: ProfileCurve, pole: str, reach: float):
    """Spline x0(rho) of the near-pole branch facing the gap.

    ``pole`` is "plus" for the +x0 end of the profile, "minus" for -x0.
    The branch is the contiguous run of samples adjacent to that pole on
    which the radius grows monotonically (the cap is a graph there).
    """
    x0, rho = curve.x0, curve.rho
    # profiles run from the +x0 end to -x0 or vice versa; start at the
    # sample nearest the requested pole
    if (pole == "plus") == (x0[0] > x0[-1]):
        xs, rs = x0, rho
    else:
        xs, rs = x0[::-1], rho[::-1]
    grow = np.nonzero(np.diff(rs) <= 0)[0]
    stop = grow[0] + 1 if len(grow) else len(rs)
    xs, rs = xs[:stop], rs[:stop]
    keep = rs <= reach
    xs, rs = xs[keep], rs[keep]
    if len(rs) < 8:
        raise InvalidArgument("profile does not resolve the matching annulus")
    spline = CubicSpline(rs, xs)
    spline.domain = (rs[0], rs[-1])
    return spline


def golden_minimize(f, a: float, b: float, tol: float, max_iter: int = 120):
    """Plain golden-section minimization on [a, b]."""
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a < tol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = c if fc < fd else d
    return x, min(fc, fd)


def _mismatch(left_spline, right_spline, eps: float, p_flat: float) -> float:
    """RMS height/slope mismatch over the matching annulus, both sides."""
    rho_prime = eps**0.75
    lo = max(0.5 * rho_prime, 1.02 * eps)
    hi = max(rho_prime, 1.3 * lo)
    r = np.geomspace(lo, hi, _N_ANNULUS)
    ch = catenoid_height(eps, r)
    cs = catenoid_slope(eps, r)
    total = 0.0
    for spline, sign in ((left_spline, -1.0), (right_spline, +1.0)):
        dom = getattr(spline, "domain", None)
        if dom is not None and (lo < dom[0] or hi > dom[1]):
            return float("inf")  # annulus not covered by the cap samples
        x_cat = p_flat + sign * ch
        s_cat = sign * cs
        dh = x_cat - spline(r)
        ds = s_cat - spline(r, 1)
        total += np.mean(dh**2 + (r * ds) ** 2)
    return float(np.sqrt(total / 2.0))


def fit_neck(
    left: ProfileCurve,
    right: ProfileCurve,
    gap_center: float,
    sigma_k: float,
    k: int = 0,
    eps_hint: float | None = None,
    enforce_bound: bool = True,
) -> NeckSpec:
    """Fit (eps, p_flat) for the neck between two facing perturbed spheres."""
    if sigma_k <= 0:
        raise InvalidArgument("need a positive gap sigma_k")
    if eps_hint is None:
        eps_hint = sigma_k / (2.0 * max(np.log(1.0 / sigma_k), 1.0))
    eps_lo, eps_hi = eps_hint / 12.0, min(eps_hint * 12.0, EPS_DOMAIN[1])

    reach = 12.0 * max(eps_hi, eps_hint) ** 0.75
    lsp = _cap_spline(left, "plus", min(reach, 0.9))
    rsp = _cap_spline(right, "minus", min(reach, 0.9))

    def best_pflat(eps):
        w = max(4.0 * eps, 0.75 * sigma_k, 1e-12)
        p, m = golden_minimize(
            lambda p_flat: _mismatch(lsp, rsp, eps, p_flat),
            gap_center - w,
            gap_center + w,
            tol=max(1e-14, 1e-8 * eps),
        )
        return p, m

    for _ in range(6):
        ln_e, m_val = golden_minimize(
            lambda le: best_pflat(np.exp(le))[1],
            np.log(eps_lo),
            np.log(eps_hi),
            tol=1e-9,
        )
        eps_fit = float(np.exp(ln_e))
        at_edge = eps_fit < eps_lo * 1.05 or eps_fit > eps_hi * 0.95
        if not at_edge:
            break
        eps_lo, eps_hi = eps_lo / 8.0, min(eps_hi * 8.0, EPS_DOMAIN[1])
        if eps_hi >= EPS_DOMAIN[1] and eps_lo <= EPS_DOMAIN[0]:
            break
    p_flat, mismatch = best_pflat(eps_fit)

    bound = 10.0 * eps_fit**1.5
    if enforce_bound and mismatch > bound:
        raise FitFailure(
            f"neck mismatch {mismatch:.3e} exceeds {bound:.3e} at eps={eps_fit:.3e}"
        )
    return NeckSpec(
        k=k,
        eps_k=eps_fit,
        p_flat=float(p_flat),
        delta_k=0.0,
        rho_prime=eps_fit**0.75,
        mismatch=mismatch,
    )


@lru_cache(maxsize=64)
def _canonical_pair(eps_source: float):
    src = SOURCE_PER_EPS * eps_source
    _, left = perturbed_sphere(0, 0.0, src, 0.0, l_max=200, n=256)
    _, right0 = perturbed_sphere(1, 0.0, 0.0, src, l_max=200, n=256)
    return left, right0


def _canonical_fit_sigma_to_eps(
    sigma: float, eps_source: float, enforce_bound: bool = True
) -> NeckSpec:
    """Fit between canonical unit spheres (centers 0 and 2+sigma)."""
    left, right0 = _canonical_pair(float(eps_source))
    right = translate_profile(right0, 2.0 + sigma)
    return fit_neck(
        left, right, 1.0 + 0.5 * sigma, sigma, eps_hint=eps_source, enforce_bound=enforce_bound
    )


def lambda_map_exact(eps: float) -> float:
    """sigma = Lambda(eps): the gap a scale-eps catenoid fits best.

    With the catenoid scale held at eps and the sphere sources tied to it,
    the matching mismatch is a smooth single-well function of sigma; its
    minimizer defines Lambda.
    """
    if not (EPS_DOMAIN[0] <= eps <= EPS_DOMAIN[1]):
        raise OutOfRange(f"eps {eps:.3e} outside {EPS_DOMAIN}")
    left, right0 = _canonical_pair(float(eps))

    def mism(sigma):
        right = translate_profile(right0, 2.0 + sigma)
        lsp = _cap_spline(left, "plus", 0.9)
        rsp = _cap_spline(right, "minus", 0.9)

        def of_pflat(p):
            return _mismatch(lsp, rsp, eps, p)

        gap_mid = 1.0 + 0.5 * sigma
        w = max(4.0 * eps, 0.75 * sigma)
        _, val = golden_minimize(of_pflat, gap_mid - w, gap_mid + w, tol=1e-6 * eps)
        return val

    guess = 2.0 * eps * max(np.log(1.0 / eps), 1.0)
    lo, hi = guess / 5.0, guess * 5.0
    for _ in range(8):
        ln_s, _ = golden_minimize(lambda q: mism(np.exp(q)), np.log(lo), np.log(hi), tol=5e-11)
        sigma = float(np.exp(ln_s))
        if lo * 1.05 < sigma < hi * 0.95:
            return sigma
        lo, hi = lo / 4.0, hi * 4.0
    raise OutOfRange(f"could not locate Lambda({eps:.3e})")


class LambdaMap:
    """Log-eps grid cache of Lambda with monotone interpolation both ways.

    ``map`` interpolates the table; ``invert`` root-solves the same
    interpolant, so the round trip is exact to solver tolerance.
    """

    def __init__(self, points_per_decade: int = 8):
        self.ppd = points_per_decade
        self._ln_eps: list[float] = []
        self._ln_sig: list[float] = []
        self._interp = None

    def _ensure(self, eps_lo: float, eps_hi: float):
        lo = max(eps_lo / 1.3, EPS_DOMAIN[0])
        hi = min(eps_hi * 1.3, EPS_DOMAIN[1])
        step = np.log(10.0) / self.ppd
        wanted = np.arange(np.floor(np.log(lo) / step), np.ceil(np.log(hi) / step) + 1) * step
        have = set(np.round(self._ln_eps, 12))
        new = sorted(w for w in wanted if np.round(w, 12) not in have)
        for ln_e in new:
            sig = lambda_map_exact(float(np.exp(ln_e)))
            self._ln_eps.append(float(ln_e))
            self._ln_sig.append(float(np.log(sig)))
        if new:
            order = np.argsort(self._ln_eps)
            self._ln_eps = list(np.asarray(self._ln_eps)[order])
            self._ln_sig = list(np.asarray(self._ln_sig)[order])
            if np.any(np.diff(self._ln_sig) <= 0):
                raise OutOfRange("Lambda table is not monotone")
            self._interp = PchipInterpolator(self._ln_eps, self._ln_sig)

    def map(self, eps: float) -> float:
        """sigma = Lambda(eps) from the cached monotone table."""
        if not (EPS_DOMAIN[0] <= eps <= EPS_DOMAIN[1]):
            raise OutOfRange(f"eps {eps:.3e} outside {EPS_DOMAIN}")
        self._ensure(eps, eps)
        return float(np.exp(self._interp(np.log(eps))))

    def invert(self, sigma: float) -> float:
        """eps = Lambda^{-1}(sigma) by bisection on the tabulated map."""
        if sigma <= 0:
            raise OutOfRange("sigma must be positive")
        guess = sigma / (2.0 * max(np.log(1.0 / sigma), 1.0))
        lo, hi = guess / 6.0, min(guess * 6.0, EPS_DOMAIN[1])
        for _ in range(12):
            self._ensure(lo, hi)
            f_lo = float(self._interp(np.log(lo))) - np.log(sigma)
            f_hi = float(self._interp(np.log(hi))) - np.log(sigma)
            if f_lo <= 0 <= f_hi:
                break
            if f_lo > 0:
                lo = max(lo / 3.0, EPS_DOMAIN[0])
            else:
                hi = min(hi * 3.0, EPS_DOMAIN[1])
        else:
            raise OutOfRange(f"sigma {sigma:.3e} outside the invertible range")
        f = lambda ln_e: float(self._interp(ln_e)) - np.log(sigma)
        ln_eps = brentq(f, np.log(lo), np.log(hi), xtol=1e-13, rtol=1e-15)
        return float(np.exp(ln_eps))


_LAMBDA = LambdaMap()


def lambda_map(eps: float) -> float:
    return _LAMBDA.map(eps)


def lambda_invert(sigma: float) -> float:
    return _LAMBDA.invert(sigma)
