"""Arc-length profile curves for surfaces of revolution about the x0-axis.

Conventions
-----------
A curve carries an orientation sign ``o`` such that the *outward* unit
normal of the revolved surface, restricted to the (x0, rho) half-plane,
is ``o * (drho, -dx0)``.  Mean curvature is reported with respect to the
*inward* normal, so the unit sphere has H = +2 and a catenoid has H = 0;
``normal_graph`` displaces along the outward normal, so a constant
positive graph over the unit sphere yields the sphere of radius 1 + c.

Constructors set ``o`` so the sign works out: ``sphere_profile`` runs
from the +x0 pole to the -x0 pole with o = +1; ``catenoid_profile`` runs
with x0 increasing and o = -1.  Reversing a curve flips ``o``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import (
    InvalidArgument,
    OverflowArgument,
    PoleSingularity,
    SelfIntersection,
)

ARC_TOL = 1e-10
POLE_TOL = 1e-12


@dataclass(frozen=True)
class ProfileCurve:
    """Sampled generating curve (t, x0, rho) with unit tangents.

    ``d2x0``/``d2rho`` hold exact arc-length second derivatives when the
    constructor knows them (analytic shapes, splined graphs); curvature
    falls back to finite differences otherwise.
    """

    t: np.ndarray
    x0: np.ndarray
    rho: np.ndarray
    dx0: np.ndarray
    drho: np.ndarray
    outward_sign: int = 1
    analytic_tag: str | None = None
    tag_params: tuple = ()
    d2x0: np.ndarray | None = None
    d2rho: np.ndarray | None = None

    @property
    def n(self) -> int:
        return len(self.t)

    def is_pole(self, i: int) -> bool:
        return self.rho[i] < POLE_TOL

    def normal_components(self):
        """Outward normal in the half-plane: (N0, Nrho) per sample."""
        o = self.outward_sign
        return o * self.drho, -o * self.dx0

    def points3d(self):
        """Samples embedded in the phi = 0 meridian plane."""
        z = np.zeros_like(self.x0)
        return np.stack([self.x0, self.rho, z], axis=-1)

    def normals3d(self):
        n0, nr = self.normal_components()
        z = np.zeros_like(n0)
        return np.stack([n0, nr, z], axis=-1)

    def reversed(self) -> "ProfileCurve":
        T = self.t[-1]
        kw = {}
        if self.d2x0 is not None:
            kw = dict(d2x0=self.d2x0[::-1].copy(), d2rho=self.d2rho[::-1].copy())
        return ProfileCurve(
            t=(T - self.t)[::-1].copy(),
            x0=self.x0[::-1].copy(),
            rho=self.rho[::-1].copy(),
            dx0=-self.dx0[::-1].copy(),
            drho=-self.drho[::-1].copy(),
            outward_sign=-self.outward_sign,
            analytic_tag=self.analytic_tag,
            tag_params=self.tag_params,
            **kw,
        )


def validate_profile(curve: ProfileCurve, arc_tol: float = ARC_TOL):
    if np.any(np.diff(curve.t) <= 0):
        raise InvalidArgument("t must be strictly increasing")
    if np.any(curve.rho < -POLE_TOL):
        raise InvalidArgument("rho must be non-negative")
    norm = curve.dx0**2 + curve.drho**2
    if np.max(np.abs(norm - 1.0)) > arc_tol:
        raise InvalidArgument("tangents are not arc-length normalized")


def sphere_profile(center_s: float, n: int) -> ProfileCurve:
    """Unit sphere centered at (center_s, 0, 0): x0 = c + cos t, rho = sin t."""
    if n < 16:
        raise InvalidArgument("need n >= 16 samples for a sphere profile")
    t = np.linspace(0.0, np.pi, n + 1)
    return ProfileCurve(
        t=t,
        x0=center_s + np.cos(t),
        rho=np.sin(t),
        dx0=-np.sin(t),
        drho=np.cos(t),
        outward_sign=1,
        analytic_tag="sphere",
        tag_params=(float(center_s),),
        d2x0=-np.cos(t),
        d2rho=-np.sin(t),
    )


def catenoid_profile(eps: float, center_x0: float, half_width: float, n: int) -> ProfileCurve:
    """Catenoid rho = eps*cosh((x0-c)/eps) sampled uniformly in arc length."""
    if eps <= 0 or half_width <= 0:
        raise InvalidArgument("eps and half_width must be positive")
    if half_width / eps > 700:
        raise OverflowArgument("half_width/eps > 700 overflows cosh")
    s_max = eps * np.sinh(half_width / eps)
    s = np.linspace(-s_max, s_max, n + 1)
    xi = np.arcsinh(s / eps)
    sech = 1.0 / np.cosh(xi)
    tanh = np.tanh(xi)
    return ProfileCurve(
        t=s - s[0],
        x0=center_x0 + eps * xi,
        rho=eps * np.cosh(xi),
        dx0=sech,
        drho=tanh,
        outward_sign=-1,
        analytic_tag="catenoid",
        tag_params=(float(eps), float(center_x0)),
        d2x0=-(sech**2) * tanh / eps,
        d2rho=sech**3 / eps,
    )


def _fd_weights(t):
    """Nonuniform 3-point first/second derivative weights for interior points."""
    hm = t[1:-1] - t[:-2]
    hp = t[2:] - t[1:-1]
    return hm, hp


def fd_derivatives(t: np.ndarray, y: np.ndarray):
    """Second-order first and second derivatives on a (possibly) nonuniform grid."""
    n = len(t)
    d1 = np.empty(n)
    d2 = np.empty(n)
    hm, hp = _fd_weights(t)
    ym, yc, yp = y[:-2], y[1:-1], y[2:]
    d1[1:-1] = (hm**2 * yp - hp**2 * ym + (hp**2 - hm**2) * yc) / (hm * hp * (hm + hp))
    d2[1:-1] = 2.0 * (hm * yp + hp * ym - (hm + hp) * yc) / (hm * hp * (hm + hp))
    # one-sided second-order at the ends
    for idx, sl in ((0, slice(0, 3)), (n - 1, slice(n - 3, n))):
        ts = t[sl] - t[idx]
        A = np.vander(ts, 3, increasing=True)
        c = np.linalg.solve(A, y[sl])
        d1[idx] = c[1]
        d2[idx] = 2.0 * c[2]
    return d1, d2


def _second_derivatives(curve: ProfileCurve):
    if curve.d2x0 is not None:
        return curve.d2x0, curve.d2rho
    _, d2x0 = fd_derivatives(curve.t, curve.x0)
    _, d2rho = fd_derivatives(curve.t, curve.rho)
    return d2x0, d2rho


def principal_curvatures(curve: ProfileCurve):
    """(kappa1, kappa2) per sample w.r.t. the inward normal.

    kappa2 at pole samples uses the umbilic limit kappa2 -> kappa1 when
    exact second derivatives are available; otherwise poles raise.
    """
    d2x0, d2rho = _second_derivatives(curve)
    o = curve.outward_sign
    k1 = o * (curve.dx0 * d2rho - curve.drho * d2x0)
    pole = curve.rho < POLE_TOL
    with np.errstate(divide="ignore", invalid="ignore"):
        k2 = -o * curve.dx0 / np.where(pole, 1.0, curve.rho)
    if np.any(pole):
        # umbilic limit when we know second derivatives, NaN otherwise;
        # the scalar accessors raise on NaN poles
        k2 = np.where(pole, k1 if curve.d2x0 is not None else np.nan, k2)
    return k1, k2


def mean_curvature_all(curve: ProfileCurve) -> np.ndarray:
    k1, k2 = principal_curvatures(curve)
    return k1 + k2


def mean_curvature(curve: ProfileCurve, at: int) -> float:
    """H = kappa1 + kappa2 at sample ``at`` (unit sphere: +2)."""
    if curve.is_pole(at) and curve.d2x0 is None:
        raise PoleSingularity(f"sample {at} is a pole of an untagged curve")
    return float(mean_curvature_all(curve)[at])


def second_fundamental_norm_sq(curve: ProfileCurve, at: int) -> float:
    """|B|^2 = kappa1^2 + kappa2^2 at sample ``at``."""
    if curve.is_pole(at) and curve.d2x0 is None:
        raise PoleSingularity(f"sample {at} is a pole of an untagged curve")
    k1, k2 = principal_curvatures(curve)
    return float(k1[at] ** 2 + k2[at] ** 2)


def second_fundamental_norm_sq_all(curve: ProfileCurve) -> np.ndarray:
    k1, k2 = principal_curvatures(curve)
    return k1**2 + k2**2


def _graph_values(curve: ProfileCurve, f) -> np.ndarray:
    if callable(f):
        vals = np.asarray([f(ti) for ti in curve.t], dtype=float)
    else:
        vals = np.asarray(f, dtype=float)
        if vals.shape != curve.t.shape:
            raise InvalidArgument("graph values must align with the samples")
    return vals


def displaced_coordinates(curve: ProfileCurve, f):
    """Coordinates of the normal graph (displacement f along the outward normal)."""
    vals = _graph_values(curve, f)
    n0, nr = curve.normal_components()
    return curve.x0 + vals * n0, curve.rho + vals * nr


def normal_graph(curve: ProfileCurve, f, n_out: int | None = None) -> ProfileCurve:
    """Displace by f along the outward normal, then re-sample to arc length."""
    vals = _graph_values(curve, f)
    if np.all(vals == 0.0):
        return curve
    a, b = displaced_coordinates(curve, vals)
    if np.any(b < -1e-9):
        raise SelfIntersection("graph pushed the profile through the axis")
    b = np.maximum(b, 0.0)
    sa = CubicSpline(curve.t, a)
    sb = CubicSpline(curve.t, b)

    # arc length of the displaced curve on a refined grid
    tf = np.linspace(curve.t[0], curve.t[-1], 4 * (curve.n - 1) + 1)
    speed = np.hypot(sa(tf, 1), sb(tf, 1))
    if np.min(speed) < 1e-8:
        raise SelfIntersection("parameter reversal detected in re-sampling")
    s_cum = np.concatenate([[0.0], np.cumsum((speed[1:] + speed[:-1]) / 2 * np.diff(tf))])

    m = n_out if n_out is not None else curve.n
    s_new = np.linspace(0.0, s_cum[-1], m)
    t_new = np.interp(s_new, s_cum, tf)
    t_new[0], t_new[-1] = curve.t[0], curve.t[-1]

    ap, bp = sa(t_new, 1), sb(t_new, 1)
    app, bpp = sa(t_new, 2), sb(t_new, 2)
    sig = np.hypot(ap, bp)
    # chain rule to arc-length parametrization
    sig_p = (ap * app + bp * bpp) / sig
    d2a = (app * sig - ap * sig_p) / sig**3
    d2b = (bpp * sig - bp * sig_p) / sig**3
    out = ProfileCurve(
        t=s_new,
        x0=sa(t_new),
        rho=np.maximum(sb(t_new), 0.0),
        dx0=ap / sig,
        drho=bp / sig,
        outward_sign=curve.outward_sign,
        analytic_tag=None,
        d2x0=d2a,
        d2rho=d2b,
    )
    validate_profile(out)
    return out


def graph_mean_curvature(curve: ProfileCurve, f) -> np.ndarray:
    """Mean curvature of the normal graph, evaluated at the original samples.

    Avoids re-sampling so Newton solvers keep a fixed grid; derivatives of
    the displaced coordinates are finite differences in the original t.
    Pole endpoints are handled by even/odd reflection of the profile.
    """
    vals = _graph_values(curve, f)
    a, b = displaced_coordinates(curve, vals)
    t = curve.t
    o = curve.outward_sign

    npad_s = 2 if curve.rho[0] < POLE_TOL else 0
    npad_e = 2 if curve.rho[-1] < POLE_TOL else 0

    def pad(arr, even: bool):
        left = arr[:0]
        right = arr[:0]
        if npad_s:
            left = arr[npad_s:0:-1] if even else 2 * arr[0] - arr[npad_s:0:-1]
        if npad_e:
            right = arr[-2 : -2 - npad_e : -1] if even else 2 * arr[-1] - arr[-2 : -2 - npad_e : -1]
        return np.concatenate([left, arr, right])

    # x0 reflects evenly about a pole, rho oddly; t extends linearly
    t_full = pad(t, False)
    da, d2a = fd_derivatives(t_full, pad(a, True))
    db, d2b = fd_derivatives(t_full, pad(b, False))
    sl = slice(npad_s, len(t_full) - npad_e if npad_e else None)
    da, d2a, db, d2b = da[sl], d2a[sl], db[sl], d2b[sl]

    sig = np.hypot(da, db)
    if np.min(sig) < 1e-10:
        raise SelfIntersection("graph derivative degenerated")
    k1 = o * (da * d2b - db * d2a) / sig**3
    pole = b < POLE_TOL
    with np.errstate(divide="ignore", invalid="ignore"):
        k2 = -o * da / (np.where(pole, 1.0, b) * sig)
    k2 = np.where(pole, k1, k2)
    return k1 + k2


def graph_normals(curve: ProfileCurve, f):
    """Outward normal components (N0, Nrho) of the graph at the original samples."""
    vals = _graph_values(curve, f)
    a, b = displaced_coordinates(curve, vals)
    da, _ = fd_derivatives(curve.t, a)
    db, _ = fd_derivatives(curve.t, b)
    sig = np.hypot(da, db)
    o = curve.outward_sign
    return o * db / sig, -o * da / sig


def hausdorff_distance(c1: ProfileCurve, c2: ProfileCurve) -> float:
    """Brute-force symmetric Hausdorff distance between sampled profiles."""
    p1 = np.stack([c1.x0, c1.rho], axis=1)
    p2 = np.stack([c2.x0, c2.rho], axis=1)
    d = np.linalg.norm(p1[:, None, :] - p2[None, :, :], axis=2)
    return max(d.min(axis=1).max(), d.min(axis=0).max())
