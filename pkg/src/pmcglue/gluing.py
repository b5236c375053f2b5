"""Assembly of the glued sphere-train surface.

The profile is built piecewise in increasing x0: for each neck, the two
sphere caps are blended into the (displaced) catenoid over the annulus
where the distance to the neck's flat point lies in [rho'/2, rho'];
inside that the catenoid stands alone, outside the perturbed spheres do.
All pieces carry analytic first and second derivatives, so curvature is
exact up to spline interpolation of the sphere caps.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import EmbeddingFailure, InvalidArgument
from .moments import sphere_centers
from .necks import NeckSpec, catenoid_height, fit_neck, lambda_invert, lambda_map
from .profiles import ProfileCurve, validate_profile
from .spheres import SOURCE_PER_EPS, SphereGraph, perturbed_sphere

REGION_SPHERE, REGION_TRANSITION, REGION_NECK = 0, 1, 2
REGION_NAMES = {REGION_SPHERE: "sphere", REGION_TRANSITION: "transition", REGION_NECK: "neck"}

#: refinement target: arc spacing <= eps/SAMPLES_PER_EPS inside the neck zone
SAMPLES_PER_EPS = 64


def smooth_step(y):
    """psi: 0 for y <= 0, 1 for y >= 1, exp-smooth in between."""
    y = np.asarray(y, dtype=float)
    out = np.zeros_like(y)
    out[y >= 1.0] = 1.0
    mid = (y > 0.0) & (y < 1.0)
    ym = y[mid]
    a = np.exp(-1.0 / ym)
    b = np.exp(-1.0 / (1.0 - ym))
    out[mid] = a / (a + b)
    return out if out.ndim else float(out)


def smooth_step_d1(y, h: float = 1e-6):
    yp = smooth_step(np.asarray(y) + h)
    ym = smooth_step(np.asarray(y) - h)
    return (yp - ym) / (2 * h)


def smooth_step_d2(y, h: float = 1e-5):
    yp = smooth_step(np.asarray(y) + h)
    y0 = smooth_step(np.asarray(y))
    ym = smooth_step(np.asarray(y) - h)
    return (yp - 2 * y0 + ym) / h**2


@dataclass(frozen=True)
class Configuration:
    """Gluing parameters; neck scales derive from sigma via Lambda^{-1}."""

    K: int
    s: float
    sigma: np.ndarray
    delta: np.ndarray
    r: float
    max_eps_over_r2: float = 1e4

    def __post_init__(self):
        object.__setattr__(self, "sigma", np.asarray(self.sigma, dtype=float))
        object.__setattr__(self, "delta", np.asarray(self.delta, dtype=float))
        if self.K < 1:
            raise InvalidArgument("need K >= 1")
        if self.sigma.shape != (self.K - 1,) or self.delta.shape != (self.K - 1,):
            raise InvalidArgument("sigma and delta need K-1 entries")
        if self.K > 1 and np.any(self.sigma <= 0):
            raise InvalidArgument("gluing needs positive separations sigma")
        if self.r <= 0:
            raise InvalidArgument("r must be positive")

    @staticmethod
    def from_eps(K: int, s: float, eps, delta, r: float, **kw) -> "Configuration":
        eps = np.asarray(eps, dtype=float)
        sigma = np.array([lambda_map(e) for e in eps]) if K > 1 else np.zeros(0)
        return Configuration(K=K, s=s, sigma=sigma, delta=np.asarray(delta, float), r=r, **kw)

    def neck_scales(self) -> np.ndarray:
        return np.array([lambda_invert(s) for s in self.sigma])

    def centers(self) -> np.ndarray:
        return sphere_centers(self.s, self.K, self.sigma)


@dataclass
class GluedSurface:
    """Assembled profile with per-sample region labels and build records."""

    profile: ProfileCurve
    region_kind: np.ndarray
    region_index: np.ndarray
    config: Configuration
    necks: list
    graphs: list
    centers: np.ndarray
    eps: np.ndarray

    def sphere_mask(self, j: int) -> np.ndarray:
        return (self.region_kind == REGION_SPHERE) & (self.region_index == j)

    def neck_mask(self, j: int) -> np.ndarray:
        return (self.region_kind == REGION_NECK) & (self.region_index == j)

    def transition_mask(self, j: int) -> np.ndarray:
        return (self.region_kind == REGION_TRANSITION) & (self.region_index == j)

    def p_flats(self) -> np.ndarray:
        return np.array([nk.p_flat for nk in self.necks])

    def neck_distance(self) -> np.ndarray:
        """Distance of each sample to the nearest undisplaced flat point."""
        if not self.necks:
            return np.full(self.profile.n, np.inf)
        x0, rho = self.profile.x0, self.profile.rho
        d = np.full(self.profile.n, np.inf)
        for nk in self.necks:
            d = np.minimum(d, np.hypot(x0 - nk.p_flat, rho))
        return d

    def cell_masses(self) -> np.ndarray:
        """Trapezoid cell measures 2*pi*rho*dt for surface integrals."""
        t, rho = self.profile.t, self.profile.rho
        w = np.zeros_like(t)
        dt = np.diff(t)
        w[:-1] += dt / 2
        w[1:] += dt / 2
        return 2 * np.pi * rho * w


def _neck_window(eps: float, rho_prime: float):
    """Radii [r_lo, r_hi] where the neck-curve distance crosses rho'/2, rho'."""

    def d(r):
        return np.hypot(r, catenoid_height(eps, np.asarray(r)))

    r_hi = brentq(lambda r: d(r) - rho_prime, eps, rho_prime)
    if d(eps * (1 + 1e-12)) < 0.5 * rho_prime:
        r_lo = brentq(lambda r: d(r) - 0.5 * rho_prime, eps, r_hi)
    else:
        r_lo = 1.02 * eps  # degenerate regime: waist wider than rho'/2
    if r_lo >= r_hi:
        raise EmbeddingFailure("neck blending window collapsed")
    return float(r_lo), float(r_hi)


class _PieceList:
    """Accumulates parametric pieces and concatenates into one ProfileCurve."""

    def __init__(self):
        self.parts = []

    def add(self, kind, index, x0, rho, dx0_dp, drho_dp, d2x0_dp, d2rho_dp, p):
        """Arrays ordered along the traversal; p = the piece's parameter."""
        sig = np.hypot(dx0_dp, drho_dp)
        sig_p = np.gradient(sig, p, edge_order=2)
        d2x = (d2x0_dp * sig - dx0_dp * sig_p) / sig**3
        d2r = (d2rho_dp * sig - drho_dp * sig_p) / sig**3
        ds = np.concatenate([[0.0], np.cumsum((sig[1:] + sig[:-1]) / 2 * np.diff(p))])
        self.parts.append(
            dict(
                kind=kind,
                index=index,
                x0=x0,
                rho=rho,
                dx0=dx0_dp / sig,
                drho=drho_dp / sig,
                d2x0=d2x,
                d2rho=d2r,
                s=ds,
            )
        )

    def assemble(self, config) -> tuple[ProfileCurve, np.ndarray, np.ndarray]:
        xs, rs, dxs, drs, d2xs, d2rs, ts, kinds, idxs = [], [], [], [], [], [], [], [], []
        t0 = 0.0
        for ip, part in enumerate(self.parts):
            dup = ip > 0 and (
                abs(part["x0"][0] - self.parts[ip - 1]["x0"][-1])
                + abs(part["rho"][0] - self.parts[ip - 1]["rho"][-1])
                < 1e-12
            )
            if ip > 0 and not dup:
                # non-shared joint: account for the short gap between pieces
                t0 += np.hypot(
                    part["x0"][0] - self.parts[ip - 1]["x0"][-1],
                    part["rho"][0] - self.parts[ip - 1]["rho"][-1],
                )
            sl = slice(1, None) if dup else slice(None)
            xs.append(part["x0"][sl])
            rs.append(part["rho"][sl])
            dxs.append(part["dx0"][sl])
            drs.append(part["drho"][sl])
            d2xs.append(part["d2x0"][sl])
            d2rs.append(part["d2rho"][sl])
            ts.append(part["s"][sl] + t0)
            m = len(part["x0"][sl])
            kinds.append(np.full(m, part["kind"], dtype=np.int8))
            idxs.append(np.full(m, part["index"], dtype=np.int16))
            t0 += part["s"][-1]
        x0 = np.concatenate(xs)
        profile = ProfileCurve(
            t=np.concatenate(ts),
            x0=x0,
            rho=np.concatenate(rs),
            dx0=np.concatenate(dxs),
            drho=np.concatenate(drs),
            outward_sign=-1,
            d2x0=np.concatenate(d2xs),
            d2rho=np.concatenate(d2rs),
        )
        return profile, np.concatenate(kinds), np.concatenate(idxs)


def _sphere_cap_graph(curve: ProfileCurve, pole: str, reach: float):
    from .necks import _cap_spline

    return _cap_spline(curve, pole, reach)


def glue(config: Configuration, l_max: int | None = None, n: int = 512) -> GluedSurface:
    """Build the glued surface for the given configuration."""
    centers = config.centers()
    if config.K == 1:
        from .profiles import sphere_profile

        prof = sphere_profile(config.s, n).reversed()
        kinds = np.full(prof.n, REGION_SPHERE, dtype=np.int8)
        idxs = np.zeros(prof.n, dtype=np.int16)
        return GluedSurface(
            profile=prof,
            region_kind=kinds,
            region_index=idxs,
            config=config,
            necks=[],
            graphs=[],
            centers=centers,
            eps=np.zeros(0),
        )

    eps = config.neck_scales()
    if np.max(eps) > config.max_eps_over_r2 * config.r**2:
        raise InvalidArgument(
            f"derived eps {np.max(eps):.3e} exceeds {config.max_eps_over_r2} * r^2"
        )
    if np.any(np.abs(config.delta) > 0.5 * eps**0.75):
        raise InvalidArgument("neck displacements must satisfy |delta| < rho'/2")

    graphs, profiles = [], []
    for j in range(config.K):
        ep = SOURCE_PER_EPS * eps[j] if j < config.K - 1 else 0.0
        em = SOURCE_PER_EPS * eps[j - 1] if j > 0 else 0.0
        g, prof = perturbed_sphere(
            j, centers[j], ep, em, l_max=l_max, n=n, interior=(0 < j < config.K - 1)
        )
        graphs.append(g)
        profiles.append(prof)

    necks = []
    for j in range(config.K - 1):
        spec = fit_neck(
            profiles[j],
            profiles[j + 1],
            gap_center=0.5 * (centers[j] + centers[j + 1]),
            sigma_k=config.sigma[j],
            k=j,
            eps_hint=eps[j],
        )
        if not (centers[j] < spec.p_flat < centers[j + 1]):
            raise EmbeddingFailure("fitted flat point escaped the gap")
        necks.append(
            NeckSpec(
                k=j,
                eps_k=spec.eps_k,
                p_flat=spec.p_flat,
                delta_k=float(config.delta[j]),
                rho_prime=spec.rho_prime,
                mismatch=spec.mismatch,
            )
        )

    pieces = _PieceList()
    windows = [_neck_window(nk.eps_k, nk.rho_prime) for nk in necks]

    for j in range(config.K):
        prof = profiles[j]
        # traversal order: increasing x0 = reversed sphere profile
        x0 = prof.x0[::-1]
        rho = prof.rho[::-1]
        dx0 = -prof.dx0[::-1]
        drho = -prof.drho[::-1]
        d2x0 = prof.d2x0[::-1]
        d2rho = prof.d2rho[::-1]
        t = (prof.t[-1] - prof.t)[::-1]

        keep = np.ones(len(x0), dtype=bool)
        if j > 0:  # minus side faces neck j-1
            r_hi = windows[j - 1][1] * (1.0 + 1e-12)
            i = 0
            while i < len(x0) and rho[i] <= r_hi:
                keep[i] = False
                i += 1
        if j < config.K - 1:  # plus side faces neck j
            r_hi = windows[j][1] * (1.0 + 1e-12)
            i = len(x0) - 1
            while i >= 0 and rho[i] <= r_hi:
                keep[i] = False
                i -= 1
        xs, rs = x0[keep], rho[keep]
        if len(xs) < 8:
            raise EmbeddingFailure("sphere region vanished; eps too large")

        if j > 0:
            _add_transition(pieces, necks[j - 1], windows[j - 1], profiles[j], "right")
        pieces.add(
            REGION_SPHERE,
            j,
            xs,
            rs,
            dx0[keep],
            drho[keep],
            d2x0[keep],
            d2rho[keep],
            t[keep],
        )
        if j < config.K - 1:
            # left transition and neck core come after this sphere
            _add_transition(pieces, necks[j], windows[j], profiles[j], "left")
            _add_neck_core(pieces, necks[j], windows[j])

    profile, kinds, idxs = pieces.assemble(config)
    if np.any(np.diff(profile.x0) <= 0):
        raise EmbeddingFailure("assembled profile is not monotone in x0")
    if np.any(profile.rho[1:-1] <= 0):
        raise EmbeddingFailure("assembled profile touches the axis")
    validate_profile(profile)
    return GluedSurface(
        profile=profile,
        region_kind=kinds,
        region_index=idxs,
        config=config,
        necks=necks,
        graphs=graphs,
        centers=centers,
        eps=eps,
    )


def _catenoid_branch(nk: NeckSpec, r, side: str):
    """x0(r) and derivatives of the displaced catenoid branch."""
    eps = nk.eps_k
    sign = -1.0 if side == "left" else 1.0
    h = catenoid_height(eps, r)
    hp = eps / np.sqrt(np.maximum(r**2 - eps**2, 1e-300))
    hpp = -eps * r / np.maximum(r**2 - eps**2, 1e-300) ** 1.5
    x = nk.p_flat + nk.delta_k + sign * h
    return x, sign * hp, sign * hpp


def _add_transition(pieces: _PieceList, nk: NeckSpec, window, sphere_prof, side: str):
    """Blend the sphere cap into the catenoid branch over the annulus.

    ``side`` is "left" when the sphere sits at smaller x0 than the neck.
    """
    r_lo, r_hi = window
    eps, rp = nk.eps_k, nk.rho_prime
    m = max(48, int(np.ceil((r_hi - r_lo) / (eps / SAMPLES_PER_EPS) * 1.6)))
    m = min(m, 4000)
    r = np.linspace(r_lo, r_hi, m)

    pole = "plus" if side == "left" else "minus"
    spl = _sphere_cap_graph(sphere_prof, pole, min(12 * rp, 0.9))
    xs, xs1, xs2 = spl(r), spl(r, 1), spl(r, 2)
    xc, xc1, xc2 = _catenoid_branch(nk, r, side)

    # blend weight: 1 at the inner edge (pure neck), 0 at the outer edge
    h = catenoid_height(eps, r)
    hp = eps / np.sqrt(np.maximum(r**2 - eps**2, 1e-300))
    hpp = -eps * r / np.maximum(r**2 - eps**2, 1e-300) ** 1.5
    d = np.hypot(r, h)
    dp = (r + h * hp) / d
    dpp = (1.0 + hp**2 + h * hpp - dp**2) / d
    y = (d - 0.5 * rp) / (0.5 * rp)
    chi = 1.0 - smooth_step(y)
    chi1 = -smooth_step_d1(y) * dp / (0.5 * rp)
    chi2 = -(smooth_step_d2(y) * dp**2 / (0.5 * rp) ** 2 + smooth_step_d1(y) * dpp / (0.5 * rp))

    diff, diff1, diff2 = xc - xs, xc1 - xs1, xc2 - xs2
    x = xs + chi * diff
    x1 = xs1 + chi1 * diff + chi * diff1
    x2 = xs2 + chi2 * diff + 2 * chi1 * diff1 + chi * diff2

    if side == "left":
        # traversal runs from the sphere (outer radius) inward to the neck
        p = -r[::-1]
        pieces.add(
            REGION_TRANSITION,
            nk.k,
            x[::-1],
            r[::-1],
            -x1[::-1],
            -np.ones(m),
            x2[::-1],
            np.zeros(m),
            p,
        )
    else:
        pieces.add(REGION_TRANSITION, nk.k, x, r, x1, np.ones(m), x2, np.zeros(m), r)


def _add_neck_core(pieces: _PieceList, nk: NeckSpec, window):
    """Pure catenoid between the two inner window edges."""
    r_lo = window[0]
    eps = nk.eps_k
    xi_max = np.arccosh(max(r_lo / eps, 1.0 + 1e-12))
    s_max = eps * np.sinh(xi_max)
    m = max(64, int(np.ceil(2 * s_max / (eps / SAMPLES_PER_EPS))))
    m = min(m, 6000)
    s = np.linspace(-s_max, s_max, m)
    xi = np.arcsinh(s / eps)
    sech = 1.0 / np.cosh(xi)
    tanh = np.tanh(xi)
    pieces.add(
        REGION_NECK,
        nk.k,
        nk.p_flat + nk.delta_k + eps * xi,
        eps * np.cosh(xi),
        sech,
        tanh,
        -(sech**2) * tanh / eps,
        sech**3 / eps,
        s,
    )
