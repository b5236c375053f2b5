"""Discrete linearized curvature operator, its spectrum, and Jacobi fields.

For rotation-invariant functions the linearization reduces to

    L f = f'' + (rho'/rho) f' + (|B|^2 + r^2 c1) f + r^2 c2 f'

on the arc-length profile, with c1 = <D1F, N> and c2 the tangential D2F
coefficient.  The Laplacian part is discretized in divergence (finite
volume) form, which is exactly self-adjoint with respect to the cell
masses 2*pi*rho*dt; a similarity transform by sqrt(mass) then yields a
symmetric tridiagonal matrix for spectral work.  Pole endpoints get the
natural zero-flux closure (the cell mass vanishes like h^2/8, which
reproduces the smooth-limit Delta f = 2 f'' at the pole).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import EigenSolveFailure, InvalidArgument
from .gluing import GluedSurface, REGION_NECK, REGION_SPHERE
from .pmc import PMCFunction, eval_pmc, is_zero_function
from .profiles import ProfileCurve, second_fundamental_norm_sq_all


@dataclass(frozen=True)
class DiscreteOperator:
    """Tridiagonal operator A (rows scaled by cell masses) plus metadata."""

    lower: np.ndarray  # (n-1,)
    diag: np.ndarray  # (n,)
    upper: np.ndarray  # (n-1,)
    masses: np.ndarray  # (n,) cell measures including 2*pi*rho
    t: np.ndarray

    @property
    def n(self) -> int:
        return len(self.diag)

    def apply(self, f: np.ndarray) -> np.ndarray:
        out = self.diag * f
        out[:-1] += self.upper * f[1:]
        out[1:] += self.lower * f[:-1]
        return out

    def symmetrized(self):
        """(d, e) of the similarity-transformed symmetric tridiagonal."""
        s = np.sqrt(self.masses)
        lo = self.lower * s[1:] / s[:-1]
        up = self.upper * s[:-1] / s[1:]
        return self.diag.copy(), 0.5 * (lo + up)


@dataclass(frozen=True)
class SpectralReport:
    eigenvalues: np.ndarray  # ascending by magnitude
    kernel_count: int
    threshold: float


def cell_masses(t: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Half-cell trapezoid measures of rho dt (without the 2 pi factor)."""
    n = len(t)
    m = np.zeros(n)
    h = np.diff(t)
    m[:-1] += h * (3 * rho[:-1] + rho[1:]) / 8.0
    m[1:] += h * (3 * rho[1:] + rho[:-1]) / 8.0
    return m


def _pmc_coefficients(F: PMCFunction, curve: ProfileCurve):
    """Vectorized c1 = <D1F, N>, c2 = -<D2F, T> along the profile."""
    pts = curve.points3d()
    nrm = curve.normals3d()
    tang = np.stack([curve.dx0, curve.drho, np.zeros_like(curve.dx0)], axis=-1)
    h = F.fd_step
    c1 = np.zeros(curve.n)
    c2 = np.zeros(curve.n)
    for i in range(3):
        e = np.zeros(3)
        e[i] = h
        d1 = (eval_pmc(F, pts + e, nrm, check_norm=False) - eval_pmc(F, pts - e, nrm, check_norm=False)) / (2 * h)
        d2 = (eval_pmc(F, pts, nrm + e, check_norm=False) - eval_pmc(F, pts, nrm - e, check_norm=False)) / (2 * h)
        c1 += np.asarray(d1) * nrm[:, i]
        c2 -= np.asarray(d2) * tang[:, i]
    return c1, c2


def linearized_operator(
    curve: ProfileCurve,
    F: PMCFunction | None = None,
    r: float = 0.0,
) -> DiscreteOperator:
    """Assemble the discrete L on the profile samples."""
    t, rho = curve.t, curve.rho
    n = len(t)
    if n < 3:
        raise InvalidArgument("need at least 3 samples")
    m = cell_masses(t, rho)
    h = np.diff(t)
    g = 0.5 * (rho[:-1] + rho[1:]) / h  # interface flux coefficients

    lower = g / m[1:]
    upper = g / m[:-1]
    diag = np.zeros(n)
    diag[:-1] -= g / m[:-1]
    diag[1:] -= g / m[1:]

    diag += second_fundamental_norm_sq_all(curve)

    if F is not None and r != 0.0 and not is_zero_function(F):
        c1, c2 = _pmc_coefficients(F, curve)
        diag += r**2 * c1
        # centered first derivative, tridiagonal part
        hm = np.concatenate([[h[0]], h])
        hp = np.concatenate([h, [h[-1]]])
        w_up = np.zeros(n)
        w_lo = np.zeros(n)
        w_up[1:-1] = hm[1:-1] / (hp[1:-1] * (hm[1:-1] + hp[1:-1]))
        w_lo[1:-1] = -hp[1:-1] / (hm[1:-1] * (hm[1:-1] + hp[1:-1]))
        diag[1:-1] += r**2 * c2[1:-1] * (hp[1:-1] - hm[1:-1]) / (hp[1:-1] * hm[1:-1])
        upper += r**2 * c2[:-1] * w_up[:-1]
        lower += r**2 * c2[1:] * w_lo[1:]

    return DiscreteOperator(lower=lower, diag=diag, upper=upper, masses=2 * np.pi * m, t=t)


def spectrum(op: DiscreteOperator, m: int, threshold: float = 0.1) -> SpectralReport:
    """The m smallest-magnitude eigenvalues of the symmetrized operator."""
    if m > op.n:
        raise InvalidArgument("m exceeds the matrix dimension")
    d, e = op.symmetrized()
    try:
        vals = eigh_tridiagonal(d, e, eigvals_only=True, lapack_driver="stev")
    except Exception as exc:  # pragma: no cover
        raise EigenSolveFailure(str(exc)) from exc
    order = np.argsort(np.abs(vals), kind="stable")
    smallest = vals[order[:m]]
    kernel = int(np.sum(np.abs(vals) <= threshold))
    return SpectralReport(eigenvalues=smallest, kernel_count=kernel, threshold=threshold)


def operator_for_surface(surface: GluedSurface, F: PMCFunction | None, r: float) -> DiscreteOperator:
    return linearized_operator(surface.profile, F, r)


def jacobi_sphere(k: int, surface: GluedSurface) -> np.ndarray:
    """Unit-L2 kernel field of sphere k: <e0, N> on its samples, else 0."""
    mask = surface.sphere_mask(k)
    if not np.any(mask):
        raise InvalidArgument(f"no sphere region {k}")
    n0, _ = surface.profile.normal_components()
    J = np.where(mask, n0, 0.0)
    w = surface.cell_masses()
    norm = np.sqrt(np.sum(w[mask] * J[mask] ** 2))
    return J / norm


def jacobi_neck(k: int, surface: GluedSurface) -> np.ndarray:
    """Axial-translation Jacobi field of neck k: <e0, N> there, else 0."""
    mask = surface.neck_mask(k)
    if not np.any(mask):
        raise InvalidArgument(f"no neck region {k}")
    n0, _ = surface.profile.normal_components()
    return np.where(mask, n0, 0.0)
