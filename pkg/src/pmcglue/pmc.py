"""Prescribed-curvature functions F(p, N) and their directional derivatives.

Three kinds are supported: a parsed expression over the invariant
variables, the rotating-drop family C*(p0)^2, and the charged-film family
-C*<grad(phi), N> with an axisymmetric potential phi(p0, rho).  All are
invariant under rotations about the x0-axis by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgument
from .expressions import PMCExpr, eval_expr, parse_pmc

_NORM_TOL = 1e-12


@dataclass(frozen=True)
class PMCFunction:
    """Evaluable F(p, N); ``kind`` selects the family."""

    kind: str  # "expression" | "rotating_drop" | "charged_film"
    expr: PMCExpr | None = None
    C: float = 1.0
    phi: PMCExpr | None = None
    fd_step: float = 1e-6

    @staticmethod
    def from_expression(source: str | PMCExpr, fd_step: float = 1e-6) -> "PMCFunction":
        expr = parse_pmc(source) if isinstance(source, str) else source
        return PMCFunction(kind="expression", expr=expr, fd_step=fd_step)

    @staticmethod
    def rotating_drop(C: float, fd_step: float = 1e-6) -> "PMCFunction":
        return PMCFunction(kind="rotating_drop", C=float(C), fd_step=fd_step)

    @staticmethod
    def charged_film(C: float, phi: str | PMCExpr, fd_step: float = 1e-6) -> "PMCFunction":
        phi_expr = parse_pmc(phi) if isinstance(phi, str) else phi
        return PMCFunction(kind="charged_film", C=float(C), phi=phi_expr, fd_step=fd_step)

    def describe(self) -> dict:
        from .expressions import print_pmc

        if self.kind == "expression":
            return {"kind": self.kind, "expr": print_pmc(self.expr)}
        if self.kind == "rotating_drop":
            return {"kind": self.kind, "C": self.C}
        return {"kind": self.kind, "C": self.C, "phi": print_pmc(self.phi)}


def invariant_variables(p, N):
    """Map ambient (p, N) to (p0, rho, N0, Nrho); Nrho := 0 on the axis."""
    p = np.asarray(p, dtype=float)
    N = np.asarray(N, dtype=float)
    p0 = p[..., 0]
    rho = np.hypot(p[..., 1], p[..., 2])
    N0 = N[..., 0]
    with np.errstate(invalid="ignore", divide="ignore"):
        nr = np.where(rho > 0.0, (N[..., 1] * p[..., 1] + N[..., 2] * p[..., 2]) / np.where(rho > 0, rho, 1.0), 0.0)
    return p0, rho, N0, nr


def _phi_gradient(F: PMCFunction, p0, rho):
    """Central-difference gradient of the axisymmetric potential."""
    h = F.fd_step
    env = lambda a, b: {"p0": a, "rho": b, "N0": 0.0, "Nrho": 0.0}
    dphi_dp0 = (eval_expr(F.phi, env(p0 + h, rho)) - eval_expr(F.phi, env(p0 - h, rho))) / (2 * h)
    dphi_drho = (eval_expr(F.phi, env(p0, rho + h)) - eval_expr(F.phi, env(p0, rho - h))) / (2 * h)
    return dphi_dp0, dphi_drho


def eval_pmc(F: PMCFunction, p, N, check_norm: bool = True):
    """Evaluate F at point(s) p with unit normal(s) N.

    Accepts single 3-vectors or (..., 3) arrays; broadcasting applies.
    """
    p = np.asarray(p, dtype=float)
    N = np.asarray(N, dtype=float)
    if check_norm:
        nn = np.linalg.norm(N, axis=-1)
        if np.any(np.abs(nn - 1.0) > _NORM_TOL):
            raise InvalidArgument("N must be a unit vector (within 1e-12)")
    p0, rho, N0, nrho = invariant_variables(p, N)
    if F.kind == "rotating_drop":
        out = F.C * p0**2
    elif F.kind == "charged_film":
        dphi_dp0, dphi_drho = _phi_gradient(F, p0, rho)
        out = -F.C * (dphi_dp0 * N0 + dphi_drho * nrho)
    elif F.kind == "expression":
        out = eval_expr(F.expr, {"p0": p0, "rho": rho, "N0": N0, "Nrho": nrho})
    else:
        raise InvalidArgument(f"unknown PMCFunction kind {F.kind!r}")
    return float(out) if np.ndim(out) == 0 else np.asarray(out, dtype=float)


def eval_pmc_invariant(F: PMCFunction, p0, rho, N0, Nrho):
    """Evaluate directly from the invariant variables (vectorized fast path)."""
    if F.kind == "rotating_drop":
        p0 = np.asarray(p0, dtype=float)
        return F.C * p0**2
    if F.kind == "charged_film":
        dphi_dp0, dphi_drho = _phi_gradient(F, np.asarray(p0, float), np.asarray(rho, float))
        return -F.C * (dphi_dp0 * np.asarray(N0, float) + dphi_drho * np.asarray(Nrho, float))
    return eval_expr(F.expr, {"p0": p0, "rho": rho, "N0": N0, "Nrho": Nrho})


def pmc_derivatives(F: PMCFunction, p, N):
    """Central-difference derivatives (D1F, D2F) in the ambient slots.

    N-perturbations are taken in the ambient (unnormalized) sense; callers
    contract the result with tangential/normal directions themselves.
    """
    p = np.asarray(p, dtype=float)
    N = np.asarray(N, dtype=float)
    h = F.fd_step
    d1 = np.zeros(3)
    d2 = np.zeros(3)
    for i in range(3):
        e = np.zeros(3)
        e[i] = h
        d1[i] = (eval_pmc(F, p + e, N) - eval_pmc(F, p - e, N)) / (2 * h)
        d2[i] = (
            eval_pmc(F, p, N + e, check_norm=False) - eval_pmc(F, p, N - e, check_norm=False)
        ) / (2 * h)
    return d1, d2


def is_zero_function(F: PMCFunction) -> bool:
    """Cheap structural test for F identically zero (rotating_drop(0) etc.)."""
    if F.kind == "rotating_drop":
        return F.C == 0.0
    return False


def pmc_from_config(spec) -> PMCFunction:
    """Build a PMCFunction from a config value: source text or builtin dict."""
    if isinstance(spec, str):
        return PMCFunction.from_expression(spec)
    if isinstance(spec, dict):
        builtin = spec.get("builtin")
        if builtin == "rotating_drop":
            return PMCFunction.rotating_drop(spec["C"])
        if builtin == "charged_film":
            return PMCFunction.charged_film(spec["C"], spec["phi"])
        raise InvalidArgument(f"unknown builtin {builtin!r}")
    raise InvalidArgument("F must be an expression string or a builtin object")
