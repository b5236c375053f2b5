"""Pure-numpy fallback for the compiled kernels.

Vectorizes over evaluation points; the coefficient loop stays in Python,
so this is the slow path for very long series.
"""

import numpy as np


def legendre_series(coeffs, u):
    """Sum c_l P_l(u) and c_l P_l'(u) by forward recurrence."""
    coeffs = np.asarray(coeffs, dtype=float)
    u = np.asarray(u, dtype=float)
    lmax = coeffs.shape[0] - 1
    pm = np.ones_like(u)
    dm = np.zeros_like(u)
    val = coeffs[0] * pm
    der = np.zeros_like(u)
    if lmax >= 1:
        pc = u.copy()
        dc = np.ones_like(u)
        val = val + coeffs[1] * pc
        der = der + coeffs[1] * dc
        for l in range(1, lmax):
            pn = ((2.0 * l + 1.0) * u * pc - l * pm) / (l + 1.0)
            dn = dm + (2.0 * l + 1.0) * pc
            c = coeffs[l + 1]
            if c != 0.0:
                val += c * pn
                der += c * dn
            pm, pc = pc, pn
            dm, dc = dc, dn
    return val, der
