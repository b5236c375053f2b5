# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: Legendre series summation.

The three-term recurrences run per point over up to ~1e5 coefficients,
which dominates series-path evaluation; this is the loop worth compiling.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def legendre_series(double[::1] coeffs, double[::1] u):
    """Sum c_l P_l(u) and c_l P_l'(u) by forward recurrence.

    Returns (values, derivatives) as float64 arrays matching ``u``.
    """
    cdef Py_ssize_t n = u.shape[0]
    cdef Py_ssize_t lmax = coeffs.shape[0] - 1
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out_v = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out_d = np.empty(n, dtype=np.float64)
    cdef double[::1] vv = out_v
    cdef double[::1] dd = out_d
    cdef Py_ssize_t i, l
    cdef double x, pm, pc, pn, dm, dc, dn, s, ds, cl

    for i in range(n):
        x = u[i]
        pm = 1.0          # P_0
        dm = 0.0
        s = coeffs[0] * pm
        ds = 0.0
        if lmax >= 1:
            pc = x        # P_1
            dc = 1.0
            s += coeffs[1] * pc
            ds += coeffs[1] * dc
            for l in range(1, lmax):
                cl = <double> l
                pn = ((2.0 * cl + 1.0) * x * pc - cl * pm) / (cl + 1.0)
                dn = dm + (2.0 * cl + 1.0) * pc
                s += coeffs[l + 1] * pn
                ds += coeffs[l + 1] * dn
                pm = pc
                pc = pn
                dm = dc
                dc = dn
        vv[i] = s
        dd[i] = ds
    return out_v, out_d
