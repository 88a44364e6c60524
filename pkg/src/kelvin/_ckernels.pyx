# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled field kernels; same contract as ``kelvin._pykernels``."""
import numpy as np

from libc.math cimport sqrt, NAN, M_PI


def kelvin_state(z, r, double f, double G, double nu):
    cdef double[::1] zv = np.ascontiguousarray(z, dtype=float).ravel()
    cdef double[::1] rv = np.ascontiguousarray(r, dtype=float).ravel()
    cdef Py_ssize_t n = zv.shape[0]
    if rv.shape[0] != n:
        raise ValueError("z and r must have the same number of points")
    out_arr = np.empty((10, n))
    cdef double[:, ::1] out = out_arr
    cdef double k = f / (8.0 * M_PI * (1.0 - nu))
    cdef double c = f / (16.0 * M_PI * G * (1.0 - nu))
    cdef double q = 1.0 - 2.0 * nu
    cdef double zz, rr, z2, r2, rho2, rho, ir3, ir5
    cdef Py_ssize_t i, j
    for i in range(n):
        zz = zv[i]
        rr = rv[i]
        z2 = zz * zz
        r2 = rr * rr
        rho2 = z2 + r2
        if rho2 == 0.0:
            for j in range(10):
                out[j, i] = NAN
            continue
        rho = sqrt(rho2)
        ir3 = 1.0 / (rho2 * rho)
        ir5 = ir3 / rho2
        out[0, i] = -k * (3.0 * z2 * zz * ir5 + q * zz * ir3)
        out[1, i] = -k * (3.0 * zz * r2 * ir5 - q * zz * ir3)
        out[2, i] = k * q * zz * ir3
        out[3, i] = -k * (3.0 * z2 * rr * ir5 + q * rr * ir3)
        out[4, i] = -c * (4.0 * (1.0 - nu) * z2 * zz + (1.0 - 4.0 * nu) * zz * r2) * ir5
        out[5, i] = c * (z2 * zz - 2.0 * zz * r2) * ir5
        out[6, i] = c * zz * ir3
        out[7, i] = -c * (2.0 * (2.0 - nu) * z2 * rr + q * r2 * rr) * ir5
        out[8, i] = c * ((3.0 - 4.0 * nu) / rho + z2 * ir3)
        out[9, i] = c * zz * rr * ir3
    return out_arr


def green_tensor(d, double G, double nu):
    cdef double[:, ::1] dv = np.ascontiguousarray(d, dtype=float).reshape(-1, 3)
    cdef Py_ssize_t n = dv.shape[0]
    out_arr = np.empty((n, 3, 3))
    cdef double[:, :, ::1] U = out_arr
    cdef double c = 1.0 / (16.0 * M_PI * G * (1.0 - nu))
    cdef double rho2, rho, a, b
    cdef Py_ssize_t p, i, j
    for p in range(n):
        rho2 = dv[p, 0] * dv[p, 0] + dv[p, 1] * dv[p, 1] + dv[p, 2] * dv[p, 2]
        if rho2 == 0.0:
            for i in range(3):
                for j in range(3):
                    U[p, i, j] = NAN
            continue
        rho = sqrt(rho2)
        a = c * (3.0 - 4.0 * nu) / rho
        b = c / (rho2 * rho)
        for i in range(3):
            for j in range(3):
                U[p, i, j] = b * (dv[p, i] * dv[p, j])
            U[p, i, i] += a
    return out_arr
