"""Pure numpy implementations of the hot field kernels.

These mirror ``_ckernels.pyx`` one-to-one and are used whenever the
compiled extension is unavailable or ``KELVIN_PURE_PYTHON`` is set.
"""
import numpy as np


def kelvin_state(z, r, f, G, nu):
    """Stress, strain and displacement of the Kelvin state on flat arrays.

    Returns a ``(10, n)`` array with rows
    ``s_zz, s_rr, s_pp, s_zr, E_zz, E_rr, E_pp, E_zr, u_z, u_r``.
    Points with ``rho == 0`` produce NaN.
    """
    z = np.ascontiguousarray(z, dtype=float).ravel()
    r = np.ascontiguousarray(r, dtype=float).ravel()
    if z.size != r.size:
        raise ValueError("z and r must have the same number of points")
    with np.errstate(divide="ignore", invalid="ignore"):
        return _state(z, r, f, G, nu)


def _state(z, r, f, G, nu):
    out = np.empty((10, z.size))
    rho2 = z * z + r * r
    rho = np.sqrt(rho2)
    ir3 = 1.0 / (rho2 * rho)
    ir5 = ir3 / rho2
    k = f / (8.0 * np.pi * (1.0 - nu))
    c = f / (16.0 * np.pi * G * (1.0 - nu))
    q = 1.0 - 2.0 * nu
    z2, r2 = z * z, r * r
    out[0] = -k * (3.0 * z2 * z * ir5 + q * z * ir3)
    out[1] = -k * (3.0 * z * r2 * ir5 - q * z * ir3)
    out[2] = k * q * z * ir3
    out[3] = -k * (3.0 * z2 * r * ir5 + q * r * ir3)
    out[4] = -c * (4.0 * (1.0 - nu) * z2 * z + (1.0 - 4.0 * nu) * z * r2) * ir5
    out[5] = c * (z2 * z - 2.0 * z * r2) * ir5
    out[6] = c * z * ir3
    out[7] = -c * (2.0 * (2.0 - nu) * z2 * r + q * r2 * r) * ir5
    out[8] = c * ((3.0 - 4.0 * nu) / rho + z2 * ir3)
    out[9] = c * z * r * ir3
    return out


def green_tensor(d, G, nu):
    """Displacement Green tensor ``U_ij`` for separation vectors ``d`` of shape ``(n, 3)``."""
    d = np.ascontiguousarray(d, dtype=float).reshape(-1, 3)
    rho2 = np.einsum("ni,ni->n", d, d)
    with np.errstate(divide="ignore", invalid="ignore"):
        rho = np.sqrt(rho2)
        c = 1.0 / (16.0 * np.pi * G * (1.0 - nu))
        a = c * (3.0 - 4.0 * nu) / rho
        b = c / (rho2 * rho)
        U = b[:, None, None] * (d[:, :, None] * d[:, None, :])
    U[:, [0, 1, 2], [0, 1, 2]] += a[:, None]
    return U
