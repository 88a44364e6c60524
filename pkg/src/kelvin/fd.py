"""Central finite differences on meridian (z, r) and Cartesian fields."""
import numpy as np


def d_dz(fn, z, r, h):
    return (fn(z + h, r) - fn(z - h, r)) / (2.0 * h)


def d_dr(fn, z, r, h):
    return (fn(z, r + h) - fn(z, r - h)) / (2.0 * h)


def d2_dz2(fn, z, r, h):
    return (fn(z + h, r) - 2.0 * fn(z, r) + fn(z - h, r)) / (h * h)


def d2_dr2(fn, z, r, h):
    return (fn(z, r + h) - 2.0 * fn(z, r) + fn(z, r - h)) / (h * h)


def d2_dzdr(fn, z, r, h):
    return (fn(z + h, r + h) - fn(z + h, r - h) - fn(z - h, r + h) + fn(z - h, r - h)) / (4.0 * h * h)


def axisym_laplacian(fn, z, r, h):
    """``f_zz + f_rr + f_r / r`` for a phi-independent scalar."""
    return d2_dz2(fn, z, r, h) + d2_dr2(fn, z, r, h) + d_dr(fn, z, r, h) / r


def gradient(fn, x, h):
    """Gradient of ``fn: (n, 3) -> (n, ...)``; returns ``(n, 3, ...)``; ``h`` per point."""
    x = np.asarray(x, dtype=float)
    h = np.broadcast_to(np.asarray(h, dtype=float), x.shape[:1])
    cols = []
    for i in range(3):
        dx = np.zeros_like(x)
        dx[:, i] = h
        diff = fn(x + dx) - fn(x - dx)
        cols.append(diff / (2.0 * h.reshape((-1,) + (1,) * (diff.ndim - 1))))
    return np.stack(cols, axis=1)


def hessian(fn, x, h):
    """Second derivatives of ``fn: (n, 3) -> (n, ...)``; returns ``(n, 3, 3, ...)``."""
    x = np.asarray(x, dtype=float)
    h = np.broadcast_to(np.asarray(h, dtype=float), x.shape[:1])
    f0 = fn(x)
    hs = h.reshape((-1,) + (1,) * (f0.ndim - 1))
    out = np.empty((x.shape[0], 3, 3) + f0.shape[1:])
    for i in range(3):
        ei = np.zeros_like(x)
        ei[:, i] = h
        out[:, i, i] = (fn(x + ei) - 2.0 * f0 + fn(x - ei)) / hs**2
        for j in range(i + 1, 3):
            ej = np.zeros_like(x)
            ej[:, j] = h
            v = (fn(x + ei + ej) - fn(x + ei - ej) - fn(x - ei + ej) + fn(x - ei - ej)) / (4.0 * hs**2)
            out[:, i, j] = v
            out[:, j, i] = v
    return out
