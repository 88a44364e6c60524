"""Closed-form Kelvin state of an infinite isotropic solid under a point load.

Every field function takes ``(point, load, m)``.  ``point`` may be a
``CylindricalTriple``, a ``CartesianPoint`` (converted through the load
frame), or a pair ``(z, r)`` of scalars or arrays measured in the load
frame.  Fields are singular at the load point, where
``SingularPointError`` is raised.

With ``k = f / (8 pi (1 - nu))`` the stress components are::

    s_zz = -k (3 z^3/rho^5 + (1-2nu) z/rho^3)
    s_rr = -k (3 z r^2/rho^5 - (1-2nu) z/rho^3)
    s_pp = +k (1-2nu) z/rho^3
    s_zr = -k (3 z^2 r/rho^5 + (1-2nu) r/rho^3)
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from kelvin import kernels
from kelvin.geometry import (
    CartesianPoint,
    CylindricalTriple,
    SingularPointError,
    cart_to_zrphi,
    load_frame,
    vector_to_cartesian,
)
from kelvin.material import DEFAULT_MATERIAL, IsotropicElastic


@dataclass(frozen=True)
class PointLoad:
    f: float = 1.0
    axis: tuple = (1.0, 0.0, 0.0)
    origin: tuple = (0.0, 0.0, 0.0)
    frame: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        axis = np.asarray(self.axis, dtype=float)
        n = np.linalg.norm(axis)
        if not np.isfinite(n) or n == 0.0:
            raise ValueError("load axis must be a finite nonzero vector")
        object.__setattr__(self, "axis", tuple(axis / n))
        object.__setattr__(self, "origin", tuple(np.asarray(self.origin, dtype=float)))
        object.__setattr__(self, "frame", load_frame(self.axis))


DEFAULT_LOAD = PointLoad()


def _scalarize(a):
    a = np.asarray(a)
    return float(a) if a.ndim == 0 else a


@dataclass(frozen=True)
class CylindricalStress:
    """``sigma1 = S_zz, sigma2 = S_rr, sigma3 = S_phiphi, sigma4 = S_zr``."""

    sigma1: float
    sigma2: float
    sigma3: float
    sigma4: float

    def stack(self) -> np.ndarray:
        return np.stack(np.broadcast_arrays(self.sigma1, self.sigma2, self.sigma3, self.sigma4))

    @property
    def trace(self):
        return self.sigma1 + self.sigma2 + self.sigma3

    def norm(self):
        # Frobenius norm of the full tensor; the shear pair counts twice.
        return np.sqrt(self.sigma1**2 + self.sigma2**2 + self.sigma3**2 + 2.0 * self.sigma4**2)

    def __add__(self, other: "CylindricalStress") -> "CylindricalStress":
        return CylindricalStress(*(a + b for a, b in zip(self.stack(), other.stack())))

    def scaled(self, s) -> "CylindricalStress":
        return CylindricalStress(*(s * a for a in self.stack()))


@dataclass(frozen=True)
class StrainComponents:
    E_zz: float
    E_rr: float
    E_phiphi: float
    E_zr: float

    def stack(self) -> np.ndarray:
        return np.stack(np.broadcast_arrays(self.E_zz, self.E_rr, self.E_phiphi, self.E_zr))

    def norm(self):
        return np.sqrt(self.E_zz**2 + self.E_rr**2 + self.E_phiphi**2 + 2.0 * self.E_zr**2)


@dataclass(frozen=True)
class Displacement:
    u_z: float
    u_r: float

    def stack(self) -> np.ndarray:
        return np.stack(np.broadcast_arrays(self.u_z, self.u_r))


@dataclass(frozen=True)
class HelmholtzPotentials:
    phi_pot: float
    w_pot: np.ndarray


def as_zr(point, load: PointLoad | None = None):
    """Resolve a point specification to ``(z, r)`` arrays in the load frame."""
    load = DEFAULT_LOAD if load is None else load
    if isinstance(point, CylindricalTriple):
        z, r = np.asarray(point.z, float), np.asarray(point.r, float)
    elif isinstance(point, CartesianPoint):
        z, r, _ = cart_to_zrphi(point.as_array(), load.frame, load.origin)
    else:
        z, r = (np.asarray(v, dtype=float) for v in point)
        z, r = np.broadcast_arrays(z, r)
        if np.any(r < 0):
            raise ValueError("cylindrical radius must be >= 0")
    if np.any((z == 0.0) & (r == 0.0)):
        raise SingularPointError("field evaluated at the load application point")
    return z, r


def _state(point, load, m):
    load = DEFAULT_LOAD if load is None else load
    m = DEFAULT_MATERIAL if m is None else m
    z, r = as_zr(point, load)
    out = kernels.kelvin_state(z, r, load.f, m.G, m.nu)
    return out.reshape((10,) + np.shape(z))


def alpha0(f: float, nu: float) -> float:
    return -f / (4.0 * np.pi * (1.0 - nu))


def beta0(f: float, nu: float) -> float:
    return -f * (1.0 - 2.0 * nu) / (8.0 * np.pi * (1.0 - nu))


def trace_potential(point, load: PointLoad | None = None, m: IsotropicElastic | None = None):
    """``alpha = tr(S) / (1 + nu) = alpha0 z / rho^3``."""
    load = DEFAULT_LOAD if load is None else load
    m = DEFAULT_MATERIAL if m is None else m
    z, r = as_zr(point, load)
    rho = np.hypot(z, r)
    return _scalarize(alpha0(load.f, m.nu) * z / rho**3)


def kelvin_stress(point, load=None, m=None) -> CylindricalStress:
    s = _state(point, load, m)
    return CylindricalStress(*(_scalarize(v) for v in s[0:4]))


def kelvin_strain(point, load=None, m=None) -> StrainComponents:
    s = _state(point, load, m)
    return StrainComponents(*(_scalarize(v) for v in s[4:8]))


def kelvin_displacement(point, load=None, m=None) -> Displacement:
    s = _state(point, load, m)
    return Displacement(*(_scalarize(v) for v in s[8:10]))


def misprinted_stress(point, load=None, m=None) -> CylindricalStress:
    """Kelvin stress with flipped (1-2nu) terms in s_zz, s_rr and s_zr.

    The s_zr term also carries ``z`` where ``r`` belongs.  This field is
    *not* balanced; the verification suites must reject it.
    """
    load = DEFAULT_LOAD if load is None else load
    m = DEFAULT_MATERIAL if m is None else m
    z, r = as_zr(point, load)
    rho = np.hypot(z, r)
    k = load.f / (8.0 * np.pi * (1.0 - m.nu))
    q = 1.0 - 2.0 * m.nu
    return CylindricalStress(
        _scalarize(-k * (3 * z**3 / rho**5 - q * z / rho**3)),
        _scalarize(-k * (3 * z * r**2 / rho**5 + q * z / rho**3)),
        _scalarize(k * q * z / rho**3),
        _scalarize(-k * (3 * z**2 * r / rho**5 - q * z / rho**3)),
    )


def kelvin_displacement_cartesian(x, load=None, m=None) -> np.ndarray:
    """Stress-first displacement ``u_z e1 + u_r h`` at Cartesian points ``(..., 3)``."""
    load = DEFAULT_LOAD if load is None else load
    m = DEFAULT_MATERIAL if m is None else m
    z, r, phi = cart_to_zrphi(x, load.frame, load.origin)
    if np.any((z == 0.0) & (r == 0.0)):
        raise SingularPointError("field evaluated at the load application point")
    out = kernels.kelvin_state(z, r, load.f, m.G, m.nu).reshape((10,) + np.shape(z))
    return vector_to_cartesian(out[8], out[9], phi, load.frame)


def _separation(x, load):
    d = np.asarray(x, dtype=float) - np.asarray(load.origin)
    rho = np.linalg.norm(d, axis=-1)
    if np.any(rho == 0.0):
        raise SingularPointError("field evaluated at the load application point")
    return d, rho


def love_displacement(x, load=None, m=None) -> np.ndarray:
    """Displacement in Lame form ``f e/(4 pi mu rho) - A Hess(rho) e``.

    ``A = (lambda + mu) f / (8 pi mu (lambda + 2 mu))`` and
    ``Hess(rho) = (I - d d^T / rho^2) / rho``.  Works on ``(..., 3)`` arrays.
    """
    load = DEFAULT_LOAD if load is None else load
    m = DEFAULT_MATERIAL if m is None else m
    lam, mu = m.lam, m.mu
    d, rho = _separation(x, load)
    e = np.asarray(load.axis)
    A = (lam + mu) * load.f / (8.0 * np.pi * mu * (lam + 2.0 * mu))
    d_e = d @ e
    hess_e = (e - d * (d_e / rho**2)[..., None]) / rho[..., None]
    return load.f * e / (4.0 * np.pi * mu * rho[..., None]) - A * hess_e


def helmholtz_potentials(x, load=None, m=None) -> HelmholtzPotentials:
    """Potential pair with ``u = grad(phi) + curl(w)`` and ``div w = 0``.

    ``phi = f.grad(rho) / (8 pi (lambda + 2 mu))`` and
    ``w = f x grad(rho) / (8 pi mu)``.
    """
    load = DEFAULT_LOAD if load is None else load
    m = DEFAULT_MATERIAL if m is None else m
    d, rho = _separation(x, load)
    fvec = load.f * np.asarray(load.axis)
    grad_rho = d / rho[..., None]
    phi = (grad_rho @ fvec) / (8.0 * np.pi * (m.lam + 2.0 * m.mu))
    w = np.cross(np.broadcast_to(fvec, grad_rho.shape), grad_rho) / (8.0 * np.pi * m.mu)
    return HelmholtzPotentials(_scalarize(phi), w)


def green_displacement(x, direction, m=None, origin=(0.0, 0.0, 0.0)) -> np.ndarray:
    """Displacement at ``x`` due to a unit force along ``direction`` applied at ``origin``."""
    m = DEFAULT_MATERIAL if m is None else m
    x = np.asarray(x, dtype=float)
    d = x - np.asarray(origin, dtype=float)
    if np.any(np.linalg.norm(d, axis=-1) == 0.0):
        raise SingularPointError("field evaluated at the load application point")
    U = kernels.green_tensor(d.reshape(-1, 3), m.G, m.nu)
    u = U @ np.asarray(direction, dtype=float)
    return u.reshape(x.shape)
