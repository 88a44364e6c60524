"""Coordinate systems and frame bases used around a point load.

The load frame is an orthonormal triple ``(e1, e2, e3)`` with ``e1`` along
the load.  Cylindrical coordinates ``(z, r, phi)`` and spherical coordinates
``(rho, theta, phi)`` are measured from the load application point in that
frame, with the radial direction ``h(phi) = cos(phi) e2 + sin(phi) e3`` and
the azimuthal direction ``h'(phi) = -sin(phi) e2 + cos(phi) e3``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi


class SingularPointError(ValueError):
    """Raised when a field is evaluated at the load application point."""


@dataclass(frozen=True)
class CartesianPoint:
    x1: float
    x2: float
    x3: float

    def as_array(self) -> np.ndarray:
        """Shape ``(3,)``, or ``(..., 3)`` when the components are arrays."""
        return np.stack(np.broadcast_arrays(*(np.asarray(v, dtype=float)
                                              for v in (self.x1, self.x2, self.x3))), axis=-1)

    @classmethod
    def from_array(cls, x) -> "CartesianPoint":
        x = np.asarray(x, dtype=float)
        return cls(float(x[0]), float(x[1]), float(x[2]))


@dataclass(frozen=True)
class CylindricalTriple:
    z: float
    r: float
    phi: float = 0.0

    def __post_init__(self):
        if self.r < 0:
            raise ValueError(f"cylindrical radius must be >= 0, got {self.r}")


@dataclass(frozen=True)
class SphericalTriple:
    rho: float
    theta: float
    phi: float = 0.0


@dataclass(frozen=True)
class FrameBasis:
    """Local basis ``(e1, h, h')`` at azimuth ``phi``."""

    e1: np.ndarray
    h: np.ndarray
    h_prime: np.ndarray

    @classmethod
    def at(cls, phi: float, frame: np.ndarray | None = None) -> "FrameBasis":
        frame = load_frame() if frame is None else np.asarray(frame, dtype=float)
        e1, e2, e3 = frame
        c, s = np.cos(phi), np.sin(phi)
        return cls(e1.copy(), c * e2 + s * e3, -s * e2 + c * e3)

    def matrix(self) -> np.ndarray:
        """Rows are ``e1, h, h'``."""
        return np.stack([self.e1, self.h, self.h_prime])


def load_frame(axis=None) -> np.ndarray:
    """Right-handed orthonormal frame whose first row is the load axis.

    ``axis=None`` gives the identity frame.  Otherwise ``e2`` is built from
    the coordinate direction least aligned with ``axis``.
    """
    if axis is None:
        return np.eye(3)
    e1 = np.asarray(axis, dtype=float)
    norm = np.linalg.norm(e1)
    if not np.isfinite(norm) or norm == 0.0:
        raise ValueError("load axis must be a finite nonzero vector")
    e1 = e1 / norm
    trial = np.zeros(3)
    trial[np.argmin(np.abs(e1))] = 1.0
    e2 = trial - np.dot(trial, e1) * e1
    e2 /= np.linalg.norm(e2)
    e3 = np.cross(e1, e2)
    return np.stack([e1, e2, e3])


def cart_to_zrphi(x, frame=None, origin=None):
    """Vectorized Cartesian -> (z, r, phi) for points of shape ``(..., 3)``."""
    x = np.asarray(x, dtype=float)
    frame = load_frame() if frame is None else np.asarray(frame, dtype=float)
    d = x if origin is None else x - np.asarray(origin, dtype=float)
    local = d @ frame.T
    z = local[..., 0]
    r = np.hypot(local[..., 1], local[..., 2])
    phi = np.mod(np.arctan2(local[..., 2], local[..., 1]), TWO_PI)
    phi = np.where(r == 0.0, 0.0, phi)
    return z, r, phi


def zrphi_to_cart(z, r, phi, frame=None, origin=None):
    """Vectorized (z, r, phi) -> Cartesian points of shape ``(..., 3)``."""
    frame = load_frame() if frame is None else np.asarray(frame, dtype=float)
    z, r, phi = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (z, r, phi)))
    local = np.stack([z, r * np.cos(phi), r * np.sin(phi)], axis=-1)
    x = local @ frame
    if origin is not None:
        x = x + np.asarray(origin, dtype=float)
    return x


def cart_to_cyl(p: CartesianPoint, frame=None, origin=None) -> CylindricalTriple:
    z, r, phi = cart_to_zrphi(p.as_array(), frame, origin)
    return CylindricalTriple(float(z), float(r), float(phi))


def cyl_to_cart(c: CylindricalTriple, frame=None, origin=None) -> CartesianPoint:
    return CartesianPoint.from_array(zrphi_to_cart(c.z, c.r, c.phi, frame, origin))


def cyl_to_sph(c: CylindricalTriple) -> SphericalTriple:
    if c.z == 0.0 and c.r == 0.0:
        raise SingularPointError("the load application point has no spherical angles")
    return SphericalTriple(float(np.hypot(c.z, c.r)), float(np.arctan2(c.r, c.z)), c.phi)


def sph_to_cyl(s: SphericalTriple) -> CylindricalTriple:
    return CylindricalTriple(s.rho * np.cos(s.theta), s.rho * abs(np.sin(s.theta)), s.phi)


def sphere_normal(theta, phi, frame=None) -> np.ndarray:
    """Outer unit normal ``cos(theta) e1 + |sin(theta)| h(phi)``; broadcasts."""
    frame = load_frame() if frame is None else np.asarray(frame, dtype=float)
    theta, phi = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
    st = np.abs(np.sin(theta))
    local = np.stack([np.cos(theta), st * np.cos(phi), st * np.sin(phi)], axis=-1)
    return local @ frame


def cyl_stress_to_tensor(s, phi, frame=None) -> np.ndarray:
    """Assemble ``s1 e1e1 + s2 hh + s3 h'h' + s4 (e1h + he1)`` in Cartesian components.

    ``s`` is any object with attributes ``sigma1..sigma4`` (scalars or
    arrays broadcastable against ``phi``).  Returns shape ``(..., 3, 3)``.
    """
    frame = load_frame() if frame is None else np.asarray(frame, dtype=float)
    s1, s2, s3, s4, phi = np.broadcast_arrays(
        *(np.asarray(v, dtype=float) for v in (s.sigma1, s.sigma2, s.sigma3, s.sigma4, phi))
    )
    c, sn = np.cos(phi), np.sin(phi)
    e1 = np.broadcast_to(frame[0], phi.shape + (3,))
    h = c[..., None] * frame[1] + sn[..., None] * frame[2]
    hp = -sn[..., None] * frame[1] + c[..., None] * frame[2]

    def outer(a, b):
        return a[..., :, None] * b[..., None, :]

    return (
        s1[..., None, None] * outer(e1, e1)
        + s2[..., None, None] * outer(h, h)
        + s3[..., None, None] * outer(hp, hp)
        + s4[..., None, None] * (outer(e1, h) + outer(h, e1))
    )


def vector_to_cartesian(v_z, v_r, phi, frame=None) -> np.ndarray:
    """Meridian vector ``v_z e1 + v_r h(phi)`` in Cartesian components."""
    frame = load_frame() if frame is None else np.asarray(frame, dtype=float)
    v_z, v_r, phi = np.broadcast_arrays(*(np.asarray(a, float) for a in (v_z, v_r, phi)))
    local = np.stack([v_z, v_r * np.cos(phi), v_r * np.sin(phi)], axis=-1)
    return local @ frame
