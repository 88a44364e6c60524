"""Strain nuclei assembled from finite differences of the Green displacement."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from kelvin.fields import green_displacement
from kelvin.material import DEFAULT_MATERIAL, IsotropicElastic

ARM_RELATIVE = 1e-4


class NucleusAccuracyError(ValueError):
    """Field point too close to the nucleus for the finite arm length."""


def _unit(v, what):
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if not np.isfinite(n) or n == 0.0:
        raise ValueError(f"{what} must be a finite nonzero vector")
    return v / n


@dataclass(frozen=True)
class DoubletSpec:
    """Forces ``+f d`` at ``eps a / 2`` and ``-f d`` at ``-eps a / 2``.

    ``eps = None`` picks ``1e-4 * |x|`` at each field point.  The pair has
    no moment when ``d`` is parallel to ``a``.
    """

    direction: tuple = (1.0, 0.0, 0.0)
    arm: tuple = (1.0, 0.0, 0.0)
    eps: float | None = None
    f: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "direction", tuple(_unit(self.direction, "force direction")))
        object.__setattr__(self, "arm", tuple(_unit(self.arm, "arm direction")))
        if self.eps is not None and not self.eps > 0:
            raise ValueError("arm length must be positive")

    @property
    def has_moment(self) -> bool:
        return abs(abs(float(np.dot(self.direction, self.arm))) - 1.0) > 1e-12


def doublet_displacement(spec: DoubletSpec, x, m: IsotropicElastic | None = None) -> np.ndarray:
    """``[u(x; +f at eps a/2) + u(x; -f at -eps a/2)] / eps``, i.e. ``-f d_a u`` as eps -> 0."""
    m = DEFAULT_MATERIAL if m is None else m
    x = np.asarray(x, dtype=float)
    rho = np.linalg.norm(x, axis=-1)
    eps = ARM_RELATIVE * rho if spec.eps is None else np.full(rho.shape, spec.eps)
    if np.any(rho < 10.0 * eps):
        raise NucleusAccuracyError("field point closer than 10 arm lengths to the nucleus")
    a = np.asarray(spec.arm)
    d = np.asarray(spec.direction)
    off = 0.5 * eps[..., None] * a
    up = green_displacement(x - off, d, m)
    um = green_displacement(x + off, d, m)
    return spec.f * (up - um) / eps[..., None]


def richardson_ratio(spec: DoubletSpec, x, m: IsotropicElastic | None = None) -> float:
    """``|D(eps) - D(eps/2)| / |D(eps/2) - D(eps/4)|``; close to 4 in the asymptotic range."""
    x = np.asarray(x, dtype=float)
    eps = spec.eps if spec.eps is not None else 1e-2 * float(np.linalg.norm(x))
    vals = [doublet_displacement(DoubletSpec(spec.direction, spec.arm, eps / k, spec.f), x, m)
            for k in (1, 2, 4)]
    return float(np.linalg.norm(vals[0] - vals[1]) / np.linalg.norm(vals[1] - vals[2]))


def dilatation_center(x, strength: float = 1.0, m: IsotropicElastic | None = None,
                      axes=None, eps: float | None = None) -> np.ndarray:
    """Sum of three mutually orthogonal doublets without moment.

    The limit is ``u = strength (1 - 2 nu) x / (8 pi G (1 - nu) rho^3)``:
    radial, ``rho^-2`` in magnitude and divergence free.
    """
    axes = np.eye(3) if axes is None else np.asarray(axes, dtype=float)
    x = np.asarray(x, dtype=float)
    total = np.zeros_like(x)
    for e in axes:
        total = total + doublet_displacement(DoubletSpec(e, e, eps, strength), x, m)
    return total


def dilatation_center_closed_form(x, strength: float = 1.0,
                                  m: IsotropicElastic | None = None) -> np.ndarray:
    m = DEFAULT_MATERIAL if m is None else m
    x = np.asarray(x, dtype=float)
    rho = np.linalg.norm(x, axis=-1)[..., None]
    return strength * (1.0 - 2.0 * m.nu) * x / (8.0 * math.pi * m.G * (1.0 - m.nu) * rho**3)


def radial_deviation(u, x) -> np.ndarray:
    """Angle in radians between ``u`` and the position ``x``."""
    u, x = np.asarray(u, float), np.asarray(x, float)
    cross = np.linalg.norm(np.cross(u, x), axis=-1)
    dot = np.sum(u * x, axis=-1)
    return np.arctan2(cross, np.abs(dot))
