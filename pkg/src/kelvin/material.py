"""Isotropic linear elasticity: parameters and constitutive maps."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class MaterialError(ValueError):
    pass


@dataclass(frozen=True)
class IsotropicElastic:
    """Shear modulus ``G`` and Poisson ratio ``nu``.

    ``nu`` is restricted to the open interval (-1, 1/2); the incompressible
    limit makes ``lambda`` and several closed forms singular.
    """

    G: float = 1.0
    nu: float = 0.25

    def __post_init__(self):
        if not np.isfinite(self.G) or self.G <= 0:
            raise MaterialError(f"shear modulus G must be > 0, got {self.G}")
        if not np.isfinite(self.nu) or not (-1.0 < self.nu < 0.5):
            raise MaterialError(f"Poisson ratio must satisfy -1 < nu < 1/2, got {self.nu}")

    @property
    def lam(self) -> float:
        return 2.0 * self.G * self.nu / (1.0 - 2.0 * self.nu)

    @property
    def mu(self) -> float:
        return self.G


DEFAULT_MATERIAL = IsotropicElastic(1.0, 0.25)


def lame_constants(m: IsotropicElastic) -> tuple[float, float]:
    return m.lam, m.mu


def strain_from_stress(S, m: IsotropicElastic):
    """``E = (S - nu/(1+nu) tr(S) I) / 2G``.

    Accepts a ``CylindricalStress`` (returns ``StrainComponents``) or an
    array of Cartesian tensors with shape ``(..., 3, 3)``.
    """
    from kelvin.fields import CylindricalStress, StrainComponents

    a = m.nu / (1.0 + m.nu)
    if isinstance(S, CylindricalStress):
        tr = S.sigma1 + S.sigma2 + S.sigma3
        k = 1.0 / (2.0 * m.G)
        return StrainComponents(
            E_zz=k * (S.sigma1 - a * tr),
            E_rr=k * (S.sigma2 - a * tr),
            E_phiphi=k * (S.sigma3 - a * tr),
            E_zr=k * S.sigma4,
        )
    S = np.asarray(S, dtype=float)
    tr = np.trace(S, axis1=-2, axis2=-1)
    return (S - a * tr[..., None, None] * np.eye(3)) / (2.0 * m.G)


def stress_from_strain(E, m: IsotropicElastic) -> np.ndarray:
    """Forward law ``S = 2G E + lambda tr(E) I`` for Cartesian tensors."""
    E = np.asarray(E, dtype=float)
    tr = np.trace(E, axis1=-2, axis2=-1)
    return 2.0 * m.G * E + m.lam * tr[..., None, None] * np.eye(3)
