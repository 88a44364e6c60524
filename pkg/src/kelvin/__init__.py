"""Kelvin point-load solution of isotropic elastostatics, derived stress-first."""
from kelvin.fields import (
    CylindricalStress,
    Displacement,
    PointLoad,
    StrainComponents,
    kelvin_displacement,
    kelvin_strain,
    kelvin_stress,
    love_displacement,
    trace_potential,
)
from kelvin.geometry import SingularPointError
from kelvin.kernels import BACKEND
from kelvin.material import IsotropicElastic, MaterialError

__all__ = [
    "BACKEND",
    "CylindricalStress",
    "Displacement",
    "IsotropicElastic",
    "MaterialError",
    "PointLoad",
    "SingularPointError",
    "StrainComponents",
    "kelvin_displacement",
    "kelvin_strain",
    "kelvin_stress",
    "love_displacement",
    "trace_potential",
]
