"""Residual operators and integral identities for candidate elastic states.

Residuals are always normalized by a local field scale so that one
tolerance applies across the ``rho^-2`` decay:

* first-order stress residuals (balance) by ``|S|/rho`` in Cartesian form
  and by ``|S|`` in the ``r``-weighted meridian form;
* second-order stress residuals (compatibility) by ``|S|/rho^2``;
* displacement second derivatives (Navier) by ``G |u| / rho^2``.

``|S|`` is the Frobenius norm at the evaluation point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from kelvin import fd
from kelvin.fields import (
    DEFAULT_LOAD,
    CylindricalStress,
    PointLoad,
    helmholtz_potentials,
    kelvin_displacement,
    kelvin_displacement_cartesian,
    kelvin_strain,
    kelvin_stress,
    love_displacement,
    misprinted_stress,
)
from kelvin.geometry import cart_to_zrphi, cyl_stress_to_tensor, sphere_normal
from kelvin.material import DEFAULT_MATERIAL, IsotropicElastic

AXIS_CONE = 0.05


class DegenerateStepError(ValueError):
    """Finite-difference stencil reaches the singularity or the axis."""


class QuadratureFailure(RuntimeError):
    pass


@dataclass(frozen=True)
class FiniteDifferenceSpec:
    """Central second-order differences with steps relative to ``rho``.

    ``step_relative`` is used for first derivatives and ``second_step`` for
    second derivatives, where rounding error grows like ``eps / h^2``.
    """

    step_relative: float = 1e-5
    second_step: float = 1e-4
    scheme: str = "central"

    def __post_init__(self):
        if not (self.step_relative > 0 and self.second_step > 0):
            raise ValueError("finite-difference steps must be positive")
        if self.scheme != "central":
            raise ValueError("only the central scheme is implemented")


@dataclass(frozen=True)
class QuadratureSpec:
    angular_order: int = 32
    radial_panels: int = 64

    def __post_init__(self):
        if self.angular_order < 4 or self.radial_panels < 4:
            raise ValueError("quadrature orders must be >= 4")


@dataclass(frozen=True)
class ResidualReport:
    """Outcome of one check; ``passed`` is ``max_residual <= tolerance``."""

    name: str
    points: int
    max_residual: float
    rms_residual: float
    tolerance: float
    passed: bool
    components: dict = field(default_factory=dict)
    detail: dict = field(default_factory=dict)
    per_point: np.ndarray | None = field(default=None, repr=False, compare=False)

    @classmethod
    def from_residuals(cls, name: str, residuals: dict, tolerance: float,
                       detail: dict | None = None) -> "ResidualReport":
        arrs = {k: np.abs(np.asarray(v, dtype=float)).ravel() for k, v in residuals.items()}
        flat = np.concatenate(list(arrs.values())) if arrs else np.zeros(0)
        sizes = {v.size for v in arrs.values()}
        per_point = np.max(np.stack(list(arrs.values())), axis=0) if len(sizes) == 1 else None
        mx = float(np.max(flat)) if flat.size else 0.0
        if not np.all(np.isfinite(flat)):
            mx = math.inf
        rms = float(np.sqrt(np.mean(flat**2))) if flat.size else 0.0
        comps = {k: float(np.max(v)) if v.size else 0.0 for k, v in arrs.items()}
        return cls(name, max(sizes, default=0), mx, rms, float(tolerance), mx <= tolerance,
                   comps, dict(detail or {}), per_point)

    @property
    def failing(self) -> list:
        return sorted(k for k, v in self.components.items() if not v <= self.tolerance)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "points": self.points,
            "max_residual": self.max_residual,
            "rms_residual": self.rms_residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "components": dict(sorted(self.components.items())),
            "failing_components": self.failing,
            **({"detail": self.detail} if self.detail else {}),
        }


# ---------------------------------------------------------------------------
# stress fields


@dataclass(frozen=True)
class StressField:
    """A stress state given in meridian form, Cartesian form, or both.

    ``meridian(z, r)`` returns a ``CylindricalStress`` in the load frame;
    ``cartesian(x)`` returns ``(..., 3, 3)`` tensors.  Missing forms are
    derived from the other where possible.
    """

    meridian: Callable | None = None
    cartesian: Callable | None = None
    load: PointLoad = DEFAULT_LOAD
    nu: float = DEFAULT_MATERIAL.nu
    name: str = "field"

    def tensor(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.cartesian is not None:
            return self.cartesian(x)
        z, r, phi = cart_to_zrphi(x, self.load.frame, self.load.origin)
        return cyl_stress_to_tensor(self.meridian(z, r), phi, self.load.frame)

    @classmethod
    def kelvin(cls, load=None, m=None) -> "StressField":
        load = DEFAULT_LOAD if load is None else load
        m = DEFAULT_MATERIAL if m is None else m
        return cls(lambda z, r: kelvin_stress((z, r), load, m), None, load, m.nu, "kelvin")

    @classmethod
    def misprinted(cls, load=None, m=None) -> "StressField":
        load = DEFAULT_LOAD if load is None else load
        m = DEFAULT_MATERIAL if m is None else m
        return cls(lambda z, r: misprinted_stress((z, r), load, m), None, load, m.nu,
                   "misprinted")

    @classmethod
    def uniform(cls, S0, nu: float = DEFAULT_MATERIAL.nu) -> "StressField":
        S0 = np.asarray(S0, dtype=float)

        def cart(x):
            return np.broadcast_to(S0, np.shape(x)[:-1] + (3, 3)).copy()

        return cls(None, cart, DEFAULT_LOAD, nu, "uniform")

    def with_gauge(self, g: Callable) -> "StressField":
        """Add ``g(z)/r^2`` to ``s_phiphi`` and subtract it from ``s_rr``."""
        base = self.meridian

        def mer(z, r):
            s = base(z, r)
            q = g(np.asarray(z, float)) / np.asarray(r, float) ** 2
            return CylindricalStress(s.sigma1, s.sigma2 - q, s.sigma3 + q, s.sigma4)

        return StressField(mer, None, self.load, self.nu, self.name + "+gauge")

    def plus(self, other: "StressField") -> "StressField":
        return StressField(None, lambda x: self.tensor(x) + other.tensor(x), self.load, self.nu,
                           f"{self.name}+{other.name}")


# ---------------------------------------------------------------------------
# sample points


def sample_points(n: int, seed: int = 0, rho_range=(0.5, 5.0), cone: float = AXIS_CONE,
                  load: PointLoad | None = None) -> np.ndarray:
    """``n`` Cartesian points with ``rho`` log-uniform in ``rho_range`` and ``r > cone * rho``."""
    load = DEFAULT_LOAD if load is None else load
    rng = np.random.default_rng(seed)
    out = []
    while sum(len(a) for a in out) < n:
        v = rng.normal(size=(2 * n, 3))
        v /= np.linalg.norm(v, axis=1)[:, None]
        local_r = np.hypot(v @ load.frame[1], v @ load.frame[2])
        v = v[local_r > cone]
        rho = np.exp(rng.uniform(np.log(rho_range[0]), np.log(rho_range[1]), len(v)))
        out.append(v * rho[:, None] + np.asarray(load.origin))
    return np.concatenate(out)[:n]


def _meridian(points, load):
    z, r, _ = cart_to_zrphi(points, load.frame, load.origin)
    return z, r, np.hypot(z, r)


def _check_step(h, rho, r=None):
    if np.any(h >= 0.5 * rho):
        raise DegenerateStepError("finite-difference step reaches the load point")
    if r is not None and np.any(h >= r):
        raise DegenerateStepError("finite-difference step crosses the axis")


def _component(fn, name):
    return lambda z, r: getattr(fn(z, r), name)


# ---------------------------------------------------------------------------
# balance


def cartesian_divergence(field_: StressField, points, h) -> np.ndarray:
    grad = fd.gradient(field_.tensor, points, h)  # (n, k, i, j) = d_k S_ij
    return np.einsum("njij->ni", grad)


def divergence_residual(field_: StressField, points, fdspec: FiniteDifferenceSpec | None = None,
                        tolerance: float = 1e-6) -> ResidualReport:
    """Cartesian ``Div S`` and both meridian balance equations.

    Components: ``div_x`` (``|Div S| rho/|S|``), ``meridian_z`` and
    ``meridian_r`` (``r s1_z + (r s4)_r`` and ``r s4_z + (r s2)_r - s3``
    divided by ``|S|``).  ``detail`` also records the unscaled
    ``|Div S|/|S|`` maximum.
    """
    fdspec = FiniteDifferenceSpec() if fdspec is None else fdspec
    points = np.asarray(points, dtype=float)
    z, r, rho = _meridian(points, field_.load)
    h = fdspec.step_relative * rho
    _check_step(h, rho)
    S = field_.tensor(points)
    scale = np.linalg.norm(S, axis=(-2, -1))
    div = np.linalg.norm(cartesian_divergence(field_, points, h), axis=-1)
    res = {"div_x": div * rho / scale}
    detail = {"max_div_over_norm": float(np.max(div / scale))}
    if field_.meridian is not None:
        off = r > AXIS_CONE * rho
        zz, rr, hh = z[off], r[off], h[off]
        _check_step(hh, rho[off], rr)
        s = field_.meridian(zz, rr)
        s1, s2, s4 = (_component(field_.meridian, k) for k in ("sigma1", "sigma2", "sigma4"))
        r_s4 = lambda a, b: b * s4(a, b)  # noqa: E731
        r_s2 = lambda a, b: b * s2(a, b)  # noqa: E731
        m1 = rr * fd.d_dz(s1, zz, rr, hh) + fd.d_dr(r_s4, zz, rr, hh)
        m2 = rr * fd.d_dz(s4, zz, rr, hh) + fd.d_dr(r_s2, zz, rr, hh) - s.sigma3
        sc = s.norm()
        res["meridian_z"] = m1 / sc
        res["meridian_r"] = m2 / sc
    return ResidualReport.from_residuals("balance", res, tolerance, detail)


# ---------------------------------------------------------------------------
# compatibility


def beltrami_residual(field_: StressField, points, fdspec: FiniteDifferenceSpec | None = None,
                      tolerance: float = 1e-5) -> ResidualReport:
    """Four cylindrical compatibility equations, ``Lap(tr S)``, and the Cartesian form.

    With ``a = tr S / (1 + nu)`` and ``L = d_zz + d_rr + d_r / r``::

        L s1 + a_zz
        L s2 - 2 (s2 - s3) / r^2 + a_rr
        L s3 + 2 (s2 - s3) / r^2 + a_r / r
        L s4 - s4 / r^2 + a_zr

    All are divided by ``|S| / rho^2``.
    """
    fdspec = FiniteDifferenceSpec() if fdspec is None else fdspec
    points = np.asarray(points, dtype=float)
    nu = field_.nu
    z, r, rho = _meridian(points, field_.load)
    h = fdspec.second_step * rho
    _check_step(h, rho)
    S = field_.tensor(points)
    scale = np.linalg.norm(S, axis=(-2, -1)) / rho**2

    def trace(x):
        return np.trace(field_.tensor(x), axis1=-2, axis2=-1)

    H = fd.hessian(field_.tensor, points, h)  # (n, k, l, i, j)
    Ht = fd.hessian(trace, points, h)  # (n, k, l)
    lap = np.einsum("nkkij->nij", H)
    cart = lap + Ht / (1.0 + nu)
    res = {
        "cartesian": np.linalg.norm(cart, axis=(-2, -1)) / scale,
        "laplacian_trace": np.abs(np.einsum("nkk->n", Ht)) / scale,
    }
    if field_.meridian is not None:
        off = r > AXIS_CONE * rho
        zz, rr, hh, sc = z[off], r[off], h[off], scale[off]
        _check_step(hh, rho[off], rr)
        s = field_.meridian(zz, rr)
        comp = {k: _component(field_.meridian, k) for k in ("sigma1", "sigma2", "sigma3", "sigma4")}

        def alpha(a, b):
            return field_.meridian(a, b).trace / (1.0 + nu)

        def L(fn):
            return fd.axisym_laplacian(fn, zz, rr, hh)

        diff = (s.sigma2 - s.sigma3) / rr**2
        res["compat_zz"] = (L(comp["sigma1"]) + fd.d2_dz2(alpha, zz, rr, hh)) / sc
        res["compat_rr"] = (L(comp["sigma2"]) - 2.0 * diff + fd.d2_dr2(alpha, zz, rr, hh)) / sc
        res["compat_pp"] = (L(comp["sigma3"]) + 2.0 * diff + fd.d_dr(alpha, zz, rr, hh) / rr) / sc
        res["compat_zr"] = (L(comp["sigma4"]) - s.sigma4 / rr**2 + fd.d2_dzdr(alpha, zz, rr, hh)) / sc
    return ResidualReport.from_residuals("compatibility", res, tolerance)


# ---------------------------------------------------------------------------
# integral identities


def _sphere_rule(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    theta = 0.5 * math.pi * (x + 1.0)
    wt = 0.5 * math.pi * w * np.sin(theta)
    nphi = 2 * order
    phi = 2.0 * math.pi * np.arange(nphi) / nphi
    T, P = np.meshgrid(theta, phi, indexing="ij")
    W = np.outer(wt, np.full(nphi, 2.0 * math.pi / nphi))
    return T, P, W


def traction_resultant(field_: StressField, rho: float, q: QuadratureSpec | None = None,
                       center=None) -> np.ndarray:
    """``int_{|x - o| = rho} S n da`` as a Cartesian vector."""
    if not rho > 0:
        raise ValueError("sphere radius must be positive")
    q = QuadratureSpec() if q is None else q
    load = field_.load
    center = np.asarray(load.origin if center is None else center, dtype=float)
    T, P, W = _sphere_rule(q.angular_order)
    n = sphere_normal(T, P, load.frame)
    S = field_.tensor(center + rho * n)
    t = np.einsum("...ij,...j->...i", S, n)
    out = rho**2 * np.einsum("ab,abi->i", W, t)
    if not np.all(np.isfinite(out)):
        raise QuadratureFailure("non-finite traction resultant")
    return out


@dataclass(frozen=True)
class SignoriniResult:
    volume: float
    surface: float

    @property
    def difference(self) -> float:
        return self.volume - self.surface


def signorini_check(field_: StressField, rho: float, q: QuadratureSpec | None = None,
                    alpha1: float = 0.0) -> SignoriniResult:
    """Both sides of ``int_B tr S dv = int_dB rho n.Sn da``.

    The volume side integrates ``s^2 tr S`` in ``s`` on composite
    Gauss-Legendre panels, which removes the ``s^-2`` singularity of a
    point-load trace.  ``alpha1`` adds a trace contribution
    ``(1 + nu) alpha1 / s`` to the volume side only; a field with
    ``rho^-2`` stresses cannot produce the matching surface term.
    """
    if not rho > 0:
        raise ValueError("sphere radius must be positive")
    q = QuadratureSpec() if q is None else q
    load = field_.load
    center = np.asarray(load.origin)
    T, P, W = _sphere_rule(q.angular_order)
    n = sphere_normal(T, P, load.frame)

    xg, wg = np.polynomial.legendre.leggauss(4)
    edges = np.linspace(0.0, rho, q.radial_panels + 1)
    a, b = edges[:-1, None], edges[1:, None]
    s = (0.5 * (b - a) * (xg + 1.0) + a).ravel()
    ws = (0.5 * (b - a) * wg).ravel()
    volume = 0.0
    for si, wi in zip(s, ws):
        tr = np.trace(field_.tensor(center + si * n), axis1=-2, axis2=-1)
        tr = tr + (1.0 + field_.nu) * alpha1 / si
        volume += wi * si**2 * float(np.sum(W * tr))

    S = field_.tensor(center + rho * n)
    nsn = np.einsum("...i,...ij,...j->...", n, S, n)
    surface = rho**3 * float(np.sum(W * nsn))
    if not (math.isfinite(volume) and math.isfinite(surface)):
        raise QuadratureFailure("non-finite Signorini integrals")
    return SignoriniResult(volume, surface)


# ---------------------------------------------------------------------------
# strain / displacement


def kelvin_displacement_meridian(load=None, m=None):
    return lambda z, r: kelvin_displacement((z, r), load, m)


def kelvin_strain_meridian(load=None, m=None):
    return lambda z, r: kelvin_strain((z, r), load, m)


def strain_displacement_check(displacement: Callable, strain: Callable, z, r,
                              fdspec: FiniteDifferenceSpec | None = None,
                              tolerance: float = 1e-5,
                              second_tolerance: float = 1e-4) -> ResidualReport:
    """Strains from FD of ``displacement(z, r)`` against ``strain(z, r)``.

    First-order mismatches are divided by ``|E|``; the consistency
    ``E_rr = (r E_pp)_r`` likewise; the zz component of ``curl curl E``,
    ``E_rr,r / r - E_pp,rr - 2 E_pp,r / r``, by ``|E| / rho^2`` and judged
    against ``second_tolerance`` (reported rescaled onto ``tolerance``).
    """
    fdspec = FiniteDifferenceSpec() if fdspec is None else fdspec
    z, r = (np.asarray(v, dtype=float).ravel() for v in (z, r))
    rho = np.hypot(z, r)
    h = fdspec.step_relative * rho
    h2 = fdspec.second_step * rho
    _check_step(np.maximum(h, h2), rho, r)
    uz, ur = _component(displacement, "u_z"), _component(displacement, "u_r")
    E = strain(z, r)
    u = displacement(z, r)
    sc = E.norm()
    epp = _component(strain, "E_phiphi")
    err = _component(strain, "E_rr")
    r_epp = lambda a, b: b * epp(a, b)  # noqa: E731
    res = {
        "E_zz": (fd.d_dz(uz, z, r, h) - E.E_zz) / sc,
        "E_rr": (fd.d_dr(ur, z, r, h) - E.E_rr) / sc,
        "E_phiphi": (u.u_r / r - E.E_phiphi) / sc,
        "E_zr": (0.5 * (fd.d_dr(uz, z, r, h) + fd.d_dz(ur, z, r, h)) - E.E_zr) / sc,
        "consistency": (fd.d_dr(r_epp, z, r, h) - E.E_rr) / sc,
    }
    cc = (fd.d_dr(err, z, r, h2) / r - fd.d2_dr2(epp, z, r, h2)
          - 2.0 * fd.d_dr(epp, z, r, h2) / r)
    res["curl_curl_zz"] = cc / (sc / rho**2) * (tolerance / second_tolerance)
    return ResidualReport.from_residuals("strain-displacement", res, tolerance)


def navier_residual(displacement: Callable, m: IsotropicElastic, points,
                    fdspec: FiniteDifferenceSpec | None = None, tolerance: float = 1e-4,
                    origin=(0.0, 0.0, 0.0)) -> ResidualReport:
    """``(lambda + mu) grad div u + mu Lap u`` for Cartesian ``displacement(x)``,
    divided by ``G |u| / rho^2``."""
    fdspec = FiniteDifferenceSpec() if fdspec is None else fdspec
    points = np.asarray(points, dtype=float)
    rho = np.linalg.norm(points - np.asarray(origin), axis=-1)
    h = fdspec.second_step * rho
    _check_step(h, rho)
    H = fd.hessian(displacement, points, h)  # (n, i, j, k) = d_i d_j u_k
    grad_div = np.einsum("nijj->ni", H)
    lap = np.einsum("niik->nk", H)
    res = (m.lam + m.mu) * grad_div + m.mu * lap
    u = np.linalg.norm(displacement(points), axis=-1)
    scale = np.where(u > 0, m.G * u / rho**2, 1.0)
    return ResidualReport.from_residuals(
        "navier", {"navier": np.linalg.norm(res, axis=-1) / scale}, tolerance)


# ---------------------------------------------------------------------------
# oracle comparisons


def love_equivalence(points, load=None, m=None, tolerance: float = 1e-12) -> ResidualReport:
    """Frame-converted stress-first displacement against Love's formula, relative."""
    a = kelvin_displacement_cartesian(points, load, m)
    b = love_displacement(points, load, m)
    err = np.linalg.norm(a - b, axis=-1) / np.linalg.norm(b, axis=-1)
    return ResidualReport.from_residuals("love-equivalence", {"love": err}, tolerance)


def helmholtz_reconstruction(points, load=None, m=None, fdspec: FiniteDifferenceSpec | None = None,
                             tolerance: float = 1e-5) -> ResidualReport:
    """``grad(phi) + curl(w)`` by FD against Love's displacement; also ``div w``."""
    load = DEFAULT_LOAD if load is None else load
    fdspec = FiniteDifferenceSpec() if fdspec is None else fdspec
    points = np.asarray(points, dtype=float)
    rho = np.linalg.norm(points - np.asarray(load.origin), axis=-1)
    h = fdspec.step_relative * rho
    _check_step(h, rho)
    gphi = fd.gradient(lambda x: np.asarray(helmholtz_potentials(x, load, m).phi_pot), points, h)
    gw = fd.gradient(lambda x: helmholtz_potentials(x, load, m).w_pot, points, h)  # (n, i, k)
    curl = np.stack([gw[:, 1, 2] - gw[:, 2, 1], gw[:, 2, 0] - gw[:, 0, 2],
                     gw[:, 0, 1] - gw[:, 1, 0]], axis=-1)
    u = love_displacement(points, load, m)
    un = np.linalg.norm(u, axis=-1)
    res = {
        "reconstruction": np.linalg.norm(gphi + curl - u, axis=-1) / un,
        "div_w": np.abs(np.einsum("nii->n", gw)) * rho / un,
    }
    return ResidualReport.from_residuals("helmholtz", res, tolerance)


def scaling_check(points, load=None, m=None, factors=(0.5, 2.0, 10.0),
                  tolerance: float = 1e-12) -> ResidualReport:
    """Homogeneity of ``S``, ``E`` (degree -2) and ``u`` (degree -1), parity in ``z``,
    and the axis condition ``u_r(1, 10^-k) < 10^-(k-2) |f/G|`` for ``k = 3..8``."""
    load = DEFAULT_LOAD if load is None else load
    m = DEFAULT_MATERIAL if m is None else m
    z, r, _ = _meridian(np.asarray(points, float), load)

    def rel(a, b):
        return np.max(np.abs(a - b), axis=0) / np.max(np.abs(b), axis=0)

    res = {"stress": [], "strain": [], "displacement": []}
    S0 = kelvin_stress((z, r), load, m).stack()
    E0 = kelvin_strain((z, r), load, m).stack()
    U0 = kelvin_displacement((z, r), load, m).stack()
    for lam in factors:
        zl, rl = lam * z, lam * r
        res["stress"].append(rel(lam**2 * kelvin_stress((zl, rl), load, m).stack(), S0))
        res["strain"].append(rel(lam**2 * kelvin_strain((zl, rl), load, m).stack(), E0))
        res["displacement"].append(rel(lam * kelvin_displacement((zl, rl), load, m).stack(), U0))
    res = {k: np.max(v, axis=0) for k, v in res.items()}
    Um = kelvin_displacement((-z, r), load, m)
    res["parity_u_r"] = np.abs(Um.u_r + U0[1]) / np.max(np.abs(U0[1]))
    res["parity_u_z"] = np.abs(Um.u_z - U0[0]) / np.max(np.abs(U0[0]))
    ks = np.arange(3, 9)
    ur_axis = kelvin_displacement((np.ones(ks.size), 10.0 ** -ks), load, m).u_r
    bound = 10.0 ** -(ks - 2.0) * abs(load.f / m.G)
    # rescaled so that the pass criterion is ``u_r < bound``
    res["axis_u_r"] = np.abs(ur_axis) / bound * tolerance
    return ResidualReport.from_residuals("scaling", res, tolerance,
                                         {"axis_u_r": [float(v) for v in ur_axis]})


# ---------------------------------------------------------------------------
# FD convergence


def convergence_order(check: Callable, *args, steps=(2e-2, 1e-2), **kw) -> float:
    """Observed order of ``check(*args, fdspec=...)`` from two step sizes.

    Steps are large on purpose: at ``1e-5`` the residual is rounding noise
    and carries no order information.
    """
    vals = []
    for s in steps:
        rep = check(*args, fdspec=FiniteDifferenceSpec(s, s), **kw)
        vals.append(rep.max_residual)
    return math.log(vals[0] / vals[1]) / math.log(steps[0] / steps[1])


# ---------------------------------------------------------------------------
# suites

SUITES = ("balance", "compatibility", "traction", "signorini", "strain-displacement",
          "navier", "love-equivalence", "helmholtz", "scaling")
DEFAULT_RADII = (0.5, 1.0, 2.0, 10.0)


def _traction_report(field_, radii, q):
    load = field_.load
    target = -load.f * np.asarray(load.axis)
    scale = abs(load.f) or 1.0
    res, detail = {}, {}
    for rho in radii:
        F = traction_resultant(field_, rho, q)
        res[f"rho={rho:g}"] = np.abs(F - target) / scale
        detail[f"rho={rho:g}"] = [float(v) for v in F]
    return ResidualReport.from_residuals("traction", res, 1e-10, detail)


def _signorini_report(field_, q, radii=(0.5, 1.0, 2.0), alpha1=1.0):
    """Two-sided identity for Kelvin and for Kelvin plus uniform pressure, and
    the ``rho^2`` growth of the mismatch created by an ``alpha1`` trace."""
    res, detail = {}, {}
    pressure = field_.plus(StressField.uniform(np.eye(3), field_.nu))
    for rho in radii:
        k = signorini_check(field_, rho, q)
        p = signorini_check(pressure, rho, q)
        res[f"kelvin rho={rho:g}"] = abs(k.difference)
        res[f"pressure rho={rho:g}"] = abs(p.difference) / (4.0 * math.pi * rho**3)
        detail[f"rho={rho:g}"] = {"kelvin": [k.volume, k.surface], "pressure": [p.volume, p.surface]}
    mis = [signorini_check(field_, rho, q, alpha1=alpha1).difference for rho in radii]
    expected = [2.0 * math.pi * (1.0 + field_.nu) * alpha1 * rho**2 for rho in radii]
    growth = math.log(mis[-1] / mis[0]) / math.log(radii[-1] / radii[0])
    detail["alpha1_mismatch"] = mis
    detail["alpha1_growth_exponent"] = growth
    res["alpha1 mismatch law"] = max(abs(a - b) / b for a, b in zip(mis, expected))
    # a rho^2 mismatch cannot be balanced by the O(rho) surface side
    res["alpha1 growth exponent"] = abs(growth - 2.0)
    return ResidualReport.from_residuals("signorini", res, 1e-10, detail)


def run_suites(suites=SUITES, load: PointLoad | None = None, m: IsotropicElastic | None = None,
               seed: int = 0, radii=DEFAULT_RADII, printed_signs: bool = False,
               fdspec: FiniteDifferenceSpec | None = None,
               q: QuadratureSpec | None = None) -> list[ResidualReport]:
    """Run the named suites in the given order on the Kelvin state."""
    load = DEFAULT_LOAD if load is None else load
    m = DEFAULT_MATERIAL if m is None else m
    fdspec = FiniteDifferenceSpec() if fdspec is None else fdspec
    field_ = StressField.misprinted(load, m) if printed_signs else StressField.kelvin(load, m)
    unknown = [s for s in suites if s not in SUITES]
    if unknown:
        raise ValueError(f"unknown suite(s): {', '.join(unknown)}")
    out = []
    for name in suites:
        if name == "balance":
            pts = sample_points(500, seed, load=load)
            rep = divergence_residual(field_, pts, fdspec)
            order = convergence_order(divergence_residual, field_, sample_points(50, seed, load=load))
            rep.detail["fd_order"] = order
            if not printed_signs and order < 1.9:
                rep = ResidualReport(rep.name, rep.points, rep.max_residual, rep.rms_residual,
                                     rep.tolerance, False, rep.components, rep.detail)
            out.append(rep)
        elif name == "compatibility":
            out.append(beltrami_residual(field_, sample_points(500, seed + 1, load=load), fdspec))
        elif name == "traction":
            out.append(_traction_report(field_, radii, q))
        elif name == "signorini":
            out.append(_signorini_report(field_, q))
        elif name == "strain-displacement":
            z, r, _ = _meridian(sample_points(500, seed + 2, load=load), load)
            out.append(strain_displacement_check(kelvin_displacement_meridian(load, m),
                                                 kelvin_strain_meridian(load, m), z, r, fdspec))
        elif name == "navier":
            pts = sample_points(200, seed + 3, load=load)
            out.append(navier_residual(lambda x: kelvin_displacement_cartesian(x, load, m), m, pts,
                                       fdspec, origin=load.origin))
        elif name == "love-equivalence":
            out.append(love_equivalence(sample_points(1000, seed + 4, cone=0.0, load=load), load, m))
        elif name == "helmholtz":
            out.append(helmholtz_reconstruction(sample_points(100, seed + 5, cone=0.0, load=load),
                                                load, m, fdspec))
        elif name == "scaling":
            out.append(scaling_check(sample_points(200, seed + 6, load=load), load, m))
    return out


__all__ = [
    "DegenerateStepError", "FiniteDifferenceSpec", "QuadratureSpec", "ResidualReport",
    "SignoriniResult", "StressField", "beltrami_residual", "convergence_order",
    "divergence_residual", "helmholtz_reconstruction", "love_equivalence", "navier_residual",
    "run_suites", "sample_points", "scaling_check", "signorini_check",
    "strain_displacement_check", "traction_resultant",
]
