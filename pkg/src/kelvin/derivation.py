"""Numerical stress-first construction of the Kelvin state.

The pipeline mirrors the analytic route step by step, but every step is
carried out numerically and compared against the closed forms afterwards:

1. integer exponent search for phi-independent harmonic functions
   ``rho^a z^b r^c``;
2. regular solutions of the angular ODEs for the trace profile and for the
   ``s_zz`` and ``s_zr`` profiles (two-sided shooting from series starts
   at the poles, matched at the equator);
3. the coupling ``beta0 = gamma0`` from the first meridian balance equation;
4. the load-balance relation from Gauss-Legendre quadrature of the traction;
5. the sequential ``s_rr``/``s_phiphi`` solve, with the integration
   constant ``g(z)`` fixed by requiring a bounded radial displacement on
   the axis;
6. recovery of ``s_zr`` by integrating the exact form ``grad(r s_zr)``
   along a meridian path.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import integrate

from kelvin import fd
from kelvin.geometry import SingularPointError

THETA_EPS = 1e-6
POLE_MARGIN = 1e-4
GRID_SIZE = 1000
SINGULAR_GROWTH = 1e-3
ODE_RTOL = 1e-12
MATCH_TOL = 1e-8


class ConvergenceError(RuntimeError):
    def __init__(self, step: str, defect: float):
        super().__init__(f"{step}: shooting did not converge (defect {defect:.3e})")
        self.step = step
        self.defect = defect


class QuadratureError(RuntimeError):
    pass


class SingularEvaluationError(ValueError):
    """Evaluation on the axis while 1/r^2 terms are still present."""


# ---------------------------------------------------------------------------
# harmonic exponent search


@dataclass(frozen=True)
class HarmonicSearch:
    triples: tuple
    basis: tuple


_BASIS_NAMES = {(0, 0, 0): "1", (-1, 0, 0): "1/rho", (0, 1, 0): "z", (-3, 1, 0): "z/rho^3"}


def harmonic_condition(a: int, b: int, c: int, z, r):
    """``Lap(rho^a z^b r^c) / (rho^(a-2) z^b r^c)``, exact for rational ``z, r``."""
    rho2 = z * z + r * r
    return a * (a + 2 * b + 2 * c + 1) + b * (b - 1) * rho2 / (z * z) + c * c * rho2 / (r * r)


def harmonic_exponent_search(window: int = 5) -> HarmonicSearch:
    """Integer triples ``(a, b, c)`` with ``|a|, |b|, |c| <= window`` making
    ``rho^a z^b r^c`` harmonic in the meridian plane.

    The condition is a combination of ``1``, ``rho^2/z^2`` and ``rho^2/r^2``;
    it is evaluated exactly at several rational sample points.
    """
    samples = [(Fraction(1), Fraction(1)), (Fraction(1), Fraction(2)),
               (Fraction(2), Fraction(1)), (Fraction(3), Fraction(5))]
    found = []
    rng = range(-window, window + 1)
    for a in rng:
        for b in rng:
            for c in rng:
                if all(harmonic_condition(a, b, c, z, r) == 0 for z, r in samples):
                    found.append((a, b, c))
    found.sort()
    basis = tuple(_BASIS_NAMES.get(t, f"rho^{t[0]} z^{t[1]} r^{t[2]}") for t in found)
    return HarmonicSearch(tuple(found), basis)


def monomial(a: int, b: int, c: int) -> Callable:
    def fn(z, r):
        return np.hypot(z, r) ** a * np.asarray(z, float) ** b * np.asarray(r, float) ** c

    return fn


# ---------------------------------------------------------------------------
# angular ODEs


@dataclass(frozen=True)
class AngularODE:
    """``tau'' + cot(t) tau' + q(t) tau + s(t) = 0`` on ``(0, pi)``.

    ``exponent`` is the indicial exponent of the bounded branch at the
    poles (0 or 1); ``q_reg`` is the finite part of ``q`` there once the
    ``-exponent^2 / phi^2`` term has been removed.
    """

    q: Callable
    s: Callable
    exponent: int
    q_reg: float
    name: str = "ode"

    def rhs(self, t, y):
        tau, dtau = y
        return [dtau, -dtau * math.cos(t) / math.sin(t) - self.q(t) * tau - self.s(t)]

    def series_start(self, left: bool, c: float, eps: float = THETA_EPS):
        """Bounded-branch series at distance ``eps`` from a pole, amplitude ``c``."""
        t = eps if left else math.pi - eps
        sp = self.s(t)
        if self.exponent == 0:
            a2 = -(self.q_reg * c + sp) / 4.0
            tau, dphi = c + a2 * eps**2, 2.0 * a2 * eps
        else:
            b3 = -((self.q_reg - 1.0 / 3.0) * c + sp / eps) / 8.0
            tau, dphi = c * eps + b3 * eps**3, c + 3.0 * b3 * eps**2
        return t, tau, (dphi if left else -dphi)


def trace_ode() -> AngularODE:
    return AngularODE(lambda t: 2.0, lambda t: 0.0, 0, 2.0, "trace")


def tau1_ode(alpha0: float) -> AngularODE:
    def s(t):
        c, sn = math.cos(t), math.sin(t)
        return 3.0 * alpha0 * c * (2.0 * c * c - 3.0 * sn * sn)

    return AngularODE(lambda t: 2.0, s, 0, 2.0, "tau1")


def tau4_ode(alpha0: float) -> AngularODE:
    def q(t):
        return 1.0 - (math.cos(t) / math.sin(t)) ** 2

    def s(t):
        c, sn = math.cos(t), abs(math.sin(t))
        return 3.0 * alpha0 * sn * (4.0 * c * c - sn * sn)

    return AngularODE(q, s, 1, 5.0 / 3.0, "tau4")


def _integrate(ode: AngularODE, t0, y0, t1, scale):
    sol = integrate.solve_ivp(
        ode.rhs, (t0, t1), y0, method="DOP853",
        rtol=ODE_RTOL, atol=1e-14 * scale, dense_output=True,
    )
    if not sol.success:
        raise ConvergenceError(ode.name, float("nan"))
    return sol


def _secant(fn, x0, x1, tol, max_iter=8):
    f0, f1 = fn(x0), fn(x1)
    for _ in range(max_iter):
        if abs(f1) <= tol:
            return x1, f1
        if f1 == f0:
            break
        x0, x1, f0 = x1, x1 - f1 * (x1 - x0) / (f1 - f0), f1
        f1 = fn(x1)
    return x1, f1


class _Evaluable:
    def __call__(self, theta):
        raise NotImplementedError

    def deriv(self, theta):
        raise NotImplementedError

    def __add__(self, other):
        return ProfileSum(((1.0, self), (1.0, other)))

    def __mul__(self, c):
        return ProfileSum(((float(c), self),))

    __rmul__ = __mul__

    def max_error(self, reference: Callable) -> float:
        """Max-norm distance to ``reference`` on the profile grid."""
        grid = profile_grid()
        return float(np.max(np.abs(self(grid) - reference(grid))))


@dataclass(frozen=True, eq=False)
class ProfileSum(_Evaluable):
    terms: tuple

    def __call__(self, theta):
        return sum(c * p(theta) for c, p in self.terms)

    def deriv(self, theta):
        return sum(c * p.deriv(theta) for c, p in self.terms)


@dataclass(frozen=True, eq=False)
class FunctionProfile(_Evaluable):
    """Wrap closed-form ``tau(theta)`` and ``tau'(theta)``."""

    fn: Callable
    dfn: Callable

    def __call__(self, theta):
        return self.fn(np.asarray(theta, float))

    def deriv(self, theta):
        return self.dfn(np.asarray(theta, float))


@dataclass(frozen=True)
class CandidateReport:
    label: str
    pole_growth: float
    accepted: bool


@dataclass(frozen=True, eq=False)
class AngularProfile(_Evaluable):
    """Numerical profile on ``[eps, pi - eps]``, continuous at the equator.

    ``even`` records the ``tau(theta) = tau(-theta)`` parity of the signed
    polar-angle convention; profiles built here are even by construction.
    """

    theta_grid: np.ndarray
    values: np.ndarray
    derivative: np.ndarray
    even: bool
    defect: float
    left: object = field(repr=False)
    right: object = field(repr=False)
    candidates: tuple = ()

    def _eval(self, theta, row):
        theta = np.clip(np.asarray(theta, dtype=float), THETA_EPS, math.pi - THETA_EPS)
        flat = theta.ravel()
        out = np.empty_like(flat)
        m = flat <= 0.5 * math.pi
        if m.any():
            out[m] = self.left.sol(flat[m])[row]
        if (~m).any():
            out[~m] = self.right.sol(flat[~m])[row]
        return out.reshape(theta.shape) if theta.ndim else float(out[0])

    def __call__(self, theta):
        return self._eval(theta, 0)

    def deriv(self, theta):
        return self._eval(theta, 1)

    def pole_growth(self) -> float:
        return _pole_growth(self, self.values)

    def max_error(self, reference: Callable) -> float:
        return float(np.max(np.abs(self.values - reference(self.theta_grid))))


def _pole_growth(p, values) -> float:
    big = float(np.max(np.abs(values))) or 1.0
    ends = (THETA_EPS, math.pi - THETA_EPS)
    return max(THETA_EPS * abs(p.deriv(t)) for t in ends) / big


def profile_grid() -> np.ndarray:
    return np.linspace(POLE_MARGIN, math.pi - POLE_MARGIN, GRID_SIZE)


def shoot(ode: AngularODE, kind: str, target: float, scale: float = 1.0,
          tol: float = MATCH_TOL) -> AngularProfile:
    """Regular solution of ``ode`` by two-sided shooting.

    ``kind`` fixes the free homogeneous component: ``"pole"`` sets the left
    series amplitude to ``target``; ``"mid_value"``/``"mid_slope"`` impose
    ``tau(pi/2)``/``tau'(pi/2) = target``.  The right branch is then matched
    on the better-conditioned of value and slope at the equator; the
    mismatch left in the other one is the regularity defect.
    """
    mid = 0.5 * math.pi

    def left(c):
        t0, tau, dtau = ode.series_start(True, c)
        return _integrate(ode, t0, [tau, dtau], mid, scale)

    def right(c):
        t0, tau, dtau = ode.series_start(False, c)
        return _integrate(ode, t0, [tau, dtau], mid, scale)

    if kind == "pole":
        a = target
    else:
        row = 0 if kind == "mid_value" else 1
        a, _ = _secant(lambda c: left(c).y[row, -1] - target, 0.0, scale, tol * scale * 1e-3)
    L = left(a)
    yl = L.y[:, -1]

    r0, r1 = right(0.0).y[:, -1], right(scale).y[:, -1]
    row = int(np.argmax(np.abs(r1 - r0)))
    b, _ = _secant(lambda c: right(c).y[row, -1] - yl[row], 0.0, scale, tol * scale * 1e-3)
    R = right(b)
    defect = float(abs(R.y[1 - row, -1] - yl[1 - row]) / scale)
    if not np.isfinite(defect) or defect > tol:
        raise ConvergenceError(ode.name, defect)

    grid = profile_grid()
    proto = AngularProfile(grid, grid, grid, True, defect, L, R)
    values, deriv = proto(grid), proto.deriv(grid)
    return AngularProfile(grid, values, deriv, True, defect, L, R)


def _candidate(ode: AngularODE, y_mid, label):
    mid = 0.5 * math.pi
    lo = _integrate(ode, mid, list(y_mid), THETA_EPS, 1.0)
    hi = _integrate(ode, mid, list(y_mid), math.pi - THETA_EPS, 1.0)
    grid = profile_grid()
    vals = np.where(grid <= mid, lo.sol(grid)[0], hi.sol(grid)[0])
    p = AngularProfile(grid, vals, vals, True, 0.0, lo, hi)
    growth = _pole_growth(p, vals)
    return CandidateReport(label, growth, growth < SINGULAR_GROWTH)


def solve_trace_ode() -> AngularProfile:
    """Regular solution of the trace ODE normalized to 1 at the pole.

    Both equatorial initial-data branches are integrated out to the poles
    and classified by pole growth; exactly one must survive.
    """
    ode = trace_ode()
    candidates = (
        _candidate(ode, (1.0, 0.0), "equator value"),
        _candidate(ode, (0.0, 1.0), "equator slope"),
    )
    if sum(c.accepted for c in candidates) != 1:
        raise ConvergenceError("trace", min(c.pole_growth for c in candidates))
    p = shoot(ode, "pole", 1.0)
    if p.pole_growth() >= SINGULAR_GROWTH:
        raise ConvergenceError("trace", p.pole_growth())
    return AngularProfile(p.theta_grid, p.values, p.derivative, True, p.defect,
                          p.left, p.right, candidates)


@dataclass(frozen=True)
class ProfileFamily:
    """``particular + amplitude * homogeneous`` for a given ``alpha0``."""

    alpha0: float
    particular: AngularProfile
    homogeneous: AngularProfile

    def general(self, amplitude: float) -> ProfileSum:
        return ProfileSum(((1.0, self.particular), (float(amplitude), self.homogeneous)))


def solve_tau1_ode(alpha0: float) -> ProfileFamily:
    """Particular solution has zero equatorial slope; homogeneous is 1 at the pole."""
    scale = abs(alpha0) or 1.0
    part = shoot(tau1_ode(alpha0), "mid_slope", 0.0, scale)
    hom = shoot(tau1_ode(0.0), "pole", 1.0)
    return ProfileFamily(alpha0, part, hom)


def solve_tau4_ode(alpha0: float) -> ProfileFamily:
    """Particular solution vanishes at the equator; homogeneous has unit pole slope."""
    scale = abs(alpha0) or 1.0
    part = shoot(tau4_ode(alpha0), "mid_value", 0.0, scale)
    hom = shoot(tau4_ode(0.0), "pole", 1.0)
    return ProfileFamily(alpha0, part, hom)


# ---------------------------------------------------------------------------
# constants


def _meridian_derivatives(profile, z, r):
    rho = np.hypot(z, r)
    th = np.arctan2(r, z)
    tau, dtau = profile(th), profile.deriv(th)
    c, s = np.cos(th), np.sin(th)
    val = tau / rho**2
    dz = (-2.0 * c * tau - s * dtau) / rho**3
    dr = (-2.0 * s * tau + c * dtau) / rho**3
    return val, dz, dr


def balance_residual(tau1, tau4, z, r) -> np.ndarray:
    """``r s1_z + (r s4)_r`` for ``s_i = rho^-2 tau_i(theta)``, exact chain rule."""
    z, r = np.asarray(z, float), np.asarray(r, float)
    _, s1z, _ = _meridian_derivatives(tau1, z, r)
    s4, _, s4r = _meridian_derivatives(tau4, z, r)
    return r * s1z + s4 + r * s4r


def default_meridian_points():
    th = np.linspace(0.05, math.pi - 0.05, 41)
    rho = np.array([0.5, 1.0, 2.0])
    T, P = np.meshgrid(th, rho)
    return (P * np.cos(T)).ravel(), (P * np.sin(T)).ravel()


@dataclass(frozen=True)
class CouplingResult:
    beta0: float
    gamma0: float
    beta_minus_gamma: float
    residual: float


def couple_constants(tau1: ProfileFamily, tau4: ProfileFamily, beta0: float,
                     points=None) -> CouplingResult:
    """Least-squares ``gamma0`` zeroing the first balance residual for given ``beta0``."""
    z, r = default_meridian_points() if points is None else points
    rp = balance_residual(tau1.particular, tau4.particular, z, r)
    rb = balance_residual(tau1.homogeneous, FunctionProfile(np.zeros_like, np.zeros_like), z, r)
    rg = balance_residual(FunctionProfile(np.zeros_like, np.zeros_like), tau4.homogeneous, z, r)
    base = rp + beta0 * rb
    gamma0 = -float(np.dot(rg, base) / np.dot(rg, rg))
    resid = float(np.max(np.abs(base + gamma0 * rg)))
    return CouplingResult(beta0, gamma0, beta0 - gamma0, resid)


def load_balance_integral(tau1, tau4, order: int = 32) -> float:
    """``int_0^pi (cos t tau1 + |sin t| tau4) |sin t| dt`` by Gauss-Legendre."""
    if order < 4:
        raise ValueError("quadrature order must be >= 4")
    x, w = np.polynomial.legendre.leggauss(order)
    t = 0.5 * math.pi * (x + 1.0)
    s = np.abs(np.sin(t))
    vals = (np.cos(t) * tau1(t) + s * tau4(t)) * s
    if not np.all(np.isfinite(vals)):
        raise QuadratureError("non-finite integrand in load-balance quadrature")
    return float(0.5 * math.pi * np.dot(w, vals))


@dataclass(frozen=True)
class LoadBalanceRelation:
    """``alpha_coeff * alpha0 + beta_coeff * beta0 = rhs`` with ``rhs = -f / 2pi``."""

    alpha_coeff: float
    beta_coeff: float
    rhs: float

    def beta_for(self, alpha0: float) -> float:
        return (self.rhs - self.alpha_coeff * alpha0) / self.beta_coeff

    def force(self, alpha0: float, beta0: float) -> float:
        return -2.0 * math.pi * (self.alpha_coeff * alpha0 + self.beta_coeff * beta0)


def load_balance_constant(f: float, tau1: ProfileFamily, tau4: ProfileFamily,
                          order: int = 32) -> LoadBalanceRelation:
    """Affine relation between ``alpha0``, ``beta0`` and ``f`` (``gamma0 = beta0``)."""
    if tau1.alpha0 == 0.0:
        raise ValueError("profiles must be solved with nonzero alpha0")
    a = load_balance_integral(tau1.particular, tau4.particular, order) / tau1.alpha0
    b = load_balance_integral(tau1.homogeneous, tau4.homogeneous, order)
    return LoadBalanceRelation(a, b, -f / (2.0 * math.pi))


@lru_cache(maxsize=None)
def unit_profiles() -> tuple[ProfileFamily, ProfileFamily]:
    """``tau1``/``tau4`` families for ``alpha0 = 1``; other amplitudes scale linearly."""
    return solve_tau1_ode(1.0), solve_tau4_ode(1.0)


# ---------------------------------------------------------------------------
# sigma2 / sigma3


def inverse_laplacian_alpha_zz(alpha0: float) -> Callable:
    """The field ``X`` with ``Lap X = alpha_zz`` used in the sum constraint."""

    def fn(z, r):
        rho = np.hypot(z, r)
        return -1.5 * alpha0 * np.asarray(z, float) ** 3 / rho**5

    return fn


def _zero(z):
    return 0.0


@dataclass(frozen=True)
class Sigma23:
    """General ``(s_rr, s_phiphi)`` family satisfying the sum and consistency constraints.

    With ``F = (s_rr + s_pp) + nu r alpha_r`` the consistency condition
    becomes ``(r^2 s_pp)_r = r F``; the integration constant is
    ``g(z) = lim_{r->inf} r^2 s_pp``, so
    ``s_pp = (g(z) - int_r^inf t F(z, t) dt) / r^2``.
    """

    alpha0: float
    beta0: float
    nu: float
    g: Callable = _zero

    def sum(self, z, r):
        rho = math.hypot(z, r)
        return (-1.5 * self.alpha0 * z**3 / rho**5
                + (self.alpha0 * (1.0 + self.nu) - self.beta0) * z / rho**3)

    def forcing(self, z, t):
        rho = math.hypot(z, t)
        return self.sum(z, t) - 3.0 * self.nu * self.alpha0 * z * t * t / rho**5

    def _quad(self, z, a, b):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, err = integrate.quad(lambda t: t * self.forcing(z, t), a, b,
                                      epsabs=1e-14 * self._scale(), epsrel=1e-12, limit=200)
        if not math.isfinite(val) or err > 1e-9 * self._scale():
            raise QuadratureError(f"radial quadrature failed (error estimate {err:.3e})")
        return val

    def _scale(self):
        return abs(self.alpha0) + abs(self.beta0) or 1.0

    def tail_integral(self, z, r):
        """``int_r^inf t F(z, t) dt``."""
        if z == 0.0:
            return 0.0
        split = r + 10.0 * (abs(z) + r)
        return self._quad(z, r, split) + self._quad(z, split, math.inf)

    def total_integral(self, z):
        return self.tail_integral(z, 0.0)

    def _sigma3_scalar(self, z, r):
        if z == 0.0 and r == 0.0:
            raise SingularPointError("field evaluated at the load application point")
        if r == 0.0:
            jump = self.g(z) - self.total_integral(z)
            if abs(jump) > 1e-9 * self._scale():
                raise SingularEvaluationError(
                    f"s_phiphi has an unresolved 1/r^2 term on the axis (coefficient {jump:.3e})")
            return 0.5 * self.forcing(z, 0.0)
        if r < 0.1 * abs(z):
            # near the axis integrate the short inner piece to avoid cancellation
            head = self._quad(z, 0.0, r)
            return ((self.g(z) - self.total_integral(z)) + head) / (r * r)
        return (self.g(z) - self.tail_integral(z, r)) / (r * r)

    def sigma3(self, z, r):
        z, r = np.broadcast_arrays(np.asarray(z, float), np.asarray(r, float))
        out = np.array([self._sigma3_scalar(a, b) for a, b in zip(z.ravel(), r.ravel())])
        return out.reshape(z.shape) if z.ndim else float(out[0])

    def sigma2(self, z, r):
        z, r = np.broadcast_arrays(np.asarray(z, float), np.asarray(r, float))
        s = np.array([self.sum(a, b) for a, b in zip(z.ravel(), r.ravel())]).reshape(z.shape)
        out = s - self.sigma3(z, r)
        return out if z.ndim else float(out)


def solve_sigma23(alpha0: float, beta0: float, nu: float, g: Callable | None = None) -> Sigma23:
    return Sigma23(alpha0, beta0, nu, _zero if g is None else g)


def axis_gauge_jump(alpha0: float, beta0: float, nu: float, z: float = 1.0) -> float:
    """Jump of ``lim_{r->0} r^2 s_pp`` between ``+z`` and ``-z`` (gauge ``g = 0``).

    A bounded axis displacement needs ``g(z)`` equal to the axis limit
    ``int_0^inf t F dt`` for every ``z``; a smooth ``g`` is only possible
    when that limit does not jump across ``z = 0``.
    """
    s = Sigma23(alpha0, beta0, nu)
    return s.total_integral(z) - s.total_integral(-z)


def zero_gauge(z):
    return 0.0


@dataclass(frozen=True)
class DerivationConstants:
    alpha0: float
    beta0: float
    gamma0: float
    tau0: float
    c1: float
    c2: float
    g_of_z: Callable = zero_gauge
    h0: float = 0.0


def symmetry_closure(f: float, nu: float, relation: LoadBalanceRelation | None = None,
                     z_probe: float = 1.0) -> DerivationConstants:
    """Fix ``alpha0``, ``beta0`` and ``g`` from load balance plus the axis condition.

    Solved for a unit force and scaled, since every constant is linear in ``f``.
    """
    from kelvin.material import IsotropicElastic

    IsotropicElastic(1.0, nu)  # range check
    if relation is None:
        tau1, tau4 = unit_profiles()
        relation = load_balance_constant(1.0, tau1, tau4)
    unit = LoadBalanceRelation(relation.alpha_coeff, relation.beta_coeff, -1.0 / (2.0 * math.pi))

    def jump(a):
        return axis_gauge_jump(a, unit.beta_for(a), nu, z_probe)

    a, res = _secant(jump, 0.0, unit.rhs, 1e-14)
    if abs(res) > 1e-10:
        raise ConvergenceError("closure", abs(res))
    b = unit.beta_for(a)
    c1 = b / a
    # adding 0.0 turns the -0.0 of a zero force into 0.0
    return DerivationConstants(f * a + 0.0, f * b + 0.0, f * b + 0.0, f * (1.0 + nu) * a + 0.0,
                               c1, 1.0 + nu - c1)


# ---------------------------------------------------------------------------
# path integral for sigma4


@dataclass(frozen=True)
class PathSpec:
    """Polyline in a fixed meridian half-plane, vertices ``(z, r)`` with ``r >= 0``."""

    vertices: tuple

    def __post_init__(self):
        v = tuple((float(a), float(b)) for a, b in self.vertices)
        if len(v) < 2:
            raise ValueError("a path needs at least two vertices")
        if any(b < 0 for _, b in v):
            raise ValueError("path leaves the meridian half-plane (r < 0)")
        for p, q in zip(v[:-1], v[1:]):
            if _segment_distance_to_origin(p, q) == 0.0:
                raise SingularPointError("path passes through the load point")
        object.__setattr__(self, "vertices", v)

    @property
    def start(self):
        return self.vertices[0]

    @property
    def end(self):
        return self.vertices[-1]

    @classmethod
    def two_leg(cls, start, end, order: str = "z_first") -> "PathSpec":
        (z0, r0), (z1, r1) = start, end
        corner = (z1, r0) if order == "z_first" else (z0, r1)
        verts = [start, corner, end]
        dedup = [verts[0]] + [p for i, p in enumerate(verts[1:], 1) if p != verts[i - 1]]
        if len(dedup) == 1:
            dedup.append(end)
        return cls(tuple(dedup))

    def segments(self):
        return list(zip(self.vertices[:-1], self.vertices[1:]))


def _segment_distance_to_origin(p, q) -> float:
    p, q = np.asarray(p), np.asarray(q)
    d = q - p
    L2 = float(np.dot(d, d))
    t = 0.0 if L2 == 0 else float(np.clip(-np.dot(p, d) / L2, 0.0, 1.0))
    return float(np.linalg.norm(p + t * d))


@dataclass(frozen=True)
class MeridianFields:
    """Scalar callables ``sigma_i(z, r)`` for the normal components."""

    sigma1: Callable
    sigma2: Callable
    sigma3: Callable


def closed_form_fields(load=None, m=None) -> MeridianFields:
    from kelvin.fields import kelvin_stress

    def comp(name):
        return lambda z, r: getattr(kelvin_stress((z, r), load, m), name)

    return MeridianFields(comp("sigma1"), comp("sigma2"), comp("sigma3"))


def derived_fields(constants: DerivationConstants, nu: float,
                   tau1: ProfileFamily | None = None) -> MeridianFields:
    """``s_zz`` from the numerical profile, ``s_rr``/``s_phiphi`` from the sequential solve."""
    if tau1 is None:
        tau1 = unit_profiles()[0]
    scale = constants.alpha0 / tau1.alpha0
    prof = tau1.general(constants.beta0 / scale) if scale else tau1.homogeneous * 0.0
    s23 = solve_sigma23(constants.alpha0, constants.beta0, nu, constants.g_of_z)

    def s1(z, r):
        return scale * prof(math.atan2(r, z)) / (z * z + r * r)

    return MeridianFields(s1, s23.sigma2, s23.sigma3)


def omega(fields: MeridianFields, z: float, r: float, h: float):
    """``(omega_z, omega_r) = ((r s2)_r - s3, r s1_z)`` by central differences."""
    hr = min(h, 0.5 * r) if r > 0 else h
    ds2 = (fields.sigma2(z, r + hr) - fields.sigma2(z, r - hr)) / (2.0 * hr) if r > 0 else 0.0
    wz = fields.sigma2(z, r) + r * ds2 - fields.sigma3(z, r)
    wr = r * fd.d_dz(fields.sigma1, z, r, h)
    return wz, wr


@dataclass(frozen=True)
class PathIntegralResult:
    sigma4: float
    integral: float
    boundary: float
    path: PathSpec


def path_integral(path: PathSpec, fields: MeridianFields, fd_step: float = 1e-4,
                  tol: float = 1e-10) -> float:
    """``int_C omega . t ds`` over every leg of ``path``."""
    total = 0.0
    for p, q in path.segments():
        p, q = np.asarray(p), np.asarray(q)
        L = float(np.linalg.norm(q - p))
        t = (q - p) / L

        def integrand(s):
            z, r = p + s * t
            h = fd_step * math.hypot(z, r)
            wz, wr = omega(fields, z, r, h)
            return wz * t[0] + wr * t[1]

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, err = integrate.quad(integrand, 0.0, L, epsabs=tol, epsrel=tol, limit=200)
        if not math.isfinite(val) or err > 1e3 * tol * max(1.0, abs(val)):
            raise QuadratureError(f"path quadrature failed (error estimate {err:.3e})")
        total += val
    return total


def path_integral_sigma4(path: PathSpec, fields: MeridianFields, boundary: float = 0.0,
                         fd_step: float = 1e-4, tol: float = 1e-10) -> PathIntegralResult:
    """``s_zr`` at the path end from ``(r s_zr)|_end = boundary - int_C omega . t ds``.

    ``boundary`` is ``r s_zr`` at the start; it vanishes in the limit of a
    start point approaching the axis away from the load.
    """
    z, r = path.end
    if r == 0.0:
        raise SingularEvaluationError("s_zr recovery needs r > 0 at the path end")
    I = path_integral(path, fields, fd_step, tol)
    return PathIntegralResult((boundary - I) / r, I, boundary, path)


def recover_sigma4(z: float, r: float, fields: MeridianFields, delta: float = 1e-6,
                   z_start: float | None = None, order: str = "r_first", **kw) -> PathIntegralResult:
    """Start near the axis at ``(z_start, delta)`` and integrate to ``(z, r)``."""
    if z_start is None:
        z_start = z if z != 0.0 else math.hypot(z, r)
    path = PathSpec.two_leg((z_start, delta), (z, r), order)
    return path_integral_sigma4(path, fields, **kw)


# ---------------------------------------------------------------------------
# full replay


@dataclass(frozen=True)
class StepReport:
    name: str
    residual: float
    tolerance: float
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "residual": self.residual, "tolerance": self.tolerance,
                "pass": self.passed, **({"detail": self.detail} if self.detail else {})}


def _step(name, residual, tol, **detail):
    residual = float(residual)
    return StepReport(name, residual, tol, bool(residual <= tol), detail)


def _rel(a, b):
    return abs(a - b) / abs(b) if b else abs(a - b)


def sigma23_consistency_residual(s23: Sigma23, z, r, h: float = 1e-3) -> float:
    """``s2 - (r s3)_r + nu r alpha_r`` relative to ``|s2| + |s3|``.

    The radial derivative uses the fourth-order five-point stencil with step
    ``h * rho``; second-order differences cannot reach the quadrature noise
    floor of the tail integrals.
    """
    out = 0.0
    for zz, rr in zip(np.ravel(z), np.ravel(r)):
        hh = h * math.hypot(zz, rr)

        def rs3(t):
            return t * s23.sigma3(zz, t)

        d = (-rs3(rr + 2 * hh) + 8 * rs3(rr + hh) - 8 * rs3(rr - hh) + rs3(rr - 2 * hh)) / (12 * hh)
        s2, s3 = s23.sigma2(zz, rr), s23.sigma3(zz, rr)
        ar = -3.0 * s23.alpha0 * zz * rr / math.hypot(zz, rr) ** 5
        res = abs(s2 - d + s23.nu * rr * ar)
        out = max(out, res / (abs(s2) + abs(s3)) if res else 0.0)
    return float(out)


def run_derivation(f: float = 1.0, nu: float = 0.25, skip_closure: bool = False,
                   seed: int = 0, end=(1.0, 1.0)) -> dict:
    """Replay every step and compare with the closed forms.

    Returns a JSON-ready dictionary with one entry per step and a final
    ``state`` of ``"closed"``, ``"underdetermined"`` or ``"failed"``.
    """
    from kelvin.fields import PointLoad, alpha0 as alpha_exact, beta0 as beta_exact
    from kelvin.material import IsotropicElastic

    m = IsotropicElastic(1.0, nu)
    steps: list[StepReport] = []
    rng = np.random.default_rng(seed)

    hs = harmonic_exponent_search()
    zs = rng.uniform(0.5, 2.0, 50) * rng.choice([-1.0, 1.0], 50)
    rs = rng.uniform(0.3, 2.0, 50)
    rho = np.hypot(zs, rs)

    def lap_rel(t, z, r):
        a, b, c = t
        scale = np.hypot(z, r) ** (a + b + c - 2)
        return np.abs(fd.axisym_laplacian(monomial(a, b, c), z, r, 1e-4 * np.hypot(z, r))) / scale

    lap_ok = max(float(np.max(lap_rel(t, zs, rs))) for t in hs.triples)
    lap_bad = float(np.min(lap_rel((1, 1, 1), zs, rs)))
    steps.append(_step("harmonic_exponent_search", lap_ok, 1e-6,
                       triples=[list(t) for t in hs.triples], basis=list(hs.basis),
                       rejected_laplacian=lap_bad))

    try:
        tr = solve_trace_ode()
        steps.append(_step("trace_ode", tr.max_error(np.cos), 1e-8, defect=tr.defect,
                           candidates=[{"label": c.label, "pole_growth": c.pole_growth,
                                        "accepted": c.accepted} for c in tr.candidates]))
        tau1, tau4 = unit_profiles()
    except ConvergenceError as exc:
        steps.append(_step(exc.step, math.inf, 1e-8, error=str(exc)))
        return _finish(f, nu, seed, steps, None, "failed")

    e1p = tau1.particular.max_error(lambda t: 1.5 * np.cos(t) ** 3)
    e1h = tau1.homogeneous.max_error(np.cos)
    e4p = tau4.particular.max_error(lambda t: 1.5 * np.cos(t) ** 2 * np.abs(np.sin(t)))
    e4h = tau4.homogeneous.max_error(lambda t: np.abs(np.sin(t)))
    steps.append(_step("tau1_ode", max(e1p, e1h), 1e-8, particular=e1p, homogeneous=e1h))
    steps.append(_step("tau4_ode", max(e4p, e4h), 1e-8, particular=e4p, homogeneous=e4h))

    cp = couple_constants(tau1, tau4, beta0=0.5)
    off = balance_residual(tau1.particular + 0.5 * tau1.homogeneous, tau4.particular,
                           *default_meridian_points())
    steps.append(_step("couple_constants", abs(cp.beta_minus_gamma), 1e-8,
                       balance_residual=cp.residual, residual_with_gamma0_zero=float(np.max(np.abs(off)))))

    rel = load_balance_constant(f, tau1, tau4)
    steps.append(_step("load_balance", max(abs(rel.alpha_coeff - 1.0), abs(rel.beta_coeff - 2.0)),
                       1e-8, alpha_coeff=rel.alpha_coeff, beta_coeff=rel.beta_coeff, rhs=rel.rhs))

    if skip_closure:
        return _finish(f, nu, seed, steps, None, "underdetermined", family={
            "relation": f"{rel.alpha_coeff:.12g} alpha0 + {rel.beta_coeff:.12g} beta0 = {rel.rhs:.12g}",
            "gamma0": "beta0",
            "g(z)": "free",
            "h0": "free",
        })

    k = symmetry_closure(f, nu, rel)
    a_ex, b_ex = alpha_exact(f, nu), beta_exact(f, nu)
    ea = _rel(k.alpha0, a_ex)
    eb = _rel(k.beta0, b_ex) if b_ex else abs(k.beta0)
    jump = axis_gauge_jump(k.alpha0, k.beta0, nu)
    steps.append(_step("symmetry_closure", max(ea, eb), 1e-8, alpha0=k.alpha0, beta0=k.beta0,
                       alpha0_rel_error=ea, beta0_rel_error=eb, axis_gauge_jump=jump,
                       c1=k.c1, c2=k.c2, tau0=k.tau0))

    load = PointLoad(f)
    s23 = solve_sigma23(k.alpha0, k.beta0, nu)
    pts = np.column_stack([rng.uniform(-2, 2, 20), rng.uniform(0.2, 2, 20)])
    ref = [kelvin_ref(load, m, a, b) for a, b in pts]
    scale = max(abs(v) for row in ref for v in row) or 1.0
    err23 = max(max(abs(s23.sigma2(a, b) - s[1]), abs(s23.sigma3(a, b) - s[2])) / scale
                for (a, b), s in zip(pts, ref))
    cons = sigma23_consistency_residual(s23, pts[:5, 0], pts[:5, 1])
    steps.append(_step("solve_sigma23", max(err23, cons), 1e-10, closed_form_error=err23,
                       consistency_fd=cons))

    fields_ = derived_fields(k, nu)
    z1, r1 = end
    s4_exact = kelvin_ref(load, m, z1, r1)[3]
    try:
        a = recover_sigma4(z1, r1, fields_)
        b = recover_sigma4(z1, r1, fields_, delta=1e-7)
        c = recover_sigma4(z1, r1, fields_, z_start=z1 + 1.0)
    except (QuadratureError, SingularEvaluationError) as exc:
        steps.append(_step("path_integral_sigma4", math.inf, 1e-6, error=str(exc)))
        return _finish(f, nu, seed, steps, k, "failed")
    sc = abs(s4_exact) or 1.0
    steps.append(_step("path_integral_sigma4", abs(a.sigma4 - s4_exact) / sc, 1e-6,
                       sigma4=a.sigma4, closed_form=s4_exact,
                       delta_stability=abs(a.sigma4 - b.sigma4) / sc,
                       path_independence=abs(a.sigma4 - c.sigma4) / sc))
    ok = all(s.passed for s in steps) and steps[-1].detail["path_independence"] <= 1e-6
    return _finish(f, nu, seed, steps, k, "closed" if ok else "failed")


def kelvin_ref(load, m, z, r):
    from kelvin.fields import kelvin_stress

    return tuple(float(v) for v in kelvin_stress((z, r), load, m).stack())


def _finish(f, nu, seed, steps, k, state, family=None):
    out = {
        "config": {"f": f, "nu": nu, "seed": seed},
        "steps": [s.to_dict() for s in steps],
        "state": state if (state != "closed" or all(s.passed for s in steps)) else "failed",
    }
    if k is not None:
        out["constants"] = {"alpha0": k.alpha0, "beta0": k.beta0, "gamma0": k.gamma0,
                            "tau0": k.tau0, "c1": k.c1, "c2": k.c2, "g(z)": 0.0, "h0": k.h0}
    if family is not None:
        out["family"] = family
    if state == "underdetermined" and not all(s.passed for s in steps):
        out["state"] = "failed"
    return out
