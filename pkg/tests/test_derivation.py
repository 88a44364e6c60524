import math
from fractions import Fraction

import numpy as np
import pytest

from kelvin import derivation as D
from kelvin import fd
from kelvin.fields import kelvin_stress
from kelvin.geometry import SingularPointError
from kelvin.material import IsotropicElastic, MaterialError
from tests import oracles

A0 = oracles.PUBLISHED_ALPHA0_025
B0 = oracles.PUBLISHED_BETA0_025


def closed_tau1(a, b):
    return D.FunctionProfile(lambda t: 1.5 * a * np.cos(t) ** 3 + b * np.cos(t),
                             lambda t: -4.5 * a * np.cos(t) ** 2 * np.sin(t) - b * np.sin(t))


def closed_tau4(a, g):
    def fn(t):
        return (1.5 * a * np.cos(t) ** 2 + g) * np.abs(np.sin(t))

    def dfn(t):
        s, c = np.abs(np.sin(t)), np.cos(t)
        return -3.0 * a * c * s * s + (1.5 * a * c * c + g) * c * np.sign(np.sin(t))

    return D.FunctionProfile(fn, dfn)


@pytest.fixture(scope="module")
def unit():
    return D.unit_profiles()


class TestHarmonicSearch:
    def test_admissible_set(self):
        assert set(D.harmonic_exponent_search().triples) == oracles.HARMONIC_TRIPLES

    def test_basis_names(self):
        assert set(D.harmonic_exponent_search().basis) == {"z/rho^3", "1/rho", "z", "1"}

    def test_condition_is_exact(self):
        for t in oracles.HARMONIC_TRIPLES:
            assert D.harmonic_condition(*t, Fraction(2, 7), Fraction(5, 3)) == 0
        assert D.harmonic_condition(1, 0, 0, Fraction(1), Fraction(1)) == 2

    def test_fd_laplacian_of_admissible_function(self):
        rng = np.random.default_rng(0)
        z, r = rng.uniform(0.5, 2, 50) * rng.choice([-1, 1], 50), rng.uniform(0.3, 2, 50)
        lap = fd.axisym_laplacian(D.monomial(-3, 1, 0), z, r, 1e-4 * np.hypot(z, r))
        assert np.max(np.abs(lap)) < 1e-6

    def test_fd_laplacian_rejects_other_triple(self):
        assert abs(fd.axisym_laplacian(D.monomial(1, 1, 1), 1.0, 1.0, 1e-4)) > 1.0


class TestAngularODEs:
    def test_trace_profile(self):
        p = D.solve_trace_ode()
        assert p.max_error(np.cos) < 1e-8
        assert p(math.pi / 3) == pytest.approx(0.5, abs=1e-8)
        assert p(math.pi / 2) == pytest.approx(0.0, abs=1e-8)
        assert p.even

    def test_trace_candidates_filtered(self):
        cands = {c.label: c for c in D.solve_trace_ode().candidates}
        assert cands["equator slope"].accepted
        assert not cands["equator value"].accepted

    def test_amplitude_filter_misses_log_branch(self):
        # the singular branch only reaches ~ln(1/eps) at eps = 1e-6, far below 10^3
        ode = D.trace_ode()
        sol = D._integrate(ode, math.pi / 2, [1.0, 0.0], D.THETA_EPS, 1.0)
        assert abs(sol.y[0, -1]) < 1e3
        assert D.THETA_EPS * abs(sol.y[1, -1]) > D.SINGULAR_GROWTH

    def test_tau1(self, unit):
        t1, _ = unit
        assert t1.particular.max_error(lambda t: 1.5 * np.cos(t) ** 3) < 1e-8
        assert t1.homogeneous.max_error(np.cos) < 1e-8
        gen = (A0 * t1.particular + B0 * t1.homogeneous)
        assert gen(math.pi / 3) == pytest.approx(oracles.TAU1_PI3, rel=1e-8)
        assert gen(math.pi / 2) == pytest.approx(0.0, abs=1e-10)

    def test_tau1_at_scaled_amplitude(self):
        fam = D.solve_tau1_ode(A0)
        ref = lambda t: 1.5 * A0 * np.cos(t) ** 3  # noqa: E731
        assert fam.particular.max_error(ref) < 1e-8 * abs(A0)
        assert fam.general(B0)(math.pi / 3) == pytest.approx(oracles.TAU1_PI3, rel=1e-8)

    def test_homogeneous_cases(self):
        t1, t4 = D.solve_tau1_ode(0.0), D.solve_tau4_ode(0.0)
        assert np.max(np.abs(t1.particular.values)) == 0.0
        assert np.max(np.abs(t4.particular.values)) == 0.0
        assert t1.general(B0).terms[1][0] == B0

    def test_tau4(self, unit):
        _, t4 = unit
        ref = lambda t: 1.5 * np.cos(t) ** 2 * np.abs(np.sin(t))  # noqa: E731
        assert t4.particular.max_error(ref) < 1e-8
        assert t4.homogeneous.max_error(lambda t: np.abs(np.sin(t))) < 1e-8
        gen = A0 * t4.particular + oracles.GAMMA0 * t4.homogeneous
        assert gen(math.pi / 2) == pytest.approx(oracles.GAMMA0, rel=1e-8)
        assert abs(gen(1e-6)) < 1e-6

    def test_profiles_bounded_at_poles(self, unit):
        for fam in unit:
            for p in (fam.particular, fam.homogeneous):
                assert p.pole_growth() < D.SINGULAR_GROWTH

    def test_nonconvergence_reports_defect(self):
        with pytest.raises(D.ConvergenceError) as info:
            D.shoot(D.trace_ode(), "pole", 1.0, tol=1e-30)
        assert info.value.step == "trace" and info.value.defect > 0


class TestConstants:
    def test_coupling_zeroes_residual(self, unit):
        c = D.couple_constants(*unit, beta0=B0 / A0)
        assert abs(c.beta_minus_gamma) < 1e-8
        assert c.residual < 1e-8

    def test_closed_form_residuals(self):
        z, r = D.default_meridian_points()
        good = D.balance_residual(closed_tau1(A0, B0), closed_tau4(A0, B0), z, r)
        bad = D.balance_residual(closed_tau1(A0, B0), closed_tau4(A0, 0.0), z, r)
        zero = D.balance_residual(closed_tau1(0, 0), closed_tau4(0, 0), z, r)
        assert np.max(np.abs(good)) < 1e-8
        assert np.max(np.abs(bad)) > 1e-3 * abs(A0)
        assert np.max(np.abs(zero)) == 0.0

    def test_load_balance_closed_form(self):
        val = D.load_balance_integral(closed_tau1(A0, B0), closed_tau4(A0, B0))
        assert val == pytest.approx(A0 + 2 * B0, abs=1e-12)
        assert -2 * math.pi * val == pytest.approx(1.0, abs=1e-12)
        assert D.load_balance_integral(closed_tau1(0, 0), closed_tau4(0, 0)) == 0.0
        double = D.load_balance_integral(closed_tau1(2 * A0, 2 * B0), closed_tau4(2 * A0, 2 * B0))
        assert double == pytest.approx(2 * val, rel=1e-14)

    def test_load_balance_relation(self, unit):
        rel = D.load_balance_constant(1.0, *unit)
        assert rel.alpha_coeff == pytest.approx(1.0, abs=1e-8)
        assert rel.beta_coeff == pytest.approx(2.0, abs=1e-8)
        assert rel.rhs == pytest.approx(-1 / (2 * math.pi))
        assert rel.force(A0, B0) == pytest.approx(1.0, rel=1e-8)

    def test_quadrature_failure(self):
        bad = D.FunctionProfile(lambda t: np.full_like(t, np.nan), lambda t: t)
        with pytest.raises(D.QuadratureError):
            D.load_balance_integral(bad, bad)

    @pytest.mark.parametrize("nu", oracles.NU_SWEEP)
    def test_closure_sweep(self, nu):
        k = D.symmetry_closure(1.0, nu)
        assert k.alpha0 == pytest.approx(oracles.alpha0(1.0, nu), rel=1e-8)
        assert k.beta0 == pytest.approx(oracles.beta0(1.0, nu), rel=1e-8)
        assert k.gamma0 == k.beta0
        assert k.c1 + k.c2 == pytest.approx(1 + nu, rel=1e-14)
        assert k.tau0 == pytest.approx((1 + nu) * k.alpha0, rel=1e-14)
        assert k.alpha0 * (1 - 2 * nu) == pytest.approx(2 * k.beta0, rel=1e-8, abs=1e-14)
        assert k.alpha0 + 2 * k.beta0 == pytest.approx(-1 / (2 * math.pi), rel=1e-8)
        assert k.g_of_z(0.7) == 0.0 and k.h0 == 0.0

    def test_closure_published_values(self):
        k = D.symmetry_closure(1.0, 0.25)
        assert k.alpha0 == pytest.approx(A0, rel=1e-8)
        assert k.beta0 == pytest.approx(B0, rel=1e-8)

    def test_closure_zero_force(self):
        k = D.symmetry_closure(0.0, 0.25)
        assert (k.alpha0, k.beta0, k.gamma0, k.tau0) == (0.0, 0.0, 0.0, 0.0)

    def test_closure_rejects_incompressible(self):
        with pytest.raises(MaterialError):
            D.symmetry_closure(1.0, 0.5)


class TestSigma23:
    s = D.solve_sigma23(A0, B0, 0.25)

    def test_closure_values(self):
        rng = np.random.default_rng(3)
        for z, r in zip(rng.uniform(-2, 2, 15), rng.uniform(0.05, 2, 15)):
            ref = kelvin_stress((z, r))
            scale = abs(ref.sigma2) + abs(ref.sigma3)
            assert abs(self.s.sigma3(z, r) + B0 * z / math.hypot(z, r) ** 3) < 1e-10 * scale
            assert abs(self.s.sigma2(z, r) - ref.sigma2) < 1e-10 * scale

    def test_sum_constraint(self):
        rng = np.random.default_rng(4)
        for z, r in zip(rng.uniform(-2, 2, 100), rng.uniform(0.1, 2, 100)):
            rho = math.hypot(z, r)
            target = -1.5 * A0 * z**3 / rho**5 + (A0 * 1.25 - B0) * z / rho**3
            assert self.s.sigma2(z, r) + self.s.sigma3(z, r) == pytest.approx(target, abs=1e-12)

    def test_gauge_term(self):
        g = D.solve_sigma23(A0, B0, 0.25, g=lambda z: 1.0)
        for z, r in ((1.0, 0.5), (-0.3, 2.0)):
            assert g.sigma3(z, r) - self.s.sigma3(z, r) == pytest.approx(1 / r**2, rel=1e-10)

    def test_axis_evaluation(self):
        assert self.s.sigma3(1.0, 0.0) == pytest.approx(-B0, rel=1e-10)
        off = D.solve_sigma23(A0, 0.0, 0.25)
        with pytest.raises(D.SingularEvaluationError):
            off.sigma3(1.0, 0.0)
        with pytest.raises(SingularPointError):
            self.s.sigma3(0.0, 0.0)

    def test_consistency_condition(self):
        assert D.sigma23_consistency_residual(self.s, [0.7, -1.2], [1.3, 0.4]) < 1e-10

    def test_inverse_laplacian_value(self):
        X = D.inverse_laplacian_alpha_zz(A0)
        alpha = lambda z, r: A0 * z / np.hypot(z, r) ** 3  # noqa: E731
        for z, r in ((0.8, 0.6), (-1.1, 1.4)):
            diff = [fd.axisym_laplacian(X, z, r, h) - fd.d2_dz2(alpha, z, r, h)
                    for h in (2e-3, 1e-3)]
            extrapolated = (4 * diff[1] - diff[0]) / 3
            assert abs(extrapolated) < 1e-8 * abs(fd.d2_dz2(alpha, z, r, 1e-3))

    def test_axis_gauge_jump_vanishes_only_at_closure(self):
        assert abs(D.axis_gauge_jump(A0, B0, 0.25)) < 1e-13
        assert abs(D.axis_gauge_jump(A0, 0.0, 0.25)) > 1e-3


class TestPathIntegral:
    fields = D.closed_form_fields()

    def test_recovers_closed_form(self):
        res = D.recover_sigma4(1.0, 1.0, self.fields)
        assert res.sigma4 == pytest.approx(oracles.SIGMA4_11, rel=1e-6)

    def test_path_independence(self):
        a = D.path_integral_sigma4(D.PathSpec.two_leg((0.5, 1e-6), (1.0, 1.0), "r_first"), self.fields)
        b = D.path_integral_sigma4(D.PathSpec.two_leg((2.0, 1e-6), (1.0, 1.0), "r_first"), self.fields)
        c = D.path_integral_sigma4(D.PathSpec.two_leg((2.0, 1e-6), (1.0, 1.0), "z_first"), self.fields)
        assert a.sigma4 == pytest.approx(b.sigma4, rel=1e-6)
        assert b.sigma4 == pytest.approx(c.sigma4, rel=1e-6)

    def test_closed_loop(self):
        loop = D.PathSpec(((0.5, 0.5), (1.5, 0.5), (1.5, 2.0), (-1.0, 2.0), (-1.0, 0.5), (0.5, 0.5)))
        assert abs(D.path_integral(loop, self.fields)) < 1e-6

    def test_delta_limit(self):
        a = D.recover_sigma4(-0.5, 2.0, self.fields, delta=1e-6)
        b = D.recover_sigma4(-0.5, 2.0, self.fields, delta=1e-7)
        assert a.sigma4 == pytest.approx(b.sigma4, rel=1e-8)
        assert a.sigma4 == pytest.approx(kelvin_stress((-0.5, 2.0)).sigma4, rel=1e-6)

    def test_diagonal_start_diverges(self):
        # r0 * s_zr at (d, d) behaves like 1/d, so it cannot be dropped
        d = 1e-4
        assert abs(d * kelvin_stress((d, d)).sigma4) > 1.0

    def test_equatorial_end(self):
        res = D.recover_sigma4(0.0, 1.0, self.fields)
        assert res.sigma4 == pytest.approx(oracles.SIGMA4_EQUATOR, rel=1e-6)

    def test_curl_free(self):
        h = 1e-4
        for z, r in ((0.6, 0.9), (-1.2, 0.5)):
            wr = lambda a, b: D.omega(self.fields, a, b, 1e-5)[1]  # noqa: E731
            wz = lambda a, b: D.omega(self.fields, a, b, 1e-5)[0]  # noqa: E731
            curl = fd.d_dz(wr, z, r, h) - fd.d_dr(wz, z, r, h)
            assert abs(curl) < 1e-5

    def test_rejects_bad_paths(self):
        with pytest.raises(SingularPointError):
            D.PathSpec(((-1.0, 0.0), (1.0, 0.0)))
        with pytest.raises(ValueError):
            D.PathSpec(((1.0, -0.1), (1.0, 1.0)))
        with pytest.raises(D.SingularEvaluationError):
            D.path_integral_sigma4(D.PathSpec(((1.0, 1.0), (1.0, 0.0))), self.fields)

    def test_derived_fields(self):
        k = D.symmetry_closure(1.0, 0.25)
        res = D.recover_sigma4(1.0, 1.0, D.derived_fields(k, 0.25))
        assert res.sigma4 == pytest.approx(oracles.SIGMA4_11, rel=1e-6)


class TestReport:
    def test_full_replay_closes(self):
        rep = D.run_derivation(1.0, 0.25)
        assert rep["state"] == "closed"
        assert all(s["pass"] for s in rep["steps"])
        assert rep["constants"]["alpha0"] == pytest.approx(A0, rel=1e-8)

    def test_skip_closure(self):
        rep = D.run_derivation(1.0, 0.25, skip_closure=True)
        assert rep["state"] == "underdetermined"
        assert rep["family"]["g(z)"] == "free"
        assert "constants" not in rep

    def test_material_range(self):
        with pytest.raises(MaterialError):
            D.run_derivation(1.0, 0.5)

    def test_isotropic_material_default(self):
        assert IsotropicElastic().nu == 0.25
