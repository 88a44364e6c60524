import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kelvin.fields import CylindricalStress
from kelvin.geometry import (
    CartesianPoint,
    CylindricalTriple,
    FrameBasis,
    SingularPointError,
    SphericalTriple,
    cart_to_cyl,
    cart_to_zrphi,
    cyl_stress_to_tensor,
    cyl_to_cart,
    cyl_to_sph,
    load_frame,
    sph_to_cyl,
    sphere_normal,
    zrphi_to_cart,
)


class TestConversions:
    @pytest.mark.parametrize(
        "p, expected",
        [((1, 0, 0), (1, 0, 0)), ((0, 1, 0), (0, 1, 0)), ((1, 1, 0), (1, 1, 0))],
    )
    def test_cart_to_cyl_examples(self, p, expected):
        c = cart_to_cyl(CartesianPoint(*p))
        assert (c.z, c.r, c.phi) == pytest.approx(expected, abs=1e-15)

    def test_axis_point_has_zero_azimuth(self):
        c = cart_to_cyl(CartesianPoint(-3.0, 0.0, 0.0))
        assert c.r == 0.0 and c.phi == 0.0

    @pytest.mark.parametrize(
        "z, r, rho, theta",
        [(1, 0, 1, 0), (0, 2, 2, math.pi / 2), (1, 1, math.sqrt(2), math.pi / 4)],
    )
    def test_cyl_to_sph_examples(self, z, r, rho, theta):
        s = cyl_to_sph(CylindricalTriple(z, r))
        assert s.rho == pytest.approx(rho, rel=1e-15)
        assert s.theta == pytest.approx(theta, rel=1e-15, abs=1e-15)

    def test_origin_is_singular(self):
        with pytest.raises(SingularPointError):
            cyl_to_sph(CylindricalTriple(0.0, 0.0))

    def test_negative_radius_rejected(self):
        with pytest.raises(ValueError):
            CylindricalTriple(1.0, -0.5)

    def test_round_trip_random_points(self):
        rng = np.random.default_rng(7)
        d = rng.normal(size=(1000, 3))
        d /= np.linalg.norm(d, axis=1)[:, None]
        x = d * np.exp(rng.uniform(np.log(1e-3), np.log(1e3), 1000))[:, None]
        frame = load_frame((0.3, -0.2, 0.9))
        z, r, phi = cart_to_zrphi(x, frame)
        back = zrphi_to_cart(z, r, phi, frame)
        rho = np.linalg.norm(x, axis=1)
        assert np.max(np.linalg.norm(back - x, axis=1) / rho) < 1e-12
        for zi, ri, pi in list(zip(z, r, phi))[:50]:
            c = sph_to_cyl(cyl_to_sph(CylindricalTriple(zi, ri, pi)))
            assert (c.z, c.r) == pytest.approx((zi, ri), rel=1e-12, abs=1e-12 * np.hypot(zi, ri))

    @given(st.floats(-1e3, 1e3), st.floats(1e-3, 1e3), st.floats(0, 2 * math.pi - 1e-9))
    def test_round_trip_property(self, z, r, phi):
        p = cyl_to_cart(CylindricalTriple(z, r, phi))
        c = cart_to_cyl(p)
        scale = math.hypot(z, r)
        assert abs(c.z - z) <= 1e-12 * scale
        assert abs(c.r - r) <= 1e-12 * scale
        assert abs(math.remainder(c.phi - phi, 2 * math.pi)) <= 1e-9

    def test_spherical_relations(self):
        s = SphericalTriple(2.0, 2.5, 0.4)
        c = sph_to_cyl(s)
        assert c.z == pytest.approx(2.0 * math.cos(2.5), rel=1e-12)
        assert c.r == pytest.approx(2.0 * abs(math.sin(2.5)), rel=1e-12)


class TestFrames:
    @pytest.mark.parametrize("phi", [0.0, 0.7, 2.0, 5.5])
    def test_basis_is_right_handed_orthonormal(self, phi):
        b = FrameBasis.at(phi, load_frame((1.0, 2.0, -0.5)))
        M = b.matrix()
        assert np.allclose(M @ M.T, np.eye(3), atol=1e-14)
        assert np.allclose(np.cross(b.e1, b.h), b.h_prime, atol=1e-14)

    def test_sphere_normal_examples(self):
        frame = load_frame()
        assert np.allclose(sphere_normal(0.0, 1.3, frame), frame[0])
        assert np.allclose(sphere_normal(math.pi / 2, 0.0, frame), FrameBasis.at(0.0, frame).h)
        assert np.allclose(sphere_normal(math.pi, 0.2, frame), -frame[0], atol=1e-15)


class TestStressTensor:
    def test_axial_component_only(self):
        T = cyl_stress_to_tensor(CylindricalStress(1.0, 0.0, 0.0, 0.0), 1.1)
        e = load_frame()[0]
        assert np.allclose(T, np.outer(e, e), atol=1e-15)

    def test_radial_component(self):
        T = cyl_stress_to_tensor(CylindricalStress(0.0, 1.0, 0.0, 0.0), 0.0)
        h = FrameBasis.at(0.0).h
        assert np.allclose(T, np.outer(h, h), atol=1e-15)

    def test_isotropic_case_is_identity(self):
        T = cyl_stress_to_tensor(CylindricalStress(1.0, 1.0, 1.0, 0.0), 0.9)
        assert np.allclose(T, np.eye(3), atol=1e-15)
        assert np.trace(T) == pytest.approx(3.0, abs=1e-15)

    @given(st.lists(st.floats(-10, 10), min_size=4, max_size=4), st.floats(0, 2 * math.pi))
    def test_symmetric_with_exact_trace(self, s, phi):
        T = cyl_stress_to_tensor(CylindricalStress(*s), phi, load_frame((0.2, 1.0, 0.3)))
        assert np.array_equal(T, T.T) or np.allclose(T, T.T, rtol=0, atol=1e-15)
        assert np.trace(T) == pytest.approx(s[0] + s[1] + s[2], abs=1e-12 * (1 + max(map(abs, s))))

    def test_frame_covariance(self):
        s = CylindricalStress(0.3, -1.2, 0.7, 0.45)
        frame = load_frame()
        for phi in (0.4, 1.9, 4.0):
            c, sn = math.cos(phi), math.sin(phi)
            Q = frame.T @ np.array([[1, 0, 0], [0, c, -sn], [0, sn, c]]) @ frame
            rotated = Q @ cyl_stress_to_tensor(s, 0.0, frame) @ Q.T
            assert np.allclose(rotated, cyl_stress_to_tensor(s, phi, frame), atol=1e-12)

    def test_broadcasts_over_arrays(self):
        s = CylindricalStress(np.ones(5), np.zeros(5), np.zeros(5), np.zeros(5))
        assert cyl_stress_to_tensor(s, np.linspace(0, 1, 5)).shape == (5, 3, 3)
