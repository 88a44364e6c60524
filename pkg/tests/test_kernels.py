import os
import subprocess
import sys

import numpy as np
import pytest

from kelvin import _pykernels, kernels


def _inputs(n=500, seed=0):
    rng = np.random.default_rng(seed)
    z = rng.uniform(-4, 4, n)
    r = rng.uniform(0, 4, n)
    r[:5] = 0.0
    return z, r, rng.normal(size=(n, 3))


class TestBackends:
    def test_python_backend_always_available(self):
        assert "python" in kernels.available_backends()

    def test_selected_backend_is_reported(self):
        assert kernels.BACKEND in kernels.available_backends()

    @pytest.mark.skipif("cython" not in kernels.available_backends(),
                        reason="compiled extension not built")
    def test_backends_agree(self):
        cy = kernels.available_backends()["cython"]
        z, r, d = _inputs()
        for nu in (-0.5, 0.0, 0.3, 0.49):
            a = cy.kelvin_state(z, r, 1.3, 2.0, nu)
            b = _pykernels.kelvin_state(z, r, 1.3, 2.0, nu)
            assert np.allclose(a, b, rtol=1e-14, atol=1e-300)
            assert np.allclose(cy.green_tensor(d, 2.0, nu), _pykernels.green_tensor(d, 2.0, nu),
                               rtol=1e-14, atol=1e-300)

    @pytest.mark.parametrize("mod", list(kernels.available_backends().values()))
    def test_origin_gives_nan(self, mod):
        out = mod.kelvin_state(np.array([0.0, 1.0]), np.array([0.0, 0.0]), 1.0, 1.0, 0.25)
        assert np.all(np.isnan(out[:, 0])) and np.all(np.isfinite(out[:, 1]))
        assert np.all(np.isnan(mod.green_tensor(np.zeros((1, 3)), 1.0, 0.25)))

    @pytest.mark.parametrize("mod", list(kernels.available_backends().values()))
    def test_green_tensor_symmetric(self, mod):
        _, _, d = _inputs(50, 3)
        U = mod.green_tensor(d, 1.0, 0.25)
        assert np.array_equal(U, np.swapaxes(U, 1, 2))

    def test_environment_forces_fallback(self):
        env = dict(os.environ, KELVIN_PURE_PYTHON="1")
        out = subprocess.run([sys.executable, "-c", "from kelvin import kernels; print(kernels.BACKEND)"],
                             env=env, capture_output=True, text=True, check=True)
        assert out.stdout.strip() == "python"

    def test_mismatched_lengths_rejected(self):
        for mod in kernels.available_backends().values():
            with pytest.raises(ValueError):
                mod.kelvin_state(np.ones(3), np.ones(2), 1.0, 1.0, 0.25)
