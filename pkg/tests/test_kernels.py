import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from casimir_te import kernels
from casimir_te.constants import C_LIGHT
from casimir_te.materials import ConductorParams, DrudeLikePermittivity, permittivity
from casimir_te.materials import surface_response_alpha
from casimir_te.spectrum import conductor_integrand, dielectric_integrand, perfect_integrand

needs_numba = pytest.mark.skipif(not kernels.HAVE_NUMBA, reason="numba not installed")
A = 1e-4


def _param(model, omega):
    if model == kernels.DIELECTRIC:
        return permittivity(DrudeLikePermittivity(), omega)
    if model == kernels.CONDUCTOR:
        return surface_response_alpha(ConductorParams(), omega)
    return 0j


models = st.sampled_from([kernels.PERFECT, kernels.DIELECTRIC, kernels.CONDUCTOR])
paths = st.sampled_from([kernels.PATH_C1, kernels.PATH_C2])


@needs_numba
@settings(max_examples=60, deadline=None)
@given(model=models, path=paths, logw=st.floats(9, 15))
def test_backends_agree(model, path, logw):
    omega = 10.0**logw
    k0 = omega / C_LIGHT
    hi = 1.0 if path == kernels.PATH_C1 else 20.0 / (2 * k0 * A)
    t = np.linspace(1e-6, hi, 257)
    param = _param(model, omega)
    a = kernels.integrand_np(t, path, model, param, k0, A)
    b = kernels.integrand_nb(t, path, model, param, k0, A)
    scale = np.max(np.abs(a))
    assert np.allclose(a, b, rtol=1e-12, atol=1e-13 * scale)


@pytest.mark.parametrize("omega", [1e10, 1e12, 1e14])
def test_kernel_matches_reference_integrands(omega):
    k0 = omega / C_LIGHT
    p = np.linspace(0.01, 1.0, 50)
    q = np.linspace(0.01, 10.0 / (2 * k0 * A), 50)
    eps = _param(kernels.DIELECTRIC, omega)
    alpha = _param(kernels.CONDUCTOR, omega)
    cases = [
        (kernels.PERFECT, 0j, lambda z: perfect_integrand(z, omega, A)),
        (kernels.DIELECTRIC, eps, lambda z: dielectric_integrand(eps, z, omega, A)),
        (kernels.CONDUCTOR, alpha, lambda z: conductor_integrand(alpha, z, omega, A)),
    ]
    for code, param, ref in cases:
        c1 = kernels.integrand(p, kernels.PATH_C1, code, param, k0, A)
        assert np.allclose(c1, ref(p), rtol=1e-10, atol=0)
        # on C2 the kernel carries the measure dp = i dq
        c2 = kernels.integrand(q, kernels.PATH_C2, code, param, k0, A)
        assert np.allclose(c2, 1j * ref(1j * q), rtol=1e-10, atol=1e-300)


def test_kernel_preserves_shape():
    t = np.linspace(0.1, 0.9, 12).reshape(3, 4)
    out = kernels.integrand(t, kernels.PATH_C1, kernels.DIELECTRIC, -1e4 + 1e6j, 30.0, A)
    assert out.shape == (3, 4)


def test_unknown_codes_rejected():
    with pytest.raises(ValueError):
        kernels.integrand_np(np.ones(3), 7, kernels.PERFECT, 0j, 1.0, A)
    with pytest.raises(ValueError):
        kernels.reflection_minus_one_np(9, 0j, np.ones(3), 1.0)


def _backend_in_subprocess(value):
    env = dict(os.environ, CASIMIR_TE_BACKEND=value)
    code = "from casimir_te import kernels; print(kernels.BACKEND)"
    return subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)


def test_backend_env_flag():
    assert _backend_in_subprocess("numpy").stdout.strip() == "numpy"
    if kernels.HAVE_NUMBA:
        assert _backend_in_subprocess("numba").stdout.strip() == "numba"
    assert _backend_in_subprocess("fortran").returncode != 0
