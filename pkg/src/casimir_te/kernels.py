"""Hot kernels for the TE-mode contour integrand.

Two interchangeable implementations live here: a compiled per-node loop
(numba) and a vectorised numpy path. ``CASIMIR_TE_BACKEND`` selects the
default at import time (``numba`` or ``numpy``); numba is used when it is
importable and the variable is unset.

All kernels evaluate the full contour integrand including the measure,

    C1 (p = t real):       p^2 / (r e^{-i theta t} - 1)
    C2 (p = i q, dp=i dq): -i q^2 e^{-X} / (r - e^{-X}),   X = theta q

with theta = 2 omega a / c and r the squared reflection ratio of the plate
model. ``r - 1`` and ``e^{-i phi} - 1`` are formed without cancellation so
the kernel stays accurate where both are tiny (low frequency, small p).
"""

import cmath
import math
import os

import numpy as np

PERFECT = 0
DIELECTRIC = 1
CONDUCTOR = 2

PATH_C1 = 0
PATH_C2 = 1

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_requested = os.environ.get("CASIMIR_TE_BACKEND", "").strip().lower()
if _requested not in ("", "numba", "numpy"):
    raise ImportError(f"CASIMIR_TE_BACKEND must be 'numba' or 'numpy', got {_requested!r}")
HAVE_NUMBA = numba is not None
BACKEND = "numpy" if (_requested == "numpy" or not HAVE_NUMBA) else "numba"


# ---------------------------------------------------------------- numpy path

def _branch(s):
    # Re s >= 0; on the imaginary axis take Im s >= 0
    flip = (s.real < 0) | ((s.real == 0) & (s.imag < 0))
    return np.where(flip, -s, s)


def reflection_minus_one_np(model, param, p, k0):
    """r - 1 for an array of contour points p (complex)."""
    p = np.asarray(p, dtype=np.complex128)
    if model == PERFECT:
        return np.zeros_like(p)
    if model == DIELECTRIC:
        s = _branch(np.sqrt(param - 1.0 + p * p))
        return 4.0 * s * p / (s - p) ** 2
    if model == CONDUCTOR:
        K = 1j * k0 * p
        return 4.0 * param * K / (param - K) ** 2
    raise ValueError(f"unknown plate model code {model}")


def integrand_np(t, path, model, param, k0, a):
    t = np.asarray(t, dtype=np.float64)
    theta = 2.0 * k0 * a
    if path == PATH_C1:
        p = t.astype(np.complex128)
        rm1 = reflection_minus_one_np(model, param, p, k0)
        ph = theta * t
        em1 = -2.0 * np.sin(0.5 * ph) ** 2 - 1j * np.sin(ph)
        return p * p / (rm1 + em1 + rm1 * em1)
    if path == PATH_C2:
        rm1 = reflection_minus_one_np(model, param, 1j * t, k0)
        X = theta * t
        return -1j * t * t * np.exp(-X) / (rm1 - np.expm1(-X))
    raise ValueError(f"unknown contour path code {path}")


# ---------------------------------------------------------------- numba path

if HAVE_NUMBA:

    @numba.njit(cache=True)
    def _rm1_scalar(model, param, p, k0):
        if model == DIELECTRIC:
            s = cmath.sqrt(param - 1.0 + p * p)
            if s.real < 0.0 or (s.real == 0.0 and s.imag < 0.0):
                s = -s
            d = s - p
            return 4.0 * s * p / (d * d)
        if model == CONDUCTOR:
            K = 1j * k0 * p
            d = param - K
            return 4.0 * param * K / (d * d)
        return 0j

    @numba.njit(cache=True)
    def _integrand_loop(t, path, model, param, k0, a):
        n = t.shape[0]
        out = np.empty(n, dtype=np.complex128)
        theta = 2.0 * k0 * a
        for j in range(n):
            x = t[j]
            if path == PATH_C1:
                p = complex(x, 0.0)
                rm1 = _rm1_scalar(model, param, p, k0)
                ph = theta * x
                sh = math.sin(0.5 * ph)
                em1 = complex(-2.0 * sh * sh, -math.sin(ph))
                out[j] = p * p / (rm1 + em1 + rm1 * em1)
            else:
                rm1 = _rm1_scalar(model, param, complex(0.0, x), k0)
                X = theta * x
                out[j] = complex(0.0, -x * x * math.exp(-X)) / (rm1 - math.expm1(-X))
        return out

    def integrand_nb(t, path, model, param, k0, a):
        t = np.ascontiguousarray(t, dtype=np.float64)
        shape = t.shape
        out = _integrand_loop(t.ravel(), int(path), int(model), complex(param),
                              float(k0), float(a))
        return out.reshape(shape)

else:  # pragma: no cover
    integrand_nb = None


def integrand(t, path, model, param, k0, a):
    """Complex contour integrand at real parameter values ``t``.

    Parameters
    ----------
    t : array_like
        p on C1, q (with p = i q) on C2.
    path : int
        ``PATH_C1`` or ``PATH_C2``.
    model : int
        ``PERFECT``, ``DIELECTRIC`` or ``CONDUCTOR``.
    param : complex
        Permittivity for the dielectric model, surface response alpha (cm^-1)
        for the conductor model; ignored for the perfect conductor.
    k0 : float
        Vacuum wavenumber omega / c in cm^-1.
    a : float
        Plate separation in cm.
    """
    if BACKEND == "numba":
        return integrand_nb(t, path, model, param, k0, a)
    return integrand_np(t, path, model, param, k0, a)
