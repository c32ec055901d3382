"""Material response: Drude-like permittivity, Kramers-Kronig, skin depth,
surface response and regime diagnostics. Gaussian units throughout."""

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .constants import C_LIGHT


class RegimeWarning(UserWarning):
    """An approximation is being used outside its stated regime."""


class TailTruncationWarning(UserWarning):
    """The Kramers-Kronig grid does not cover enough of the spectrum."""


def _positive(name, value):
    if not np.all(np.asarray(value) > 0):
        raise ValueError(f"{name} must be positive, got {value!r}")


@dataclass(frozen=True)
class DrudeLikePermittivity:
    """eps1 = -amp_re / (1 + (w/w0)^2),  eps2 = amp_im / (w (1 + (w/w0)^2))."""

    amp_re: float = 1.48e4
    amp_im: float = 1.8e18  # s^-1
    omega0: float = 3.3e13  # s^-1
    valid_max_omega: float = 1e14  # s^-1

    def __post_init__(self):
        for name in ("amp_re", "amp_im", "omega0", "valid_max_omega"):
            _positive(name, getattr(self, name))


@dataclass(frozen=True)
class ConductorParams:
    sigma: float = 3e17  # s^-1 (Gaussian)
    mu: float = 1.0
    mean_free_path: float = 3e-6  # cm

    def __post_init__(self):
        for name in ("sigma", "mu", "mean_free_path"):
            _positive(name, getattr(self, name))


@dataclass(frozen=True)
class ValidityReport:
    omega: float
    skin_depth: float  # cm
    inverse_quarter_gap: float  # 1/(4a), cm^-1
    diffusion_wavevector: float  # sqrt(2)/delta, cm^-1
    wavelength_criterion_ok: bool
    mean_free_path_ok: bool
    model_band_ok: bool


def permittivity(model: DrudeLikePermittivity, omega):
    """Complex permittivity eps1 + i eps2; works on scalars and arrays."""
    _positive("omega", omega)
    omega = np.asarray(omega, dtype=float)
    d = 1.0 + (omega / model.omega0) ** 2
    eps = -model.amp_re / d + 1j * model.amp_im / (omega * d)
    return complex(eps) if eps.ndim == 0 else eps


def skin_depth(c: ConductorParams, omega):
    """delta = c / sqrt(2 pi mu sigma omega), in cm."""
    _positive("omega", omega)
    return C_LIGHT / np.sqrt(2.0 * math.pi * c.mu * c.sigma * np.asarray(omega, dtype=float))


def surface_response_alpha(c: ConductorParams, omega: float) -> complex:
    """Surface boundary coefficient alpha = (1 + i) sqrt(w / 8 pi sigma) (w / c).

    Assumes the displacement current in the metal is negligible; a
    :class:`RegimeWarning` is issued when ``sigma <= omega``.
    """
    _positive("omega", omega)
    if c.sigma <= omega:
        warnings.warn(f"sigma={c.sigma:g} s^-1 does not exceed omega={omega:g} s^-1; "
                      "surface impedance approximation is not justified", RegimeWarning,
                      stacklevel=2)
    mag = math.sqrt(omega / (8.0 * math.pi * c.sigma)) * (omega / C_LIGHT)
    return complex(mag, mag)


def boyer_threshold(rho: float, eta: float) -> float:
    """eta^2 rho / 4 pi: below this frequency dielectric boundary conditions fail."""
    _positive("rho", rho)
    _positive("eta", eta)
    return eta * eta * rho / (4.0 * math.pi)


def validity_check(conductor: ConductorParams, omega: float, a: float, *,
                   valid_max_omega: float = 1e14,
                   boyer: Optional[float] = None) -> ValidityReport:
    """Regime diagnostics at one frequency for plates a cm apart.

    ``model_band_ok`` requires ``omega`` below ``valid_max_omega`` and, when
    given, below the Boyer threshold ``boyer``.
    """
    _positive("omega", omega)
    _positive("a", a)
    delta = float(skin_depth(conductor, omega))
    k_mode = 1.0 / (4.0 * a)
    k_diff = math.sqrt(2.0) / delta
    band = omega < valid_max_omega and (boyer is None or omega < boyer)
    return ValidityReport(
        omega=float(omega),
        skin_depth=delta,
        inverse_quarter_gap=k_mode,
        diffusion_wavevector=k_diff,
        wavelength_criterion_ok=bool(k_mode < k_diff),
        mean_free_path_ok=bool(delta > conductor.mean_free_path),
        model_band_ok=bool(band),
    )


# ------------------------------------------------------------- Kramers-Kronig

@dataclass(frozen=True)
class KKGrid:
    omega_min: float = 1e6
    omega_max: float = 1e18
    points_per_decade: int = 200

    def __post_init__(self):
        _positive("omega_min", self.omega_min)
        if not self.omega_max > self.omega_min:
            raise ValueError("omega_max must exceed omega_min")
        if self.points_per_decade < 4:
            raise ValueError("points_per_decade must be >= 4")


@dataclass(frozen=True)
class KKResult:
    value: float  # eps1 - 1
    err_estimate: float
    tail_low: float
    tail_high: float
    truncated: bool


def _kk_sum(eps2, omega, grid, h):
    # Nodes Omega = omega * exp(v) with v = (j - 1/2) h: the grid straddles
    # Omega = omega symmetrically and never lands on it.
    v_lo = math.log(grid.omega_min / omega)
    v_hi = math.log(grid.omega_max / omega)
    j_lo = math.ceil(v_lo / h + 0.5)
    j_hi = math.floor(v_hi / h + 0.5)
    v = (np.arange(j_lo, j_hi + 1) - 0.5) * h
    Om = omega * np.exp(v)
    # Omega dOmega / (Omega^2 - omega^2) = dv / (1 - exp(-2v))
    w = 1.0 / -np.expm1(-2.0 * v)
    y = np.asarray(eps2(Om), dtype=float)
    # pair +v with -v so the 1/(2v) singular parts cancel before summation
    core = np.minimum(j_hi, 1 - j_lo)
    pos = (v > 0) & (np.arange(j_lo, j_hi + 1) <= core)
    neg = (v < 0) & (np.arange(j_lo, j_hi + 1) >= 1 - core)
    yp, wp = y[pos], w[pos]
    yn, wn = y[neg][::-1], w[neg][::-1]
    paired = np.sum(yp * wp + yn * wn)
    rest = np.sum(y[~(pos | neg)] * w[~(pos | neg)])
    lo_edge = omega * math.exp((j_lo - 1) * h)
    hi_edge = omega * math.exp(j_hi * h)
    return h * (paired + rest), lo_edge, hi_edge


def _log_slope(fn, x):
    r = 1.01
    a, b = float(fn(np.array([x / r]))[0]), float(fn(np.array([x * r]))[0])
    if a <= 0 or b <= 0:
        return None
    return math.log(b / a) / (2.0 * math.log(r))


def _kk_estimate(eps2, omega, grid, h):
    """Midpoint sum plus analytic tails for one step size."""
    core, lo_edge, hi_edge = _kk_sum(eps2, omega, grid, h)
    # below the grid: int_0^L C / (Omega^2 - omega^2) = C/(2w) ln|(w - L)/(w + L)|
    c_lo = lo_edge * float(np.asarray(eps2(np.array([lo_edge])))[0])
    if lo_edge < omega:
        tail_low = c_lo / (2.0 * omega) * math.log((omega - lo_edge) / (omega + lo_edge))
    else:
        tail_low = 0.0
    # above the grid: Omega eps2 / (Omega^2 - omega^2) ~ eps2(U) U^3 / Omega^4
    e_hi = float(np.asarray(eps2(np.array([hi_edge])))[0])
    tail_high = e_hi / 3.0 if hi_edge > omega else 0.0
    return core + tail_low + tail_high, tail_low, tail_high, lo_edge, hi_edge, c_lo, e_hi


def kramers_kronig_real(eps2: Callable, omega: float, grid: KKGrid = KKGrid()) -> KKResult:
    """eps1(omega) - 1 = (2/pi) PV int_0^inf Omega eps2(Omega) / (Omega^2 - omega^2) dOmega.

    ``eps2`` is called with arrays of frequencies. Outside the grid the
    integrand is continued analytically: Omega * eps2 held constant below
    the grid (conduction-like 1/Omega absorption), eps2 ~ Omega^-3 above.
    The midpoint sums at steps h, 2h and 4h are Richardson-extrapolated;
    the spread of the two extrapolants gives the quadrature error.
    ``truncated`` is set when the edge behaviour departs from those models
    enough to matter, or when ``omega`` is not inside the grid.
    """
    _positive("omega", omega)
    inside = grid.omega_min < omega < grid.omega_max
    h = math.log(10.0) / grid.points_per_decade
    fine, tail_low, tail_high, lo_edge, hi_edge, c_lo, e_hi = _kk_estimate(eps2, omega, grid, h)
    mid = _kk_estimate(eps2, omega, grid, 2.0 * h)[0]
    coarse = _kk_estimate(eps2, omega, grid, 4.0 * h)[0]
    best = (4.0 * fine - mid) / 3.0
    quad_err = abs(best - (4.0 * mid - coarse) / 3.0) / 15.0

    slope_lo = _log_slope(lambda x: x * np.asarray(eps2(x)), lo_edge) if c_lo else 0.0
    slope_hi = _log_slope(eps2, hi_edge) if e_hi else -3.0
    dev_lo = 1.0 if slope_lo is None else min(1.0, abs(slope_lo))
    dev_hi = 1.0 if slope_hi is None else min(1.0, max(0.0, slope_hi + 3.0))
    tail_err = abs(tail_low) * dev_lo + abs(tail_high) * dev_hi

    scale = 2.0 / math.pi
    value = float(scale * best)
    err = float(scale * (quad_err + tail_err))
    truncated = bool((not inside) or err > 1e-2 * abs(value))
    if truncated:
        warnings.warn(f"Kramers-Kronig grid [{grid.omega_min:g}, {grid.omega_max:g}] "
                      f"does not adequately cover the spectrum at omega={omega:g}",
                      TailTruncationWarning, stacklevel=2)
    return KKResult(value=value, err_estimate=err, tail_low=float(scale * tail_low),
                    tail_high=float(scale * tail_high), truncated=truncated)
