"""TE-mode thermal-correction spectral density and its frequency integrals.

The spectral density for one contour is

    F_w = w^3 g(w) Re int_C p^2 dp [r e^{-2 i p w a / c} - 1]^{-1}

with g the Bose factor and r the squared reflection ratio of the plate
model. C1 runs over real p from 1 to 0, C2 over p = i q, q from 0 to inf.
Frequency integrals are reported without the overall hbar/(pi^n c^3)
prefactor, so every ratio is prefactor-free.
"""

import enum
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import zeta

from . import kernels
from .constants import C_LIGHT, HBAR, K_B, thermal_frequency
from .materials import (
    ConductorParams,
    DrudeLikePermittivity,
    RegimeWarning,
    permittivity,
    surface_response_alpha,
)
from .quadrature import (
    IntegrationSpec,
    IntegrationResult,
    integrate_ray,
    integrate_segment,
    integrate_segment_multi,
)

CONDUCTOR_CEILING = 1e14  # s^-1, surface-impedance treatment fails above this


# ---------------------------------------------------------------- data types

@dataclass(frozen=True)
class Geometry:
    a: float = 1e-4  # plate separation, cm
    T: float = 300.0  # K

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("plate separation must be positive")
        if not self.T > 0:
            raise ValueError("temperature must be positive")


class ContourPath(enum.Enum):
    C1 = "c1"
    C2 = "c2"
    BOTH = "both"

    def parts(self):
        if self is ContourPath.BOTH:
            return (ContourPath.C1, ContourPath.C2)
        return (self,)


@dataclass(frozen=True)
class PerfectConductor:
    name = "perfect"


@dataclass(frozen=True)
class Dielectric:
    permittivity: DrudeLikePermittivity = field(default_factory=DrudeLikePermittivity)
    # multiplies the whole of eps; used to approach the |eps| -> inf limit
    scale: float = 1.0
    name = "dielectric"


@dataclass(frozen=True)
class ConductorImpedance:
    params: ConductorParams = field(default_factory=ConductorParams)
    name = "conductor"


PlateModel = Union[PerfectConductor, Dielectric, ConductorImpedance]


def _kernel_args(model, omega):
    if isinstance(model, PerfectConductor):
        return kernels.PERFECT, 0j
    if isinstance(model, Dielectric):
        return kernels.DIELECTRIC, model.scale * permittivity(model.permittivity, omega)
    if isinstance(model, ConductorImpedance):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RegimeWarning)
            return kernels.CONDUCTOR, surface_response_alpha(model.params, omega)
    raise TypeError(f"not a plate model: {model!r}")


def in_model_band(model, omega):
    """False where the plate model is used outside its stated range."""
    if isinstance(model, Dielectric):
        return omega < model.permittivity.valid_max_omega
    if isinstance(model, ConductorImpedance):
        return omega < CONDUCTOR_CEILING
    return True


@dataclass(frozen=True)
class SpectralValue:
    value: float
    err: float
    converged: bool
    evals: int


@dataclass(frozen=True)
class SpectrumPoint:
    omega: float
    f_c1: float
    f_c2: float
    err_c1: float
    err_c2: float
    converged_c1: bool = True
    converged_c2: bool = True
    in_band: bool = True


@dataclass(frozen=True)
class NetForceFactor:
    model: object
    path: ContourPath
    value: float  # int F_w dw over the window, s^-4
    err: float
    T: float
    converged: bool = True
    evals: int = 0
    # estimated |int F_w dw| outside the window, below and above
    tail_lo: float = 0.0
    tail_hi: float = 0.0

    @property
    def tail_fraction(self):
        """Estimated share of the integral that falls outside the window."""
        tail = self.tail_lo + self.tail_hi
        if tail == 0.0:
            return 0.0
        return tail / abs(self.value) if self.value else math.inf

    @property
    def reduced(self):
        """Value in units of (k_B T / hbar)^4."""
        return self.value / thermal_frequency(self.T) ** 4

    @property
    def reduced_err(self):
        return self.err / thermal_frequency(self.T) ** 4


# ------------------------------------------------------------- scalar pieces

def thermal_weight(omega, T):
    """Bose factor 1 / (exp(hbar w / k T) - 1), stable at both ends."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0):
        raise ValueError("omega must be positive")
    if not T > 0:
        raise ValueError("T must be positive")
    x = HBAR * omega / (K_B * T)
    with np.errstate(over="ignore"):
        small = 1.0 / np.expm1(np.minimum(x, 1.0))
        large = np.exp(-x) / -np.expm1(-np.maximum(x, 1.0))
    g = np.where(x <= 1.0, small, large)
    return float(g) if g.ndim == 0 else g


def s_param(eps, p):
    """sqrt(eps - 1 + p^2) on the branch Re s >= 0 (Im s >= 0 if Re s = 0)."""
    s = np.sqrt(np.asarray(eps, dtype=complex) - 1.0 + np.asarray(p, dtype=complex) ** 2)
    s = kernels._branch(s)
    return complex(s) if s.ndim == 0 else s


def _bracket_inverse(rm1, p, omega, a):
    # [r e^Z - 1]^{-1}, Z = -2 i p w a / c, without overflow for Re Z > 0
    Z = -2j * np.asarray(p, dtype=complex) * omega * a / C_LIGHT
    grow = Z.real > 0
    Zg = np.where(grow, -Z, Z)
    em1 = np.expm1(Zg)
    with np.errstate(invalid="ignore", divide="ignore"):
        damped = np.exp(Zg) / (rm1 - em1)
        plain = 1.0 / (rm1 + em1 + rm1 * em1)
    return np.where(grow, damped, plain)


def _scalar(x):
    x = np.asarray(x)
    return complex(x) if x.ndim == 0 else x


def perfect_integrand(p, omega, a):
    """p^2 / (e^{-2 i p w a / c} - 1), the r = 1 kernel."""
    p = np.asarray(p, dtype=complex)
    return _scalar(p * p * _bracket_inverse(np.zeros_like(p), p, omega, a))


def dielectric_integrand(eps, p, omega, a):
    """p^2 [((s+p)^2/(s-p)^2) e^{-2 i p w a / c} - 1]^{-1} for a dielectric."""
    p = np.asarray(p, dtype=complex)
    s = np.asarray(s_param(eps, p))
    rm1 = 4.0 * s * p / (s - p) ** 2
    return _scalar(p * p * _bracket_inverse(rm1, p, omega, a))


def conductor_integrand(alpha, p, omega, a):
    """p^2 [((alpha+K)^2/(alpha-K)^2) e^{-2 i p w a / c} - 1]^{-1}, K = i w p / c.

    The separation ``a`` sits in the exponent (dimensionally required).
    """
    p = np.asarray(p, dtype=complex)
    K = 1j * omega * p / C_LIGHT
    rm1 = 4.0 * alpha * K / (alpha - K) ** 2
    return _scalar(p * p * _bracket_inverse(rm1, p, omega, a))


# ------------------------------------------------------- contour integration

def _c2_tail_bound(code, param, k0, a):
    """Upper bound on int_Q^inf |C2 integrand| dq."""
    b = 2.0 * k0 * a
    if code == kernels.CONDUCTOR:
        # |r| = |(alpha - k0 q)/(alpha + k0 q)|^2 < 1 dips to its minimum at
        # k0 q = |alpha|; beyond that it increases towards 1.
        am = abs(param)

        def rmin(Q):
            x = max(k0 * Q, am)
            return abs((param - x) / (param + x)) ** 2
    else:
        # Im s >= 0 makes |r| >= 1 for the dielectric; r = 1 for the perfect plate
        def rmin(Q):
            return 1.0

    def probe(Q):
        m = rmin(Q) - math.exp(-b * Q)
        if m <= 0:
            return math.inf
        poly = Q * Q / b + 2.0 * Q / b**2 + 2.0 / b**3
        return math.exp(-b * Q) * poly / m

    return probe


def _contour(model, path, omega, geom, spec, project):
    code, param = _kernel_args(model, omega)
    k0 = omega / C_LIGHT
    a = geom.a
    if path is ContourPath.C1:
        def f(t):
            return project(kernels.integrand(t, kernels.PATH_C1, code, param, k0, a))
        osc = math.pi / (2.0 * k0 * a)
        return integrate_segment(f, 1.0, 0.0, spec.replace(oscillation_scale=osc))
    if path is ContourPath.C2:
        def f(q):
            return project(kernels.integrand(q, kernels.PATH_C2, code, param, k0, a))
        scale = 1.0 / (2.0 * k0 * a)
        return integrate_ray(f, spec, _c2_tail_bound(code, param, k0, a), scale=scale)
    raise ValueError(f"single contour path required, got {path}")


def contour_integral(model: PlateModel, path: ContourPath, omega: float, geom: Geometry,
                     spec: IntegrationSpec = IntegrationSpec()) -> IntegrationResult:
    """Full complex int_C p^2 dp [...]^{-1}, imaginary part included."""
    return _contour(model, path, omega, geom, spec, lambda z: z)


def spectral_density(model: PlateModel, path: ContourPath, omega: float, geom: Geometry,
                     spec: IntegrationSpec = IntegrationSpec()) -> SpectralValue:
    """F_w = w^3 g(w) Re int_C ... for one contour (s^-3).

    The real part is integrated directly so that the tolerance applies to
    the quantity reported; the imaginary part never enters F_w.
    """
    if not omega > 0:
        raise ValueError("omega must be positive")
    if path is ContourPath.BOTH:
        parts = [spectral_density(model, p, omega, geom, spec) for p in path.parts()]
        return SpectralValue(parts[0].value + parts[1].value, parts[0].err + parts[1].err,
                             parts[0].converged and parts[1].converged,
                             parts[0].evals + parts[1].evals)
    res = _contour(model, path, omega, geom, spec, np.real)
    pref = omega**3 * thermal_weight(omega, geom.T)
    return SpectralValue(pref * res.value.real, pref * res.err_estimate, res.converged, res.evals)


def spectrum_point(model: PlateModel, omega: float, geom: Geometry,
                   spec: IntegrationSpec = IntegrationSpec()) -> SpectrumPoint:
    c1 = spectral_density(model, ContourPath.C1, omega, geom, spec)
    c2 = spectral_density(model, ContourPath.C2, omega, geom, spec)
    return SpectrumPoint(omega=float(omega), f_c1=c1.value, f_c2=c2.value,
                         err_c1=c1.err, err_c2=c2.err,
                         converged_c1=c1.converged, converged_c2=c2.converged,
                         in_band=in_model_band(model, omega))


def _natural_scale(path, omega, geom):
    # magnitude of the perfect-conductor |Re|-bound for the contour integral
    if path is ContourPath.C1:
        return 1.0 / 6.0
    b = 2.0 * omega * geom.a / C_LIGHT
    return 2.0 * zeta(3.0) / b**3


def _inner_spec(spec, path, omega, geom):
    rel = spec.rel_tol * 1e-2
    floor = rel * 1e-3 * _natural_scale(path, omega, geom)
    return spec.replace(rel_tol=rel, abs_tol=max(spec.abs_tol, floor))


# ----------------------------------------------------- frequency integration

def net_force_factor(model: PlateModel, path: ContourPath, geom: Geometry,
                     omega_lo: float = 1e9, omega_hi: float = 1e15,
                     spec: IntegrationSpec = IntegrationSpec()) -> NetForceFactor:
    """int F_w dw over [omega_lo, omega_hi], prefactor excluded.

    Integrated in log w with the same adaptive rule as the contour
    integrals; inner integrals run two decades tighter. Inner error
    estimates are integrated alongside the density and added to the outer
    quadrature error.
    """
    if not 0 < omega_lo < omega_hi:
        raise ValueError("need 0 < omega_lo < omega_hi")
    parts = path.parts()
    flags = [True]
    evals = [0]

    def density(omega):
        val = err = 0.0
        for part in parts:
            sv = spectral_density(model, part, omega, geom, _inner_spec(spec, part, omega, geom))
            val += sv.value
            err += sv.err
            flags[0] &= sv.converged
            evals[0] += sv.evals
        return val, err

    def f(u):
        out = np.empty((2, u.size))
        for j, uj in enumerate(u):
            w = math.exp(uj)
            val, err = density(w)
            out[0, j] = val * w
            out[1, j] = err * w
        return out

    vals, qerr, _, ok = integrate_segment_multi(f, math.log(omega_lo), math.log(omega_hi), spec)
    tail_lo = _edge_tail(lambda w: density(w)[0] * w, omega_lo, 1.5)
    tail_hi = _edge_tail(lambda w: density(w)[0] * w, omega_hi, 1.0 / 1.5)
    return NetForceFactor(
        model=model, path=path, value=float(vals[0].real),
        err=float(qerr + abs(vals[1].real)), T=geom.T,
        converged=bool(ok and flags[0]), evals=evals[0],
        tail_lo=tail_lo, tail_hi=tail_hi,
    )


def _edge_tail(y, edge, step):
    # |w F_w| treated as a power law in w beyond the edge, fitted from two
    # samples stepping into the window
    y0, y1 = abs(y(edge)), abs(y(edge * step))
    if y0 == 0.0:
        return 0.0
    if y1 == 0.0:
        return math.inf
    decay = math.log(y1 / y0) / abs(math.log(step))
    return y0 / decay if decay > 0 else math.inf


def perfect_baseline(T: float) -> float:
    """Analytic int_0^inf w^3 g(w) / 6 dw = pi^4 (k T / hbar)^4 / 90."""
    return math.pi**4 * thermal_frequency(T) ** 4 / 90.0


@dataclass(frozen=True)
class Ratio:
    name: str
    value: float
    err: float


def _ratio(name, num, num_err, den, den_err):
    value = num / den
    err = abs(value) * (abs(num_err / num) if num else 0.0) + abs(value) * abs(den_err / den)
    if not num:
        err = abs(num_err / den)
    return Ratio(name, value, err)


@dataclass(frozen=True)
class RatioReport:
    geometry: Geometry
    perfect_c1: NetForceFactor
    perfect_c2: NetForceFactor
    dielectric_c1: NetForceFactor
    dielectric_c2: NetForceFactor
    conductor_c1: NetForceFactor
    conductor_c2: NetForceFactor
    ratios: tuple
    baseline: float
    warnings: tuple = ()

    def ratio(self, name):
        for r in self.ratios:
            if r.name == name:
                return r
        raise KeyError(name)

    @property
    def converged(self):
        return all(n.converged for n in (self.perfect_c1, self.perfect_c2, self.dielectric_c1,
                                         self.dielectric_c2, self.conductor_c1,
                                         self.conductor_c2))


RATIO_NAMES = (
    ("R1", "dielectric C1 / perfect C1"),
    ("R2", "dielectric C2 / perfect C1"),
    ("R3", "conductor C2 / conductor C1"),
    ("R4", "conductor (C1+C2) / perfect C1"),
)


def ratio_report(geom: Geometry = Geometry(),
                 spec: IntegrationSpec = IntegrationSpec(),
                 dielectric: Optional[Dielectric] = None,
                 conductor: Optional[ConductorImpedance] = None,
                 omega_lo: float = 1e9, omega_hi: float = 1e15) -> RatioReport:
    """The four headline ratios with propagated errors.

    Warnings are collected (not raised) when a ratio is ill-conditioned:
    relative error above 1 %, or more than 0.1 % of an integral estimated
    to lie outside the frequency window.
    """
    dielectric = dielectric or Dielectric()
    conductor = conductor or ConductorImpedance()
    perfect = PerfectConductor()

    def net(model, path):
        return net_force_factor(model, path, geom, omega_lo, omega_hi, spec)

    pc1, pc2 = net(perfect, ContourPath.C1), net(perfect, ContourPath.C2)
    d1, d2 = net(dielectric, ContourPath.C1), net(dielectric, ContourPath.C2)
    k1, k2 = net(conductor, ContourPath.C1), net(conductor, ContourPath.C2)
    ratios = (
        _ratio("R1", d1.value, d1.err, pc1.value, pc1.err),
        _ratio("R2", d2.value, d2.err, pc1.value, pc1.err),
        _ratio("R3", k2.value, k2.err, k1.value, k1.err),
        _ratio("R4", k1.value + k2.value, k1.err + k2.err, pc1.value, pc1.err),
    )
    notes = []
    for r in ratios:
        if not math.isfinite(r.value) or r.err > 1e-2 * abs(r.value):
            notes.append(f"{r.name} is ill-conditioned (relative error {r.err / abs(r.value):.2g})")
    for n in (pc1, d1, d2, k1, k2):
        if n.tail_fraction > 1e-3:
            notes.append(f"ratios using {n.model.name} {n.path.value} are ill-conditioned: "
                         f"{100 * n.tail_fraction:.2g}% of that integral lies outside "
                         f"[{omega_lo:g}, {omega_hi:g}] s^-1")
    return RatioReport(geom, pc1, pc2, d1, d2, k1, k2, ratios, perfect_baseline(geom.T),
                       tuple(notes))


# --------------------------------------------------------- wavevector scan

def _c2_k_density(model, omega, geom):
    code, param = _kernel_args(model, omega)
    k0 = omega / C_LIGHT

    def dens(k):
        k = np.asarray(k, dtype=float)
        q = np.sqrt((k / k0) ** 2 - 1.0)
        f = kernels.integrand(q, kernels.PATH_C2, code, param, k0, geom.a).real
        return f * k / (k0 * k0 * q)  # dq/dk

    return dens, k0


def dominant_wavevector(model: PlateModel, omega: float, geom: Geometry,
                        n_scan: int = 4000) -> float:
    """Transverse wavevector (cm^-1) where the C2 contribution per unit k peaks.

    The C2 parameter maps to k = (w/c) sqrt(1 + q^2). A log-spaced scan
    brackets the maximum of |d(contribution)/dk|, which is then refined by
    a bounded scalar search. Returns nan (with a RuntimeWarning) when the
    C2 integrand vanishes identically.
    """
    dens, k0 = _c2_k_density(model, omega, geom)
    k_hi = max(200.0 / geom.a, 10.0 * k0)
    k = k0 * (1.0 + np.geomspace(1e-8, (k_hi / k0) - 1.0, n_scan))
    y = np.abs(dens(k))
    if not np.any(y > 0):
        warnings.warn("C2 integrand vanishes; dominant wavevector undefined", RuntimeWarning,
                      stacklevel=2)
        return math.nan
    i = int(np.argmax(y))
    lo, hi = k[max(i - 1, 0)], k[min(i + 1, k.size - 1)]
    res = minimize_scalar(lambda x: -abs(float(dens(np.array([x]))[0])),
                          bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-10 * k[i]})
    return float(res.x) if -res.fun >= y[i] else float(k[i])
