"""Spectrum of the TE-mode thermal correction to the Casimir force between plates."""

from .kernels import BACKEND
from .materials import (
    ConductorParams,
    DrudeLikePermittivity,
    KKGrid,
    ValidityReport,
    boyer_threshold,
    kramers_kronig_real,
    permittivity,
    skin_depth,
    surface_response_alpha,
    validity_check,
)
from .quadrature import (
    IntegrationResult,
    IntegrationSpec,
    integrate_ray,
    integrate_segment,
    oracle_trapezoid,
)
from .spectrum import (
    ConductorImpedance,
    ContourPath,
    Dielectric,
    Geometry,
    NetForceFactor,
    PerfectConductor,
    SpectrumPoint,
    conductor_integrand,
    dielectric_integrand,
    dominant_wavevector,
    net_force_factor,
    perfect_baseline,
    ratio_report,
    s_param,
    spectral_density,
    spectrum_point,
    thermal_weight,
)

__version__ = "0.1.0"
