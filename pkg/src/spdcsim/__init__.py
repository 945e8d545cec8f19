"""Biphoton wavefunction models for collinear SPDC.

Evaluates the joint amplitude of signal/idler pairs in transverse
momentum and frequency (general sinc kernel, its double-sinc
factorization, and a fully separable four-Gaussian surrogate), projects
onto Laguerre-Gaussian collection modes, and computes the purity of the
reduced spatial state after tracing out frequency.

Units across the package: lengths in um, times in fs, angular
frequencies in rad/fs, transverse momenta in 1/um.  Crystal lengths and
group-velocity dispersion are accepted in mm / fs^2/mm at the boundary
and converted once.
"""

from .biphoton import (
    BiphotonModel,
    GridAxis,
    GridSpec,
    JsaField,
    JsaStats,
    ModelKind,
    NormalizeResult,
    amplitude,
    grid_coordinates,
    jsa_grid,
    jsa_stats,
    norm_closed_form_4g,
    normalize,
    pmf_grid,
)
from .config import COMMANDS, RunConfig, load_config, resolved_config_hash
from .errors import ConvergenceError, DomainError, SpdcError, ValidationError
from .modes import CollectionSpec, laguerre_assoc, lg_mode, lg_radial
from .params import (
    CRYSTAL_PRESET_NAMES,
    CrystalSpec,
    DerivedParams,
    PulseRegime,
    PumpSpec,
    SpdcType,
    crystal_preset,
    derive_params,
)
from .phasematch import (
    DEFAULT_GUARDS,
    Guards,
    PmfKind,
    SpectralPoint,
    TransversePoint,
    delta_kz,
    gaussian_spatial_substitute,
    pmf_double_sinc,
    pmf_sinc,
    sinc,
    spatial_mismatch,
    spectral_mismatch,
)
from .purity import (
    SWEEP_AXES,
    PmfSimplification,
    PurityResult,
    PuritySetting,
    SweepRow,
    default_purity_quad,
    phi_lg,
    purity,
    purity_sweep,
    simplified_kernel,
    spectral_gram,
)
from .quadrature import (
    AxisQuad,
    IntegrationResult,
    QuadratureSpec,
    QuadRule,
    integrate_nd,
    nodes_weights,
)
from .units import (
    C_UM_PER_FS,
    detuning_from_wavelength,
    fs2_per_mm_to_per_um,
    mm_to_um,
    nm_to_um,
    omega_from_wavelength,
    um_to_nm,
    wavelength_from_detuning,
)

__version__ = "0.1.0"

__all__ = [
    "C_UM_PER_FS",
    "COMMANDS",
    "CRYSTAL_PRESET_NAMES",
    "DEFAULT_GUARDS",
    "SWEEP_AXES",
    "AxisQuad",
    "BiphotonModel",
    "CollectionSpec",
    "ConvergenceError",
    "CrystalSpec",
    "DerivedParams",
    "DomainError",
    "GridAxis",
    "GridSpec",
    "Guards",
    "IntegrationResult",
    "JsaField",
    "JsaStats",
    "ModelKind",
    "NormalizeResult",
    "PmfKind",
    "PmfSimplification",
    "PulseRegime",
    "PumpSpec",
    "PurityResult",
    "PuritySetting",
    "QuadRule",
    "QuadratureSpec",
    "RunConfig",
    "SpdcError",
    "SpdcType",
    "SpectralPoint",
    "SweepRow",
    "TransversePoint",
    "ValidationError",
    "amplitude",
    "crystal_preset",
    "default_purity_quad",
    "delta_kz",
    "derive_params",
    "detuning_from_wavelength",
    "fs2_per_mm_to_per_um",
    "gaussian_spatial_substitute",
    "grid_coordinates",
    "integrate_nd",
    "jsa_grid",
    "jsa_stats",
    "laguerre_assoc",
    "lg_mode",
    "lg_radial",
    "load_config",
    "mm_to_um",
    "nm_to_um",
    "norm_closed_form_4g",
    "normalize",
    "nodes_weights",
    "omega_from_wavelength",
    "phi_lg",
    "pmf_double_sinc",
    "pmf_grid",
    "pmf_sinc",
    "purity",
    "purity_sweep",
    "resolved_config_hash",
    "sinc",
    "simplified_kernel",
    "spatial_mismatch",
    "spectral_gram",
    "spectral_mismatch",
    "um_to_nm",
    "wavelength_from_detuning",
]
