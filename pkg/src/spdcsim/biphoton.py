"""Biphoton wavefunction models in transverse momentum + detuning space.

Three model kinds share the pump envelope exp(-w_p^2 |q_s + q_i|^2):

* GENERAL: the full sinc phase-matching function of Delta k_z, with the
  pulsed-pump spectral envelope exp(-tau^2 (Omega_s + Omega_i)^2 / (8 ln 2)).
* DOUBLE_SINC: the factorized spatial sinc times spectral sinc.
* FOUR_GAUSSIAN: the separable Gaussian model; the pump spectral
  envelope is absorbed into the sum-frequency width a(tau), so the four
  Gaussian factors are the entire amplitude.

Everything the spatial-spectral coupling can depend on reduces to
|q_s + q_i|, |q_s - q_i| and the detunings; the vectorized kernels below
are written in those variables and reused by the purity engine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .errors import ConvergenceError, DomainError, ValidationError
from .params import CrystalSpec, DerivedParams, PulseRegime, PumpSpec, SpdcType, derive_params
from .phasematch import (
    DEFAULT_GUARDS,
    Guards,
    SpectralPoint,
    TransversePoint,
    check_point_guards,
    diff_sq,
    sinc,
    spectral_mismatch,
    spectral_mismatch_quadratic,
    sum_sq,
)
from .quadrature import AxisQuad, IntegrationResult, QuadratureSpec, QuadRule, integrate_nd
from .units import detuning_from_wavelength

__all__ = [
    "ModelKind",
    "BiphotonModel",
    "GridAxis",
    "GridSpec",
    "JsaField",
    "JsaStats",
    "NormalizeResult",
    "amplitude",
    "position_amplitude_type1_4g",
    "normalize",
    "norm_closed_form_4g",
    "grid_coordinates",
    "pmf_grid",
    "jsa_grid",
    "jsa_stats",
]

_EIGHT_LN2 = 8.0 * math.log(2.0)


class ModelKind(Enum):
    GENERAL = "general"
    DOUBLE_SINC = "double-sinc"
    FOUR_GAUSSIAN = "four-gaussian"


@dataclass(frozen=True)
class BiphotonModel:
    """A model kind bound to pump, crystal and derived parameters.

    Build with :meth:`create`; a hand-assembled instance is re-derived
    and compared on construction so stale DerivedParams cannot sneak in.
    """

    kind: ModelKind
    pump: PumpSpec
    crystal: CrystalSpec
    derived: DerivedParams
    regime_override: Optional[PulseRegime] = None

    def __post_init__(self):
        if not isinstance(self.kind, ModelKind):
            raise ValidationError(f"kind must be a ModelKind, got {self.kind!r}")
        expected = derive_params(self.pump, self.crystal, self.regime_override)
        if expected != self.derived:
            raise ValidationError("DerivedParams inconsistent with pump/crystal; build models via BiphotonModel.create")

    @classmethod
    def create(
        cls,
        kind: ModelKind,
        pump: PumpSpec,
        crystal: CrystalSpec,
        regime_override: Optional[PulseRegime] = None,
    ) -> "BiphotonModel":
        return cls(kind, pump, crystal, derive_params(pump, crystal, regime_override), regime_override)

    @property
    def spdc_type(self) -> SpdcType:
        return self.crystal.spdc_type

    @property
    def lambda_center_um(self) -> float:
        """Degenerate signal/idler central wavelength (um)."""
        return 2.0 * self.pump.lambda_p_um


# Vectorized amplitude kernels (broadcasting, no guard checks).


def pump_spatial_amp(sum_q, w_p_um):
    """exp(-w_p^2 |q_s + q_i|^2) with sum_q = |q_s + q_i| (1/um)."""
    s = np.asarray(sum_q, dtype=float)
    return np.exp(-(w_p_um * w_p_um) * s * s)


def pump_spectral_amp(om_sum, tau_fs):
    """exp(-tau^2 (Omega_s + Omega_i)^2 / (8 ln 2))."""
    t = np.asarray(om_sum, dtype=float)
    return np.exp(-(tau_fs * tau_fs) * t * t / _EIGHT_LN2)


def fourg_spectral_amp(om_s, om_i, model: BiphotonModel):
    """Spectral Gaussians of the four-Gaussian model.

    Type-I: exp(-alpha (Om_s + Om_i)^2 / (2 a^2)) * exp(-(Om_s - Om_i)^2 / (2 b^2)).
    Type-II: the sum factor uses beta and the difference Gaussian is
    sqrt(GVD)-weighted, exp(-(sqrt(GVD_s) Om_s - sqrt(GVD_i) Om_i)^2 / (2 b^2)),
    with the GVDs in fs^2/um as printed.
    """
    d = model.derived
    om_s = np.asarray(om_s, dtype=float)
    om_i = np.asarray(om_i, dtype=float)
    total = om_s + om_i
    if model.spdc_type is SpdcType.TYPE_I:
        sum_factor = np.exp(-d.alpha * total * total / (2.0 * d.a_tau * d.a_tau))
        diff = om_s - om_i
    else:
        sum_factor = np.exp(-d.beta_t2 * total * total / (2.0 * d.a_tau * d.a_tau))
        diff = math.sqrt(d.gvd_s_um) * om_s - math.sqrt(d.gvd_i_um) * om_i
    return sum_factor * np.exp(-diff * diff / (2.0 * d.b_tau * d.b_tau))


def coupling_amplitude(model: BiphotonModel, diff_q, om_s, om_i, quadratic_only: bool = False):
    """Everything except the pump spatial envelope.

    diff_q = |q_s - q_i| (1/um); broadcasts against the detunings.  For
    the GENERAL kind ``quadratic_only`` drops the group-velocity terms
    of Delta k_z (the simplified purity kernel); the other kinds ignore
    the flag.
    """
    d = model.derived
    v = np.asarray(diff_q, dtype=float)
    vsq = v * v
    if model.kind is ModelKind.FOUR_GAUSSIAN:
        return np.exp(-(d.sigma_q * d.sigma_q) * vsq) * fourg_spectral_amp(om_s, om_i, model)
    if quadratic_only:
        spectral = spectral_mismatch_quadratic(om_s, om_i, d, model.spdc_type)
    else:
        spectral = spectral_mismatch(om_s, om_i, d, model.spdc_type)
    pump_w = pump_spectral_amp(np.asarray(om_s, dtype=float) + om_i, model.pump.tau_fs)
    if model.kind is ModelKind.GENERAL:
        return pump_w * sinc(d.L_um / 2.0 * (-vsq / (2.0 * d.k_p) + spectral))
    if model.kind is ModelKind.DOUBLE_SINC:
        return pump_w * sinc(d.L_um * vsq / (4.0 * d.k_p)) * sinc(d.L_um / 2.0 * spectral)
    raise ValidationError(f"unknown model kind {model.kind!r}")


def amplitude_arrays(model: BiphotonModel, qsx, qsy, qix, qiy, om_s, om_i, quadratic_only: bool = False):
    """Unnormalized amplitude on broadcastable coordinate arrays (real)."""
    s = np.sqrt(sum_sq(qsx, qsy, qix, qiy))
    v = np.sqrt(diff_sq(qsx, qsy, qix, qiy))
    return pump_spatial_amp(s, model.pump.w_p_um) * coupling_amplitude(model, v, om_s, om_i, quadratic_only)


def amplitude(
    model: BiphotonModel,
    qs: TransversePoint,
    qi: TransversePoint,
    w: SpectralPoint,
    guards: Guards = DEFAULT_GUARDS,
) -> complex:
    """Unnormalized amplitude at one guarded point.

    The value is real and non-negative for every supported model; it is
    returned as complex for forward compatibility.
    """
    check_point_guards(qs, qi, w, model.derived, guards)
    value = amplitude_arrays(model, qs.qx, qs.qy, qi.qx, qi.qy, w.omega_s, w.omega_i)
    return complex(float(value))


def position_amplitude_type1_4g(x_s, x_i, w: SpectralPoint, model: BiphotonModel) -> float:
    """Type-I four-Gaussian amplitude in the transverse position slice.

    exp(-(x_s + x_i)^2 / (16 w_p^2)) * exp(-(x_s - x_i)^2 / (16 sigma_x^2))
    times the spectral Gaussians; x in um along one transverse direction.
    """
    if model.kind is not ModelKind.FOUR_GAUSSIAN or model.spdc_type is not SpdcType.TYPE_I:
        raise ValidationError("position amplitude is defined for the type-I four-Gaussian model")
    return float(_position_amplitude_4g(model, x_s, x_i, w.omega_s, w.omega_i))


def _position_amplitude_4g(model: BiphotonModel, x_s, x_i, om_s, om_i):
    d = model.derived
    w_p = model.pump.w_p_um
    xs = np.asarray(x_s, dtype=float)
    xi = np.asarray(x_i, dtype=float)
    tot = xs + xi
    rel = xs - xi
    spatial = np.exp(-tot * tot / (16.0 * w_p * w_p)) * np.exp(-rel * rel / (16.0 * d.sigma_x * d.sigma_x))
    return spatial * fourg_spectral_amp(om_s, om_i, model)


# Normalization.


def norm_closed_form_4g(model: BiphotonModel) -> float:
    """Exact norm integral of the four-Gaussian amplitude.

    Spatial part: (1/4) (pi / 2 w_p^2)(pi / 2 sigma_q^2); spectral part:
    pi a b / (sqrt(f) (u_s + u_i)) with f the sum-width factor and u the
    sqrt(GVD) weights (1 for type-I).
    """
    if model.kind is not ModelKind.FOUR_GAUSSIAN:
        raise ValidationError("closed-form norm exists for the four-Gaussian model only")
    d = model.derived
    w_p = model.pump.w_p_um
    spatial = 0.25 * (math.pi / (2.0 * w_p * w_p)) * (math.pi / (2.0 * d.sigma_q * d.sigma_q))
    if model.spdc_type is SpdcType.TYPE_I:
        f_sum, u_s, u_i = d.alpha, 1.0, 1.0
    else:
        f_sum, u_s, u_i = d.beta_t2, math.sqrt(d.gvd_s_um), math.sqrt(d.gvd_i_um)
    spectral = math.pi * d.a_tau * d.b_tau / (math.sqrt(f_sum) * (u_s + u_i))
    return spatial * spectral


@dataclass(frozen=True)
class NormalizeResult:
    """Normalization constant N with its quadrature record."""

    scale: float
    integral: float
    report: IntegrationResult


def _norm_quadrature_spec(model: BiphotonModel) -> QuadratureSpec:
    """Default reduced-coordinate axes for the norm integral.

    Coordinates are (|q_s + q_i|, |q_s - q_i|, Omega_+, Omega_-); the
    amplitude is azimuth-free in them.  The radial integrands carry a
    Jacobian factor s e^(-c s^2), which has a |s| kink under a full-line
    rule, so radial axes always use Legendre on [0, 8 sigma] (tail
    ~e^-32); smooth spectral Gaussians get Hermite rules and sinc-limited
    spectral axes Legendre on a truncated range (the sinc^2 tail beyond
    the cut is excluded by construction and documented).
    """
    d = model.derived
    w_p = model.pump.w_p_um
    s_max = 4.0 / w_p
    axes = [AxisQuad(QuadRule.GAUSS_LEGENDRE, 16, s_max / 2.0, s_max / 2.0)]
    if model.kind is ModelKind.FOUR_GAUSSIAN:
        v_max = 4.0 / d.sigma_q
        axes.append(AxisQuad(QuadRule.GAUSS_LEGENDRE, 32, v_max / 2.0, v_max / 2.0))
        f_sum = d.alpha if model.spdc_type is SpdcType.TYPE_I else d.beta_t2
        axes.append(AxisQuad(QuadRule.GAUSS_HERMITE, 16, d.a_tau / math.sqrt(f_sum)))
        b_scale = d.b_tau if model.spdc_type is SpdcType.TYPE_I else d.b_tau / math.sqrt(d.gvd_s_um)
        axes.append(AxisQuad(QuadRule.GAUSS_HERMITE, 16, b_scale))
    else:
        # 12 spatial and 8 spectral sinc lobes; beyond that the sinc^2
        # tails contribute at the percent level and shrink only slowly,
        # so the norm is defined on this truncated domain.  The radial
        # difference axis is parametrized by xi = L v^2 / (4 k_p), the
        # spatial sinc argument, which makes the oscillation uniform.
        xi_max = 12.0 * math.pi
        axes.append(AxisQuad(QuadRule.GAUSS_LEGENDRE, 64, xi_max / 2.0, xi_max / 2.0))
        om_plus = 2.0 * math.sqrt(math.log(2.0)) / model.pump.tau_fs
        axes.append(AxisQuad(QuadRule.GAUSS_HERMITE, 16, om_plus))
        # Omega_- window where the spectral mismatch (quadratic plus the
        # s/i walkoff term, zero for type-I) reaches its 8th sinc zero.
        if model.spdc_type is SpdcType.TYPE_I:
            c1 = 0.0
            c2 = d.gvd_s_um / 4.0
        else:
            c1 = abs(d.inv_v_g_s - d.inv_v_g_i) / 2.0
            c2 = (math.sqrt(d.gvd_s_um) + math.sqrt(d.gvd_i_um)) ** 2 / 8.0
        om_max = (-c1 + math.sqrt(c1 * c1 + 64.0 * math.pi * c2 / d.L_um)) / (2.0 * c2)
        axes.append(AxisQuad(QuadRule.GAUSS_LEGENDRE, 64, om_max, 0.0))
    return QuadratureSpec(axes=tuple(axes), tol=1.0e-7, max_refine=1)


def _norm_integrand(model: BiphotonModel):
    w_p = model.pump.w_p_um
    d = model.derived
    sinc_kind = model.kind is not ModelKind.FOUR_GAUSSIAN

    def f(points):
        s = np.abs(points[:, 0])
        om_p = points[:, 2]
        om_m = points[:, 3]
        om_s = 0.5 * (om_p + om_m)
        om_i = 0.5 * (om_p - om_m)
        # d^2q_s d^2q_i dOm_s dOm_i = (1/8) d^2u d^2v dOm_+ dOm_-;
        # both radial angles integrate to 2 pi.  For the sinc kinds the
        # second coordinate is xi = L v^2 / (4 k_p), so v dv = (2 k_p / L) dxi.
        if sinc_kind:
            v = np.sqrt(4.0 * d.k_p * np.abs(points[:, 1]) / d.L_um)
            jac = (math.pi**2 / 2.0) * s * (2.0 * d.k_p / d.L_um)
        else:
            v = np.abs(points[:, 1])
            jac = (math.pi**2 / 2.0) * s * v
        amp = pump_spatial_amp(s, w_p) * coupling_amplitude(model, v, om_s, om_i)
        return jac * amp * amp

    return f


def normalize(model: BiphotonModel, quad: Optional[QuadratureSpec] = None) -> NormalizeResult:
    """Normalization constant N with integral(|N Phi|^2) = 1.

    For the four-Gaussian model the quadrature is cross-checked against
    the closed form in the test suite; for the sinc models the integral
    is taken on the truncated default domain (see _norm_quadrature_spec).
    """
    spec = quad if quad is not None else _norm_quadrature_spec(model)
    report = integrate_nd(_norm_integrand(model), spec)
    if not (report.value > 0.0) or not math.isfinite(report.value):
        raise ValidationError(f"norm integral must be positive and finite, got {report.value!r}")
    if not report.converged:
        last = report.deltas[-1] if report.deltas else float("nan")
        raise ConvergenceError(
            f"norm quadrature did not converge: relative change {last:.3e} above tol {spec.tol:g} at orders {report.orders}"
        )
    return NormalizeResult(scale=1.0 / math.sqrt(report.value), integral=report.value, report=report)


# Grid evaluation.

_MOMENTUM_TOKENS = ("q_sx", "q_sy", "q_ix", "q_iy")
_WAVELENGTH_TOKENS = ("lambda_s_nm", "lambda_i_nm")
_POSITION_TOKENS = ("x_s_um", "x_i_um")
_AXIS_TOKENS = ("lambda_s_nm", "lambda_i_nm", "q_sx", "q_ix", "x_s_um", "x_i_um")
_FIXED_TOKENS = _WAVELENGTH_TOKENS + _MOMENTUM_TOKENS + _POSITION_TOKENS


@dataclass(frozen=True)
class GridAxis:
    """One swept coordinate: name, range and point count."""

    name: str
    lo: float
    hi: float
    points: int

    def __post_init__(self):
        if self.name not in _AXIS_TOKENS:
            raise ValidationError(f"unknown grid axis {self.name!r}; expected one of {', '.join(_AXIS_TOKENS)}")
        if not (self.points >= 2):
            raise ValidationError(f"grid axis {self.name!r} needs at least 2 points, got {self.points!r}")
        if not (self.hi > self.lo):
            raise ValidationError(f"grid axis {self.name!r} needs hi > lo, got [{self.lo!r}, {self.hi!r}]")

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.points)


@dataclass(frozen=True)
class GridSpec:
    """Up to two swept axes plus fixed values for the other coordinates."""

    axes: tuple
    fixed: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (1 <= len(self.axes) <= 2):
            raise ValidationError("GridSpec supports one or two axes")
        names = [ax.name for ax in self.axes]
        if len(set(names)) != len(names):
            raise ValidationError(f"duplicate grid axes {names!r}")
        for key in self.fixed:
            if key not in _FIXED_TOKENS:
                raise ValidationError(f"unknown fixed coordinate {key!r}; expected one of {', '.join(_FIXED_TOKENS)}")
        swept_pos = any(n in _POSITION_TOKENS for n in names)
        swept_mom = any(n in _MOMENTUM_TOKENS or n in _WAVELENGTH_TOKENS for n in names)
        if swept_pos and swept_mom:
            raise ValidationError("position and momentum coordinates cannot be mixed on one grid")

    @property
    def is_position_grid(self) -> bool:
        return any(ax.name in _POSITION_TOKENS for ax in self.axes)


@dataclass(frozen=True)
class JsaField:
    """Intensity |Phi|^2 sampled on a grid, with axis metadata."""

    values: np.ndarray
    axes: tuple
    fixed: dict


def _resolve_coords(model: BiphotonModel, grid: GridSpec):
    """Meshed coordinate arrays for every token, axis values first."""
    lam_c_nm = model.lambda_center_um * 1.0e3
    coords = {
        "lambda_s_nm": lam_c_nm,
        "lambda_i_nm": lam_c_nm,
        "q_sx": 0.0,
        "q_sy": 0.0,
        "q_ix": 0.0,
        "q_iy": 0.0,
        "x_s_um": 0.0,
        "x_i_um": 0.0,
    }
    coords.update(grid.fixed)
    axis_values = [ax.values() for ax in grid.axes]
    if len(grid.axes) == 2:
        mesh = np.meshgrid(axis_values[0], axis_values[1], indexing="ij")
    else:
        mesh = [axis_values[0]]
    for ax, m in zip(grid.axes, mesh):
        coords[ax.name] = m
    return coords


def _detunings(model: BiphotonModel, coords):
    lam_c = model.lambda_center_um
    om_s = detuning_from_wavelength(np.asarray(coords["lambda_s_nm"], dtype=float) * 1.0e-3, lam_c)
    om_i = detuning_from_wavelength(np.asarray(coords["lambda_i_nm"], dtype=float) * 1.0e-3, lam_c)
    return om_s, om_i


def _check_grid_guards(model: BiphotonModel, coords, guards: Guards):
    om_s, om_i = _detunings(model, coords)
    omega_cap = guards.omega_max_frac * model.derived.omega_0
    for label, om in (("Omega_s", om_s), ("Omega_i", om_i)):
        worst = float(np.max(np.abs(om)))
        if worst > omega_cap:
            raise DomainError(
                f"grid violates the narrowband guard: |{label}| reaches {worst:.6g} rad/fs, cap {omega_cap:.6g}"
            )
    for sx, sy, label in (("q_sx", "q_sy", "q_s"), ("q_ix", "q_iy", "q_i")):
        mag = np.sqrt(np.asarray(coords[sx], dtype=float) ** 2 + np.asarray(coords[sy], dtype=float) ** 2)
        worst = float(np.max(mag))
        if worst > guards.q_max:
            raise DomainError(
                f"grid violates the paraxial guard: |{label}| reaches {worst:.6g} 1/um, cap {guards.q_max:g}"
            )


def grid_coordinates(model: BiphotonModel, grid: GridSpec, guards: Guards = DEFAULT_GUARDS) -> dict:
    """Resolved, guard-checked coordinates for a grid.

    Returns every coordinate token (axis tokens meshed, the rest fixed
    scalars) plus the detunings under keys Omega_s / Omega_i.
    """
    coords = _resolve_coords(model, grid)
    _check_grid_guards(model, coords, guards)
    om_s, om_i = _detunings(model, coords)
    coords["Omega_s"] = om_s
    coords["Omega_i"] = om_i
    return coords


def pmf_grid(model: BiphotonModel, grid: GridSpec, guards: Guards = DEFAULT_GUARDS) -> JsaField:
    """Phase-matching factor alone (no pump envelopes) on a grid.

    Defined for the sinc kernels; the four-Gaussian model merges its
    phase matching into the pump widths and has no standalone PMF.
    """
    if model.kind not in (ModelKind.GENERAL, ModelKind.DOUBLE_SINC):
        raise ValidationError("pmf slices are defined for the general and double-sinc kernels")
    if grid.is_position_grid or any(k in _POSITION_TOKENS for k in grid.fixed):
        raise ValidationError("pmf slices use momentum/wavelength coordinates, not position")
    coords = grid_coordinates(model, grid, guards)
    d = model.derived
    qsx = np.asarray(coords["q_sx"], dtype=float)
    qsy = np.asarray(coords["q_sy"], dtype=float)
    qix = np.asarray(coords["q_ix"], dtype=float)
    qiy = np.asarray(coords["q_iy"], dtype=float)
    dsq = diff_sq(qsx, qsy, qix, qiy)
    spectral = spectral_mismatch(coords["Omega_s"], coords["Omega_i"], d, model.spdc_type)
    if model.kind is ModelKind.GENERAL:
        values = sinc(d.L_um / 2.0 * (-dsq / (2.0 * d.k_p) + spectral))
    else:
        values = sinc(d.L_um * dsq / (4.0 * d.k_p)) * sinc(d.L_um / 2.0 * spectral)
    values = np.broadcast_to(values, _grid_shape(grid)).copy()
    return JsaField(values=values, axes=grid.axes, fixed=dict(grid.fixed))


def jsa_grid(model: BiphotonModel, grid: GridSpec, guards: Guards = DEFAULT_GUARDS) -> JsaField:
    """Evaluate |Phi|^2 on a 1D or 2D grid.

    Position-space axes are only meaningful for the four-Gaussian model
    (the sinc models have no closed position representation here).
    """
    if grid.is_position_grid or any(k in _POSITION_TOKENS for k in grid.fixed):
        if model.kind is not ModelKind.FOUR_GAUSSIAN:
            raise ValidationError("position-space grids require the four-Gaussian model")
    coords = _resolve_coords(model, grid)
    _check_grid_guards(model, coords, guards)
    om_s, om_i = _detunings(model, coords)
    if grid.is_position_grid:
        amp = _position_amplitude_4g(model, coords["x_s_um"], coords["x_i_um"], om_s, om_i)
    else:
        amp = amplitude_arrays(
            model,
            np.asarray(coords["q_sx"], dtype=float),
            np.asarray(coords["q_sy"], dtype=float),
            np.asarray(coords["q_ix"], dtype=float),
            np.asarray(coords["q_iy"], dtype=float),
            om_s,
            om_i,
        )
    values = np.broadcast_to(amp, _grid_shape(grid)).copy() ** 2
    return JsaField(values=values, axes=grid.axes, fixed=dict(grid.fixed))


def _grid_shape(grid: GridSpec):
    return tuple(ax.points for ax in grid.axes)


@dataclass(frozen=True)
class JsaStats:
    """Intensity-weighted moments of a 2D field.

    tilt_rad is the major-axis angle in radians, measured from the first
    axis toward the second, in (-pi/2, pi/2]; it is flagged undefined
    when the covariance is isotropic to within one part in 1e3.
    """

    centroid: tuple
    covariance: np.ndarray
    tilt_rad: float
    axis_ratio: float
    tilt_defined: bool


def jsa_stats(field: JsaField) -> JsaStats:
    """Centroid, covariance, tilt and axis ratio of a 2D intensity grid.

    The field values are used directly as weights (they are intensities
    from jsa_grid).
    """
    if len(field.axes) != 2:
        raise ValidationError("jsa_stats needs a 2D field")
    w = np.asarray(field.values, dtype=float)
    if np.any(w < 0):
        raise ValidationError("field weights must be non-negative")
    total = float(w.sum())
    if not (total > 0) or not math.isfinite(total):
        raise ValidationError("field weights must have positive finite mass")
    x = field.axes[0].values()[:, None]
    y = field.axes[1].values()[None, :]
    cx = float((w * x).sum() / total)
    cy = float((w * y).sum() / total)
    dx = x - cx
    dy = y - cy
    cov = np.array(
        [
            [float((w * dx * dx).sum() / total), float((w * dx * dy).sum() / total)],
            [float((w * dx * dy).sum() / total), float((w * dy * dy).sum() / total)],
        ]
    )
    evals, evecs = np.linalg.eigh(cov)
    lam_min, lam_max = float(evals[0]), float(evals[1])
    if lam_max <= 0:
        raise ValidationError("degenerate field: zero covariance")
    ratio = math.sqrt(lam_max / max(lam_min, np.finfo(float).tiny))
    defined = (lam_max - lam_min) / lam_max > 1.0e-3
    major = evecs[:, 1]
    tilt = math.atan2(major[1], major[0])
    if tilt <= -math.pi / 2.0:
        tilt += math.pi
    elif tilt > math.pi / 2.0:
        tilt -= math.pi
    return JsaStats(centroid=(cx, cy), covariance=cov, tilt_rad=tilt, axis_ratio=ratio, tilt_defined=defined)
