"""Longitudinal phase mismatch and phase-matching functions.

Conventions: paraxial, collinear, frequency-degenerate expansion around
the central wavelengths; Delta k_z carries the transverse term
-|q_s - q_i|^2 / (2 k_p), a quadratic dispersion term and the
group-velocity walk-off term.  The general PMF is sinc(Delta k_z L / 2);
the factorized PMF splits it into a spatial and a spectral sinc, valid
for small |q_s - q_i|.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import math

import numpy as np

from .errors import DomainError, ValidationError
from .params import DerivedParams, GAUSS_SUBSTITUTE_A, SpdcType

__all__ = [
    "Guards",
    "DEFAULT_GUARDS",
    "TransversePoint",
    "SpectralPoint",
    "PmfKind",
    "sinc",
    "delta_kz_type1",
    "delta_kz_type2",
    "delta_kz",
    "pmf_sinc",
    "pmf_double_sinc_type1",
    "pmf_double_sinc_type2",
    "pmf_double_sinc",
    "gaussian_spatial_substitute",
]

# Switch to the Taylor series 1 - x^2/6 + x^4/120 below this argument.
_SINC_SERIES_CUT = 1.0e-4


@dataclass(frozen=True)
class Guards:
    """Validity guards for evaluation points.

    q_max bounds each transverse momentum magnitude (paraxial window,
    1/um); omega_max_frac bounds |Omega| relative to the pump central
    frequency (narrowband window).  Violations raise DomainError, they
    are never clamped.
    """

    q_max: float = 0.5
    omega_max_frac: float = 0.2


DEFAULT_GUARDS = Guards()


@dataclass(frozen=True)
class TransversePoint:
    """Transverse momentum (q_x, q_y) in 1/um."""

    qx: float
    qy: float

    def __post_init__(self):
        if not (math.isfinite(self.qx) and math.isfinite(self.qy)):
            raise ValidationError(f"TransversePoint components must be finite, got ({self.qx!r}, {self.qy!r})")

    @classmethod
    def from_polar(cls, q: float, phi: float) -> "TransversePoint":
        return cls(q * math.cos(phi), q * math.sin(phi))

    @property
    def magnitude(self) -> float:
        return math.hypot(self.qx, self.qy)


@dataclass(frozen=True)
class SpectralPoint:
    """Signal/idler detunings from the degenerate frequency (rad/fs)."""

    omega_s: float
    omega_i: float

    def __post_init__(self):
        if not (math.isfinite(self.omega_s) and math.isfinite(self.omega_i)):
            raise ValidationError(
                f"SpectralPoint detunings must be finite, got ({self.omega_s!r}, {self.omega_i!r})"
            )


class PmfKind(Enum):
    GENERAL_SINC = "general-sinc"
    DOUBLE_SINC = "double-sinc"
    GAUSSIAN = "gaussian"


def check_point_guards(
    qs: TransversePoint,
    qi: TransversePoint,
    w: SpectralPoint,
    d: DerivedParams,
    guards: Guards = DEFAULT_GUARDS,
) -> None:
    """Raise DomainError if a point leaves the validity windows."""
    for label, point in (("q_s", qs), ("q_i", qi)):
        if point.magnitude > guards.q_max:
            raise DomainError(
                f"|{label}| = {point.magnitude:.6g} 1/um exceeds the paraxial guard q_max = {guards.q_max:g} 1/um"
            )
    omega_cap = guards.omega_max_frac * d.omega_0
    for label, omega in (("Omega_s", w.omega_s), ("Omega_i", w.omega_i)):
        if abs(omega) > omega_cap:
            raise DomainError(
                f"|{label}| = {abs(omega):.6g} rad/fs exceeds the narrowband guard "
                f"{guards.omega_max_frac:g} * omega_0 = {omega_cap:.6g} rad/fs"
            )


def sinc(x):
    """sin(x)/x, stable near zero (Taylor series below |x| = 1e-4)."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < _SINC_SERIES_CUT
    # Keep the small arguments out of the division; they are replaced by
    # the series value anyway.
    safe = np.where(small, 1.0, x)
    out = np.where(small, 1.0 - x * x / 6.0 + x**4 / 120.0, np.sin(safe) / safe)
    if out.ndim == 0:
        return float(out)
    return out


# Array kernels shared by the grid and purity paths (no guard checks;
# callers validate ranges up front).


def diff_sq(qsx, qsy, qix, qiy):
    """|q_s - q_i|^2."""
    dx = qsx - qix
    dy = qsy - qiy
    return dx * dx + dy * dy


def sum_sq(qsx, qsy, qix, qiy):
    """|q_s + q_i|^2."""
    sx = qsx + qix
    sy = qsy + qiy
    return sx * sx + sy * sy


def spatial_mismatch(d_sq, d: DerivedParams):
    """Transverse contribution to Delta k_z (1/um)."""
    return -np.asarray(d_sq, dtype=float) / (2.0 * d.k_p)


def spectral_mismatch_type1(omega_s, omega_i, d: DerivedParams):
    """Spectral contribution for type-I (1/um).

    (GVD_s/4) (Omega_s - Omega_i)^2 - (1/v_gp - 1/v_gs)(Omega_s + Omega_i);
    the quadratic coefficient is beta_disp/2 = GVD_s/4.
    """
    diff = np.asarray(omega_s, dtype=float) - omega_i
    total = np.asarray(omega_s, dtype=float) + omega_i
    return (d.beta_disp / 2.0) * diff * diff - d.delta_inv_vg * total


def spectral_mismatch_type2(omega_s, omega_i, d: DerivedParams):
    """Spectral contribution for type-II (1/um).

    (sqrt(GVD_s) Omega_s - sqrt(GVD_i) Omega_i)^2 / 2
    - (Omega_s + Omega_i)/v_gp + Omega_s/v_gs + Omega_i/v_gi.
    """
    if d.gvd_s_um < 0.0 or d.gvd_i_um < 0.0:
        raise ValidationError("type-II mismatch needs non-negative GVD_s and GVD_i")
    om_s = np.asarray(omega_s, dtype=float)
    om_i = np.asarray(omega_i, dtype=float)
    weighted = math.sqrt(d.gvd_s_um) * om_s - math.sqrt(d.gvd_i_um) * om_i
    return (
        weighted * weighted / 2.0
        - d.inv_v_g_p * (om_s + om_i)
        + d.inv_v_g_s * om_s
        + d.inv_v_g_i * om_i
    )


def spectral_mismatch(omega_s, omega_i, d: DerivedParams, spdc_type: SpdcType):
    if spdc_type is SpdcType.TYPE_I:
        return spectral_mismatch_type1(omega_s, omega_i, d)
    return spectral_mismatch_type2(omega_s, omega_i, d)


def spectral_mismatch_quadratic(omega_s, omega_i, d: DerivedParams, spdc_type: SpdcType):
    """Quadratic dispersion term alone (group-velocity terms dropped)."""
    om_s = np.asarray(omega_s, dtype=float)
    om_i = np.asarray(omega_i, dtype=float)
    if spdc_type is SpdcType.TYPE_I:
        diff = om_s - om_i
        return (d.beta_disp / 2.0) * diff * diff
    if d.gvd_s_um < 0.0 or d.gvd_i_um < 0.0:
        raise ValidationError("type-II mismatch needs non-negative GVD_s and GVD_i")
    weighted = math.sqrt(d.gvd_s_um) * om_s - math.sqrt(d.gvd_i_um) * om_i
    return weighted * weighted / 2.0


# Point-level operations (guarded).


def delta_kz_type1(
    qs: TransversePoint,
    qi: TransversePoint,
    w: SpectralPoint,
    d: DerivedParams,
    guards: Guards = DEFAULT_GUARDS,
) -> float:
    """Type-I longitudinal mismatch Delta k_z (1/um) at one point."""
    check_point_guards(qs, qi, w, d, guards)
    spatial = spatial_mismatch(diff_sq(qs.qx, qs.qy, qi.qx, qi.qy), d)
    return float(spatial + spectral_mismatch_type1(w.omega_s, w.omega_i, d))


def delta_kz_type2(
    qs: TransversePoint,
    qi: TransversePoint,
    w: SpectralPoint,
    d: DerivedParams,
    guards: Guards = DEFAULT_GUARDS,
) -> float:
    """Type-II longitudinal mismatch Delta k_z (1/um) at one point."""
    check_point_guards(qs, qi, w, d, guards)
    spatial = spatial_mismatch(diff_sq(qs.qx, qs.qy, qi.qx, qi.qy), d)
    return float(spatial + spectral_mismatch_type2(w.omega_s, w.omega_i, d))


def delta_kz(
    qs: TransversePoint,
    qi: TransversePoint,
    w: SpectralPoint,
    d: DerivedParams,
    spdc_type: SpdcType,
    guards: Guards = DEFAULT_GUARDS,
) -> float:
    if spdc_type is SpdcType.TYPE_I:
        return delta_kz_type1(qs, qi, w, d, guards)
    return delta_kz_type2(qs, qi, w, d, guards)


def pmf_sinc(delta_kz_value, L_um: float):
    """General phase-matching function sinc(Delta k_z L / 2)."""
    if not (L_um > 0):
        raise ValidationError(f"crystal length must be positive, got {L_um!r}")
    return sinc(np.asarray(delta_kz_value, dtype=float) * L_um / 2.0)


def pmf_double_sinc_type1(
    qs: TransversePoint,
    qi: TransversePoint,
    w: SpectralPoint,
    d: DerivedParams,
    L_um: float,
    guards: Guards = DEFAULT_GUARDS,
) -> float:
    """Factorized type-I PMF: spatial sinc times spectral sinc.

    sinc(L |q_s - q_i|^2 / (4 k_p))
    * sinc((L/2) [(beta_disp/2)(Omega_s - Omega_i)^2
                  - (1/v_gp - 1/v_gs)(Omega_s + Omega_i)]).
    """
    check_point_guards(qs, qi, w, d, guards)
    dsq = diff_sq(qs.qx, qs.qy, qi.qx, qi.qy)
    spatial = sinc(L_um * dsq / (4.0 * d.k_p))
    spectral = sinc(L_um / 2.0 * spectral_mismatch_type1(w.omega_s, w.omega_i, d))
    return float(spatial * spectral)


def pmf_double_sinc_type2(
    qs: TransversePoint,
    qi: TransversePoint,
    w: SpectralPoint,
    d: DerivedParams,
    L_um: float,
    guards: Guards = DEFAULT_GUARDS,
) -> float:
    """Factorized type-II PMF (same spatial factor, type-II spectral)."""
    check_point_guards(qs, qi, w, d, guards)
    dsq = diff_sq(qs.qx, qs.qy, qi.qx, qi.qy)
    spatial = sinc(L_um * dsq / (4.0 * d.k_p))
    spectral = sinc(L_um / 2.0 * spectral_mismatch_type2(w.omega_s, w.omega_i, d))
    return float(spatial * spectral)


def pmf_double_sinc(
    qs: TransversePoint,
    qi: TransversePoint,
    w: SpectralPoint,
    d: DerivedParams,
    L_um: float,
    spdc_type: SpdcType,
    guards: Guards = DEFAULT_GUARDS,
) -> float:
    if spdc_type is SpdcType.TYPE_I:
        return pmf_double_sinc_type1(qs, qi, w, d, L_um, guards)
    return pmf_double_sinc_type2(qs, qi, w, d, L_um, guards)


def gaussian_spatial_substitute(q_rel_sq, d: DerivedParams, L_um: float):
    """Gaussian stand-in for the spatial sinc factor.

    exp(-A (L / 4 k_p) |q_s - q_i|^2) with A = 8/3, matching the second
    moment of the sinc profile.
    """
    if not (L_um > 0):
        raise ValidationError(f"crystal length must be positive, got {L_um!r}")
    arg = np.asarray(q_rel_sq, dtype=float) * L_um / (4.0 * d.k_p)
    out = np.exp(-GAUSS_SUBSTITUTE_A * arg)
    if out.ndim == 0:
        return float(out)
    return out
