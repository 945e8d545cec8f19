"""Pump, crystal and derived degenerate-SPDC parameters.

The library treats collinear, frequency-degenerate SPDC of a pulsed
Gaussian pump: central signal/idler wavelength is twice the pump
wavelength by construction.  ``derive_params`` is the single place where
raw material constants (group-velocity divisors, GVDs, pump index) are
converted to the internal unit policy and combined into the quantities
every downstream model consumes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .errors import ValidationError
from .units import C_UM_PER_FS, TWO_PI, fs2_per_mm_to_per_um, mm_to_um

__all__ = [
    "SpdcType",
    "PulseRegime",
    "PumpSpec",
    "CrystalSpec",
    "DerivedParams",
    "derive_params",
    "crystal_preset",
    "CRYSTAL_PRESET_NAMES",
    "FEDOROV_GAMMA",
    "GAUSS_SUBSTITUTE_A",
]

# Exponent-matching constant of the Gaussian stand-in for the spatial
# sinc and the interpolation exponent of the pulse-duration crossover.
GAUSS_SUBSTITUTE_A = 8.0 / 3.0
FEDOROV_GAMMA = 2.21

# Width prefactors of the two spectral Fedorov widths.
_A_WIDTH_PREF = 1.39
_B_WIDTH_PREF = 0.249


class SpdcType(Enum):
    """Phase-matching type.

    TYPE_I: signal and idler share polarization and dispersion data
    (equal group velocities and GVDs are enforced).  TYPE_II: the two
    photons may carry distinct group velocities and GVDs.
    """

    TYPE_I = "I"
    TYPE_II = "II"


class PulseRegime(Enum):
    """Pulse-duration regime selecting the spectral-width factors.

    SHORT uses alpha = 0.4 (type-I sum width) and beta = 0.1 (type-II),
    LONG uses 1.0 for both.  The automatic switch puts eta < 1 in the
    short regime; pass an explicit regime to override.
    """

    SHORT = "short"
    LONG = "long"


@dataclass(frozen=True)
class PumpSpec:
    """Pulsed Gaussian pump beam.

    Attributes:
        lambda_p_um: central pump wavelength (um).  Signal and idler are
            centred at twice this value (degenerate down-conversion).
        w_p_um: pump beam waist (um).
        tau_fs: FWHM-style pulse duration entering the spectral envelope
            exp(-tau^2 (Omega_s + Omega_i)^2 / (8 ln 2)) (fs).
    """

    lambda_p_um: float
    w_p_um: float
    tau_fs: float

    def __post_init__(self):
        for name in ("lambda_p_um", "w_p_um", "tau_fs"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ValidationError(f"PumpSpec.{name} must be a positive finite number, got {value!r}")


@dataclass(frozen=True)
class CrystalSpec:
    """Nonlinear crystal description.

    Group velocities are given as divisors of c (v_g = c / divisor, i.e.
    the group index), GVDs in fs^2/mm and the length in mm; conversion
    to internal units happens in :func:`derive_params`.  Exactly one of
    ``n_p`` (pump phase index at the pump wavelength) or ``k_p_um``
    (pump wavenumber, 1/um) must be supplied.

    Attributes:
        spdc_type: phase-matching type; TYPE_I requires identical
            signal/idler group velocities and GVDs.
        L_mm: crystal length (mm).
        v_g_p, v_g_s, v_g_i: group-velocity divisors (group indices).
        gvd_p_fs2_mm, gvd_s_fs2_mm, gvd_i_fs2_mm: GVDs (fs^2/mm).
        n_p: pump phase index at lambda_p (dimensionless), optional.
        k_p_um: pump wavenumber (1/um), optional alternative to n_p.
    """

    spdc_type: SpdcType
    L_mm: float
    v_g_p: float
    v_g_s: float
    v_g_i: float
    gvd_p_fs2_mm: float
    gvd_s_fs2_mm: float
    gvd_i_fs2_mm: float
    n_p: Optional[float] = None
    k_p_um: Optional[float] = None

    def __post_init__(self):
        if not isinstance(self.spdc_type, SpdcType):
            raise ValidationError(f"spdc_type must be a SpdcType, got {self.spdc_type!r}")
        if not (math.isfinite(self.L_mm) and self.L_mm > 0):
            raise ValidationError(f"CrystalSpec.L_mm must be positive, got {self.L_mm!r}")
        for name in ("v_g_p", "v_g_s", "v_g_i"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 1.0):
                raise ValidationError(
                    f"CrystalSpec.{name} is a group-velocity divisor (group index) and must be >= 1, got {value!r}"
                )
        if (self.n_p is None) == (self.k_p_um is None):
            raise ValidationError("CrystalSpec needs exactly one of n_p or k_p_um")
        if self.n_p is not None and not (math.isfinite(self.n_p) and self.n_p >= 1.0):
            raise ValidationError(f"CrystalSpec.n_p must be >= 1, got {self.n_p!r}")
        if self.k_p_um is not None and not (math.isfinite(self.k_p_um) and self.k_p_um > 0):
            raise ValidationError(f"CrystalSpec.k_p_um must be positive, got {self.k_p_um!r}")
        if self.spdc_type is SpdcType.TYPE_I:
            if self.v_g_s != self.v_g_i or self.gvd_s_fs2_mm != self.gvd_i_fs2_mm:
                raise ValidationError(
                    "TYPE_I requires identical signal/idler dispersion data "
                    f"(got v_g {self.v_g_s}/{self.v_g_i}, GVD {self.gvd_s_fs2_mm}/{self.gvd_i_fs2_mm})"
                )

    @property
    def L_um(self) -> float:
        return mm_to_um(self.L_mm)


@dataclass(frozen=True)
class DerivedParams:
    """Quantities derived from a (PumpSpec, CrystalSpec) pair.

    All fields follow the internal unit policy (um, fs, rad/fs, 1/um).
    ``a_tau``/``b_tau`` are the sum- and difference-frequency widths of
    the separable four-Gaussian model, evaluated verbatim from their
    closed forms with ``A_fed`` in um/fs and the pulse-duration
    parameter ``eta = 2 c tau / (|A_fed| L)``.

    Attributes:
        k_p: pump wavenumber (1/um).
        omega_0: pump central angular frequency (rad/fs).
        L_um: crystal length (um), converted once here for convenience.
        inv_v_g_p, inv_v_g_s, inv_v_g_i: inverse group velocities (fs/um).
        delta_inv_vg: 1/v_g_p - 1/v_g_s (fs/um).
        gvd_p_um, gvd_s_um, gvd_i_um: GVDs (fs^2/um).
        beta_disp: GVD_s / 2 (fs^2/um).
        A_fed: (1/v_g_p - 1/v_g_s)^-1 (um/fs).
        eta: dimensionless pulse-duration parameter (uses |A_fed|).
        B_fed: omega_0 c GVD_s / 4.
        gamma: crossover exponent (2.21).
        a_tau: four-Gaussian sum-frequency width (rad/fs).
        b_tau: four-Gaussian difference-frequency width (rad/fs).
        sigma_q: momentum correlation width (um): sigma_q^2 = A L/(16 k_p).
        sigma_x: position correlation width (um): 1/(16 sigma_x^2) = 3 k_p/(8 L).
        alpha: type-I sum-width factor (0.4 short, 1.0 long).
        beta_t2: type-II sum-width factor (0.1 short, 1.0 long).
        regime: the PulseRegime the factors were taken from.
    """

    k_p: float
    omega_0: float
    L_um: float
    inv_v_g_p: float
    inv_v_g_s: float
    inv_v_g_i: float
    delta_inv_vg: float
    gvd_p_um: float
    gvd_s_um: float
    gvd_i_um: float
    beta_disp: float
    A_fed: float
    eta: float
    B_fed: float
    gamma: float
    a_tau: float
    b_tau: float
    sigma_q: float
    sigma_x: float
    alpha: float
    beta_t2: float
    regime: PulseRegime


def derive_params(
    pump: PumpSpec,
    crystal: CrystalSpec,
    regime_override: Optional[PulseRegime] = None,
) -> DerivedParams:
    """Combine pump and crystal data into the derived parameter set.

    Pure function: identical inputs produce identical outputs (all
    arithmetic is deterministic double precision).

    Args:
        pump: pump description.
        crystal: crystal description.
        regime_override: force SHORT or LONG factors instead of the
            automatic eta < 1 switch.

    Raises:
        ValidationError: degenerate group velocities (v_g_p == v_g_s),
            non-positive GVD_s (the difference-frequency width needs
            B_fed > 0), or inconsistent inputs.
    """
    L_um = crystal.L_um
    k_p = crystal.k_p_um if crystal.k_p_um is not None else TWO_PI * crystal.n_p / pump.lambda_p_um
    omega_0 = TWO_PI * C_UM_PER_FS / pump.lambda_p_um

    inv_p = crystal.v_g_p / C_UM_PER_FS
    inv_s = crystal.v_g_s / C_UM_PER_FS
    inv_i = crystal.v_g_i / C_UM_PER_FS
    delta_inv_vg = inv_p - inv_s
    if delta_inv_vg == 0.0:
        raise ValidationError("degenerate group velocities: v_g_p equals v_g_s, A_fed undefined")

    gvd_p = fs2_per_mm_to_per_um(crystal.gvd_p_fs2_mm)
    gvd_s = fs2_per_mm_to_per_um(crystal.gvd_s_fs2_mm)
    gvd_i = fs2_per_mm_to_per_um(crystal.gvd_i_fs2_mm)
    if gvd_s <= 0.0:
        raise ValidationError(f"gvd_s must be positive for the spectral widths, got {crystal.gvd_s_fs2_mm} fs^2/mm")

    A_fed = 1.0 / delta_inv_vg
    # eta is the walk-off-normalised pulse duration; the magnitude keeps
    # eta**gamma real for either sign of the group-velocity mismatch.
    eta = 2.0 * C_UM_PER_FS * pump.tau_fs / (abs(A_fed) * L_um)
    B_fed = omega_0 * C_UM_PER_FS * gvd_s / 4.0

    gamma = FEDOROV_GAMMA
    crossover = 1.0 + eta**gamma
    a_tau = (
        _A_WIDTH_PREF
        / (math.pi * abs(A_fed) * math.sqrt(math.log(2.0)))
        * (pump.lambda_p_um / L_um)
        * crossover ** (-1.0 / gamma)
        * omega_0
    )
    b_tau = (
        math.sqrt(pump.lambda_p_um / (TWO_PI * _B_WIDTH_PREF * B_fed * L_um))
        * crossover ** (1.0 / (2.0 * gamma))
        * omega_0
        / math.sqrt(eta)
    )

    sigma_q = math.sqrt(GAUSS_SUBSTITUTE_A * L_um / (16.0 * k_p))
    sigma_x = math.sqrt(8.0 * L_um / (48.0 * k_p))  # from 1/(16 sigma_x^2) = 3 k_p/(8 L)

    regime = regime_override or (PulseRegime.SHORT if eta < 1.0 else PulseRegime.LONG)
    alpha = 0.4 if regime is PulseRegime.SHORT else 1.0
    beta_t2 = 0.1 if regime is PulseRegime.SHORT else 1.0

    return DerivedParams(
        k_p=k_p,
        omega_0=omega_0,
        L_um=L_um,
        inv_v_g_p=inv_p,
        inv_v_g_s=inv_s,
        inv_v_g_i=inv_i,
        delta_inv_vg=delta_inv_vg,
        gvd_p_um=gvd_p,
        gvd_s_um=gvd_s,
        gvd_i_um=gvd_i,
        beta_disp=gvd_s / 2.0,
        A_fed=A_fed,
        eta=eta,
        B_fed=B_fed,
        gamma=gamma,
        a_tau=a_tau,
        b_tau=b_tau,
        sigma_q=sigma_q,
        sigma_x=sigma_x,
        alpha=alpha,
        beta_t2=beta_t2,
        regime=regime,
    )


# Built-in crystal presets.  "BBO-Fig5" carries the published BBO
# type-II constants for a 400 nm pump; its phase index is the standard
# 400 nm ordinary-wave value (the pump propagates as an ordinary wave).
_PRESETS = {
    "BBO-Fig5": CrystalSpec(
        spdc_type=SpdcType.TYPE_II,
        L_mm=0.5,
        v_g_p=1.708,
        v_g_s=1.626,
        v_g_i=1.684,
        gvd_p_fs2_mm=180.0,
        gvd_s_fs2_mm=61.7,
        gvd_i_fs2_mm=75.1,
        n_p=1.6934,
    ),
}

CRYSTAL_PRESET_NAMES = tuple(sorted(_PRESETS))


def crystal_preset(name: str) -> CrystalSpec:
    """Return a built-in CrystalSpec by name (currently only BBO-Fig5)."""
    try:
        return _PRESETS[name]
    except KeyError:
        raise ValidationError(f"unknown crystal preset {name!r}; available: {', '.join(CRYSTAL_PRESET_NAMES)}") from None
