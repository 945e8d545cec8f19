"""Unit policy shared by every module.

Internal units are fixed once and for all: lengths in micrometres (um),
times in femtoseconds (fs), angular frequencies in rad/fs and transverse
momenta in 1/um.  Quantities quoted in other units at the API boundary
(crystal length in mm, GVD in fs^2/mm, wavelengths sometimes in nm) are
converted exactly once by the helpers below; nothing downstream ever
mixes unit systems.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "C_UM_PER_FS",
    "TWO_PI",
    "mm_to_um",
    "fs2_per_mm_to_per_um",
    "nm_to_um",
    "um_to_nm",
    "omega_from_wavelength",
    "detuning_from_wavelength",
    "wavelength_from_detuning",
]

# Speed of light (um/fs); the only physical constant the library needs.
C_UM_PER_FS = 0.299792458

TWO_PI = 2.0 * np.pi


def mm_to_um(value_mm):
    """Convert a length from mm to um."""
    return value_mm * 1.0e3


def fs2_per_mm_to_per_um(value_fs2_mm):
    """Convert a group-velocity dispersion from fs^2/mm to fs^2/um."""
    return value_fs2_mm * 1.0e-3


def nm_to_um(value_nm):
    return value_nm * 1.0e-3


def um_to_nm(value_um):
    return value_um * 1.0e3


def omega_from_wavelength(lambda_um):
    """Angular frequency (rad/fs) of a vacuum wavelength (um)."""
    return TWO_PI * C_UM_PER_FS / np.asarray(lambda_um, dtype=float)


def detuning_from_wavelength(lambda_um, lambda_center_um):
    """Detuning Omega = omega(lambda) - omega(lambda_center) in rad/fs.

    Exact relation, no small-detuning expansion: the mapping between the
    wavelength axes used for plotting and the detunings used internally
    must round-trip losslessly.
    """
    lam = np.asarray(lambda_um, dtype=float)
    return TWO_PI * C_UM_PER_FS * (1.0 / lam - 1.0 / lambda_center_um)


def wavelength_from_detuning(omega, lambda_center_um):
    """Inverse of :func:`detuning_from_wavelength` (returns um)."""
    om = np.asarray(omega, dtype=float)
    return 1.0 / (om / (TWO_PI * C_UM_PER_FS) + 1.0 / lambda_center_um)
