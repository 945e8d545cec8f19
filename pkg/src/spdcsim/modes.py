"""Laguerre-Gaussian collection modes in transverse momentum space.

Modes are normalized over d^2q (radial measure q dq dphi):

    LG_p^l(q, phi) = sqrt(p! w0^2 / (4 pi (|l| + p)!)) * 2^(|l|/2 + 1/2)
                     * (q w0 / 2)^|l| * L_p^|l|(w0^2 q^2 / 2)
                     * exp(-w0^2 q^2 / 4) * exp(i l phi)

with w0 the collection waist (um) and L_p^a the associated Laguerre
polynomial evaluated by its three-term recurrence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

__all__ = ["CollectionSpec", "laguerre_assoc", "lg_radial", "lg_mode"]


@dataclass(frozen=True)
class CollectionSpec:
    """Collection mode indices and waist.

    ell is the (signed) azimuthal index of the signal mode; radial index
    p_rad >= 0; w0_um the collection waist in um.
    """

    ell: int
    p_rad: int
    w0_um: float

    def __post_init__(self):
        if not isinstance(self.ell, (int, np.integer)):
            raise ValidationError(f"ell must be an integer, got {self.ell!r}")
        if not isinstance(self.p_rad, (int, np.integer)) or self.p_rad < 0:
            raise ValidationError(f"p_rad must be a non-negative integer, got {self.p_rad!r}")
        if not (isinstance(self.w0_um, (int, float)) and math.isfinite(self.w0_um) and self.w0_um > 0):
            raise ValidationError(f"w0_um must be positive and finite, got {self.w0_um!r}")


def laguerre_assoc(p_rad: int, a: int, y):
    """Associated Laguerre polynomial L_p^a(y) by the stable recurrence.

    k L_k^a = (2k - 1 + a - y) L_{k-1}^a - (k - 1 + a) L_{k-2}^a,
    vectorized over y.
    """
    if not isinstance(p_rad, (int, np.integer)) or p_rad < 0:
        raise ValidationError(f"degree p_rad must be a non-negative integer, got {p_rad!r}")
    if not isinstance(a, (int, np.integer)) or a < 0:
        raise ValidationError(f"order a must be a non-negative integer, got {a!r}")
    y = np.asarray(y, dtype=float)
    prev = np.ones_like(y)
    if p_rad == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 + a - y
    for k in range(2, p_rad + 1):
        prev, cur = cur, ((2.0 * k - 1.0 + a - y) * cur - (k - 1.0 + a) * prev) / k
    return cur if cur.ndim else float(cur)


def lg_radial(q, spec: CollectionSpec):
    """Signed radial part of the LG mode (everything except exp(i l phi)).

    Vectorized over q (1/um).  The factorial ratio is taken in log space
    so large |ell| + p stays finite.
    """
    q = np.asarray(q, dtype=float)
    if np.any(q < 0):
        raise ValidationError("radial momentum q must be non-negative")
    w0 = spec.w0_um
    la = abs(spec.ell)
    log_ratio = math.lgamma(spec.p_rad + 1) - math.lgamma(la + spec.p_rad + 1)
    prefactor = w0 / math.sqrt(4.0 * math.pi) * math.exp(0.5 * log_ratio) * 2.0 ** (0.5 * (la + 1))
    u = w0 * w0 * q * q / 2.0
    radial = prefactor * (q * w0 / 2.0) ** la * laguerre_assoc(spec.p_rad, la, u) * np.exp(-u / 2.0)
    if np.ndim(radial) == 0:
        return float(radial)
    return radial


def lg_mode(q, phi, spec: CollectionSpec):
    """Full complex LG mode value at (q, phi)."""
    phase = np.exp(1j * spec.ell * np.asarray(phi, dtype=float))
    out = lg_radial(q, spec) * phase
    if np.ndim(out) == 0:
        return complex(out)
    return out
