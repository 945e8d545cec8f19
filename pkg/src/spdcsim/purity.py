"""Spatial purity of the LG-collected biphoton state.

The collected amplitude is Phi_LG = Phi * LG_l(q_s) LG_{-l}(q_i) (signal
and idler carry opposite OAM and share waist and radial index).  Tracing
the spectral subspace out of |Phi_LG><Phi_LG| gives the reduced spatial
operator rho_q, and

    P = Tr(rho_q^2) = Tr(M^2) / Tr(M)^2,

where M is the spectral Gram matrix

    M[W, W'] = int d^2q_s d^2q_i  Phi_LG(q, W) Phi_LG*(q, W')

evaluated on spectral quadrature nodes with the node weights folded in
symmetrically.  The formula is normalization-free.

Numerics exploit two structural facts:

* The opposite LG azimuthal phases cancel inside M, leaving the weight
  |LG(q_s)|^2 |LG(q_i)|^2; M is real symmetric positive semidefinite.
* In the variables S = |q_s + q_i|, D = |q_s - q_i|, gamma (the angle
  between the sum and difference vectors) every model factors into a
  pump part A(S) and a coupling part C(D, W), so

      M = P2^T diag(g) P2,   g_k = spatial mass at the D node k,

  and the 6-dimensional spatial integral collapses to one small matrix
  product per spectral node pair.  The gamma integrand is a trig
  polynomial of degree 2|l| + 4p, so the periodic trapezoid rule is
  exact at the default order for |l| <= 14, p = 0.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

import numpy as np

from .biphoton import BiphotonModel, ModelKind, amplitude, coupling_amplitude, pump_spatial_amp
from .errors import DomainError, SpdcError, ValidationError
from .modes import CollectionSpec, lg_mode, lg_radial
from .params import DerivedParams, SpdcType
from .phasematch import (
    SpectralPoint,
    TransversePoint,
    diff_sq,
    sinc,
    spatial_mismatch,
    spectral_mismatch_quadratic,
)
from .quadrature import AxisQuad, QuadratureSpec, QuadRule, nodes_weights

__all__ = [
    "PmfSimplification",
    "PuritySetting",
    "PurityResult",
    "SweepRow",
    "SWEEP_AXES",
    "default_purity_quad",
    "phi_lg",
    "simplified_kernel",
    "spectral_gram",
    "purity",
    "purity_sweep",
]

_TRACE_TOL = 1.0e-4
_PURITY_CAP = 1.0 + 1.0e-6

SWEEP_AXES = ("ws_over_wp", "ell", "L", "tau", "w_p")


class PmfSimplification(Enum):
    """Kernel used inside the purity integrals for the sinc models.

    QUADRATIC_ONLY keeps the quadratic spatial and spectral mismatch
    terms and drops the linear group-velocity term; FULL_SINC keeps
    everything.  The four-Gaussian model has no sinc and ignores the
    flag.
    """

    QUADRATIC_ONLY = "quadratic-only"
    FULL_SINC = "full-sinc"


def default_purity_quad(
    kind: ModelKind,
    radial_order: int = 24,
    azimuthal_order: int = 16,
    spectral_order: int = 12,
    tol: float = 1.0e-3,
    max_refine: int = 3,
) -> QuadratureSpec:
    """Default five-axis purity quadrature for a model kind.

    Axis order: S radial, D radial, azimuthal, Omega_+, Omega_-.  Axis
    scales are dimensionless multipliers on the engine's model-derived
    ranges (1.0 = heuristic default); orders double on refinement.  The
    Omega_- rule is Legendre for the sinc kernels (oscillatory) and
    Hermite for the Gaussian model.
    """
    minus_rule = QuadRule.GAUSS_HERMITE if kind is ModelKind.FOUR_GAUSSIAN else QuadRule.GAUSS_LEGENDRE
    return QuadratureSpec(
        axes=(
            AxisQuad(QuadRule.GAUSS_LEGENDRE, radial_order),
            AxisQuad(QuadRule.GAUSS_LEGENDRE, radial_order),
            AxisQuad(QuadRule.TRAPEZOID, azimuthal_order),
            AxisQuad(QuadRule.GAUSS_HERMITE, spectral_order),
            AxisQuad(minus_rule, spectral_order),
        ),
        tol=tol,
        max_refine=max_refine,
    )


@dataclass(frozen=True)
class PuritySetting:
    """Model, collection mode, quadrature and kernel flag for one purity run.

    The collection spec holds the signal indices; the idler is collected
    with ell_i = -ell at the same waist and radial index.  quad must
    have exactly five axes (S, D, azimuthal, Omega_+, Omega_-); each
    axis scale acts as a multiplier on the engine's model-derived range
    and every center must stay 0.
    """

    model: BiphotonModel
    collection: CollectionSpec
    quad: QuadratureSpec
    simplification: PmfSimplification = PmfSimplification.QUADRATIC_ONLY

    def __post_init__(self):
        if not isinstance(self.simplification, PmfSimplification):
            raise ValidationError(f"simplification must be a PmfSimplification, got {self.simplification!r}")
        axes = self.quad.axes
        if len(axes) != 5:
            raise ValidationError(f"purity quadrature needs 5 axes (S, D, azimuthal, Omega_+, Omega_-), got {len(axes)}")
        expected = (
            ("S radial", (QuadRule.GAUSS_LEGENDRE,)),
            ("D radial", (QuadRule.GAUSS_LEGENDRE,)),
            ("azimuthal", (QuadRule.TRAPEZOID,)),
            ("Omega_+", (QuadRule.GAUSS_HERMITE,)),
            ("Omega_-", (QuadRule.GAUSS_HERMITE, QuadRule.GAUSS_LEGENDRE)),
        )
        for ax, (label, rules) in zip(axes, expected):
            if ax.rule not in rules:
                allowed = " or ".join(r.name for r in rules)
                raise ValidationError(f"{label} axis must use {allowed}, got {ax.rule.name}")
            if ax.center != 0.0:
                raise ValidationError(f"{label} axis center must be 0 (ranges are model-derived), got {ax.center!r}")

    @property
    def idler_collection(self) -> CollectionSpec:
        return replace(self.collection, ell=-self.collection.ell)


@dataclass(frozen=True)
class PurityResult:
    """Purity value with its convergence diagnostics.

    trace_check is the ratio of Gram traces between the two finest
    quadrature levels (1 when the trace has stopped moving); deltas are
    the |P| changes per refinement.  converged results satisfy
    |trace_check - 1| <= 1e-4 by construction; non-converged results are
    flagged, never raised.
    """

    purity: float
    trace_check: float
    gram_dimension: int
    deltas: tuple
    converged: bool
    flags: tuple
    wall_time_ms: float
    setting: PuritySetting

    def __post_init__(self):
        if not (0.0 < self.purity <= _PURITY_CAP):
            raise DomainError(f"purity must lie in (0, 1 + 1e-6], got {self.purity!r}")
        if self.converged and not (abs(self.trace_check - 1.0) <= _TRACE_TOL):
            raise DomainError(f"converged result requires |trace_check - 1| <= {_TRACE_TOL:g}, got {self.trace_check!r}")


def phi_lg(qs_vec: TransversePoint, qi_vec: TransversePoint, w: SpectralPoint, s: PuritySetting) -> complex:
    """Collected amplitude Phi * LG_l(q_s) * LG_{-l}(q_i) at one point."""
    amp = amplitude(s.model, qs_vec, qi_vec, w)
    mode_s = lg_mode(qs_vec.magnitude, math.atan2(qs_vec.qy, qs_vec.qx), s.collection)
    mode_i = lg_mode(qi_vec.magnitude, math.atan2(qi_vec.qy, qi_vec.qx), s.idler_collection)
    return complex(amp * mode_s * mode_i)


def simplified_kernel(
    qs: TransversePoint,
    qi: TransversePoint,
    w: SpectralPoint,
    d: DerivedParams,
    L_um: float,
    spdc_type: SpdcType = SpdcType.TYPE_I,
) -> float:
    """PMF with quadratic mismatch terms only (group-velocity term dropped).

    sinc((L/2) (-|q_s - q_i|^2/(2 k_p) + quadratic spectral mismatch));
    this is the kernel the purity integrals use under QUADRATIC_ONLY.
    """
    if not (L_um > 0):
        raise ValidationError(f"crystal length must be positive, got {L_um!r}")
    dsq = diff_sq(qs.qx, qs.qy, qi.qx, qi.qy)
    arg = spatial_mismatch(dsq, d) + spectral_mismatch_quadratic(w.omega_s, w.omega_i, d, spdc_type)
    return float(sinc(L_um / 2.0 * arg))


# Engine internals.


def _plain_nodes(rule: QuadRule, order: int, scale: float, center: float = 0.0):
    """Nodes with plain integration weights (Hermite weight unfolded)."""
    x, w = nodes_weights(rule, order, scale=scale, center=center)
    if rule is QuadRule.GAUSS_HERMITE:
        t = (x - center) / scale
        w = w * np.exp(t * t)
    return x, w


@dataclass(frozen=True)
class _EngineScales:
    s_max: float
    d_max: float
    sigma_plus: float
    minus_half_range: float  # Legendre half-range or 6 sigma for Hermite
    minus_sigma: float
    minus_center: float  # walkoff-shifted ridge vertex (full-sinc type-II)


def _engine_scales(setting: PuritySetting) -> _EngineScales:
    model = setting.model
    d = model.derived
    col = setting.collection
    w_p = model.pump.w_p_um
    la, p = abs(col.ell), col.p_rad
    # LG radial support: |LG|^2 ~ u^(|l|) e^(-u) with u = w0^2 q^2 / 2.
    q_cut = math.sqrt(2.0) * (math.sqrt(la + 2.0 * p) + 6.0) / col.w0_um
    d_max = 2.0 * q_cut
    # Pump weight exp(-2 w_p^2 S^2) is < 1e-13 beyond 4/w_p.
    s_max = min(4.0 / w_p, d_max)
    if model.kind is ModelKind.FOUR_GAUSSIAN:
        f_sum = d.alpha if model.spdc_type is SpdcType.TYPE_I else d.beta_t2
        sigma_plus = d.a_tau / math.sqrt(f_sum)
        bcoef = 1.0 if model.spdc_type is SpdcType.TYPE_I else (math.sqrt(d.gvd_s_um) + math.sqrt(d.gvd_i_um)) / 2.0
        minus_sigma = d.b_tau / bcoef
        minus_half = 6.0 * minus_sigma
        minus_center = 0.0
    else:
        sigma_plus = 2.0 * math.sqrt(math.log(2.0)) / model.pump.tau_fs
        if model.spdc_type is SpdcType.TYPE_I:
            c_minus = d.gvd_s_um / 4.0
        else:
            c_minus = (math.sqrt(d.gvd_s_um) + math.sqrt(d.gvd_i_um)) ** 2 / 8.0
        # Cover the sinc ridge for every D node plus six zeros of tail.
        # The full type-II kernel keeps the s/i walkoff term c1 Omega_-,
        # which moves the ridge vertex to -c1/(2 c_minus); the window is
        # centered there so both flanks carry the same six-zero margin.
        xi_ridge = d_max * d_max / (2.0 * d.k_p) if model.kind is ModelKind.GENERAL else 0.0
        c1 = 0.0
        if setting.simplification is PmfSimplification.FULL_SINC and model.spdc_type is SpdcType.TYPE_II:
            c1 = (d.inv_v_g_s - d.inv_v_g_i) / 2.0
        minus_center = -c1 / (2.0 * c_minus)
        minus_half = math.sqrt((xi_ridge + 12.0 * math.pi / d.L_um) / c_minus + minus_center * minus_center)
        minus_sigma = minus_half / 6.0
    return _EngineScales(s_max, d_max, sigma_plus, minus_half, minus_sigma, minus_center)


def _gram_factor(setting: PuritySetting, orders) -> np.ndarray:
    """Factor K (n_D x n_spectral) of the weight-folded Gram M = K^T K.

    K[d, a] = sqrt(g_d) P(D_d, Omega_a) sqrt(w_a); the purity only needs
    the small n_D x n_D matrix C = K K^T (Tr M = Tr C, Tr M^2 = Tr C^2),
    which keeps refinement cheap even when the spectral node count grows.
    """
    model = setting.model
    col = setting.collection
    w_p = model.pump.w_p_um
    scales = _engine_scales(setting)
    ax_s, ax_d, ax_az, ax_p, ax_m = setting.quad.axes
    n_s, n_d, n_az, n_p, n_m = orders

    s_max = scales.s_max * ax_s.scale
    d_max = scales.d_max * ax_d.scale
    s_nodes, s_w = nodes_weights(QuadRule.GAUSS_LEGENDRE, n_s, scale=s_max / 2.0, center=s_max / 2.0)
    d_nodes, d_w = nodes_weights(QuadRule.GAUSS_LEGENDRE, n_d, scale=d_max / 2.0, center=d_max / 2.0)
    g_nodes, g_w = nodes_weights(QuadRule.TRAPEZOID, n_az, scale=math.pi / 2.0, center=math.pi / 2.0)

    # Spatial mass per D node: g_k = int S dS dgamma (pi/2 measure)
    # |LG(q_s)|^2 |LG(q_i)|^2 exp(-2 w_p^2 S^2), with the gamma integral
    # doubled (integrand even on the half period).
    s_col = s_nodes[:, None, None]
    d_col = d_nodes[None, :, None]
    cos_g = np.cos(g_nodes)[None, None, :]
    cross = 2.0 * s_col * d_col * cos_g
    base = s_col * s_col + d_col * d_col
    q_s = 0.5 * np.sqrt(np.maximum(base + cross, 0.0))
    q_i = 0.5 * np.sqrt(np.maximum(base - cross, 0.0))
    lg_sq = lg_radial(q_s, col) ** 2 * lg_radial(q_i, col) ** 2
    pump_sq = pump_spatial_amp(s_nodes, w_p) ** 2
    w_spatial = (
        (math.pi / 2.0)
        * (s_w * s_nodes * pump_sq)[:, None, None]
        * (d_w * d_nodes)[None, :, None]
        * (2.0 * g_w)[None, None, :]
    )
    g_mass = np.einsum("sdg,sdg->d", w_spatial, lg_sq)

    p_nodes, p_w = _plain_nodes(QuadRule.GAUSS_HERMITE, n_p, scale=scales.sigma_plus * ax_p.scale)
    if ax_m.rule is QuadRule.GAUSS_HERMITE:
        m_nodes, m_w = _plain_nodes(QuadRule.GAUSS_HERMITE, n_m, scale=scales.minus_sigma * ax_m.scale)
    else:
        m_nodes, m_w = nodes_weights(
            QuadRule.GAUSS_LEGENDRE, n_m, scale=scales.minus_half_range * ax_m.scale, center=scales.minus_center
        )
    om_plus = np.repeat(p_nodes, n_m)
    om_minus = np.tile(m_nodes, n_p)
    w_spec = 0.5 * np.repeat(p_w, n_m) * np.tile(m_w, n_p)  # dOm_s dOm_i = 1/2 dOm_+ dOm_-
    om_s = 0.5 * (om_plus + om_minus)
    om_i = 0.5 * (om_plus - om_minus)

    quadratic_only = setting.simplification is PmfSimplification.QUADRATIC_ONLY
    p2 = coupling_amplitude(model, d_nodes[:, None], om_s[None, :], om_i[None, :], quadratic_only)
    return np.sqrt(g_mass)[:, None] * p2 * np.sqrt(w_spec)[None, :]


def _purity_from_factor(k: np.ndarray):
    c = k @ k.T
    trace = float(np.trace(c))
    if not math.isfinite(trace) or trace <= 0.0:
        raise DomainError(f"Gram trace must be positive and finite, got {trace!r}; quadrature missed the mode support")
    frob_sq = float(np.sum(c * c))
    return frob_sq / (trace * trace), trace


def _purity_from_gram(m_tilde: np.ndarray):
    trace = float(np.trace(m_tilde))
    if not math.isfinite(trace) or trace <= 0.0:
        raise DomainError(f"Gram trace must be positive and finite, got {trace!r}; quadrature missed the mode support")
    frob_sq = float(np.sum(m_tilde * m_tilde))
    return frob_sq / (trace * trace), trace


def spectral_gram(s: PuritySetting) -> np.ndarray:
    """Weight-folded spectral Gram at the base (unrefined) orders.

    Real symmetric PSD; P = Tr(M^2)/Tr(M)^2 on the returned matrix.
    """
    k = _gram_factor(s, tuple(ax.order for ax in s.quad.axes))
    return k.T @ k


def purity(s: PuritySetting) -> PurityResult:
    """Purity with order-doubling refinement.

    Refines until both |P_t - P_{t-1}| <= tol and the Gram trace is
    stable (ratio within 1e-4 of 1) or max_refine is exhausted; a
    non-converged result is returned flagged.  With max_refine = 0 a
    half-order probe supplies the diagnostics instead.
    """
    t0 = time.perf_counter()
    base = tuple(ax.order for ax in s.quad.axes)
    tol = s.quad.tol
    deltas = []
    converged = False
    trace_check = math.nan
    p_prev = trace_prev = None
    p_val = trace = None
    dim = 0
    for level in range(s.quad.max_refine + 1):
        orders = tuple(o * 2**level for o in base)
        k = _gram_factor(s, orders)
        p_val, trace = _purity_from_factor(k)
        dim = k.shape[1]
        if p_prev is not None:
            deltas.append(abs(p_val - p_prev))
            trace_check = trace / trace_prev
            if deltas[-1] <= tol and abs(trace_check - 1.0) <= _TRACE_TOL:
                converged = True
                break
        p_prev, trace_prev = p_val, trace
    if s.quad.max_refine == 0:
        half = tuple(max(2, o // 2) for o in base)
        p_half, trace_half = _purity_from_factor(_gram_factor(s, half))
        deltas = [abs(p_val - p_half)]
        trace_check = trace / trace_half
        converged = deltas[0] <= tol and abs(trace_check - 1.0) <= _TRACE_TOL
    flags = []
    if s.collection.p_rad > 0:
        flags.append("beyond-paper: p_rad > 0")
    if not converged:
        if deltas and deltas[-1] > tol:
            flags.append(f"not-converged: last |dP| = {deltas[-1]:.3e} > tol {tol:g}")
        if abs(trace_check - 1.0) > _TRACE_TOL:
            flags.append(f"trace-drift: |trace_check - 1| = {abs(trace_check - 1.0):.3e}")
    wall = (time.perf_counter() - t0) * 1.0e3
    return PurityResult(
        purity=p_val,
        trace_check=trace_check,
        gram_dimension=dim,
        deltas=tuple(deltas),
        converged=converged,
        flags=tuple(flags),
        wall_time_ms=wall,
        setting=s,
    )


# Sweeps.


@dataclass(frozen=True)
class SweepRow:
    """One sweep point: the resolved setting plus result or error."""

    axis: str
    value: float
    setting: Optional[PuritySetting]
    result: Optional[PurityResult]
    error: str = ""


def _apply_axis(base: PuritySetting, axis: str, value) -> PuritySetting:
    model = base.model
    pump, crystal, collection = model.pump, model.crystal, base.collection
    if axis == "ws_over_wp":
        collection = replace(collection, w0_um=float(value) * pump.w_p_um)
    elif axis == "ell":
        as_int = int(round(float(value)))
        if abs(float(value) - as_int) > 1.0e-9:
            raise ValidationError(f"ell sweep values must be integers, got {value!r}")
        collection = replace(collection, ell=as_int)
    elif axis == "L":
        crystal = replace(crystal, L_mm=float(value))
    elif axis == "tau":
        pump = replace(pump, tau_fs=float(value))
    elif axis == "w_p":
        pump = replace(pump, w_p_um=float(value))
    else:
        raise ValidationError(f"unknown sweep axis {axis!r}; expected one of {', '.join(SWEEP_AXES)}")
    new_model = BiphotonModel.create(model.kind, pump, crystal, model.regime_override)
    return replace(base, model=new_model, collection=collection)


def purity_sweep(base: PuritySetting, axis: str, values, threads: int = 1):
    """One purity result per value; rows keep input order.

    Per-point failures are recorded on the row and the sweep continues;
    only an invalid axis name raises.
    """
    if axis not in SWEEP_AXES:
        raise ValidationError(f"unknown sweep axis {axis!r}; expected one of {', '.join(SWEEP_AXES)}")
    if not (isinstance(threads, int) and threads >= 1):
        raise ValidationError(f"threads must be a positive integer, got {threads!r}")
    values = list(values)
    if not values:
        raise ValidationError("sweep needs at least one value")

    def run_one(value) -> SweepRow:
        try:
            resolved = _apply_axis(base, axis, value)
            return SweepRow(axis=axis, value=float(value), setting=resolved, result=purity(resolved))
        except SpdcError as exc:
            return SweepRow(axis=axis, value=float(value), setting=None, result=None, error=str(exc))

    if threads == 1:
        rows = [run_one(v) for v in values]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(run_one, values))
    return tuple(rows)
