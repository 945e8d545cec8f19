"""Tensor-product quadrature with doubling refinement.

Node generation wraps numpy's Gauss rules; this module owns the scaling
conventions, the tensor-product assembly and the refinement policy so
every integral in the library is reproducible bit for bit (fixed node
order, numpy pairwise summation).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial.hermite import hermgauss
from numpy.polynomial.legendre import leggauss

from .errors import ValidationError

__all__ = [
    "QuadRule",
    "AxisQuad",
    "QuadratureSpec",
    "IntegrationResult",
    "nodes_weights",
    "integrate_nd",
]

# exp(t^2) unfolding of the Hermite weight overflows past |t| ~ 26.6;
# hermgauss nodes reach ~sqrt(2n), so cap the order well inside that.
_MAX_HERMITE_ORDER = 300


class QuadRule(Enum):
    GAUSS_HERMITE = "gauss-hermite"
    GAUSS_LEGENDRE = "gauss-legendre"
    TRAPEZOID = "trapezoid"


def nodes_weights(rule: QuadRule, order: int, scale: float = 1.0, center: float = 0.0):
    """Nodes and weights of a 1D rule, in classic (weighted) form.

    Gauss-Legendre and trapezoid rules cover [center - scale, center +
    scale]; Gauss-Hermite nodes are center + scale * t with t the
    standard Hermite nodes, and the returned weights carry the implicit
    exp(-t^2) weight function, so they sum to scale * sqrt(pi) (the
    weight-function mass) and integrate polynomial * Gaussian products
    exactly up to degree 2*order - 1.

    Args:
        rule: rule family.
        order: number of nodes (>= 2).
        scale: half-width (Legendre/trapezoid) or Gaussian scale
            (Hermite); must be positive.
        center: interval or Gaussian center.

    Returns:
        (nodes, weights) float arrays of length ``order``.
    """
    if not isinstance(order, (int, np.integer)) or order < 2:
        raise ValidationError(f"quadrature order must be an integer >= 2, got {order!r}")
    if not (np.isfinite(scale) and scale > 0):
        raise ValidationError(f"quadrature scale must be positive, got {scale!r}")
    if rule is QuadRule.GAUSS_LEGENDRE:
        t, w = leggauss(order)
        return center + scale * t, scale * w
    if rule is QuadRule.GAUSS_HERMITE:
        if order > _MAX_HERMITE_ORDER:
            raise ValidationError(f"Hermite order {order} exceeds the supported maximum {_MAX_HERMITE_ORDER}")
        t, w = hermgauss(order)
        return center + scale * t, scale * w
    if rule is QuadRule.TRAPEZOID:
        x = np.linspace(center - scale, center + scale, order)
        h = x[1] - x[0]
        w = np.full(order, h)
        w[0] = w[-1] = 0.5 * h
        return x, w
    raise ValidationError(f"unknown quadrature rule {rule!r}")


@dataclass(frozen=True)
class AxisQuad:
    """One axis of a tensor-product rule."""

    rule: QuadRule
    order: int
    scale: float = 1.0
    center: float = 0.0

    def with_order(self, order: int) -> "AxisQuad":
        return AxisQuad(self.rule, order, self.scale, self.center)


@dataclass(frozen=True)
class QuadratureSpec:
    """Tensor-product quadrature with a doubling refinement loop.

    ``tol`` is the relative change between successive refinements below
    which the loop stops; ``max_refine`` bounds the number of doublings.
    """

    axes: tuple
    tol: float = 1.0e-6
    max_refine: int = 2

    def __post_init__(self):
        if len(self.axes) == 0:
            raise ValidationError("QuadratureSpec needs at least one axis")
        for ax in self.axes:
            if not isinstance(ax, AxisQuad):
                raise ValidationError(f"QuadratureSpec axes must be AxisQuad, got {ax!r}")
            # Trigger the order/scale validation early, not at node build time.
            nodes_weights(ax.rule, ax.order, ax.scale, ax.center)
        if not (self.tol > 0):
            raise ValidationError(f"tolerance must be positive, got {self.tol!r}")
        if self.max_refine < 0:
            raise ValidationError(f"max_refine must be >= 0, got {self.max_refine!r}")


@dataclass(frozen=True)
class IntegrationResult:
    """Value plus the convergence record of the refinement loop.

    ``deltas`` holds the relative change after each doubling; when the
    last delta is above tolerance the value is still returned but
    ``converged`` is False (callers decide whether that is fatal).
    """

    value: float
    converged: bool
    deltas: tuple
    orders: tuple


# Upper bound on points materialized per integrand call; refined tensor
# grids are evaluated in slabs of leading-axis nodes instead of at once.
_BLOCK_POINTS = 1 << 20


def _tensor_eval(f: Callable, axes: Sequence[AxisQuad]) -> float:
    nodes = []
    weights = []
    for ax in axes:
        x, w = nodes_weights(ax.rule, ax.order, ax.scale, ax.center)
        if ax.rule is QuadRule.GAUSS_HERMITE:
            # Unfold the Hermite weight so f is treated as a plain
            # integrand rather than a coefficient of exp(-t^2).
            t = (x - ax.center) / ax.scale
            w = w * np.exp(t * t)
        nodes.append(x)
        weights.append(w)
    lead_x, lead_w = nodes[0], weights[0]
    if len(nodes) == 1:
        tail_points = np.zeros((1, 0))
        tail_w = np.ones(1)
    else:
        tail_grids = np.meshgrid(*nodes[1:], indexing="ij")
        tail_points = np.stack([g.reshape(-1) for g in tail_grids], axis=-1)
        tail_w = np.ones(tail_points.shape[0])
        for wg in np.meshgrid(*weights[1:], indexing="ij"):
            tail_w = tail_w * wg.reshape(-1)
    m = tail_points.shape[0]
    block = max(1, _BLOCK_POINTS // m)
    total = 0.0
    for start in range(0, lead_x.size, block):
        xs = lead_x[start : start + block]
        points = np.empty((xs.size * m, len(nodes)))
        points[:, 0] = np.repeat(xs, m)
        if len(nodes) > 1:
            points[:, 1:] = np.tile(tail_points, (xs.size, 1))
        values = np.asarray(f(points), dtype=float).reshape(-1)
        if values.shape[0] != points.shape[0]:
            raise ValidationError("integrand must return one value per evaluation point")
        wprod = np.repeat(lead_w[start : start + block], m) * np.tile(tail_w, xs.size)
        total += float(np.sum(wprod * values))
    return total


def integrate_nd(f: Callable, spec: QuadratureSpec) -> IntegrationResult:
    """Integrate a vectorized integrand over a tensor-product rule.

    Args:
        f: callable taking an (N, ndim) array of points and returning N
            values.
        spec: axes, tolerance and refinement budget.

    Returns:
        IntegrationResult; non-convergence is flagged, never raised.
    """
    axes = list(spec.axes)
    value = _tensor_eval(f, axes)
    deltas = []
    converged = False
    for _ in range(spec.max_refine):
        axes = [ax.with_order(2 * ax.order) for ax in axes]
        refined = _tensor_eval(f, axes)
        denom = max(abs(refined), np.finfo(float).tiny)
        delta = abs(refined - value) / denom
        deltas.append(delta)
        value = refined
        if delta <= spec.tol:
            converged = True
            break
    return IntegrationResult(
        value=value,
        converged=converged,
        deltas=tuple(deltas),
        orders=tuple(ax.order for ax in axes),
    )
