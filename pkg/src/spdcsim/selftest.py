"""Fast end-to-end sanity checks, exposed as `spdc selftest`.

Each check returns (name, passed, detail).  They are meant to catch a
broken install or a numerically hostile platform in a few seconds, not
to replace the test suite.
"""

from __future__ import annotations

import math

import numpy as np

from .biphoton import BiphotonModel, ModelKind
from .config import load_config, resolved_config_hash
from .modes import CollectionSpec, lg_radial
from .params import PumpSpec, crystal_preset
from .phasematch import sinc
from .purity import PuritySetting, default_purity_quad, purity, spectral_gram
from .quadrature import QuadRule, nodes_weights

__all__ = ["run_selftest"]


def _check_gauss_legendre():
    # order n is exact for polynomials up to degree 2n-1
    x, w = nodes_weights(QuadRule.GAUSS_LEGENDRE, 8, scale=0.5, center=0.5)
    got = float(np.sum(w * x**9))
    err = abs(got - 0.1)
    return err < 1.0e-13, f"int_0^1 x^9 dx: error {err:.3e}"


def _check_gauss_hermite():
    # classic weights: sum w f(x) ~ int f(x) exp(-(x/scale)^2) dx
    x, w = nodes_weights(QuadRule.GAUSS_HERMITE, 12, scale=2.0)
    got = float(np.sum(w * x**2))
    expect = 2.0**3 * math.sqrt(math.pi) / 2.0
    err = abs(got / expect - 1.0)
    return err < 1.0e-13, f"Gaussian second moment: rel error {err:.3e}"


def _check_sinc():
    xs = np.array([1.0e-7, 1.0e-5, 9.9e-5, 1.1e-4, 0.5, math.pi])
    err = float(np.max(np.abs(sinc(xs) - np.sinc(xs / math.pi))))
    return err < 1.0e-12, f"worst |sinc - reference| {err:.3e}"


def _check_lg_norm():
    q, w = nodes_weights(QuadRule.GAUSS_LEGENDRE, 160, scale=8.0, center=8.0)
    worst = 0.0
    for ell, p_rad in ((0, 0), (1, 0), (3, 0), (2, 1)):
        spec = CollectionSpec(ell=ell, p_rad=p_rad, w0_um=1.0)
        norm = 2.0 * math.pi * float(np.sum(w * q * lg_radial(q, spec) ** 2))
        worst = max(worst, abs(norm - 1.0))
    return worst < 1.0e-10, f"worst |norm - 1| {worst:.3e}"


def _default_setting():
    pump = PumpSpec(lambda_p_um=0.4, w_p_um=28.0, tau_fs=50.0)
    crystal = crystal_preset("BBO-Fig5")
    model = BiphotonModel.create(ModelKind.FOUR_GAUSSIAN, pump, crystal)
    quad = default_purity_quad(
        ModelKind.FOUR_GAUSSIAN,
        radial_order=16,
        azimuthal_order=12,
        spectral_order=8,
        max_refine=0,
    )
    collection = CollectionSpec(ell=2, p_rad=0, w0_um=28.0)
    return PuritySetting(model=model, collection=collection, quad=quad)


def _check_4g_purity():
    # the four-Gaussian amplitude is separable in (space, spectrum), so
    # the reduced spatial state is rank one at any quadrature order
    result = purity(_default_setting())
    err = abs(result.purity - 1.0)
    return err < 1.0e-9, f"|P - 1| = {err:.3e}"


def _check_gram_symmetry():
    m = spectral_gram(_default_setting())
    scale = float(np.max(np.abs(m)))
    err = float(np.max(np.abs(m - m.T))) / scale
    return err < 1.0e-12, f"relative asymmetry {err:.3e}"


def _check_config_hash():
    hashes = set()
    for _ in range(2):
        cfg = load_config("selftest", None)
        hashes.add(resolved_config_hash(cfg))
    ok = len(hashes) == 1 and all(len(h) == 12 for h in hashes)
    return ok, f"hashes {sorted(hashes)}"


_CHECKS = (
    ("gauss-legendre-exactness", _check_gauss_legendre),
    ("gauss-hermite-exactness", _check_gauss_hermite),
    ("sinc-taylor-crossover", _check_sinc),
    ("lg-mode-normalization", _check_lg_norm),
    ("four-gaussian-rank-one-purity", _check_4g_purity),
    ("spectral-gram-symmetry", _check_gram_symmetry),
    ("config-hash-determinism", _check_config_hash),
)


def run_selftest():
    """Run all checks; returns a list of (name, passed, detail)."""
    results = []
    for name, check in _CHECKS:
        try:
            ok, detail = check()
        except Exception as exc:  # a crash is a failure, not an abort
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        results.append((name, bool(ok), detail))
    return results
