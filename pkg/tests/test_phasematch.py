"""Phase-mismatch kernels against hand-evaluated values."""

import math

import numpy as np
import pytest

from spdcsim import (
    DomainError,
    SpdcType,
    SpectralPoint,
    TransversePoint,
    ValidationError,
    delta_kz,
    derive_params,
    gaussian_spatial_substitute,
    pmf_double_sinc,
    pmf_sinc,
    sinc,
    spatial_mismatch,
    spectral_mismatch,
)
from spdcsim.phasematch import (
    check_point_guards,
    diff_sq,
    spectral_mismatch_quadratic,
    sum_sq,
)

C = 0.299792458


class TestSinc:
    def test_endpoints(self):
        assert sinc(0.0) == 1.0
        assert sinc(math.pi) == pytest.approx(0.0, abs=1e-15)
        assert sinc(math.pi / 2.0) == pytest.approx(2.0 / math.pi, rel=1e-14)

    def test_matches_reference_across_series_crossover(self):
        xs = np.array([1e-9, 1e-6, 9.9e-5, 1.01e-4, 1e-3, 0.1, 1.0, 10.0, -3.7])
        assert np.max(np.abs(sinc(xs) - np.sinc(xs / math.pi))) < 1e-13

    def test_even_function(self):
        xs = np.linspace(0.0, 20.0, 101)
        assert np.array_equal(sinc(xs), sinc(-xs))

    def test_scalar_in_scalar_out(self):
        assert isinstance(sinc(0.3), float)


class TestQuadraticForms:
    def test_diff_and_sum_sq(self):
        # q_s = (0.3, -0.1), q_i = (-0.2, 0.4)
        assert diff_sq(0.3, -0.1, -0.2, 0.4) == pytest.approx(0.5**2 + 0.5**2, rel=1e-15)
        assert sum_sq(0.3, -0.1, -0.2, 0.4) == pytest.approx(0.1**2 + 0.3**2, rel=1e-15)

    def test_spatial_mismatch_value(self, bbo_pump, liio3_crystal):
        d = derive_params(bbo_pump, liio3_crystal)
        # -|dq|^2 / (2 k_p) with k_p = 2 pi 1.9 / 0.4
        assert spatial_mismatch(0.01, d) == pytest.approx(-0.01 / (2.0 * 29.84513021), rel=1e-9)


class TestSpectralMismatch:
    def test_type1_pure_quadratic_point(self, bbo_pump, liio3_crystal):
        # Omega_s = -Omega_i: group-velocity term vanishes, leaving
        # (GVD_s/4)(Omega_s - Omega_i)^2 = 0.02 fs^2/um * (0.02 rad/fs)^2
        d = derive_params(bbo_pump, liio3_crystal)
        got = spectral_mismatch(0.01, -0.01, d, SpdcType.TYPE_I)
        assert got == pytest.approx((0.08 / 4.0) * 0.02**2, rel=1e-13)

    def test_type1_pure_linear_point(self, bbo_pump, liio3_crystal):
        # Omega_s = Omega_i = 0.01: quadratic term vanishes, leaving
        # -(1/v_gp - 1/v_gs)(Omega_s + Omega_i) = -(2.00-1.90)/c * 0.02
        d = derive_params(bbo_pump, liio3_crystal)
        got = spectral_mismatch(0.01, 0.01, d, SpdcType.TYPE_I)
        assert got == pytest.approx(-(2.00 - 1.90) / C * 0.02, rel=1e-13)

    def test_type2_quadratic_value(self, bbo_pump, bbo_crystal):
        # (sqrt(g_s) Om_s - sqrt(g_i) Om_i)^2 / 2 at Om_s = -Om_i = 0.01,
        # g_s = 0.0617, g_i = 0.0751 fs^2/um
        d = derive_params(bbo_pump, bbo_crystal)
        got = spectral_mismatch_quadratic(0.01, -0.01, d, SpdcType.TYPE_II)
        expect = (math.sqrt(0.0617) * 0.01 + math.sqrt(0.0751) * 0.01) ** 2 / 2.0
        assert got == pytest.approx(expect, rel=1e-12)
        assert got == pytest.approx(1.3647e-5, rel=1e-4)

    def test_type2_linear_value(self, bbo_pump, bbo_crystal):
        # Om_s = -Om_i = 0.01 kills the pump term; signal/idler walk-off:
        # 0.01 (1.626 - 1.684)/c
        d = derive_params(bbo_pump, bbo_crystal)
        full = spectral_mismatch(0.01, -0.01, d, SpdcType.TYPE_II)
        quad = spectral_mismatch_quadratic(0.01, -0.01, d, SpdcType.TYPE_II)
        assert full - quad == pytest.approx(0.01 * (1.626 - 1.684) / C, rel=1e-10)
        assert full - quad == pytest.approx(-1.93467e-3, rel=1e-4)

    def test_type2_swap_symmetry(self, bbo_pump, bbo_crystal):
        # swapping signal and idler dispersion mirrors the mismatch in
        # (Omega_s, Omega_i)
        from dataclasses import replace

        d = derive_params(bbo_pump, bbo_crystal)
        swapped_crystal = replace(
            bbo_crystal,
            v_g_s=bbo_crystal.v_g_i,
            v_g_i=bbo_crystal.v_g_s,
            gvd_s_fs2_mm=bbo_crystal.gvd_i_fs2_mm,
            gvd_i_fs2_mm=bbo_crystal.gvd_s_fs2_mm,
        )
        d_sw = derive_params(bbo_pump, swapped_crystal)
        for om_s, om_i in ((0.013, -0.005), (0.0, 0.02), (-0.01, -0.01)):
            a = spectral_mismatch(om_s, om_i, d, SpdcType.TYPE_II)
            b = spectral_mismatch(om_i, om_s, d_sw, SpdcType.TYPE_II)
            assert a == pytest.approx(b, rel=1e-13)

    def test_type2_reduces_to_type1_quadratic_up_to_width_factor(self, bbo_pump, liio3_crystal):
        # equal GVDs: type-II quadratic term is g (Om_s - Om_i)^2 / 2,
        # twice the type-I (g/4)(Om_s - Om_i)^2 (the sqrt(GVD) weighting
        # does not collapse onto type-I even for identical photons)
        d = derive_params(bbo_pump, liio3_crystal)
        q1 = spectral_mismatch_quadratic(0.012, -0.004, d, SpdcType.TYPE_I)
        q2 = spectral_mismatch_quadratic(0.012, -0.004, d, SpdcType.TYPE_II)
        assert q2 == pytest.approx(2.0 * q1, rel=1e-12)


class TestDeltaKz:
    def test_collinear_degenerate_is_matched(self, bbo_pump, liio3_crystal):
        d = derive_params(bbo_pump, liio3_crystal)
        q0 = TransversePoint(0.0, 0.0)
        w0 = SpectralPoint(0.0, 0.0)
        assert delta_kz(q0, q0, w0, d, SpdcType.TYPE_I) == 0.0

    def test_spatial_plus_spectral_additivity(self, bbo_pump, liio3_crystal):
        d = derive_params(bbo_pump, liio3_crystal)
        qs = TransversePoint(0.02, 0.0)
        qi = TransversePoint(-0.01, 0.005)
        w = SpectralPoint(0.003, -0.001)
        got = delta_kz(qs, qi, w, d, SpdcType.TYPE_I)
        expect = spatial_mismatch(diff_sq(0.02, 0.0, -0.01, 0.005), d) + spectral_mismatch(
            0.003, -0.001, d, SpdcType.TYPE_I
        )
        assert got == pytest.approx(float(expect), rel=1e-14)

    def test_paraxial_guard(self, bbo_pump, liio3_crystal):
        d = derive_params(bbo_pump, liio3_crystal)
        with pytest.raises(DomainError):
            delta_kz(TransversePoint(0.6, 0.0), TransversePoint(0.0, 0.0), SpectralPoint(0.0, 0.0), d, SpdcType.TYPE_I)

    def test_narrowband_guard(self, bbo_pump, liio3_crystal):
        d = derive_params(bbo_pump, liio3_crystal)
        q0 = TransversePoint(0.0, 0.0)
        with pytest.raises(DomainError):
            delta_kz(q0, q0, SpectralPoint(0.25 * d.omega_0, 0.0), d, SpdcType.TYPE_I)
        # just inside the window passes
        check_point_guards(q0, q0, SpectralPoint(0.19 * d.omega_0, 0.0), d)


class TestPmfFactors:
    def test_pmf_sinc_first_zero(self, bbo_pump, liio3_crystal):
        d = derive_params(bbo_pump, liio3_crystal)
        dkz = 2.0 * math.pi / d.L_um
        assert pmf_sinc(dkz, d.L_um) == pytest.approx(0.0, abs=1e-15)
        assert pmf_sinc(0.0, d.L_um) == 1.0

    def test_double_sinc_spatial_zero(self, bbo_pump, liio3_crystal):
        # spatial factor sinc(L |dq|^2 / (4 k_p)) vanishes at
        # |dq|^2 = 4 pi k_p / L
        d = derive_params(bbo_pump, liio3_crystal)
        dq = math.sqrt(4.0 * math.pi * d.k_p / d.L_um)
        qs = TransversePoint(dq / 2.0, 0.0)
        qi = TransversePoint(-dq / 2.0, 0.0)
        w = SpectralPoint(0.0, 0.0)
        got = pmf_double_sinc(qs, qi, w, d, d.L_um, SpdcType.TYPE_I)
        assert got == pytest.approx(0.0, abs=1e-14)

    def test_double_sinc_factorizes(self, bbo_pump, liio3_crystal):
        # at q = 0 the spatial factor is 1 and only the spectral sinc is left
        d = derive_params(bbo_pump, liio3_crystal)
        q0 = TransversePoint(0.0, 0.0)
        w = SpectralPoint(0.008, -0.003)
        got = pmf_double_sinc(q0, q0, w, d, d.L_um, SpdcType.TYPE_I)
        expect = sinc(d.L_um / 2.0 * spectral_mismatch(0.008, -0.003, d, SpdcType.TYPE_I))
        assert got == pytest.approx(float(expect), rel=1e-14)

    def test_gaussian_substitute_reference_value(self, bbo_pump, liio3_crystal):
        # exp(-A L q^2 / (4 k_p)) with A = 8/3; at L q^2/(4 k_p) = pi the
        # value is exp(-8 pi / 3) = 2.29969e-4
        d = derive_params(bbo_pump, liio3_crystal)
        q_rel_sq = 4.0 * math.pi * d.k_p / d.L_um
        got = gaussian_spatial_substitute(q_rel_sq, d, d.L_um)
        assert got == pytest.approx(math.exp(-8.0 * math.pi / 3.0), rel=1e-13)
        assert got == pytest.approx(2.29966e-4, rel=1e-5)

    def test_gaussian_substitute_at_zero(self, bbo_pump, liio3_crystal):
        d = derive_params(bbo_pump, liio3_crystal)
        assert gaussian_spatial_substitute(0.0, d, d.L_um) == 1.0

    def test_bad_length_rejected(self, bbo_pump, liio3_crystal):
        d = derive_params(bbo_pump, liio3_crystal)
        with pytest.raises(ValidationError):
            pmf_sinc(0.1, 0.0)
        with pytest.raises(ValidationError):
            gaussian_spatial_substitute(0.1, d, -5.0)


def test_gaussian_substitute_consistent_with_sigma_q(bbo_pump, liio3_crystal):
    # sigma_q^2 = A L/(16 k_p): evaluating the substitute at the squared
    # half-difference (|q_s - q_i|/2)^2 reproduces the four-Gaussian
    # momentum-correlation factor exp(-sigma_q^2 |q_s - q_i|^2)
    d = derive_params(bbo_pump, liio3_crystal)
    assert d.sigma_q**2 == pytest.approx((8.0 / 3.0) * d.L_um / (16.0 * d.k_p), rel=1e-14)
    for dq_sq in (1e-4, 4e-3, 0.02):
        sub = gaussian_spatial_substitute(dq_sq / 4.0, d, d.L_um)
        assert sub == pytest.approx(math.exp(-d.sigma_q**2 * dq_sq), rel=1e-13)


class TestSymmetries:
    def test_type1_exchange_symmetry(self, bbo_pump, liio3_crystal):
        d = derive_params(bbo_pump, liio3_crystal)
        qs = TransversePoint(0.03, -0.01)
        qi = TransversePoint(-0.02, 0.04)
        w = SpectralPoint(0.006, -0.002)
        w_swap = SpectralPoint(-0.002, 0.006)
        a = delta_kz(qs, qi, w, d, SpdcType.TYPE_I)
        b = delta_kz(qi, qs, w_swap, d, SpdcType.TYPE_I)
        assert a == pytest.approx(b, rel=1e-14)
        a2 = pmf_double_sinc(qs, qi, w, d, d.L_um, SpdcType.TYPE_I)
        b2 = pmf_double_sinc(qi, qs, w_swap, d, d.L_um, SpdcType.TYPE_I)
        assert a2 == pytest.approx(b2, rel=1e-14)

    def test_rotational_invariance(self, bbo_pump, bbo_crystal):
        # rotating both momenta by a common angle leaves delta_kz unchanged
        d = derive_params(bbo_pump, bbo_crystal)
        w = SpectralPoint(0.004, 0.001)
        rng = np.random.default_rng(7)
        base_s = np.array([0.05, -0.02])
        base_i = np.array([-0.03, 0.03])
        ref = delta_kz(TransversePoint(*base_s), TransversePoint(*base_i), w, d, SpdcType.TYPE_II)
        for theta in rng.uniform(0.0, 2.0 * math.pi, size=8):
            rot = np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])
            qs = TransversePoint(*(rot @ base_s))
            qi = TransversePoint(*(rot @ base_i))
            got = delta_kz(qs, qi, w, d, SpdcType.TYPE_II)
            assert got == pytest.approx(ref, rel=1e-12)

    def test_pmf_even_in_mismatch(self, bbo_pump, liio3_crystal):
        d = derive_params(bbo_pump, liio3_crystal)
        for dkz in (1e-4, 3e-3, 0.02):
            assert pmf_sinc(dkz, d.L_um) == pytest.approx(pmf_sinc(-dkz, d.L_um), rel=1e-15)
