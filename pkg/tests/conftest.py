"""Shared fixtures: the two reference crystals used across the suite.

bbo_crystal is the built-in type-II preset (explicit group-velocity
divisors and GVDs); liio3_crystal is a type-I set entered by hand.  Both
pumps are 400 nm; detunings are relative to 800 nm degeneracy.
"""

import pytest

from spdcsim import CrystalSpec, PumpSpec, SpdcType, crystal_preset


@pytest.fixture()
def bbo_pump() -> PumpSpec:
    return PumpSpec(lambda_p_um=0.4, w_p_um=28.0, tau_fs=50.0)


@pytest.fixture()
def bbo_crystal() -> CrystalSpec:
    return crystal_preset("BBO-Fig5")


@pytest.fixture()
def liio3_crystal() -> CrystalSpec:
    # type-I parameter set: identical signal/idler dispersion
    return CrystalSpec(
        spdc_type=SpdcType.TYPE_I,
        L_mm=0.5,
        v_g_p=2.00,
        v_g_s=1.90,
        v_g_i=1.90,
        gvd_p_fs2_mm=250.0,
        gvd_s_fs2_mm=80.0,
        gvd_i_fs2_mm=80.0,
        n_p=1.9,
    )
