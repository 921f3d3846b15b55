import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tipemission.errors import BarrierSuppressedError, DomainError
from tipemission.physcore import photon_energy
from tipemission.tip import (
    TipConfig,
    assess_keldysh,
    dc_field,
    effective_workfunction,
    keldysh,
    min_photon_number,
    schottky_lowering,
)


@pytest.mark.parametrize("volts,expected", [(-50, 0.25e9), (-300, 1.5e9), (-450, 2.25e9)])
def test_dc_field_caption_values(volts, expected):
    assert dc_field(TipConfig(radius=40e-9, geometry_factor=5, voltage=volts)) == pytest.approx(expected, rel=1e-15)


def test_tip_defaults():
    cfg = TipConfig()
    assert cfg.geometry_factor == 5.0
    assert cfg.workfunction == 4.5
    assert cfg.enhancement == 1.0


@pytest.mark.parametrize(
    "kw", [dict(workfunction=0), dict(radius=-1e-9), dict(geometry_factor=0), dict(enhancement=0.5)]
)
def test_tip_invariants(kw):
    with pytest.raises(DomainError):
        TipConfig(**kw)


@given(st.floats(-1e4, 1e4), st.floats(1e-9, 1e-6), st.floats(0.5, 20))
def test_dc_field_linear_and_inverse(v, r, k):
    cfg = TipConfig(radius=r, geometry_factor=k, voltage=v)
    assert dc_field(cfg) == pytest.approx(abs(v) / (k * r), rel=1e-14)
    assert dc_field(TipConfig(radius=r, geometry_factor=k, voltage=2 * v)) == pytest.approx(2 * dc_field(cfg), rel=1e-14)


def test_schottky_working_form():
    for f in (0.25e9, 1.5e9, 2.25e9):
        assert schottky_lowering(f) == pytest.approx(math.sqrt(1.43996 * f * 1e-9), rel=1e-5)


def test_effective_workfunction_values():
    assert effective_workfunction(4.5, 0.0) == 4.5
    assert effective_workfunction(4.5, 0.25e9) == pytest.approx(3.90, abs=5e-3)
    assert effective_workfunction(4.5, 2.25e9) == pytest.approx(2.70, abs=5e-3)


def test_barrier_fully_suppressed():
    with pytest.raises(BarrierSuppressedError, match="barrier fully suppressed"):
        effective_workfunction(1.0, 1e9)


@given(st.floats(0, 5e9), st.floats(1e6, 1e9))
def test_effective_workfunction_strictly_decreasing(f, df):
    assert effective_workfunction(6.0, f + df) < effective_workfunction(6.0, f)


def test_min_photon_number_examples():
    assert min_photon_number(3.90, 1.531) == 3
    assert min_photon_number(6.0, 1.531) == 4
    assert min_photon_number(3.062, 1.531) == 3


@given(st.floats(0.01, 20), st.floats(0.1, 5))
def test_min_photon_number_definition(phi, photon):
    n = min_photon_number(phi, photon)
    assert n * photon > phi
    assert (n - 1) * photon <= phi


@given(st.floats(0, 2.5e9), st.floats(1e6, 1e9))
def test_min_photon_number_non_increasing_with_field(f, df):
    photon = photon_energy(810e-9)
    n1 = min_photon_number(effective_workfunction(4.5, f), photon)
    n2 = min_photon_number(effective_workfunction(4.5, f + df), photon)
    assert n2 <= n1


def test_photon_order_drops_from_3_to_2():
    photon = photon_energy(810e-9)
    low = min_photon_number(effective_workfunction(4.5, dc_field(TipConfig(voltage=-50))), photon)
    high = min_photon_number(effective_workfunction(4.5, dc_field(TipConfig(voltage=-450))), photon)
    assert (low, high) == (3, 2)


def test_keldysh_values():
    assert keldysh(4.5, 810e-9, 0.6e9) == pytest.approx(27.7, abs=0.05)
    assert keldysh(2.70, 810e-9, 0.6e9) == pytest.approx(21.5, abs=0.05)


@given(st.floats(0.5, 10), st.floats(1e7, 1e11), st.floats(1.01, 100))
def test_keldysh_inverse_in_field(phi, f, s):
    assert keldysh(phi, 810e-9, s * f) == pytest.approx(keldysh(phi, 810e-9, f) / s, rel=1e-12)


@given(st.floats(0, 2e9), st.floats(1e7, 5e8))
def test_keldysh_decreases_with_dc_field(f, df):
    g1 = keldysh(effective_workfunction(4.5, f), 810e-9, 6e8)
    g2 = keldysh(effective_workfunction(4.5, f + df), 810e-9, 6e8)
    assert g2 < g1


def test_keldysh_rejects_zero_field():
    with pytest.raises(DomainError):
        keldysh(4.5, 810e-9, 0.0)


def test_keldysh_assessment_reports_discrepancy():
    rep = assess_keldysh(TipConfig(voltage=-450), 810e-9, 0.6e9)
    assert 20 < rep.gamma < 28
    assert rep.gamma_enhanced == rep.gamma
    assert any("discrepancy" in n for n in rep.notes)
    lo, hi = rep.implied_enhancement
    assert 3.0 <= rep.gamma / hi <= rep.gamma / lo <= 4.0 + 1e-12


def test_keldysh_assessment_with_enhancement():
    rep = assess_keldysh(TipConfig(voltage=-450, enhancement=6.0), 810e-9, 0.6e9)
    assert rep.gamma_enhanced == pytest.approx(rep.gamma / 6.0, rel=1e-12)
    assert 3 <= rep.gamma_enhanced <= 4


def test_keldysh_assessment_silent_inside_range():
    rep = assess_keldysh(TipConfig(voltage=0), 810e-9, 0.6e9 * 27.7 / 3.5)
    assert 3 <= rep.gamma <= 4
    assert rep.notes == ()
