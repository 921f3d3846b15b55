"""
Acceptance criteria, one test per criterion.

Each test prints a single ``criterion N PASS|FAIL`` line; the lines are also
collected into an "acceptance criteria" section at the end of the pytest run.
"""

import math
import time

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from tipemission.analysis import fit_fn_radius, fit_power_sum, fit_single_power
from tipemission.config import load_config
from tipemission.emission import DEFAULT_C0
from tipemission.physcore import CONSTANTS, angular_frequency
from tipemission.pulse import BeamCalibration, LaserPulseSpec, PulsePair, peak_field_from_power
from tipemission.scans import (
    IntegrationParams,
    ScanSpec,
    delay_scan,
    integrate_yield,
    polarization_scan,
    run_scan,
    voltage_scan,
)
from tipemission.tip import TipConfig, assess_keldysh, dc_field, effective_workfunction, keldysh

from conftest import CONFIGS, WAVELENGTH, oracle_order_n_yield, pure_model, record_criterion


def _load(name):
    return load_config(CONFIGS / name).spec


def test_criterion_01_field_calibration():
    f = peak_field_from_power(BeamCalibration(40e-3, 75e6, 4e-6), 50e-15)
    record_criterion(1, "field calibration", 0.54e9 <= f <= 0.66e9, f"F0 = {f / 1e9:.4f} GV/m, window [0.54, 0.66]")


def test_criterion_02_dc_field_table():
    got = [dc_field(TipConfig(radius=40e-9, geometry_factor=5, voltage=v)) for v in (-50, -300, -450)]
    ok = got == [0.25e9, 1.5e9, 2.25e9]
    record_criterion(2, "DC field table", ok, "F_DC = " + ", ".join(f"{g:.17g}" for g in got) + " V/m")


def test_criterion_03_additivity():
    pulse = LaserPulseSpec(6e8, WAVELENGTH, 50e-15)
    grid = np.linspace(120e-15, 400e-15, 1121)  # 0.25 fs steps, ~11 samples per optical cycle
    start = time.perf_counter()
    worst = {}
    for n in (2, 3, 4):
        model = pure_model(n)
        single = integrate_yield(PulsePair.single(pulse), model)
        tr = delay_scan(ScanSpec("delay", grid, PulsePair(pulse, pulse), model))
        dev = np.abs(tr.yields - 2 * single) / single
        i = int(np.argmax(dev))
        worst[n] = (dev[i], grid[i])
    elapsed = time.perf_counter() - start
    ok = all(d < 0.01 for d, _ in worst.values()) and elapsed < 10
    detail = "; ".join(f"n={n} max {d:.2%} at {t * 1e15:.2f} fs" for n, (d, t) in worst.items())
    record_criterion(3, "pump-probe additivity for tau >= 120 fs", ok, f"{detail}; {elapsed:.1f} s")


def test_criterion_04_interferometric_contrast():
    start = time.perf_counter()
    parts, ok = [], True
    spec = _load("fig3_delay_scan.json")
    pulse = spec.pair.pump
    for n in (2, 3, 4):
        model = pure_model(n)
        tr = delay_scan(spec.replace(model=model, grid=np.array([0.0, 600e-15]), noise_seed=None))
        contrast = tr.yields[0] / tr.yields[1]
        ref = [oracle_order_n_yield(PulsePair(pulse, pulse, tau), n) for tau in (0.0, 600e-15)]
        oracle_contrast = ref[0] / ref[1]
        target = 2 ** (2 * n - 1)
        ok &= abs(contrast / target - 1) < 0.02 and abs(contrast / oracle_contrast - 1) < 0.02
        parts.append(f"n={n} {contrast:.4f} (oracle {oracle_contrast:.4f}, target {target})")
    elapsed = time.perf_counter() - start
    ok &= elapsed < 30
    record_criterion(4, "interferometric contrast", ok, "; ".join(parts) + f"; {elapsed:.1f} s")


def test_criterion_05_closed_form_yield():
    pulse = LaserPulseSpec(6e8, WAVELENGTH, 50e-15)
    c4 = 3.0
    exact = c4 * pulse.peak_field**8 * math.sqrt(math.pi / (8 * pulse.envelope_param)) * 70 / 256
    model = pure_model(4, c4)
    err = {}
    for spc in (64, 128):
        y = integrate_yield(PulsePair.single(pulse), model, IntegrationParams(spc))
        err[spc] = abs(y / exact - 1)
    # the trapezoid rule is spectrally accurate here, so both errors sit at
    # double-precision roundoff; halving is judged against that floor
    floor = 1e-12
    ok = err[64] < 5e-3 and err[128] <= max(err[64] / 2, floor)
    record_criterion(
        5, "closed-form n=4 yield", ok, f"rel. error {err[64]:.2e} at 64/cycle, {err[128]:.2e} at 128/cycle"
    )


def test_criterion_06_power_law_slopes():
    pure = run_scan(_load("fig4a_power_m50v.json"))
    slope = np.diff(np.log(pure.yields)) / np.diff(np.log(pure.values))
    plateau = run_scan(_load("fig4a_power_m450v.json"))
    local = np.diff(np.log(plateau.yields)) / np.diff(np.log(plateau.values))
    ok = np.all(np.abs(slope - 4) <= 0.01) and local[0] < 0.1
    record_criterion(
        6,
        "power-law slopes",
        ok,
        f"pure n=4 slope {slope.min():.5f}..{slope.max():.5f}; with n=0 channel lowest local slope {local[0]:.3f}",
    )


def test_criterion_07_decomposition_round_trip():
    grid = np.linspace(5e-3, 40e-3, 30)
    x = grid / np.median(grid)
    vander = np.vander(x, 6, increasing=True)

    truth = np.array([0.0, 0.0, 1.0, 2.0, 3.0, 0.0])
    fit = fit_power_sum(grid, vander @ truth)
    noiseless_err = np.max(np.abs(fit.normalized_coefficients - truth)) / truth.max()

    # scale so the smallest expected count on the grid is 1e4
    scaled = truth * 1e4 / (vander @ truth).min()
    mean = vander @ scaled
    hits = 0
    for trial in range(200):
        counts = np.random.default_rng([7, trial]).poisson(mean).astype(float)
        f = fit_power_sum(grid, counts)
        hits += bool(np.all(np.abs(f.normalized_coefficients - scaled) <= 3 * f.standard_errors))
    ok = noiseless_err < 1e-6 and hits >= 190
    record_criterion(
        7, "power-sum decomposition", ok, f"noiseless max rel. error {noiseless_err:.1e}; noisy coverage {hits}/200"
    )


ADJACENT = st.integers(0, 4).map(lambda m: (m, m + 1))
ANY_PAIR = st.tuples(st.integers(0, 5), st.integers(0, 5)).filter(lambda p: p[0] < p[1])


def _two_order_exponent(orders, log_ratio, lo):
    m, n = orders
    i = np.geomspace(lo, 10 * lo, 20)
    # balance the two terms at the grid's geometric centre, then tilt by log_ratio
    centre = math.sqrt(10) * lo
    cm, cn = 1.0, 10.0**log_ratio * centre ** (m - n)
    return fit_single_power(i, cm * i**m + cn * i**n).exponent


def test_criterion_08_non_integer_single_powers():
    failures = []

    @settings(max_examples=150, deadline=None, database=None)
    @given(ANY_PAIR, st.floats(-2.0, 2.0), st.floats(1e-3, 10.0))
    def inside(orders, log_ratio, lo):
        e = _two_order_exponent(orders, log_ratio, lo)
        if not orders[0] < e < orders[1]:
            failures.append((orders, log_ratio, lo, e))

    @settings(max_examples=150, deadline=None, database=None)
    @given(ADJACENT, st.floats(-2.0, 2.0), st.floats(1e-3, 10.0))
    def non_integer(orders, log_ratio, lo):
        e = _two_order_exponent(orders, log_ratio, lo)
        if abs(e - round(e)) < 1e-3:
            failures.append((orders, log_ratio, lo, e))

    inside()
    non_integer()
    i = np.geomspace(0.1, 1.0, 50)
    example = fit_single_power(i, i**3 + 10 * i**4).exponent
    ok = not failures and 3 < example < 4
    detail = f"c3=1, c4=10 exponent {example:.5f}; counterexamples {failures[:1] if failures else 'none'}"
    record_criterion(8, "non-integer single powers", ok, detail)


def test_criterion_09_fn_radius_round_trip():
    spec = _load("fn_iv_voltage_scan.json")
    tr = voltage_scan(spec)
    fit = fit_fn_radius(tr.values, tr.yields, phi=4.5, k=5.0, c0=DEFAULT_C0)
    err = abs(fit.radius / 40e-9 - 1)
    record_criterion(9, "FN radius round trip", err < 1e-3, f"radius {fit.radius * 1e9:.6f} nm, rel. error {err:.1e}")


def test_criterion_10_polarization_law():
    spec = _load("fig5a_polarization.json")
    worst, zeros_ok = 0.0, True
    for n in (1, 2, 3, 4, 5):
        tr = polarization_scan(spec.replace(model=pure_model(n), noise_seed=None))
        expected = np.cos(tr.values) ** (2 * n)
        perpendicular = np.isclose(np.abs(np.cos(tr.values)), 0.0, atol=1e-12)
        zeros_ok &= bool(np.all(tr.yields[perpendicular] == 0.0)) and perpendicular.any()
        live = ~perpendicular
        worst = max(worst, float(np.max(np.abs(tr.yields[live] / tr.yields[0] / expected[live] - 1))))
    ok = worst <= 1e-9 and zeros_ok
    record_criterion(10, "polarization law", ok, f"max rel. deviation {worst:.1e}; zeros at 90/270 deg: {zeros_ok}")


def test_criterion_11_keldysh_discrepancy():
    c = CONSTANTS
    tip = TipConfig(voltage=-450)
    f_laser = peak_field_from_power(BeamCalibration(40e-3, 75e6, 4e-6), 50e-15)
    report = assess_keldysh(tip, WAVELENGTH, f_laser)
    phi_eff = effective_workfunction(4.5, dc_field(tip))
    direct = angular_frequency(WAVELENGTH) * math.sqrt(2 * c.electron_mass * phi_eff * c.electronvolt) / (
        c.elementary_charge * f_laser
    )
    faithful = math.isclose(report.gamma, direct, rel_tol=1e-12)

    bad = []

    @settings(max_examples=100, deadline=None, database=None)
    @given(st.floats(1e7, 1e10), st.floats(0.01, 100.0), st.floats(1.0, 6.0))
    def inverse(f, s, phi):
        if not math.isclose(keldysh(phi, WAVELENGTH, s * f), keldysh(phi, WAVELENGTH, f) / s, rel_tol=1e-12):
            bad.append((f, s, phi))

    inverse()
    noted = any(n.startswith("Keldysh discrepancy") for n in report.notes)
    ok = faithful and not bad and noted and 15 < report.gamma < 30
    record_criterion(
        11,
        "Keldysh discrepancy documented",
        ok,
        f"gamma {report.gamma:.2f} at {f_laser / 1e9:.3f} GV/m, -450 V; note emitted: {noted}",
    )
