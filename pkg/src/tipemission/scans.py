"""
Time-integrated yields and the four experimental sweeps.

The yield of one laser shot is the time integral of the instantaneous emission
rate under the carrier-resolved two-pulse field, evaluated on a fixed grid of
step ``T_optical / samples_per_optical_cycle`` with the composite trapezoid
rule. Time-independent (dark) emission is counted over a fixed gate of
``2 * window_halfwidth * FWHM`` so that backgrounds do not drift with delay.
"""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .emission import EmissionModel, dark_rate
from .errors import DomainError
from .physcore import optical_period
from .pulse import BeamCalibration, PulsePair, peak_field_from_power
from .tip import dc_field, effective_workfunction, min_photon_number

__all__ = [
    "AXES",
    "THREADS_ENV",
    "IntegrationParams",
    "ScanSpec",
    "Trace",
    "integrate_yield",
    "integrate_pair",
    "delay_scan",
    "power_scan",
    "polarization_scan",
    "voltage_scan",
    "run_scan",
    "poissonize",
    "poisson_sample",
    "rethreshold",
    "fold_angle",
]

AXES = ("delay", "power", "polarization", "voltage")

#: Environment variable overriding the number of worker threads used by scans.
THREADS_ENV = "TIPEMISSION_THREADS"


@dataclass(frozen=True)
class IntegrationParams:
    samples_per_optical_cycle: int = 64
    window_halfwidth: float = 6.0  # in units of the envelope FWHM

    def __post_init__(self):
        if int(self.samples_per_optical_cycle) != self.samples_per_optical_cycle or self.samples_per_optical_cycle < 16:
            raise DomainError(
                f"samples_per_optical_cycle must be an integer >= 16, got {self.samples_per_optical_cycle!r}"
            )
        if not self.window_halfwidth >= 4.0:
            raise DomainError(f"window_halfwidth must be >= 4, got {self.window_halfwidth!r}")


def _kernel_args(pair: PulsePair, model: EmissionModel, params: IntegrationParams):
    pump, probe = pair.pump, pair.probe
    fwhm = max(pump.fwhm_duration, probe.fwhm_duration)
    half = params.window_halfwidth * fwhm
    lo = min(0.0, pair.delay) - half
    hi = max(0.0, pair.delay) + half
    dt = optical_period(pair.wavelength) / params.samples_per_optical_cycle
    nsamples = int(math.ceil((hi - lo) / dt)) + 1
    cos_t = model.cos_theta
    return (
        dict(
            f1=pump.peak_field, a1=pump.envelope_param, b1=pump.chirp,
            f2=probe.peak_field, a2=probe.envelope_param, b2=probe.chirp,
            omega=pair.omega, delay=pair.delay,
            t0=lo, dt=dt, nsamples=nsamples,
            mp_orders=np.array([c.order for c in model.multiphoton], dtype=np.int64),
            mp_coeffs=np.array([c.coefficient for c in model.multiphoton], dtype=float),
            cos_theta=cos_t,
            fn_orders=np.array([c.photons_absorbed for c in model.tunneling], dtype=np.int64),
            fn_weights=np.array([c.weight for c in model.tunneling], dtype=float),
            fn_barriers=np.array([model.barrier(c) for c in model.tunneling], dtype=float),
            fn_exponents=np.array(
                [c.c0_constant * model.barrier(c) ** 1.5 for c in model.tunneling], dtype=float
            ),
            f_dc=model.f_dc,
            ell_cos=model.tip.enhancement * cos_t,
            inv_ref_sq=1.0 / model.reference_field**2,
        ),
        2.0 * half,
    )


def integrate_pair(pair, model, params=IntegrationParams(), want_ac=False, kernel=None):
    """
    Integrate the emission rate and, optionally, the fourth power of the field.

    Returns
    -------
    tuple of float
        ``(yield, laser_ac)``; ``laser_ac`` is ``int E(t)^4 dt`` or 0.0 when
        ``want_ac`` is false.
    """
    args, gate = _kernel_args(pair, model, params)
    dark = dark_rate(model)
    kernel = kernel or kernels.integrate_pair
    excess, ac = kernel(dark=dark, want_ac=want_ac, **args)
    return excess + dark * gate, ac


def integrate_yield(pair: PulsePair, model: EmissionModel, params: IntegrationParams = IntegrationParams()) -> float:
    """Electron yield (arbitrary units) from one pump-probe shot."""
    return integrate_pair(pair, model, params)[0]


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise DomainError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    return os.cpu_count() or 1


def _map(fn, items):
    items = list(items)
    n = min(_threads(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))


@dataclass
class Trace:
    """Scan output: one row per grid point."""

    axis: str
    values: np.ndarray
    yields: np.ndarray
    counts: Optional[np.ndarray] = None
    laser_ac: Optional[np.ndarray] = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        self.yields = np.asarray(self.yields, dtype=float)
        n = self.values.shape[0]
        if self.yields.shape != (n,):
            raise DomainError("trace columns must have equal length")
        if np.any(self.yields < 0.0):
            raise DomainError("trace yields must be non-negative")
        if self.counts is not None:
            self.counts = np.asarray(self.counts, dtype=np.int64)
            if self.counts.shape != (n,) or np.any(self.counts < 0):
                raise DomainError("counts must be non-negative and match the axis length")
        if self.laser_ac is not None:
            self.laser_ac = np.asarray(self.laser_ac, dtype=float)
            if self.laser_ac.shape != (n,):
                raise DomainError("laser_ac must match the axis length")

    def __len__(self):
        return self.values.shape[0]

    def to_csv(self, path=None) -> str:
        """Serialize as CSV (``axis,yield[,counts][,laser_ac]``); write to ``path`` if given."""
        header = ["axis", "yield"]
        cols = [self.values, self.yields]
        if self.counts is not None:
            header.append("counts")
            cols.append(self.counts)
        if self.laser_ac is not None:
            header.append("laser_ac")
            cols.append(self.laser_ac)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for i in range(len(self)):
            row = []
            for name, col in zip(header, cols):
                row.append(str(int(col[i])) if name == "counts" else format(float(col[i]), ".12g"))
            w.writerow(row)
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text, encoding="utf-8")
        return text

    @classmethod
    def from_csv(cls, source, axis: str = "unknown") -> "Trace":
        """Read a trace CSV from a path or from text containing a header line."""
        if isinstance(source, (str, Path)) and not str(source).lstrip().startswith("axis"):
            text = Path(source).read_text(encoding="utf-8")
        else:
            text = str(source)
        rows = list(csv.DictReader(io.StringIO(text)))
        if not rows:
            raise DomainError("trace CSV holds no data rows")
        missing = {"axis", "yield"} - set(rows[0])
        if missing:
            raise DomainError(f"trace CSV lacks column(s): {', '.join(sorted(missing))}")

        def col(name, conv=float):
            return np.array([conv(r[name]) for r in rows]) if name in rows[0] else None

        return cls(
            axis,
            col("axis"),
            col("yield"),
            col("counts", lambda s: int(float(s))),
            col("laser_ac"),
        )


@dataclass(frozen=True)
class ScanSpec:
    """
    One sweep: the axis, its grid, and templates for everything held fixed.

    Grid units are s (delay), W (power), rad (polarization) and V (voltage).
    For power scans the pump average power takes each grid value and the
    probe keeps its template power ratio to the pump.
    """

    axis: str
    grid: Sequence[float]
    pair: PulsePair
    model: EmissionModel
    calibration: Optional[BeamCalibration] = None
    integration: IntegrationParams = field(default_factory=IntegrationParams)
    noise_seed: Optional[int] = None
    noise_scale: Optional[float] = None

    def __post_init__(self):
        if self.axis not in AXES:
            raise DomainError(f"axis must be one of {AXES}, got {self.axis!r}")
        grid = np.asarray(self.grid, dtype=float)
        if grid.ndim != 1 or grid.size == 0:
            raise DomainError("scan grid must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(grid)):
            raise DomainError("scan grid must be finite")
        if grid.size > 1:
            d = np.diff(grid)
            if not (np.all(d > 0) or np.all(d < 0)):
                raise DomainError("scan grid must be strictly monotone")
        object.__setattr__(self, "grid", grid)
        if self.axis == "power":
            if self.calibration is None:
                raise DomainError("power scans need a beam calibration")
            if np.any(grid <= 0.0):
                raise DomainError("power grid values must be positive")
        if self.noise_seed is not None and not (self.noise_scale and self.noise_scale > 0):
            raise DomainError("noise_scale must be positive when a noise seed is given")

    def replace(self, **changes) -> "ScanSpec":
        return replace(self, **changes)


def _check_axis(spec: ScanSpec, axis: str):
    if spec.axis != axis:
        raise DomainError(f"expected a {axis} scan, got axis={spec.axis!r}")


def _finish(spec: ScanSpec, trace: Trace) -> Trace:
    if spec.noise_seed is not None:
        return poissonize(trace, spec.noise_scale, spec.noise_seed)
    return trace


def delay_scan(spec: ScanSpec) -> Trace:
    """Electron yield and second-order laser autocorrelation versus pump-probe delay."""
    _check_axis(spec, "delay")

    def point(tau):
        return integrate_pair(spec.pair.with_delay(float(tau)), spec.model, spec.integration, want_ac=True)

    out = _map(point, spec.grid)
    return _finish(spec, Trace("delay", spec.grid, [y for y, _ in out], laser_ac=[a for _, a in out]))


def power_scan(spec: ScanSpec) -> Trace:
    _check_axis(spec, "power")
    pump, probe = spec.pair.pump, spec.pair.probe
    if pump.peak_field <= 0.0:
        raise DomainError("power scan template needs a non-zero pump field")
    ratio = (probe.peak_field / pump.peak_field) ** 2

    def point(p):
        cal = spec.calibration.with_power(float(p))
        f_pump = peak_field_from_power(cal, pump.fwhm_duration)
        f_probe = peak_field_from_power(cal.with_power(float(p) * ratio), probe.fwhm_duration) if ratio > 0 else 0.0
        pair = replace(spec.pair, pump=pump.with_peak_field(f_pump), probe=probe.with_peak_field(f_probe))
        return integrate_yield(pair, spec.model, spec.integration)

    return _finish(spec, Trace("power", spec.grid, _map(point, spec.grid)))


def fold_angle(theta: float) -> float:
    """Map any angle onto [0, pi] with the same cosine."""
    t = math.fmod(theta, 2.0 * math.pi)
    if t < 0.0:
        t += 2.0 * math.pi
    return 2.0 * math.pi - t if t > math.pi else t


def polarization_scan(spec: ScanSpec) -> Trace:
    """Yield versus angle between the laser polarization and the tip axis."""
    _check_axis(spec, "polarization")

    def point(theta):
        model = spec.model.replace(polarization_angle=fold_angle(float(theta)))
        return integrate_yield(spec.pair, model, spec.integration)

    return _finish(spec, Trace("polarization", spec.grid, _map(point, spec.grid)))


def rethreshold(model: EmissionModel) -> Optional[EmissionModel]:
    """
    Drop multiphoton orders that cannot lift an electron over the
    Schottky-lowered barrier of ``model.tip``. Returns None if no channel is left.
    """
    phi_eff = effective_workfunction(model.tip.workfunction, dc_field(model.tip))
    n_min = min_photon_number(phi_eff, model.photon_energy)
    kept = [c for c in model.multiphoton if c.order >= n_min]
    if not kept and not model.tunneling:
        return None
    return model.replace(multiphoton=kept)


def voltage_scan(spec: ScanSpec) -> Trace:
    _check_axis(spec, "voltage")

    def point(v):
        model = rethreshold(spec.model.replace(tip=spec.model.tip.with_voltage(float(v))))
        if model is None:
            return 0.0
        return integrate_yield(spec.pair, model, spec.integration)

    return _finish(spec, Trace("voltage", spec.grid, _map(point, spec.grid)))


_SCANS = {
    "delay": delay_scan,
    "power": power_scan,
    "polarization": polarization_scan,
    "voltage": voltage_scan,
}


def run_scan(spec: ScanSpec) -> Trace:
    return _SCANS[spec.axis](spec)


# Poisson counting noise. Each point gets its own PCG64 stream seeded from
# (scan seed, point index), so results do not depend on evaluation order.

_GAUSS_THRESHOLD = 30.0


def poisson_sample(mean: float, rng: np.random.Generator) -> int:
    """
    One Poisson draw: inverse transform below a mean of 30, otherwise a
    rounded Gaussian clamped at zero.
    """
    if mean < 0.0 or not math.isfinite(mean):
        raise DomainError(f"Poisson mean must be finite and non-negative, got {mean!r}")
    if mean == 0.0:
        return 0
    if mean < _GAUSS_THRESHOLD:
        u = rng.random()
        k = 0
        p = math.exp(-mean)
        cdf = p
        while u > cdf and k < 1000:
            k += 1
            p *= mean / k
            cdf += p
        return k
    return max(0, int(round(mean + math.sqrt(mean) * rng.standard_normal())))


def point_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), int(index)])))


def poissonize(trace: Trace, scale: float, seed: int) -> Trace:
    """Attach Poisson counts with mean ``scale * yield`` to a copy of ``trace``."""
    if not scale > 0.0:
        raise DomainError(f"count scale must be positive, got {scale!r}")
    counts = [poisson_sample(scale * y, point_rng(seed, i)) for i, y in enumerate(trace.yields)]
    return replace(trace, counts=np.asarray(counts, dtype=np.int64))
