"""
Chirped Gaussian pulses and the pump-probe field seen by the tip.

A single pulse centred at ``t = 0`` is

    E(t) = F0 * exp(-a t^2) * cos(b t^2 + w t)

with ``a`` fixed by the intensity FWHM (``a = 2 ln2 / fwhm^2``) and ``b`` the
linear chirp. The probe copy is the same expression evaluated at ``t - delay``,
so a positive delay means the probe arrives after the pump. The
carrier-envelope phase of both pulses is zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DomainError
from .physcore import CONSTANTS, angular_frequency

__all__ = [
    "TRANSFORM_LIMIT_TBP",
    "LaserPulseSpec",
    "PulsePair",
    "BeamCalibration",
    "peak_field_from_power",
    "envelope_param_from_fwhm",
    "chirp_from_tbp",
    "field_at",
    "analytic_field_at",
]

#: Time-bandwidth product of a transform-limited Gaussian pulse.
TRANSFORM_LIMIT_TBP = 0.441

_LN2 = math.log(2.0)


def envelope_param_from_fwhm(fwhm_duration: float) -> float:
    """Gaussian field-envelope parameter ``a`` such that exp(-2 a t^2) has the given FWHM."""
    if not fwhm_duration > 0.0:
        raise DomainError(f"fwhm_duration must be positive, got {fwhm_duration!r}")
    return 2.0 * _LN2 / fwhm_duration**2


def chirp_from_tbp(fwhm_duration: float, time_bandwidth_product: float) -> float:
    """
    Linear chirp ``b`` of a Gaussian pulse with a measured time-bandwidth product.

    For a linearly chirped Gaussian the spectral width grows by
    ``sqrt(1 + (b/a)^2)`` over the transform limit, hence
    ``b = a * sqrt((TBP / 0.441)^2 - 1)``.
    """
    if not time_bandwidth_product >= TRANSFORM_LIMIT_TBP:
        raise DomainError(
            f"time-bandwidth product {time_bandwidth_product!r} is below the "
            f"Gaussian transform limit {TRANSFORM_LIMIT_TBP}"
        )
    a = envelope_param_from_fwhm(fwhm_duration)
    ratio = time_bandwidth_product / TRANSFORM_LIMIT_TBP
    return a * math.sqrt(max(ratio * ratio - 1.0, 0.0))


@dataclass(frozen=True)
class BeamCalibration:
    """Quantities needed to turn a measured average power into a peak field."""

    average_power: float  # W
    repetition_rate: float  # Hz
    focus_fwhm: float  # m

    def __post_init__(self):
        for name in ("average_power", "repetition_rate", "focus_fwhm"):
            value = getattr(self, name)
            if not value > 0.0:
                raise DomainError(f"{name} must be positive, got {value!r}")

    def with_power(self, average_power: float) -> "BeamCalibration":
        return replace(self, average_power=average_power)


def peak_field_from_power(cal: BeamCalibration, fwhm_duration: float) -> float:
    """
    Peak optical field (V/m) of a Gaussian pulse train of given average power.

    Parameters
    ----------
    cal : BeamCalibration
        Average power, repetition rate and focal-spot FWHM.
    fwhm_duration : float
        Intensity FWHM of the pulse in seconds.

    Returns
    -------
    float
        ``sqrt(16 P / (f d^2 t eps0 c (pi/ln2)^{3/2}))``. In SI units the
        prefactor ``sqrt(16 / (eps0 c (pi/ln2)^{3/2}))`` is about 25.
    """
    if not fwhm_duration > 0.0:
        raise DomainError(f"fwhm_duration must be positive, got {fwhm_duration!r}")
    c = CONSTANTS
    denom = (
        cal.repetition_rate
        * cal.focus_fwhm**2
        * fwhm_duration
        * c.vacuum_permittivity
        * c.speed_of_light
        * (math.pi / _LN2) ** 1.5
    )
    return math.sqrt(16.0 * cal.average_power / denom)


@dataclass(frozen=True)
class LaserPulseSpec:
    """One linearly chirped Gaussian pulse."""

    peak_field: float  # V/m
    wavelength: float  # m
    fwhm_duration: float  # s, intensity FWHM
    chirp: float = 0.0  # s^-2
    envelope_param: float = field(init=False, repr=False)

    def __post_init__(self):
        if not self.peak_field >= 0.0:
            raise DomainError(f"peak_field must be non-negative, got {self.peak_field!r}")
        if not self.wavelength > 0.0:
            raise DomainError(f"wavelength must be positive, got {self.wavelength!r}")
        if not math.isfinite(self.chirp):
            raise DomainError(f"chirp must be finite, got {self.chirp!r}")
        object.__setattr__(self, "envelope_param", envelope_param_from_fwhm(self.fwhm_duration))

    @property
    def omega(self) -> float:
        return angular_frequency(self.wavelength)

    def with_peak_field(self, peak_field: float) -> "LaserPulseSpec":
        return replace(self, peak_field=peak_field)

    @classmethod
    def from_power(cls, cal, wavelength, fwhm_duration, chirp=0.0):
        return cls(peak_field_from_power(cal, fwhm_duration), wavelength, fwhm_duration, chirp)


@dataclass(frozen=True)
class PulsePair:
    """Pump and probe copies of the oscillator pulse with a relative delay."""

    pump: LaserPulseSpec
    probe: LaserPulseSpec
    delay: float = 0.0  # s, positive: probe later

    def __post_init__(self):
        if self.pump.wavelength != self.probe.wavelength:
            raise DomainError("pump and probe must share one wavelength")
        if not math.isfinite(self.delay):
            raise DomainError(f"delay must be finite, got {self.delay!r}")

    @classmethod
    def single(cls, pulse: LaserPulseSpec) -> "PulsePair":
        """A pair whose probe is blocked (zero field)."""
        return cls(pulse, pulse.with_peak_field(0.0), 0.0)

    @property
    def omega(self) -> float:
        return self.pump.omega

    @property
    def wavelength(self) -> float:
        return self.pump.wavelength

    def with_delay(self, delay: float) -> "PulsePair":
        return replace(self, delay=delay)

    def scaled(self, factor: float) -> "PulsePair":
        return replace(
            self,
            pump=self.pump.with_peak_field(self.pump.peak_field * factor),
            probe=self.probe.with_peak_field(self.probe.peak_field * factor),
        )

    def pump_only(self) -> "PulsePair":
        return replace(self, probe=self.probe.with_peak_field(0.0))

    def probe_only(self) -> "PulsePair":
        return replace(self, pump=self.pump.with_peak_field(0.0))


def _pulse_analytic(p: LaserPulseSpec, s):
    return p.peak_field * np.exp(-p.envelope_param * s * s + 1j * (p.chirp * s * s + p.omega * s))


def analytic_field_at(pair: PulsePair, t):
    """Complex field whose real part is :func:`field_at` and modulus is the envelope."""
    t = np.asarray(t, dtype=float)
    out = _pulse_analytic(pair.pump, t) + _pulse_analytic(pair.probe, t - pair.delay)
    return complex(out) if out.ndim == 0 else out


def field_at(pair: PulsePair, t):
    """Instantaneous two-pulse field (V/m) at time(s) ``t``."""
    t = np.asarray(t, dtype=float)
    out = 0.0
    for p, s in ((pair.pump, t), (pair.probe, t - pair.delay)):
        out = out + p.peak_field * np.exp(-p.envelope_param * s * s) * np.cos(
            p.chirp * s * s + p.omega * s
        )
    return float(out) if np.ndim(out) == 0 else out
