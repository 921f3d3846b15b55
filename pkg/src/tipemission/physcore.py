"""
Physical constants and the handful of unit conversions used by the package.

Everything internal is SI. Electron-volts and nanometres only show up at the
API boundary and are converted explicitly.

Constants are the exact 2019 SI values where those exist and CODATA 2018
recommended values otherwise (electron mass, vacuum permittivity).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "PhysicalConstants",
    "CONSTANTS",
    "photon_energy",
    "angular_frequency",
    "optical_period",
    "ev_to_joule",
    "joule_to_ev",
]


@dataclass(frozen=True)
class PhysicalConstants:
    speed_of_light: float = 299792458.0  # m/s, exact
    vacuum_permittivity: float = 8.8541878128e-12  # F/m
    elementary_charge: float = 1.602176634e-19  # C, exact
    electron_mass: float = 9.1093837015e-31  # kg
    reduced_planck: float = 6.62607015e-34 / (2.0 * math.pi)  # J s, exact h
    electronvolt: float = 1.602176634e-19  # J per eV, exact

    def __post_init__(self):
        for name, value in self.as_dict().items():
            if not value > 0.0:
                raise DomainError(f"constant {name} must be positive")

    @property
    def planck(self) -> float:
        return 2.0 * math.pi * self.reduced_planck

    def as_dict(self) -> dict[str, float]:
        return {
            "speed_of_light": self.speed_of_light,
            "vacuum_permittivity": self.vacuum_permittivity,
            "elementary_charge": self.elementary_charge,
            "electron_mass": self.electron_mass,
            "reduced_planck": self.reduced_planck,
            "electronvolt": self.electronvolt,
        }


CONSTANTS = PhysicalConstants()


def _check_wavelength(wavelength):
    wl = np.asarray(wavelength, dtype=float)
    if np.any(~(wl > 0.0)):
        raise DomainError(f"wavelength must be positive, got {wavelength!r}")
    return wl


def _scalar_or_array(x):
    return float(x) if np.ndim(x) == 0 else x


def photon_energy(wavelength):
    """Photon energy h*c/lambda in eV for a wavelength in metres."""
    wl = _check_wavelength(wavelength)
    c = CONSTANTS
    return _scalar_or_array(c.planck * c.speed_of_light / wl / c.electronvolt)


def angular_frequency(wavelength):
    """Carrier angular frequency 2*pi*c/lambda in rad/s."""
    wl = _check_wavelength(wavelength)
    return _scalar_or_array(2.0 * math.pi * CONSTANTS.speed_of_light / wl)


def optical_period(wavelength):
    """Duration of one optical cycle in seconds."""
    wl = _check_wavelength(wavelength)
    return _scalar_or_array(wl / CONSTANTS.speed_of_light)


def ev_to_joule(value):
    return _scalar_or_array(np.asarray(value, dtype=float) * CONSTANTS.electronvolt)


def joule_to_ev(value):
    return _scalar_or_array(np.asarray(value, dtype=float) / CONSTANTS.electronvolt)
