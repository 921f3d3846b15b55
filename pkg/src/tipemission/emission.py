"""
Instantaneous emission rates.

Two mechanisms are modelled, each as a list of channels that are summed:

* n-photon over-the-barrier emission, ``c_n (F_laser cos(theta))^(2n)``;
* photo-assisted Fowler-Nordheim tunneling through the barrier
  ``phi - n hbar w`` driven by ``F_tot = F_DC + l F_laser cos(theta)``, with the
  excited-state population ``a_n`` following the n-th power of the envelope
  intensity.

Rates are in arbitrary units; only the per-channel weights set the ratios.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .errors import DomainError
from .physcore import CONSTANTS
from .physcore import photon_energy as photon_energy_ev
from .tip import TipConfig, dc_field

__all__ = [
    "MAX_ORDER",
    "DEFAULT_C0",
    "fn_exponent_constant",
    "MultiphotonChannel",
    "FowlerNordheimChannel",
    "EmissionModel",
    "polarization_cos",
    "multiphoton_rate",
    "fn_rate",
    "total_rate",
    "dark_rate",
]

MAX_ORDER = 8

_PHOTON_810 = photon_energy_ev(810e-9)


def fn_exponent_constant() -> float:
    """Fowler-Nordheim exponent constant ``(4/3) sqrt(2 m) / (e hbar)`` in V m^-1 eV^-3/2."""
    c = CONSTANTS
    si = 4.0 * math.sqrt(2.0 * c.electron_mass) / (3.0 * c.elementary_charge * c.reduced_planck)
    return si * c.electronvolt**1.5


DEFAULT_C0 = fn_exponent_constant()


def polarization_cos(theta):
    """cos(theta), with values below the angular resolution of a double snapped to 0."""
    c = np.cos(np.asarray(theta, dtype=float))
    c = np.where(np.abs(c) < 1e-15, 0.0, c)
    return float(c) if c.ndim == 0 else c


@dataclass(frozen=True)
class MultiphotonChannel:
    order: int
    coefficient: float = 1.0

    def __post_init__(self):
        if int(self.order) != self.order or not 0 <= self.order <= MAX_ORDER:
            raise DomainError(f"multiphoton order must be an integer in [0, {MAX_ORDER}], got {self.order!r}")
        if not self.coefficient >= 0.0:
            raise DomainError(f"multiphoton coefficient must be non-negative, got {self.coefficient!r}")
        object.__setattr__(self, "order", int(self.order))


@dataclass(frozen=True)
class FowlerNordheimChannel:
    photons_absorbed: int
    weight: float = 1.0
    c0_constant: float = DEFAULT_C0  # V m^-1 eV^-3/2

    def __post_init__(self):
        n = self.photons_absorbed
        if int(n) != n or n < 0:
            raise DomainError(f"photons_absorbed must be a non-negative integer, got {n!r}")
        if not self.weight >= 0.0:
            raise DomainError(f"tunneling weight must be non-negative, got {self.weight!r}")
        if not self.c0_constant > 0.0:
            raise DomainError(f"c0_constant must be positive, got {self.c0_constant!r}")
        object.__setattr__(self, "photons_absorbed", int(n))


@dataclass(frozen=True)
class EmissionModel:
    """
    A set of emission channels evaluated at one tip and polarization.

    ``reference_field`` (V/m) normalizes the envelope intensity that drives
    the excited-state populations of the tunneling channels.
    """

    multiphoton: Sequence[MultiphotonChannel] = ()
    tunneling: Sequence[FowlerNordheimChannel] = ()
    tip: TipConfig = field(default_factory=TipConfig)
    photon_energy: float = _PHOTON_810  # eV
    polarization_angle: float = 0.0  # rad
    reference_field: float = 1e9

    def __post_init__(self):
        object.__setattr__(self, "multiphoton", tuple(self.multiphoton))
        object.__setattr__(self, "tunneling", tuple(self.tunneling))
        if not self.multiphoton and not self.tunneling:
            raise DomainError("an emission model needs at least one channel")
        if not 0.0 <= self.polarization_angle <= math.pi:
            raise DomainError(f"polarization_angle must lie in [0, pi], got {self.polarization_angle!r}")
        if not self.photon_energy > 0.0:
            raise DomainError(f"photon_energy must be positive, got {self.photon_energy!r}")
        if not self.reference_field > 0.0:
            raise DomainError(f"reference_field must be positive, got {self.reference_field!r}")
        for ch in self.tunneling:
            if self.barrier(ch) <= 0.0:
                raise DomainError(
                    f"tunneling channel with {ch.photons_absorbed} photons leaves no barrier "
                    f"(phi = {self.tip.workfunction} eV, photon = {self.photon_energy:.4g} eV); "
                    "use a multiphoton channel for that order"
                )

    def barrier(self, ch: FowlerNordheimChannel) -> float:
        """Residual barrier ``phi - n hbar w`` in eV seen by a tunneling channel."""
        return self.tip.workfunction - ch.photons_absorbed * self.photon_energy

    @property
    def cos_theta(self) -> float:
        return polarization_cos(self.polarization_angle)

    @property
    def f_dc(self) -> float:
        return dc_field(self.tip)

    def replace(self, **changes) -> "EmissionModel":
        return replace(self, **changes)

    def scaled(self, factor: float) -> "EmissionModel":
        """All channel weights multiplied by ``factor``."""
        return replace(
            self,
            multiphoton=[replace(c, coefficient=c.coefficient * factor) for c in self.multiphoton],
            tunneling=[replace(c, weight=c.weight * factor) for c in self.tunneling],
        )


def multiphoton_rate(ch: MultiphotonChannel, f_laser, theta=0.0):
    """``c_n (F_laser cos(theta))^(2n)``; the even power makes the field sign irrelevant."""
    x = np.asarray(f_laser, dtype=float) * polarization_cos(theta)
    out = ch.coefficient * (x * x) ** ch.order
    return float(out) if out.ndim == 0 else out


def fn_rate(ch: FowlerNordheimChannel, f_laser, model: EmissionModel, laser_intensity_scale=1.0):
    """
    Photo-assisted Fowler-Nordheim rate.

    Parameters
    ----------
    ch : FowlerNordheimChannel
    f_laser : float or ndarray
        Signed instantaneous laser field in V/m.
    model : EmissionModel
        Supplies the tip (static field, workfunction, enhancement), the photon
        energy and the polarization angle.
    laser_intensity_scale : float or ndarray
        Dimensionless envelope intensity; the channel weight is multiplied by
        its ``photons_absorbed``-th power.

    Returns
    -------
    float or ndarray
        ``w s^n F_tot^2 / B exp(-C0 B^{3/2} / F_tot)`` for ``F_tot > 0``, else 0,
        where ``B = phi - n hbar w`` in eV.
    """
    f = np.asarray(f_laser, dtype=float)
    f_tot = model.f_dc + model.tip.enhancement * f * model.cos_theta
    barrier = model.barrier(ch)
    pop = ch.weight * np.asarray(laser_intensity_scale, dtype=float) ** ch.photons_absorbed
    positive = f_tot > 0.0
    safe = np.where(positive, f_tot, 1.0)
    val = pop * safe * safe / barrier * np.exp(-ch.c0_constant * barrier**1.5 / safe)
    out = np.where(positive, val, 0.0)
    return float(out) if out.ndim == 0 else out


def total_rate(model: EmissionModel, f_laser, envelope_intensity_scale=1.0):
    """Sum of every multiphoton and tunneling channel of ``model``."""
    f = np.asarray(f_laser, dtype=float)
    out = np.zeros(np.broadcast(f, np.asarray(envelope_intensity_scale)).shape)
    for ch in model.multiphoton:
        out = out + multiphoton_rate(ch, f, model.polarization_angle)
    for ch in model.tunneling:
        out = out + fn_rate(ch, f, model, envelope_intensity_scale)
    return float(out) if out.ndim == 0 else out


def dark_rate(model: EmissionModel) -> float:
    """Rate with the laser blocked (order-0 and DC tunneling channels only)."""
    return total_rate(model, 0.0, 0.0)
