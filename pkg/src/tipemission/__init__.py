"""Simulation and fitting of femtosecond-laser-triggered emission from a field-emission tip."""

from .analysis import (
    FnRadiusFit,
    PowerSeriesFit,
    SinglePowerFit,
    fit_fn_radius,
    fit_power_sum,
    fit_single_power,
    nnls,
)
from .emission import (
    DEFAULT_C0,
    EmissionModel,
    FowlerNordheimChannel,
    MultiphotonChannel,
    fn_rate,
    multiphoton_rate,
    total_rate,
)
from .errors import BarrierSuppressedError, ConfigError, DomainError, FitError, TipEmissionError
from .kernels import BACKEND
from .physcore import CONSTANTS, angular_frequency, ev_to_joule, joule_to_ev, photon_energy
from .pulse import (
    BeamCalibration,
    LaserPulseSpec,
    PulsePair,
    chirp_from_tbp,
    envelope_param_from_fwhm,
    field_at,
    peak_field_from_power,
)
from .scans import (
    IntegrationParams,
    ScanSpec,
    Trace,
    delay_scan,
    integrate_yield,
    poissonize,
    polarization_scan,
    power_scan,
    run_scan,
    voltage_scan,
)
from .tip import TipConfig, assess_keldysh, dc_field, effective_workfunction, keldysh, min_photon_number

__version__ = "0.1.0"
