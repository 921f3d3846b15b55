"""Exception hierarchy shared by the simulation and fitting modules."""


class TipEmissionError(Exception):
    """Base class for all errors raised by :mod:`tipemission`."""


class DomainError(TipEmissionError, ValueError):
    """An argument lies outside the domain where the model is defined."""


class BarrierSuppressedError(DomainError):
    """Schottky lowering has removed the surface barrier entirely."""


class FitError(TipEmissionError, ValueError):
    """A fit could not be carried out or its result is meaningless."""


class ConfigError(TipEmissionError):
    """A run configuration failed validation."""
