"""
JSON run configurations.

Units are part of every key name. A config describes one scan; see the
``configs/`` directory of the repository for complete examples.

Multiphoton channel strengths are given as ``rate_at_1gvm_per_s``: the
emission rate in s^-1 when ``F cos(theta)`` equals 1 GV/m. Yields are then
electrons per laser shot, and ``counts_per_unit_yield`` is the number of
shots accumulated per grid point.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
from jsonschema import Draft202012Validator

from .emission import DEFAULT_C0, EmissionModel, FowlerNordheimChannel, MultiphotonChannel
from .errors import ConfigError, TipEmissionError
from .physcore import photon_energy
from .pulse import BeamCalibration, LaserPulseSpec, PulsePair, chirp_from_tbp, peak_field_from_power
from .scans import IntegrationParams, ScanSpec
from .tip import TipConfig

__all__ = ["SCHEMA", "RunConfig", "load_config", "parse_config"]

_POS = {"type": "number", "exclusiveMinimum": 0}
_NONNEG = {"type": "number", "minimum": 0}


def _obj(props, required=()):
    return {"type": "object", "properties": props, "required": list(required), "additionalProperties": False}


SCHEMA = _obj(
    {
        "scenario": {"type": "string", "minLength": 1},
        "description": {"type": "string"},
        "pulse": _obj(
            {
                "wavelength_nm": _POS,
                "fwhm_fs": _POS,
                "tbp": {"type": "number", "minimum": 0.441},
                "chirp_per_fs2": {"type": "number"},
                "pump_power_mw": _NONNEG,
                "probe_power_mw": _NONNEG,
                "delay_fs": {"type": "number"},
            },
            ["wavelength_nm", "fwhm_fs", "pump_power_mw"],
        ),
        "beam": _obj({"repetition_rate_mhz": _POS, "focus_fwhm_um": _POS}, ["repetition_rate_mhz", "focus_fwhm_um"]),
        "tip": _obj(
            {
                "workfunction_ev": _POS,
                "radius_nm": _POS,
                "geometry_factor": _POS,
                "voltage_v": {"type": "number"},
                "enhancement": {"type": "number", "minimum": 1},
            },
        ),
        "model": _obj(
            {
                "polarization_deg": {"type": "number", "minimum": 0, "maximum": 180},
                "reference_field_gv_per_m": _POS,
                "multiphoton": {
                    "type": "array",
                    "items": _obj(
                        {
                            "order": {"type": "integer", "minimum": 0, "maximum": 8},
                            "rate_at_1gvm_per_s": _NONNEG,
                        },
                        ["order", "rate_at_1gvm_per_s"],
                    ),
                },
                "tunneling": {
                    "type": "array",
                    "items": _obj(
                        {
                            "photons_absorbed": {"type": "integer", "minimum": 0},
                            "weight": _NONNEG,
                            "c0_v_per_m_ev1p5": _POS,
                        },
                        ["photons_absorbed", "weight"],
                    ),
                },
            },
        ),
        "scan": _obj(
            {
                "axis": {"enum": ["delay", "power", "polarization", "voltage"]},
                "points": {"type": "integer", "minimum": 1},
                "spacing": {"enum": ["linear", "log"]},
                "start_fs": {"type": "number"},
                "stop_fs": {"type": "number"},
                "start_mw": _POS,
                "stop_mw": _POS,
                "start_deg": {"type": "number"},
                "stop_deg": {"type": "number"},
                "start_v": {"type": "number"},
                "stop_v": {"type": "number"},
                "seed": {"type": "integer", "minimum": 0},
                "counts_per_unit_yield": _POS,
            },
            ["axis", "points"],
        ),
        "integration": _obj(
            {
                "samples_per_optical_cycle": {"type": "integer", "minimum": 16},
                "window_halfwidth_fwhm": {"type": "number", "minimum": 4},
            },
        ),
        "output": {"type": "string", "minLength": 1},
    },
    ["scenario", "pulse", "beam", "model", "scan"],
)

_AXIS_KEYS = {
    "delay": ("start_fs", "stop_fs", 1e-15),
    "power": ("start_mw", "stop_mw", 1e-3),
    "polarization": ("start_deg", "stop_deg", math.pi / 180.0),
    "voltage": ("start_v", "stop_v", 1.0),
}


@dataclass(frozen=True)
class RunConfig:
    scenario: str
    spec: ScanSpec
    output: Optional[str]
    raw: dict


def _line_of(text: str, path) -> int:
    """Best-effort line number of the JSON node addressed by ``path``."""
    pos = 0
    for part in path:
        if isinstance(part, str):
            m = re.compile(r'"%s"\s*:' % re.escape(part)).search(text, pos)
            if m is None:
                break
            pos = m.start()
        else:
            # advance past `part` objects/values inside the array that follows
            bracket = text.find("[", pos)
            if bracket < 0:
                break
            pos = bracket + 1
            for _ in range(int(part)):
                nxt = text.find("{", pos)
                end = text.find("}", nxt) if nxt >= 0 else -1
                if end < 0:
                    break
                pos = end + 1
            nxt = text.find("{", pos)
            pos = nxt if nxt >= 0 else pos
    return text.count("\n", 0, pos) + 1


def _dotted(path) -> str:
    out = ""
    for p in path:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out or "<root>"


class _Ctx:
    def __init__(self, source, text):
        self.source, self.text = source, text

    def fail(self, path, msg):
        raise ConfigError(f"{self.source}:{_line_of(self.text, path)}: {_dotted(path)}: {msg}")


def parse_config(text: str, source: str = "<config>") -> RunConfig:
    """Validate and build a :class:`RunConfig` from JSON text."""
    ctx = _Ctx(source, text)
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{source}:{exc.lineno}: invalid JSON: {exc.msg}") from None

    errors = sorted(Draft202012Validator(SCHEMA).iter_errors(raw), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        path = list(err.absolute_path)
        if err.validator == "additionalProperties":
            extra = [k for k in err.instance if k not in err.schema.get("properties", {})]
            path = path + extra[:1]
            ctx.fail(path, "unknown key")
        ctx.fail(path, err.message)

    def build(path, fn, *args, **kw):
        try:
            return fn(*args, **kw)
        except TipEmissionError as exc:
            ctx.fail(path, str(exc))

    pulse = raw["pulse"]
    beam = raw["beam"]
    tip_raw = raw.get("tip", {})
    model_raw = raw["model"]
    scan = raw["scan"]
    integ = raw.get("integration", {})

    wavelength = pulse["wavelength_nm"] * 1e-9
    fwhm = pulse["fwhm_fs"] * 1e-15
    if "tbp" in pulse and "chirp_per_fs2" in pulse:
        ctx.fail(["pulse", "chirp_per_fs2"], "give either tbp or chirp_per_fs2, not both")
    if "tbp" in pulse:
        chirp = build(["pulse", "tbp"], chirp_from_tbp, fwhm, pulse["tbp"])
    else:
        chirp = pulse.get("chirp_per_fs2", 0.0) * 1e30

    rep = beam["repetition_rate_mhz"] * 1e6
    focus = beam["focus_fwhm_um"] * 1e-6

    def field_for(power_mw, key):
        if power_mw == 0:
            return 0.0
        cal = build(["beam"], BeamCalibration, power_mw * 1e-3, rep, focus)
        return build(["pulse", key], peak_field_from_power, cal, fwhm)

    pump_power = pulse["pump_power_mw"]
    probe_power = pulse.get("probe_power_mw", 0.0)
    pump = build(["pulse"], LaserPulseSpec, field_for(pump_power, "pump_power_mw"), wavelength, fwhm, chirp)
    probe = build(["pulse"], LaserPulseSpec, field_for(probe_power, "probe_power_mw"), wavelength, fwhm, chirp)
    pair = build(["pulse"], PulsePair, pump, probe, pulse.get("delay_fs", 0.0) * 1e-15)

    tip = build(
        ["tip"],
        TipConfig,
        workfunction=tip_raw.get("workfunction_ev", 4.5),
        radius=tip_raw.get("radius_nm", 40.0) * 1e-9,
        geometry_factor=tip_raw.get("geometry_factor", 5.0),
        voltage=tip_raw.get("voltage_v", 0.0),
        enhancement=tip_raw.get("enhancement", 1.0),
    )

    mp = [
        build(
            ["model", "multiphoton", i],
            MultiphotonChannel,
            ch["order"],
            ch["rate_at_1gvm_per_s"] / 1e9 ** (2 * ch["order"]),
        )
        for i, ch in enumerate(model_raw.get("multiphoton", []))
    ]
    fn = [
        build(
            ["model", "tunneling", i],
            FowlerNordheimChannel,
            ch["photons_absorbed"],
            ch["weight"],
            ch.get("c0_v_per_m_ev1p5", DEFAULT_C0),
        )
        for i, ch in enumerate(model_raw.get("tunneling", []))
    ]
    model = build(
        ["model"],
        EmissionModel,
        mp,
        fn,
        tip,
        photon_energy(wavelength),
        math.radians(model_raw.get("polarization_deg", 0.0)),
        model_raw.get("reference_field_gv_per_m", 1.0) * 1e9,
    )

    axis = scan["axis"]
    k_start, k_stop, unit = _AXIS_KEYS[axis]
    for key in scan:
        if key.startswith(("start_", "stop_")) and key not in (k_start, k_stop):
            ctx.fail(["scan", key], f"not valid for a {axis} scan (use {k_start}/{k_stop})")
    for key in (k_start, k_stop):
        if key not in scan:
            ctx.fail(["scan"], f"{axis} scan needs {key}")
    n = scan["points"]
    start, stop = scan[k_start], scan[k_stop]
    if n > 1 and start == stop:
        ctx.fail(["scan", k_stop], "start and stop must differ when points > 1")
    if scan.get("spacing", "linear") == "log":
        if start <= 0 or stop <= 0:
            ctx.fail(["scan", "spacing"], "log spacing needs positive start and stop")
        grid = np.geomspace(start, stop, n) * unit
    else:
        grid = np.linspace(start, stop, n) * unit
    if "seed" in scan and "counts_per_unit_yield" not in scan:
        ctx.fail(["scan", "seed"], "a noise seed needs counts_per_unit_yield")

    calibration = None
    if axis == "power":
        calibration = build(["beam"], BeamCalibration, start * 1e-3 if pump_power == 0 else pump_power * 1e-3, rep, focus)
        if pump_power == 0:
            ctx.fail(["pulse", "pump_power_mw"], "power scans need a non-zero template pump power")

    params = build(
        ["integration"],
        IntegrationParams,
        integ.get("samples_per_optical_cycle", 64),
        integ.get("window_halfwidth_fwhm", 6.0),
    )
    spec = build(
        ["scan"],
        ScanSpec,
        axis,
        grid,
        pair,
        model,
        calibration,
        params,
        scan.get("seed"),
        scan.get("counts_per_unit_yield"),
    )
    return RunConfig(raw["scenario"], spec, raw.get("output"), raw)


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config: {exc.strerror}") from None
    return parse_config(text, str(path))
