"""
Command-line front end.

    tipemission simulate CONFIG.json [--out FILE]
    tipemission fit {power-sum,single-power,fn-radius} DATA.csv [options]
    tipemission keldysh [--voltage-v V] [--power-mw P] ...
    tipemission constants

Exit status: 0 on success, 1 on invalid input, 2 on numerical or fit failure.
The number of scan worker threads can be set with TIPEMISSION_THREADS.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import fit_fn_radius, fit_power_sum, fit_report, fit_single_power
from .config import load_config
from .emission import DEFAULT_C0
from .errors import BarrierSuppressedError, ConfigError, DomainError, FitError, TipEmissionError
from .kernels import BACKEND
from .physcore import CONSTANTS
from .pulse import BeamCalibration, peak_field_from_power
from .scans import Trace, run_scan
from .tip import TipConfig, assess_keldysh

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _emit(text: str, out):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    trace = run_scan(cfg.spec)
    _emit(trace.to_csv(), args.out or cfg.output)
    return EXIT_OK


def _read_trace(path) -> Trace:
    try:
        return Trace.from_csv(Path(path))
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read data: {exc.strerror}") from None
    except (DomainError, ValueError, KeyError) as exc:
        raise ConfigError(f"{path}: malformed trace CSV: {exc}") from None


def cmd_fit(args) -> int:
    trace = _read_trace(args.data)
    y = trace.counts if (trace.counts is not None and args.column != "yield") else trace.yields
    if args.column == "counts" and trace.counts is None:
        raise ConfigError(f"{args.data}: no counts column")
    x = trace.values
    if args.min_axis is not None or args.max_axis is not None:
        keep = np.ones(x.size, dtype=bool)
        if args.min_axis is not None:
            keep &= x >= args.min_axis
        if args.max_axis is not None:
            keep &= x <= args.max_axis
        x, y = x[keep], y[keep]
    if args.model == "power-sum":
        fit = fit_power_sum(x, y, args.max_order)
    elif args.model == "single-power":
        fit = fit_single_power(x, y)
    else:
        fit = fit_fn_radius(x, y, phi=args.phi, k=args.k, c0=args.c0)
    _emit(json.dumps(fit_report(fit), indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_keldysh(args) -> int:
    tip = TipConfig(
        workfunction=args.phi,
        radius=args.radius_nm * 1e-9,
        geometry_factor=args.k,
        voltage=args.voltage_v,
        enhancement=args.enhancement,
    )
    if args.field_gv_per_m is not None:
        f_laser = args.field_gv_per_m * 1e9
    else:
        cal = BeamCalibration(args.power_mw * 1e-3, args.rep_rate_mhz * 1e6, args.focus_um * 1e-6)
        f_laser = peak_field_from_power(cal, args.fwhm_fs * 1e-15)
    report = assess_keldysh(tip, args.wavelength_nm * 1e-9, f_laser)
    sys.stdout.write(json.dumps(report.as_dict(), indent=2) + "\n")
    for note in report.notes:
        sys.stderr.write(f"note: {note}\n")
    return EXIT_OK


def cmd_constants(args) -> int:
    data = dict(CONSTANTS.as_dict())
    data["fn_exponent_constant_v_per_m_ev1p5"] = DEFAULT_C0
    data["kernel_backend"] = BACKEND
    sys.stdout.write(json.dumps(data, indent=2) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tipemission", description=__doc__.split("\n\n")[0].strip())
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("simulate", help="run the scan described by a JSON config and write CSV")
    s.add_argument("config")
    s.add_argument("--out", help="output CSV path (default: the config's output key, else stdout)")
    s.set_defaults(func=cmd_simulate)

    f = sub.add_parser("fit", help="fit a trace CSV and print a JSON report")
    f.add_argument("model", choices=["power-sum", "single-power", "fn-radius"])
    f.add_argument("data")
    f.add_argument("--max-order", type=int, default=5)
    f.add_argument("--phi", type=float, default=4.5, help="workfunction in eV (fn-radius)")
    f.add_argument("--k", type=float, default=5.0, help="tip geometry factor (fn-radius)")
    f.add_argument("--c0", type=float, default=DEFAULT_C0, help="FN constant in V/m/eV^1.5")
    f.add_argument("--column", choices=["auto", "counts", "yield"], default="auto")
    f.add_argument("--min-axis", type=float, help="drop rows with axis value below this (SI units)")
    f.add_argument("--max-axis", type=float, help="drop rows with axis value above this (SI units)")
    f.add_argument("--out")
    f.set_defaults(func=cmd_fit)

    k = sub.add_parser("keldysh", help="Keldysh parameter at an operating point")
    k.add_argument("--phi", type=float, default=4.5)
    k.add_argument("--voltage-v", type=float, default=-450.0)
    k.add_argument("--radius-nm", type=float, default=40.0)
    k.add_argument("--k", type=float, default=5.0)
    k.add_argument("--enhancement", type=float, default=1.0)
    k.add_argument("--wavelength-nm", type=float, default=810.0)
    k.add_argument("--power-mw", type=float, default=40.0)
    k.add_argument("--rep-rate-mhz", type=float, default=75.0)
    k.add_argument("--focus-um", type=float, default=4.0)
    k.add_argument("--fwhm-fs", type=float, default=50.0)
    k.add_argument("--field-gv-per-m", type=float, help="laser field, overrides the power calibration")
    k.set_defaults(func=cmd_keldysh)

    c = sub.add_parser("constants", help="print the physical constants in use")
    c.set_defaults(func=cmd_constants)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FitError, BarrierSuppressedError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NUMERIC
    except (ConfigError, DomainError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except (TipEmissionError, FloatingPointError, np.linalg.LinAlgError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NUMERIC


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
