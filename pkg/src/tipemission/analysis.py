"""
Fitting procedures for emission scans.

* :func:`fit_power_sum` decomposes a yield-versus-power curve into
  ``sum_n c_n I^n`` with non-negative coefficients.
* :func:`fit_single_power` extracts one effective exponent from a log-log fit.
* :func:`fit_fn_radius` recovers the tip radius from a Fowler-Nordheim plot of
  DC emission versus voltage.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .emission import DEFAULT_C0, MAX_ORDER
from .errors import FitError

__all__ = [
    "nnls",
    "PowerSeriesFit",
    "SinglePowerFit",
    "FnRadiusFit",
    "fit_power_sum",
    "fit_single_power",
    "fit_fn_radius",
    "fit_report",
]

_COND_WARN = 1e8


def nnls(A, b, rtol=1e-10, maxiter=None):
    """
    Solve ``min ||A x - b||`` subject to ``x >= 0`` (Lawson-Hanson active set).

    Parameters
    ----------
    A : array_like, shape (m, n)
    b : array_like, shape (m,)
    rtol : float
        Iteration stops once the largest dual component over the free
        (zero) variables falls below ``rtol`` times its initial value.
    maxiter : int, optional
        Cap on inner iterations, default ``3 n``.

    Returns
    -------
    x : ndarray, shape (n,)
    rnorm : float
        Euclidean norm of the residual.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    if b.shape != (m,):
        raise ValueError("b must have one entry per row of A")
    maxiter = 3 * n if maxiter is None else maxiter

    x = np.zeros(n)
    passive = np.zeros(n, dtype=bool)
    w = A.T @ b
    w0 = np.max(w) if n else 0.0
    if not w0 > 0.0:
        return x, float(np.linalg.norm(b))
    tol = rtol * w0

    it = 0
    while not passive.all() and np.max(np.where(passive, -np.inf, w)) > tol:
        j = int(np.argmax(np.where(passive, -np.inf, w)))
        passive[j] = True
        while True:
            it += 1
            z = np.zeros(n)
            z[passive] = np.linalg.lstsq(A[:, passive], b, rcond=None)[0]
            if np.all(z[passive] > 0.0):
                x = z
                break
            if it > maxiter:
                x = np.where(passive, np.maximum(z, 0.0), 0.0)
                break
            # step back to the feasible boundary and release the blocking variables
            blocking = passive & (z <= 0.0)
            alpha = np.min(x[blocking] / (x[blocking] - z[blocking]))
            x = x + alpha * (z - x)
            released = passive & (x <= 1e-15 * max(1.0, np.max(np.abs(x))))
            released[j] |= not np.any(released)
            passive &= ~released
            x[~passive] = 0.0
        w = A.T @ (b - A @ x)
        if it > maxiter:
            break
    return x, float(np.linalg.norm(b - A @ x))


@dataclass
class PowerSeriesFit:
    """
    Non-negative decomposition ``counts ~ sum_n c_n I^n``.

    ``normalized_coefficients`` refer to the power axis divided by its median
    (``power_scale``); ``coefficients`` are in physical units of counts/W^n.
    """

    coefficients: np.ndarray
    normalized_coefficients: np.ndarray
    standard_errors: np.ndarray  # normalized basis
    power_scale: float
    residual_norm: float
    per_order_contribution: np.ndarray  # (max_order + 1, npoints)
    condition_number: float
    warnings: list = field(default_factory=list)

    @property
    def max_order(self) -> int:
        return self.coefficients.size - 1

    def predict(self, powers):
        x = np.asarray(powers, dtype=float) / self.power_scale
        return np.vander(x, self.max_order + 1, increasing=True) @ self.normalized_coefficients


@dataclass
class SinglePowerFit:
    exponent: float
    prefactor: float
    r_squared: float
    exponent_stderr: float = float("nan")
    residual: float = 0.0


@dataclass
class FnRadiusFit:
    radius: float  # m
    slope: float  # V
    intercept: float
    assumed_phi: float  # eV
    assumed_k: float
    r_squared: float = float("nan")
    residual: float = 0.0


def _as_series(powers, counts, min_points):
    p = np.asarray(powers, dtype=float)
    c = np.asarray(counts, dtype=float)
    if p.ndim != 1 or p.shape != c.shape:
        raise FitError("powers and counts must be 1-D sequences of equal length")
    if p.size < min_points:
        raise FitError(f"need at least {min_points} data points, got {p.size}")
    if not np.all(np.isfinite(p)) or not np.all(np.isfinite(c)):
        raise FitError("data must be finite")
    return p, c


def fit_power_sum(powers, counts, max_order: int = 5) -> PowerSeriesFit:
    """
    Fit ``sum_{n=0}^{max_order} c_n I^n`` with ``c_n >= 0``.

    Rows are weighted by ``1 / max(count, 1)`` (Poisson variance) and the
    power axis is divided by its median before the design matrix is built.

    Raises
    ------
    FitError
        Too few points, non-positive or non-monotone powers, negative counts,
        or an order outside ``[0, 8]``.
    """
    if int(max_order) != max_order or not 0 <= max_order <= MAX_ORDER:
        raise FitError(f"max_order must be an integer in [0, {MAX_ORDER}], got {max_order!r}")
    max_order = int(max_order)
    p, c = _as_series(powers, counts, max_order + 2)
    if np.all(p == p[0]):
        raise FitError("degenerate power grid: all powers are equal")
    if np.any(p <= 0.0):
        raise FitError("powers must be strictly positive")
    d = np.diff(p)
    if not (np.all(d > 0) or np.all(d < 0)):
        raise FitError("powers must be strictly monotone")
    if np.any(c < 0.0):
        raise FitError("counts must be non-negative")

    scale = float(np.median(p))
    x = p / scale
    V = np.vander(x, max_order + 1, increasing=True)
    sw = 1.0 / np.sqrt(np.maximum(c, 1.0))
    A = V * sw[:, None]
    b = c * sw
    norms = np.linalg.norm(A, axis=0)
    An = A / norms
    y, _ = nnls(An, b)
    coef_n = y / norms
    resid = float(np.linalg.norm(b - A @ coef_n))

    cond = float(np.linalg.cond(An))
    warnings = []
    if cond > _COND_WARN:
        warnings.append(
            f"design matrix is ill-conditioned (condition number {cond:.3g}); "
            "adjacent orders are poorly separated on this grid"
        )

    # Errors from the unconstrained weighted normal matrix: they include the
    # trade-off between neighbouring orders that the active set hides.
    se = np.full(max_order + 1, np.nan)
    try:
        se = np.sqrt(np.abs(np.diag(np.linalg.inv(A.T @ A))))
    except np.linalg.LinAlgError:
        warnings.append("normal matrix is singular; standard errors unavailable")

    return PowerSeriesFit(
        coefficients=coef_n / scale ** np.arange(max_order + 1),
        normalized_coefficients=coef_n,
        standard_errors=se,
        power_scale=scale,
        residual_norm=resid,
        per_order_contribution=(V * coef_n).T,
        condition_number=cond,
        warnings=warnings,
    )


def _linregress(x, y):
    xm, ym = x.mean(), y.mean()
    sxx = np.sum((x - xm) ** 2)
    if sxx == 0.0:
        raise FitError("abscissa has no spread")
    slope = float(np.sum((x - xm) * (y - ym)) / sxx)
    intercept = float(ym - slope * xm)
    res = y - (intercept + slope * x)
    ss_res = float(np.sum(res**2))
    ss_tot = float(np.sum((y - ym) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0.0 else 1.0
    dof = x.size - 2
    stderr = math.sqrt(ss_res / dof / sxx) if dof > 0 else float("nan")
    return slope, intercept, r2, ss_res, stderr


def fit_single_power(powers, counts) -> SinglePowerFit:
    """Least-squares line through ``(log P, log counts)``; the slope is the exponent."""
    p, c = _as_series(powers, counts, 3)
    if np.any(p <= 0.0):
        raise FitError("powers must be strictly positive for a log-log fit")
    if np.any(c <= 0.0):
        raise FitError("counts must be strictly positive for a log-log fit; filter zero-count points first")
    slope, intercept, r2, ss_res, stderr = _linregress(np.log(p), np.log(c))
    return SinglePowerFit(slope, math.exp(intercept), r2, stderr, ss_res)


def fit_fn_radius(voltages, counts, phi: float = 4.5, k: float = 5.0, c0: float = DEFAULT_C0) -> FnRadiusFit:
    """
    Tip radius from a Fowler-Nordheim plot.

    ``ln(counts / V^2)`` is regressed on ``1/|V|``. With ``F = |V| / (k r)`` the
    slope is ``-c0 phi^{3/2} k r``, which is solved for ``r``.
    """
    v, c = _as_series(voltages, counts, 3)
    if np.any(v == 0.0) or not (np.all(v > 0) or np.all(v < 0)):
        raise FitError("voltages must be non-zero and share one sign")
    if np.any(c <= 0.0):
        raise FitError("counts must be strictly positive")
    if not (phi > 0 and k > 0 and c0 > 0):
        raise FitError("phi, k and c0 must be positive")
    slope, intercept, r2, ss_res, _ = _linregress(1.0 / np.abs(v), np.log(c / v**2))
    if slope >= 0.0:
        raise FitError(f"data inconsistent with FN emission (slope {slope:.4g} V is not negative)")
    radius = -slope / (c0 * phi**1.5 * k)
    return FnRadiusFit(radius, slope, intercept, phi, k, r2, ss_res)


def _num(x) -> Optional[float]:
    x = float(x)
    return x if math.isfinite(x) else None


def fit_report(fit) -> dict:
    """Flat JSON-ready summary of any fit result."""
    if isinstance(fit, PowerSeriesFit):
        return {
            "model": "power-sum",
            "coefficients": [_num(v) for v in fit.coefficients],
            "exponent": None,
            "radius_m": None,
            "residual": _num(fit.residual_norm),
            "r_squared": None,
            "warnings": list(fit.warnings),
        }
    if isinstance(fit, SinglePowerFit):
        return {
            "model": "single-power",
            "coefficients": [_num(fit.prefactor)],
            "exponent": _num(fit.exponent),
            "radius_m": None,
            "residual": _num(fit.residual),
            "r_squared": _num(fit.r_squared),
            "warnings": [],
        }
    if isinstance(fit, FnRadiusFit):
        return {
            "model": "fn-radius",
            "coefficients": [_num(fit.slope), _num(fit.intercept)],
            "exponent": None,
            "radius_m": _num(fit.radius),
            "residual": _num(fit.residual),
            "r_squared": _num(fit.r_squared),
            "warnings": [],
        }
    raise TypeError(f"not a fit result: {type(fit).__name__}")
