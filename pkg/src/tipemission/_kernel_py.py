"""Vectorized numpy implementation of the time-integration kernel.

Mirrors ``_kernel.pyx`` argument for argument; used when the compiled
extension is missing or ``TIPEMISSION_BACKEND=python`` is set.
"""

import numpy as np

_CHUNK = 1 << 15


def integrate_pair(
    f1, a1, b1, f2, a2, b2, omega, delay,
    t0, dt, nsamples,
    mp_orders, mp_coeffs, cos_theta,
    fn_orders, fn_weights, fn_barriers, fn_exponents,
    f_dc, ell_cos, inv_ref_sq,
    dark, want_ac,
):
    mp_orders = np.asarray(mp_orders, dtype=np.int64)
    mp_coeffs = np.asarray(mp_coeffs, dtype=float)
    fn_orders = np.asarray(fn_orders, dtype=np.int64)
    fn_weights = np.asarray(fn_weights, dtype=float)
    fn_barriers = np.asarray(fn_barriers, dtype=float)
    fn_exponents = np.asarray(fn_exponents, dtype=float)
    need_env = bool(np.any(fn_orders > 0))

    total = 0.0
    ac = 0.0
    for start in range(0, nsamples, _CHUNK):
        k = np.arange(start, min(start + _CHUNK, nsamples), dtype=float)
        t = t0 + k * dt
        s = t - delay
        e1 = f1 * np.exp(-a1 * t * t)
        e2 = f2 * np.exp(-a2 * s * s)
        p1 = b1 * t * t + omega * t
        p2 = b2 * s * s + omega * s
        field = e1 * np.cos(p1) + e2 * np.cos(p2)

        x = field * cos_theta
        x2 = x * x
        rate = np.zeros_like(field)
        for n, c in zip(mp_orders, mp_coeffs):
            rate += c * x2**n

        if fn_orders.size:
            if need_env:
                im = e1 * np.sin(p1) + e2 * np.sin(p2)
                scale = (field * field + im * im) * inv_ref_sq
            else:
                scale = np.ones_like(field)
            f_tot = f_dc + ell_cos * field
            pos = f_tot > 0.0
            safe = np.where(pos, f_tot, 1.0)
            for n, w, bar, ex in zip(fn_orders, fn_weights, fn_barriers, fn_exponents):
                term = w * scale**n * safe * safe / bar * np.exp(-ex / safe)
                rate += np.where(pos, term, 0.0)

        g = rate - dark
        wts = np.ones_like(g)
        if start == 0:
            wts[0] = 0.5
        if start + g.size == nsamples:
            wts[-1] = 0.5
        total += float(np.dot(wts, g))
        if want_ac:
            f2_ = field * field
            ac += float(np.dot(wts, f2_ * f2_))
    return total * dt, ac * dt
