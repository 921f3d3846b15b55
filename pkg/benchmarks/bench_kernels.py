"""
Time the compiled and pure-Python integration kernels on the same workloads.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

import numpy as np

from tipemission import kernels
from tipemission.emission import EmissionModel, FowlerNordheimChannel, MultiphotonChannel
from tipemission.physcore import photon_energy
from tipemission.pulse import LaserPulseSpec, PulsePair
from tipemission.scans import IntegrationParams, integrate_pair
from tipemission.tip import TipConfig

PHOTON = photon_energy(810e-9)
PULSE = LaserPulseSpec(6e8, 810e-9, 50e-15)

WORKLOADS = {
    "pure n=4, one pulse": (PulsePair.single(PULSE), EmissionModel([MultiphotonChannel(4, 1.0)], photon_energy=PHOTON)),
    "n=2..4 + FN, 150 fs delay": (
        PulsePair(PULSE, PULSE, 150e-15),
        EmissionModel(
            [MultiphotonChannel(2, 1e-18), MultiphotonChannel(3, 1e-27), MultiphotonChannel(4, 1e-36)],
            [FowlerNordheimChannel(0, 1e-6), FowlerNordheimChannel(1, 1e-4)],
            TipConfig(voltage=-300),
            PHOTON,
        ),
    ),
}


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.strip().splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    params = IntegrationParams(64)
    backends = {"python": kernels.python_kernel}
    if kernels.compiled_kernel is not None:
        backends["compiled"] = kernels.compiled_kernel
    else:
        print("compiled kernel not built; timing the Python kernel only")
    print(f"{'workload':<28}" + "".join(f"{b:>14}" for b in backends) + f"{'speedup':>10}")
    for name, (pair, model) in WORKLOADS.items():
        t = {b: best_of(lambda k=k: integrate_pair(pair, model, params, want_ac=True, kernel=k), args.repeat) for b, k in backends.items()}
        row = f"{name:<28}" + "".join(f"{t[b] * 1e3:>11.3f} ms" for b in backends)
        if "compiled" in t:
            row += f"{t['python'] / t['compiled']:>9.1f}x"
        print(row)
    if "compiled" in backends:
        pair, model = WORKLOADS["n=2..4 + FN, 150 fs delay"]
        a = integrate_pair(pair, model, params, kernel=backends["python"])[0]
        b = integrate_pair(pair, model, params, kernel=backends["compiled"])[0]
        print(f"relative difference between backends: {abs(a / b - 1):.1e}")


if __name__ == "__main__":
    np.seterr(all="ignore")
    main()
