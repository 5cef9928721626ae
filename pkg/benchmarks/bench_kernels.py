"""Time the compiled and numpy kernel backends on the same workloads.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--threads 1]

Each workload runs through the public API with the kernel functions swapped,
so the numbers include the same chunking and bookkeeping a real render pays.
"""
import argparse
import time

import numpy as np

from bcjulia import kernels
from bcjulia.dynamics import IterParams, component_orbits
from bcjulia.poly import ComplexPoly, parse_bicomplex, quad
from bcjulia.render import RenderOptions, SliceSpec, classify_slice, raymarch_image


def workloads(threads):
    rng = np.random.default_rng(0)
    z = rng.uniform(-2, 2, 250_000) + 1j * rng.uniform(-2, 2, 250_000)
    rabbit = ComplexPoly([-0.123 + 0.745j, 0, 1])
    fig4 = quad(parse_bicomplex("e1e2(-0.123,0.745;-0.391,-0.587)"))
    params = IterParams(max_iter=500)
    return {
        "escape_time 250k points": lambda: component_orbits(rabbit, z, params, threads),
        "voxel slice 49^3": lambda: classify_slice(fig4, SliceSpec.j0((-1.5, 1.5), 49), params, threads),
        "ray march 64^2": lambda: raymarch_image(fig4, SliceSpec.j0((-1.5, 1.5), 64),
                                                 RenderOptions(direction=(0.4, 0.3, 1.0), up=(1, 0, 0)),
                                                 IterParams(max_iter=200), threads),
    }


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    backends = kernels.available_backends()
    results = {}
    saved = kernels.escape_time, kernels.raymarch
    try:
        for name in backends:
            mod = kernels.load_backend(name)
            kernels.escape_time, kernels.raymarch = mod.escape_time, mod.raymarch
            for label, fn in workloads(args.threads).items():
                results[label, name] = best_of(fn, args.repeat)
    finally:
        kernels.escape_time, kernels.raymarch = saved

    print(f"{'workload':<26}" + "".join(f"{b:>12}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for label in workloads(args.threads):
        row = [results[label, b] for b in backends]
        line = f"{label:<26}" + "".join(f"{t:>11.3f}s" for t in row)
        if len(row) > 1:
            line += f"{row[-1] / row[0]:>11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
