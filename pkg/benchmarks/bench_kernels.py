"""Compare the numba kernels against the numpy fallback.

Usage::

    python3 benchmarks/bench_kernels.py [--repeats 3] [--csv timings.csv]

Each case is run once untimed (JIT warm-up), then timed ``repeats`` times per
backend; the two backends must agree to 1e-12 relative.
"""

import argparse
import csv
import sys
import time

import numpy as np

from psidolab import _kernels
from psidolab._accel import HAVE_NUMBA
from psidolab.grid import GridSpec, SampledFunction, phase_tag
from psidolab.kato import _node_indices
from psidolab.quantize import kernel_from_symbol
from psidolab.symclass import random_symbol


def _twisted_case(N):
    g = GridSpec(1, N, float(np.sqrt(N * np.pi / 2)))
    rng = np.random.default_rng(0)
    f = rng.standard_normal(N * N) + 1j * rng.standard_normal(N * N)
    h = rng.standard_normal(N * N) + 1j * rng.standard_normal(N * N)
    w = SampledFunction(phase_tag(), g, f.reshape(N, N)).weight
    return lambda backend: _kernels.lattice_convolution(f, h, N, 2, w, True, backend=backend)


def _kato_case(N):
    g = GridSpec(1, N, float(np.sqrt(N * np.pi / 2)))
    G = kernel_from_symbol(random_symbol(1, 0.5, 1.0, g), 0.0).matrix
    coef = np.random.default_rng(2).standard_normal((N, N)).astype(complex)
    shift, diff = _node_indices(g)
    return lambda backend: _kernels.kato_accumulate(coef, G, shift, diff, backend=backend)


CASES = [
    ("twisted_convolution", _twisted_case, (8, 12, 16)),
    ("kato_accumulate", _kato_case, (32, 48, 64)),
]


def _time(fn, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--csv", default=None, help="optional output path for the timing table")
    args = ap.parse_args(argv)
    if not HAVE_NUMBA:
        print("numba unavailable or disabled; timing the numpy fallback only")
    backends = ["numpy", "numba"] if HAVE_NUMBA else ["numpy"]
    rows = []
    for name, build, sizes in CASES:
        for N in sizes:
            run = build(N)
            ref = run("numpy")
            times = {}
            for b in backends:
                out = run(b)
                err = np.abs(out - ref).max() / max(np.abs(ref).max(), 1e-300)
                if err > 1e-12:
                    print(f"{name} N={N}: backends disagree ({err:.2e})", file=sys.stderr)
                    return 1
                times[b] = _time(lambda: run(b), args.repeats)
            speedup = times["numpy"] / times["numba"] if "numba" in times else float("nan")
            rows.append({"case": name, "N": N, **{f"{b}_s": times[b] for b in backends}, "speedup": speedup})
            print(f"{name:22s} N={N:3d}  " + "  ".join(f"{b}={times[b]:.4f}s" for b in backends)
                  + (f"  speedup={speedup:.1f}x" if "numba" in times else ""))
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
