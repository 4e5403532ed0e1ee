"""Compare the numba and pure-numpy kernel backends on the fidelity routes.

The backend is fixed at import time, so each one runs the same sweep in its own
interpreter (``QFIDELITY_DISABLE_NUMBA`` set or not) and reports CSV on stdout.
Numba compile time is paid during warmup and is not in the timings.

    python3 benchmarks/bench_backends.py --k-max 7 --runs-base 50
"""

import argparse
import os
import subprocess
import sys

from qfidelity.bench import BenchConfig, bench_sweep, emit_csv, parse_csv


def worker(args):
    cfg = BenchConfig(k_min=args.k_min, k_max=args.k_max, runs_base=args.runs_base,
                      seed=args.seed)
    sys.stdout.buffer.write(emit_csv(bench_sweep(cfg)))


def run_backend(disable_numba, argv):
    env = dict(os.environ)
    env["QFIDELITY_DISABLE_NUMBA"] = "1" if disable_numba else "0"
    out = subprocess.run([sys.executable, __file__, "--worker", *argv], env=env,
                         check=True, capture_output=True)
    return parse_csv(out.stdout)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--k-min", type=int, default=1)
    p.add_argument("--k-max", type=int, default=7)
    p.add_argument("--runs-base", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = p.parse_args(argv)
    if args.worker:
        return worker(args)

    fwd = [f"--k-min={args.k_min}", f"--k-max={args.k_max}",
           f"--runs-base={args.runs_base}", f"--seed={args.seed}"]
    jit = run_backend(False, fwd)
    ref = run_backend(True, fwd)
    print(f"{'k':>2} {'method':<16} {'runs':>6} {'numba_s':>11} {'numpy_s':>11} {'speedup':>8}")
    for c in jit.cells:
        r = ref.cell(c.k, c.method)
        print(f"{c.k:>2} {c.method:<16} {c.runs:>6} {c.mean_s:>11.4e} {r.mean_s:>11.4e} "
              f"{r.mean_s / c.mean_s:>8.2f}")


if __name__ == "__main__":
    main()
