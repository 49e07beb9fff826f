"""Time the numba kernels against the pure-numpy fallback.

The backend is fixed at import time from MEROKIT_BACKEND, so this
script re-executes itself once per backend in a subprocess and merges
the timings into one table:

    python3 benchmarks/bench_backends.py
    python3 benchmarks/bench_backends.py --repeat 9 --json

Workloads mirror the package's real hot paths: Horner evaluation on a
sample grid, the truncated Cauchy product, the series-exponential
recurrence, and the min-modulus scan of the convolution check.
"""
import argparse
import json
import os
import subprocess
import sys
import time


def _workloads():
    import numpy as np

    rng = np.random.default_rng(42)
    c = rng.normal(size=256) + 1j * rng.normal(size=256)
    zs = 0.9 * np.exp(2j * np.pi * rng.random(3600))
    a = rng.normal(size=512) + 1j * rng.normal(size=512)
    b = rng.normal(size=512) + 1j * rng.normal(size=512)
    e = np.zeros(2048, dtype=complex)
    e[1:] = (rng.normal(size=2047) + 1j * rng.normal(size=2047)) / np.arange(1, 2048) ** 2
    u = rng.normal(size=3600) + 1j * rng.normal(size=3600)
    v = rng.normal(size=3600) + 1j * rng.normal(size=3600)
    sigmas = np.exp(2j * np.pi * np.arange(1, 361) / 361)

    from merokit import _backend as bk

    return bk, [
        ("polyval (256 coeffs x 3600 pts)", lambda: bk.polyval(c, zs)),
        ("cauchy_product (512 x 512)", lambda: bk.cauchy_product(a, b)),
        ("exp_recurrence (2048 terms)", lambda: bk.exp_recurrence(e)),
        ("min_abs_combo (3600 x 360)", lambda: bk.min_abs_combo(u, v, 0.8, sigmas)),
    ]


def run_child(repeat: int) -> None:
    bk, work = _workloads()
    out = {"backend": bk.backend_name(), "timings": {}}
    for name, fn in work:
        fn()  # warmup; compiles the jitted path on first call
        best = min(_timed(fn) for _ in range(repeat))
        out["timings"][name] = best
    print(json.dumps(out))


def _timed(fn) -> float:
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=7, help="timed runs per kernel (best-of)")
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    ap.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()
    if args.child:
        run_child(args.repeat)
        return 0

    results = {}
    for backend in ("numpy", "numba"):
        env = dict(os.environ, MEROKIT_BACKEND=backend)
        proc = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--child",
             "--repeat", str(args.repeat)],
            env=env, capture_output=True, text=True,
        )
        if proc.returncode != 0:
            msg = proc.stderr.strip().splitlines()
            print(f"backend {backend} unavailable: {msg[-1] if msg else 'unknown error'}")
            continue
        payload = json.loads(proc.stdout)
        results[payload["backend"]] = payload["timings"]

    if args.json:
        print(json.dumps(results, indent=2, sort_keys=True))
        return 0
    if "numpy" not in results:
        print("no results")
        return 1
    names = list(next(iter(results.values())).keys())
    wid = max(len(n) for n in names)
    have_numba = "numba" in results
    header = f"{'kernel':<{wid}}  {'numpy':>10}"
    if have_numba:
        header += f"  {'numba':>10}  {'speedup':>8}"
    print(header)
    for n in names:
        t_np = results["numpy"][n]
        row = f"{n:<{wid}}  {t_np * 1e3:>8.3f}ms"
        if have_numba:
            t_nb = results["numba"][n]
            row += f"  {t_nb * 1e3:>8.3f}ms  {t_np / t_nb:>7.1f}x"
        print(row)
    return 0


if __name__ == "__main__":
    sys.exit(main())
