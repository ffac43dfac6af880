"""Time the numba and numpy kernels on the exhaustive pair sweep.

    python benchmarks/bench_sweep.py --max-len 10 --repeat 3 --workers 1 4

Both backends must produce identical reports; the script exits 1 if not.
"""

from __future__ import annotations

import argparse
import statistics
import sys
import time

from ctrf import _accel, kernels
from ctrf.counterexample import verify_contraction


def best_of(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return out, min(times), statistics.median(times)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-len", type=int, default=10)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--workers", type=int, nargs="+", default=[1, 4])
    args = ap.parse_args(argv)

    backends = [False] + ([True] if _accel.HAVE_NUMBA else [])
    if _accel.HAVE_NUMBA:
        # compile (or load from cache) outside the timed region
        verify_contraction(2, use_numba=True)
        kernels.p0_table(2, use_numba=True)

    print(f"max_len={args.max_len}  pairs={((1 << (args.max_len + 1)) - 1) * ((1 << (args.max_len + 1)) - 2) // 2}")
    print(f"{'kernel':<10}{'backend':<8}{'workers':>8}{'best s':>10}{'median s':>10}")
    reports = {}
    for use_numba in backends:
        name = "numba" if use_numba else "numpy"
        _, best, med = best_of(lambda: kernels.p0_table(args.max_len + 1, use_numba), args.repeat)
        print(f"{'p0_table':<10}{name:<8}{'-':>8}{best:>10.3f}{med:>10.3f}")
        for w in args.workers:
            rep, best, med = best_of(
                lambda: verify_contraction(args.max_len, workers=w, use_numba=use_numba), args.repeat
            )
            reports[(name, w)] = rep.dumps()
            print(f"{'sweep':<10}{name:<8}{w:>8}{best:>10.3f}{med:>10.3f}")

    identical = len(set(reports.values())) == 1
    print("reports identical across backends and worker counts:", identical)
    return 0 if identical else 1


if __name__ == "__main__":
    sys.exit(main())
