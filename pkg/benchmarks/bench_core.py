"""Time the compiled core against the pure-Python fallback.

    python benchmarks/bench_core.py [--width 16] [--height 48] [--repeat 3]

Both backends run the same spatial DBS and phase DBS workloads through the
public entry points; the outputs are checked for bit equality.
"""

import argparse
import time

import numpy as np

from binfringe import _backend, _core_py
from binfringe.halftone import DbsConfig, spatial_dbs
from binfringe.optics import gaussian_kernel
from binfringe.patterns import PatternSpec, make_patterns
from binfringe.phase_dbs import OptimizeConfig, optimize

try:
    from binfringe import _core
except ImportError:
    _core = None


def use(mod):
    _backend.dbs_frame_pass = mod.dbs_frame_pass
    _backend.phase_pixel_pass = mod.phase_pixel_pass


def bench(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--width", type=int, default=16)
    ap.add_argument("--height", type=int, default=48)
    ap.add_argument("--passes", type=int, default=3)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    if _core is None:
        raise SystemExit("compiled core not built; run `pip install -e . --no-build-isolation`")
    k = gaussian_kernel(15, 2.0)
    contone = make_patterns(PatternSpec(8, args.width, args.height))
    work = {
        "spatial DBS": lambda: spatial_dbs(contone, DbsConfig(k, args.passes), seed=1)[0].frames,
        "phase DBS": lambda: optimize(contone, OptimizeConfig(k, "all", max_passes=args.passes,
                                                              seed=1))[0].frames,
    }
    saved = (_backend.dbs_frame_pass, _backend.phase_pixel_pass)
    print(f"grid {args.width}x{args.height}, 8 frames, {args.passes} passes, best of {args.repeat}")
    print(f"{'workload':<12} {'cython s':>10} {'python s':>10} {'speedup':>8}  same")
    try:
        for name, fn in work.items():
            use(_core)
            tc, bc = bench(fn, args.repeat)
            use(_core_py)
            tp, bp = bench(fn, args.repeat)
            print(f"{name:<12} {tc:10.4f} {tp:10.4f} {tp / tc:8.1f}  {np.array_equal(bc, bp)}")
    finally:
        _backend.dbs_frame_pass, _backend.phase_pixel_pass = saved


if __name__ == "__main__":
    main()
