"""Time the compiled error-moment kernel against the NumPy fallback.

    python3 benchmarks/bench_kernels.py [--rows 7] [--samples 131072] [--repeat 20]
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from secure_hda import _kernels_py

try:
    from secure_hda import _kernels
except ImportError:
    _kernels = None


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=7)
    ap.add_argument("--samples", type=int, default=1 << 17)
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(0)
    base = np.ascontiguousarray(rng.standard_normal((args.rows, args.samples)))
    coef = rng.standard_normal(args.rows)

    ref = _kernels_py.linear_error_moments(base, coef)
    backends = [("python", _kernels_py.linear_error_moments)]
    if _kernels is None:
        print("compiled extension not built; timing the fallback only")
    else:
        got = _kernels.linear_error_moments(base, coef)
        np.testing.assert_allclose(got, ref, rtol=1e-12)
        backends.append(("cython", _kernels.linear_error_moments))

    print(f"rows={args.rows} samples={args.samples} repeat={args.repeat}")
    timings = {}
    for name, fn in backends:
        t = min(timeit.repeat(lambda: fn(base, coef), number=1, repeat=args.repeat))
        timings[name] = t
        print(f"{name:>7}: {t * 1e3:8.3f} ms/chunk  {args.samples / t / 1e6:8.1f} Msamples/s")
    if "cython" in timings:
        print(f"speedup: {timings['python'] / timings['cython']:.2f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
