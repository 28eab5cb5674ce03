"""Time the compiled and numpy pathloss kernels on the same inputs.

    python benchmarks/bench_kernels.py [--points 20000] [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from lscran.kernels import _pykernels, load_backend


def cases(n_points: int, rng):
    phi = np.ascontiguousarray(rng.random((n_points, 2)) - 0.5)
    psi = np.ascontiguousarray(rng.random((max(1, int(n_points ** 0.5)), 2)) - 0.5)
    return [
        ("pathloss_sum a=4", "pathloss_sum", (phi, 0.01, 0.02, 4.0)),
        ("pathloss_sum a=3", "pathloss_sum", (phi, 0.01, 0.02, 3.0)),
        ("pathloss_sum a=3.5", "pathloss_sum", (phi, 0.01, 0.02, 3.5)),
        ("pair sums a=4,4", "pair_pathloss_sums", (phi, psi, 0.0, 0.0, 4.0, 4.0, 0.05)),
        ("pair sums a=3,3", "pair_pathloss_sums", (phi, psi, 0.0, 0.0, 3.0, 3.0, 0.05)),
        ("pair sums a=3,3.5", "pair_pathloss_sums", (phi, psi, 0.0, 0.0, 3.0, 3.5, 0.05)),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    try:
        compiled = load_backend("cython")
    except ImportError:
        print("compiled kernels not built; only the numpy backend is available")
        compiled = None

    rng = np.random.default_rng(0)
    print(f"{'case':22s} {'numpy ms':>10s} {'cython ms':>10s} {'speedup':>8s}")
    for name, fn, fargs in cases(args.points, rng):
        t_py = min(timeit.repeat(lambda: getattr(_pykernels, fn)(*fargs), number=1,
                                 repeat=args.repeat))
        if compiled is None:
            print(f"{name:22s} {t_py * 1e3:10.2f} {'-':>10s} {'-':>8s}")
            continue
        got, want = getattr(compiled, fn)(*fargs), getattr(_pykernels, fn)(*fargs)
        if not np.allclose(got, want, rtol=1e-10, atol=0.0):
            raise SystemExit(f"{name}: backends disagree ({got} vs {want})")
        t_c = min(timeit.repeat(lambda: getattr(compiled, fn)(*fargs), number=1,
                                repeat=args.repeat))
        print(f"{name:22s} {t_py * 1e3:10.2f} {t_c * 1e3:10.2f} {t_py / t_c:7.1f}x")


if __name__ == "__main__":
    main()
