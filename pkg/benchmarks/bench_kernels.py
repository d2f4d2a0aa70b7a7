"""Compare the compiled and pure-Python elimination kernels.

    python benchmarks/bench_kernels.py [--repeat N] [--seed S]

Each row times det, rank and rref on random integer matrices of a given size
and entry bit length, once per backend, and checks that results agree.
"""

import argparse
import random
import timeit

from sdquiver.exactla import _kernels_py
from sdquiver.exactla import kernels

CASES = [(8, 4), (16, 4), (24, 8), (32, 8), (48, 6), (32, 40)]


def _matrix(rng, n, bits):
    hi = (1 << bits) - 1
    return [[rng.randint(-hi, hi) for _ in range(n)] for _ in range(n)]


def _time(fn, a, repeat):
    return min(timeit.repeat(lambda: fn(a), number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    try:
        from sdquiver.exactla import _ckernels as ck
    except ImportError:
        print(f"compiled kernels not built (active backend: {kernels.BACKEND}); nothing to compare")
        return 1

    rng = random.Random(args.seed)
    print(f"{'n':>4} {'bits':>5} {'op':>5} {'python ms':>10} {'cython ms':>10} {'speedup':>8}")
    for n, bits in CASES:
        a = _matrix(rng, n, bits)
        a[-1] = [x + y for x, y in zip(a[0], a[1])]  # rank deficient, so rref does real work
        for op in ("det", "rank", "rref"):
            py_fn, c_fn = getattr(_kernels_py, f"{op}_int"), getattr(ck, f"{op}_int")
            if py_fn(a) != c_fn(a):
                raise SystemExit(f"backends disagree on {op} for n={n} bits={bits}")
            tp, tc = _time(py_fn, a, args.repeat), _time(c_fn, a, args.repeat)
            print(f"{n:>4} {bits:>5} {op:>5} {tp * 1e3:>10.2f} {tc * 1e3:>10.2f} {tp / tc:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
