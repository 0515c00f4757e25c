"""Time the Eisner kernel on both backends.

    python3 benchmarks/bench_eisner.py [--sizes 10 25 50 100] [--repeat 20]

Prints one row per document length with the mean time per decode and the
speedup of the compiled kernel over the pure-Python one.
"""
import argparse
import sys
import timeit

import numpy as np

from discodep import kernels


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[10, 25, 50, 100])
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    backends = sorted(kernels.BACKENDS)
    if "compiled" not in backends:
        print("compiled kernel not built; timing the Python kernel only", file=sys.stderr)
    rng = np.random.default_rng(args.seed)
    print("n\t" + "\t".join(f"{b}_ms" for b in backends) + ("\tspeedup" if len(backends) > 1 else ""))
    for n in args.sizes:
        mats = [rng.normal(size=(n + 1, n + 1)) for _ in range(args.repeat)]
        times = {}
        for b in backends:
            fn = kernels.BACKENDS[b]
            results = [fn(s, True) for s in mats]  # warm-up, and a parity check below
            times[b] = timeit.timeit(lambda: [fn(s, True) for s in mats], number=1) / len(mats)
            times[b, "heads"] = [list(h) for h, _ in results]
        if len(backends) > 1 and times["compiled", "heads"] != times["python", "heads"]:
            raise SystemExit(f"backends disagree at n={n}")
        row = [str(n)] + [f"{1000 * times[b]:.3f}" for b in backends]
        if len(backends) > 1:
            row.append(f"{times['python'] / times['compiled']:.1f}x")
        print("\t".join(row))


if __name__ == "__main__":
    main()
