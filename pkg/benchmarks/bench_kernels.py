"""Compare the compiled and pure-Python fuzzy kernels.

    python3 benchmarks/bench_kernels.py [--pairs 2000] [--repeat 5] [--out kernels.csv]

Prints one CSV row per (backend, workload) with the best-of-N wall time and
the speedup over the pure-Python backend.
"""

import argparse
import csv
import random
import string
import sys
import timeit

from disco import kernels


def workloads(pairs: int, seed: int):
    rng = random.Random(seed)

    def word(lo, hi):
        return "".join(rng.choices(string.ascii_lowercase + " ", k=rng.randint(lo, hi)))

    short = [(word(3, 12), word(3, 12)) for _ in range(pairs)]
    names = [(word(20, 40), word(20, 40)) for _ in range(pairs // 4)]
    # scoring one query against a registry-sized candidate list
    tokens = [word(4, 9) for _ in range(3)]
    weights = [1.0, 1.0, 0.9]
    fields = [(word(8, 30), word(8, 20)) for _ in range(pairs)]

    def lev_short(impl):
        for a, b in short:
            impl.levenshtein(a, b)

    def lev_names(impl):
        for a, b in names:
            impl.levenshtein(a, b)

    def score_list(impl):
        for f in fields:
            impl.best_score(tokens, weights, f)

    return {"levenshtein_short": lev_short, "levenshtein_names": lev_names, "best_score": score_list}


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--pairs", type=int, default=2000)
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="CSV file (default stdout)")
    args = p.parse_args(argv)

    backends = kernels.backends()
    if "cython" not in backends:
        print("compiled backend not built; only the Python fallback is timed", file=sys.stderr)
    rows = []
    for name, fn in workloads(args.pairs, args.seed).items():
        times = {b: min(timeit.repeat(lambda: fn(impl), number=1, repeat=args.repeat))
                 for b, impl in backends.items()}
        for b, t in times.items():
            rows.append([name, b, f"{t * 1000:.3f}", f"{times['python'] / t:.1f}"])

    fp = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.writer(fp, lineterminator="\n")
    w.writerow(["workload", "backend", "best_ms", "speedup_vs_python"])
    w.writerows(rows)
    if args.out:
        fp.close()


if __name__ == "__main__":
    main()
