#!/usr/bin/env python3
"""Benchmark the compiled kernel against the pure-Python fallback.

Times the flat-representation hot paths (tent composition chains, exact
sup distance, dense evaluation, pointwise algebra) on seeded inputs.
Both kernel modules are imported side by side, so a single process
measures both; each workload's results are checked identical across
backends before the timing is reported.

Usage:
    python3 benchmarks/bench_kernel.py [--seed S] [--repeat N]
"""

import argparse
import random
import time

from knaster_lab import _kernel_py as kpy
from knaster_lab.randgen import rand_homeo
from knaster_lab.tents import tent

try:
    from knaster_lab import _kernel_c as kc
except ImportError:
    kc = None


def build_inputs(seed):
    rng = random.Random(seed)
    h = rand_homeo(rng, max_interior=24)._kbps
    g = rand_homeo(rng, max_interior=24)._kbps
    tents = [tent(d)._kbps for d in (2, 3, 2, 2)]
    big_f = h
    big_g = g
    for t in tents:
        big_f = kpy.compose(t, big_f)
        big_g = kpy.compose(t, big_g)
    grid = [(n, 2003) for n in range(2004)]
    return {
        "h": h,
        "tents": tents,
        "big_f": big_f,
        "big_g": big_g,
        "grid": grid,
    }


def workloads(data):
    h = data["h"]
    tents = data["tents"]
    big_f = data["big_f"]
    big_g = data["big_g"]
    grid = data["grid"]

    def chain(k):
        out = h
        for t in tents:
            out = k.compose(t, out)
        return out

    return [
        ("compose: 4-level tent chain", chain),
        ("sup_diff: %d-point merge" % len(kpy.merged_xs(big_f, big_g)),
         lambda k: k.sup_diff(big_f, big_g)),
        ("eval_sorted: %d points" % len(grid),
         lambda k: k.eval_sorted(big_f, grid)),
        ("pl_sub + pl_max",
         lambda k: k.pl_max(k.pl_sub(big_f, big_g), k.pl_sub(big_g, big_f))),
    ]


def best_of(fn, kernel, repeat):
    best = None
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(kernel)
        dt = time.perf_counter() - t0
        if best is None or dt < best:
            best = dt
    return best, result


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    if kc is None:
        raise SystemExit(
            "compiled kernel not built; reinstall without KNASTER_LAB_PURE=1"
        )

    data = build_inputs(args.seed)
    print(f"kernel benchmark (seed {args.seed}, best of {args.repeat})\n")
    print(f"{'workload':<34} {'python':>10} {'compiled':>10} {'speedup':>8}")
    ratios = []
    for name, fn in workloads(data):
        t_py, r_py = best_of(fn, kpy, args.repeat)
        t_c, r_c = best_of(fn, kc, args.repeat)
        if r_py != r_c:
            raise SystemExit(f"backend mismatch on {name!r}")
        ratios.append(t_py / t_c)
        print(
            f"{name:<34} {t_py * 1e3:>8.2f}ms {t_c * 1e3:>8.2f}ms"
            f" {t_py / t_c:>7.2f}x"
        )
    gmean = 1.0
    for r in ratios:
        gmean *= r
    gmean **= 1.0 / len(ratios)
    print(f"\ngeometric mean speedup: {gmean:.2f}x")


if __name__ == "__main__":
    main()
