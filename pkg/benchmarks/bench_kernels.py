"""Time each numeric kernel on both backends and report the speedup.

Workload sizes default to the scale of a mid-size node-classification
graph (thousands of nodes); ``--quick`` shrinks them for a smoke run.

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --quick --repeats 3
"""

import argparse
import sys
import time

import numpy as np

from gnnscope._kernels import _pyfallback

try:
    from gnnscope._kernels import _native
except ImportError:
    print(
        "compiled backend not built; run `pip install -e . --no-build-isolation`",
        file=sys.stderr,
    )
    raise SystemExit(1)


def random_csr(rng, n, avg_degree):
    m = n * avg_degree // 2
    u = rng.integers(0, n, m)
    v = rng.integers(0, n, m)
    keep = u != v
    edges = {(min(a, b), max(a, b)) for a, b in zip(u[keep].tolist(), v[keep].tolist())}
    nbr = [[] for _ in range(n)]
    for a, b in edges:
        nbr[a].append(b)
        nbr[b].append(a)
    indptr = np.zeros(n + 1, dtype=np.int64)
    flat = []
    for i in range(n):
        ns = sorted(nbr[i])
        flat += ns
        indptr[i + 1] = indptr[i] + len(ns)
    return indptr, np.array(flat, dtype=np.int64)


def workloads(quick):
    rng = np.random.default_rng(0)
    scale = 4 if quick else 1

    n = 2000 // scale
    cat = rng.integers(0, 8, (n, 4))
    cont = rng.random((n, 8))
    yield "pairwise_mixed_sq", (cat, cont)

    n = 7650 // scale
    indptr, indices = random_csr(rng, n, 8)
    sources = rng.integers(0, n, 20)
    yield "bfs_depths", (indptr, indices, sources)

    n = 1500 // scale
    Y = rng.normal(0.0, 1e-2, (n, 2))
    P = rng.random((n, n))
    P = P + P.T
    np.fill_diagonal(P, 0.0)
    P /= P.sum()
    yield "tsne_forces", (Y, P)

    n = 800 // scale
    pos = rng.normal(0.0, 1.0, (n, 2))
    radii = rng.uniform(0.01, 0.05, n)
    yield "resolve_collisions", (pos, radii, 0.005)

    n = 2000 // scale
    indptr, indices = random_csr(rng, n, 6)
    pos = rng.normal(0.0, 1.0, (n, 2))
    yield "layout_forces", (pos, indptr, indices, 0.3)

    n = 900 // scale
    A = rng.random((n, n))
    D = (A + A.T) / 2.0
    np.fill_diagonal(D, 0.0)
    yield "complete_linkage", (D,)


def best_time(fn, args, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--quick", action="store_true", help="smaller workloads")
    parser.add_argument("--repeats", type=int, default=5, help="best-of repeats")
    args = parser.parse_args(argv)

    print(f"{'kernel':<22}{'python':>12}{'native':>12}{'speedup':>10}")
    for name, payload in workloads(args.quick):
        t_py = best_time(getattr(_pyfallback, name), payload, args.repeats)
        t_nat = best_time(getattr(_native, name), payload, args.repeats)
        print(
            f"{name:<22}{t_py * 1e3:>10.2f}ms{t_nat * 1e3:>10.2f}ms"
            f"{t_py / t_nat:>9.1f}x"
        )


if __name__ == "__main__":
    main()
