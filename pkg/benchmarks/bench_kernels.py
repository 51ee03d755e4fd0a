"""Compare the numpy and numba kernel backends on the workloads the library runs.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each row times one kernel on one input with both backends (numba timings
exclude the first, compiling call) and checks that the results agree.
"""

import argparse
import timeit

import numpy as np

from oredim import _kernels as K
from oredim.fixtures import load_bundled
from oredim.rings import truncated_poly, zmod


def workloads():
    out = []
    for ring in (zmod(64), truncated_poly(2, 6), truncated_poly(3, 4)):
        out.append((f"assoc {ring.family} |R|={ring.size}", "assoc_violations", (ring.mul,)))
        out.append((f"distrib {ring.family} |R|={ring.size}", "distrib_violations", (ring.add, ring.mul)))
    for inst in load_bundled():
        T = inst.truncation(2)
        for m in (1, T.size // 2, T.size - 1):
            seed = np.zeros(T.size, dtype=np.bool_)
            seed[[T.zero, m]] = True
            out.append((f"closure {inst.id}@2 seed={m}", "closure", (seed, T.add, T.actions)))
        a = np.zeros(T.size, dtype=np.bool_)
        a[::3] = True
        b = np.zeros(T.size, dtype=np.bool_)
        b[::5] = True
        out.append((f"join {inst.id}@2", "join", (a, b, T.add)))
    return out


def same(x, y):
    if isinstance(x, np.ndarray):
        return np.array_equal(x, y)
    return x == y


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=20)
    args = p.parse_args(argv)
    if K.numba_backend is None:
        raise SystemExit("numba is not importable; nothing to compare")
    rows = []
    for name, kernel, inputs in workloads():
        fn_np = getattr(K.numpy_backend, kernel)
        fn_nb = getattr(K.numba_backend, kernel)
        res_np, res_nb = fn_np(*inputs), fn_nb(*inputs)   # also compiles
        if not same(res_np, res_nb):
            raise SystemExit(f"backends disagree on {name}")
        t_np = min(timeit.repeat(lambda: fn_np(*inputs), number=1, repeat=args.repeat))
        t_nb = min(timeit.repeat(lambda: fn_nb(*inputs), number=1, repeat=args.repeat))
        rows.append((name, t_np * 1e3, t_nb * 1e3, t_np / t_nb if t_nb else float("inf")))
    w = max(len(r[0]) for r in rows)
    print(f"{'workload'.ljust(w)}  {'numpy ms':>9}  {'numba ms':>9}  {'speedup':>7}")
    for name, a, b, s in rows:
        print(f"{name.ljust(w)}  {a:9.3f}  {b:9.3f}  {s:7.1f}")


if __name__ == "__main__":
    main()
