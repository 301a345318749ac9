"""Compiled versus pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--n 12] [--mib 4] [--repeat 3]

Times the C3 pair scan and phi search on a construction II array and
packet XOR on MiB-sized buffers, once per available backend.
"""

from __future__ import annotations

import argparse
import os
import timeit

from d2dpda import _kernels_py
from d2dpda.constructions import construct_II
from d2dpda.designs import grid_mcrd

try:
    from d2dpda import _kernels as _compiled
except ImportError:
    _compiled = None


def bench(backend, grid, n_symbols, buf_bytes, repeat):
    dst = bytearray(os.urandom(buf_bytes))
    src = os.urandom(buf_bytes)
    cases = {
        "pair_violations": lambda: backend.pair_violations(grid, n_symbols),
        "phi_candidates": lambda: backend.phi_candidates(grid, n_symbols),
        "xor_into": lambda: backend.xor_into(dst, src),
    }
    return {name: min(timeit.repeat(fn, number=1, repeat=repeat)) for name, fn in cases.items()}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=12, help="grid size for construction II")
    ap.add_argument("--mib", type=int, default=4, help="XOR buffer size in MiB")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    arr = construct_II(grid_mcrd(args.n)).array
    grid, order = arr.encoded()
    print(f"array {arr.F}x{arr.K}, S={len(order)}; xor buffer {args.mib} MiB")

    backends = [("python", _kernels_py)]
    if _compiled is not None:
        backends.insert(0, ("cython", _compiled))
    else:
        print("compiled kernels not built; timing the fallback only")
    results = {name: bench(mod, grid, len(order), args.mib << 20, args.repeat) for name, mod in backends}

    print(f"{'kernel':<16}" + "".join(f"{name:>12}" for name, _ in backends) + "   speedup")
    for kernel in results["python"]:
        times = [results[name][kernel] for name, _ in backends]
        speed = f"{times[-1] / times[0]:8.1f}x" if len(times) == 2 else ""
        print(f"{kernel:<16}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times) + "  " + speed)


if __name__ == "__main__":
    main()
