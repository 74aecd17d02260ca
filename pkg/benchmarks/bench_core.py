"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_core.py [--n 128] [--grid 128] [--repeat 5] [--json]
"""

import argparse
import json
import sys
import timeit

import numpy as np

from circlaw import backend


def _matrix(n, seed=0):
    rng = np.random.default_rng(seed)
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2 * n)


def cases(n, grid):
    A = _matrix(n)
    H = A.copy()
    backend.get("python").hessenberg_inplace(H)
    zeros = np.linalg.eigvals(A)
    g = np.linspace(-1.2, 1.2, grid)
    X, Y = np.meshgrid(g, g)
    x, y = np.ascontiguousarray(X.ravel()), np.ascontiguousarray(Y.ravel())
    w = np.ones_like(x)
    out_grid = np.empty(len(x))
    out_eigs = np.zeros(n, dtype=complex)

    def hess(core):
        M = A.copy()
        core.hessenberg_inplace(M)

    def qr(core):
        core.hessenberg_qr(H.copy(), 1e-12, 30 * n, out_eigs)

    def charpoly(core):
        core.log_abs_charpoly(x, y, zeros, out_grid)

    def pairing(core):
        core.log_potential_pairing(x, y, w, zeros)

    return {"hessenberg": hess, "shifted QR": qr, "log|p_n| grid": charpoly,
            "pairing": pairing}


def run(n, grid, repeat):
    names = backend.available()
    rows = []
    for label, fn in cases(n, grid).items():
        row = {"kernel": label}
        for name in names:
            core = backend.get(name)
            row[name] = min(timeit.repeat(lambda: fn(core), number=1, repeat=repeat))
        if "cython" in row:
            row["speedup"] = row["python"] / row["cython"]
        rows.append(row)
    return names, rows


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=128, help="matrix size / number of zeros")
    p.add_argument("--grid", type=int, default=128, help="grid points per side")
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--json", action="store_true")
    args = p.parse_args(argv)
    names, rows = run(args.n, args.grid, args.repeat)
    if args.json:
        json.dump({"n": args.n, "grid": args.grid, "rows": rows}, sys.stdout, indent=2)
        print()
        return 0
    if "cython" not in names:
        print("compiled core not built; timing the fallback only")
    print(f"n = {args.n}, grid = {args.grid}x{args.grid}, best of {args.repeat}")
    head = f"{'kernel':<16}" + "".join(f"{nm:>12}" for nm in names)
    print(head + (f"{'speedup':>10}" if "cython" in names else ""))
    for r in rows:
        line = f"{r['kernel']:<16}" + "".join(f"{r[nm] * 1e3:>10.2f}ms" for nm in names)
        if "speedup" in r:
            line += f"{r['speedup']:>9.1f}x"
        print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
