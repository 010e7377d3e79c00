"""Compare the numba and numpy L1-error kernels.

Times ``abs_error_sums`` on the quadrature data of a uniform grid and the
end-to-end ``l1_error`` call under each backend (the backend of the
end-to-end run is chosen by ``CRENRICH_DISABLE_NUMBA`` in a subprocess).

    python3 benchmarks/bench_kernels.py --grid 99 --repeat 5
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from crenrich import _kernels
from crenrich.experiments import renka
from crenrich.meshkit import uniform_grid_mesh
from crenrich.operators import Scheme, interpolate_global
from crenrich.quadrature import TriangleRuleConfig, triangle_rule

END_TO_END = """
import time
from crenrich import *
from crenrich import _kernels
m = uniform_grid_mesh({n})
s = Scheme("c-alpha", 1.0)
l1_error(uniform_grid_mesh(2), s, renka(1))  # compile / warm caches
t = time.perf_counter()
for _ in range({repeat}):
    l1_error(m, s, renka(1))
print(_kernels.BACKEND, (time.perf_counter() - t) / {repeat})
"""


def kernel_inputs(n, cfg):
    mesh = uniform_grid_mesh(n)
    f = renka(1)
    coeffs = np.ascontiguousarray(interpolate_global(mesh, Scheme("c-alpha", 1.0), f).af3)
    lam, w = triangle_rule(cfg)
    pts = np.einsum("qa,nab->nqb", lam, mesh.corners)
    fv = np.ascontiguousarray(f(pts[..., 0], pts[..., 1]))
    return coeffs, np.ascontiguousarray(lam), np.ascontiguousarray(w), fv


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid", type=int, default=99)
    ap.add_argument("--subdiv", type=int, default=2)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    cfg = TriangleRuleConfig(8, args.subdiv)
    coeffs, lam, w, fv = kernel_inputs(args.grid, cfg)
    print(f"grid {args.grid}: {len(coeffs)} triangles x {len(w)} points")

    kernels = {"numpy": _kernels.abs_error_sums_numpy}
    if _kernels.abs_error_sums_numba is not None:
        kernels["numba"] = _kernels.abs_error_sums_numba
        kernels["numba"](coeffs[:2], lam, w, fv[:2])  # compile
    ref = kernels["numpy"](coeffs, lam, w, fv)
    for name, fn in kernels.items():
        t = min(timeit.repeat(lambda: fn(coeffs, lam, w, fv), number=1, repeat=args.repeat))
        diff = np.max(np.abs(fn(coeffs, lam, w, fv) - ref) / np.abs(ref))
        print(f"  kernel  {name:<6} {1e3 * t:9.2f} ms   max rel diff vs numpy {diff:.1e}")

    for flag in ("1", "0"):
        env = dict(os.environ, CRENRICH_DISABLE_NUMBA=flag)
        code = END_TO_END.format(n=args.grid, repeat=args.repeat)
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        backend, secs = out.stdout.split()
        print(f"  l1_error {backend:<6} {1e3 * float(secs):9.2f} ms")


if __name__ == "__main__":
    main()
