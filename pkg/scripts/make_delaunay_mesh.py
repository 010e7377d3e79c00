"""Generate the irregular Delaunay test mesh stored in tests/data.

Boundary nodes are spaced uniformly on the unit square, interior nodes are
jittered grid points, and scipy's Delaunay triangulation connects them.
Run once; the output is committed so tests do not depend on scipy.
"""

import argparse
from pathlib import Path

import numpy as np
from scipy.spatial import Delaunay

from crenrich.meshkit import TriMesh, write_triangle_mesh


def delaunay_unit_square(m: int, seed: int) -> TriMesh:
    rng = np.random.default_rng(seed)
    s = np.linspace(0.0, 1.0, m + 1)
    edge = np.concatenate([
        np.c_[s[:-1], np.zeros(m)],
        np.c_[np.ones(m), s[:-1]],
        np.c_[s[:0:-1], np.ones(m)],
        np.c_[np.zeros(m), s[:0:-1]],
    ])
    g = (np.arange(1, m) / m)
    gx, gy = np.meshgrid(g, g)
    inner = np.c_[gx.ravel(), gy.ravel()] + rng.uniform(-0.3, 0.3, size=(gx.size, 2)) / m
    pts = np.vstack([edge, inner])
    tri = Delaunay(pts).simplices
    # orient counter-clockwise
    a, b, c = (pts[tri[:, i]] for i in range(3))
    cw = (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (c[:, 0] - a[:, 0]) * (b[:, 1] - a[:, 1]) < 0
    tri[cw] = tri[cw][:, [0, 2, 1]]
    return TriMesh(pts, tri)


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--m", type=int, default=12)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--out", type=Path, default=Path(__file__).parents[1] / "tests" / "data" / "delaunay")
    args = ap.parse_args()
    mesh = delaunay_unit_square(args.m, args.seed)
    node, ele = write_triangle_mesh(mesh, args.out)
    print(f"wrote {node} and {ele}: {len(mesh.vertices)} nodes, {mesh.N} triangles")
