"""Triangle geometry, barycentric coordinates and triangulations.

Vertex numbering follows the cyclic convention used throughout the
package: edge ``j`` is the edge opposite vertex ``j`` and indices wrap
modulo 3, so the edge opposite vertex 1 runs from vertex 2 to vertex 3.
All public indices (vertex, edge, midpoint) are 1-based to match that
convention; array storage is 0-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .errors import DomainError, GeometryError, MeshParseError

#: relative threshold on |signed area| / (longest edge)^2
DEGENERACY_TOL = 1e-14
#: barycentric slack used by point location
LOCATE_TOL = 1e-12


class Point2D(NamedTuple):
    x: float
    y: float


class Barycentric(NamedTuple):
    l1: float
    l2: float
    l3: float


def _signed_area(a, b, c):
    return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))


@dataclass(frozen=True)
class Triangle2D:
    """A nondegenerate triangle with vertices ``v1, v2, v3``.

    ``area`` is signed: positive for counter-clockwise vertex order.
    """

    v1: Point2D
    v2: Point2D
    v3: Point2D
    area: float = field(init=False)

    def __post_init__(self):
        verts = []
        for v in (self.v1, self.v2, self.v3):
            p = Point2D(float(v[0]), float(v[1]))
            if not (math.isfinite(p.x) and math.isfinite(p.y)):
                raise GeometryError(f"non-finite vertex {tuple(v)}")
            verts.append(p)
        object.__setattr__(self, "v1", verts[0])
        object.__setattr__(self, "v2", verts[1])
        object.__setattr__(self, "v3", verts[2])
        area = _signed_area(*verts)
        longest = max(
            math.dist(verts[0], verts[1]),
            math.dist(verts[1], verts[2]),
            math.dist(verts[2], verts[0]),
        )
        if abs(area) <= DEGENERACY_TOL * longest**2:
            raise GeometryError(f"degenerate triangle {tuple(verts)} (area {area:g})")
        object.__setattr__(self, "area", area)

    @classmethod
    def from_array(cls, pts) -> "Triangle2D":
        pts = np.asarray(pts, dtype=float)
        return cls(Point2D(*pts[0]), Point2D(*pts[1]), Point2D(*pts[2]))

    @property
    def vertices(self) -> np.ndarray:
        return np.array([self.v1, self.v2, self.v3], dtype=float)

    def vertex(self, i: int) -> Point2D:
        """Vertex ``i`` with cyclic wrap (``vertex(4) == v1``)."""
        return (self.v1, self.v2, self.v3)[(i - 1) % 3]

    def edge(self, j: int) -> tuple[Point2D, Point2D]:
        """Endpoints of the edge opposite vertex ``j``."""
        return self.vertex(j + 1), self.vertex(j + 2)

    @property
    def diameter(self) -> float:
        return max(
            math.dist(self.v1, self.v2),
            math.dist(self.v2, self.v3),
            math.dist(self.v3, self.v1),
        )

    def barycentric(self, x, y) -> np.ndarray:
        """Barycentric coordinates at points ``(x, y)``; shape ``x.shape + (3,)``."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        (x1, y1), (x2, y2), (x3, y3) = self.v1, self.v2, self.v3
        two_a = 2.0 * self.area
        l1 = ((x2 - x) * (y3 - y) - (x3 - x) * (y2 - y)) / two_a
        l2 = ((x3 - x) * (y1 - y) - (x1 - x) * (y3 - y)) / two_a
        l3 = ((x1 - x) * (y2 - y) - (x2 - x) * (y1 - y)) / two_a
        return np.stack([l1, l2, l3], axis=-1)

    def point_at(self, lam) -> np.ndarray:
        """Cartesian point(s) with barycentric coordinates ``lam`` (``(..., 3)``)."""
        return np.asarray(lam, dtype=float) @ self.vertices


def barycentric_at(tri: Triangle2D, p) -> Barycentric:
    """Barycentric coordinates of the point ``p`` with respect to ``tri``.

    Examples
    --------
    >>> t = Triangle2D(Point2D(0, 0), Point2D(1, 0), Point2D(0, 1))
    >>> barycentric_at(t, Point2D(0.5, 0.5))
    Barycentric(l1=0.0, l2=0.5, l3=0.5)
    """
    lam = tri.barycentric(p[0], p[1])
    return Barycentric(float(lam[0]), float(lam[1]), float(lam[2]))


def special_points(tri: Triangle2D) -> tuple[Point2D, Point2D, Point2D, Point2D]:
    """Edge midpoints ``m1, m2, m3`` (``m_j`` opposite ``v_j``) and the centroid."""
    v = tri.vertices
    m1 = Point2D(*((v[1] + v[2]) / 2))
    m2 = Point2D(*((v[2] + v[0]) / 2))
    m3 = Point2D(*((v[0] + v[1]) / 2))
    mstar = Point2D(*(v.sum(axis=0) / 3))
    return m1, m2, m3, mstar


@dataclass(frozen=True)
class TriMesh:
    """Vertex coordinates plus 0-based triangle connectivity.

    Arrays are copied and made read-only at construction.
    """

    vertices: np.ndarray
    triangles: np.ndarray

    def __post_init__(self):
        verts = np.array(self.vertices, dtype=float)
        tris = np.array(self.triangles, dtype=np.int64)
        if verts.ndim != 2 or verts.shape[1] != 2:
            raise GeometryError(f"vertices must have shape (n, 2), got {verts.shape}")
        if tris.ndim != 2 or tris.shape[1] != 3:
            raise GeometryError(f"triangles must have shape (N, 3), got {tris.shape}")
        if not np.all(np.isfinite(verts)):
            raise GeometryError("non-finite vertex coordinates")
        if tris.size and (tris.min() < 0 or tris.max() >= len(verts)):
            raise GeometryError("triangle references a vertex out of range")
        p = verts[tris]
        e = np.stack([p[:, 1] - p[:, 0], p[:, 2] - p[:, 1], p[:, 0] - p[:, 2]], axis=1)
        longest2 = np.max(np.sum(e**2, axis=2), axis=1)
        area = 0.5 * (e[:, 0, 0] * (-e[:, 2, 1]) - (-e[:, 2, 0]) * e[:, 0, 1])
        bad = np.flatnonzero(np.abs(area) <= DEGENERACY_TOL * longest2)
        if bad.size:
            raise GeometryError(f"degenerate triangle at index {bad[0]}")
        if len(np.unique(np.sort(tris, axis=1), axis=0)) != len(tris):
            raise GeometryError("duplicated triangle")
        verts.setflags(write=False)
        tris.setflags(write=False)
        area.setflags(write=False)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "triangles", tris)
        object.__setattr__(self, "_signed_areas", area)

    @property
    def N(self) -> int:
        return len(self.triangles)

    def __len__(self) -> int:
        return len(self.triangles)

    @property
    def corners(self) -> np.ndarray:
        """Vertex coordinates per triangle, shape ``(N, 3, 2)``."""
        return self.vertices[self.triangles]

    @property
    def signed_areas(self) -> np.ndarray:
        return self._signed_areas

    @property
    def areas(self) -> np.ndarray:
        return np.abs(self._signed_areas)

    def diameters(self) -> np.ndarray:
        p = self.corners
        d = np.stack(
            [
                np.hypot(*(p[:, 1] - p[:, 0]).T),
                np.hypot(*(p[:, 2] - p[:, 1]).T),
                np.hypot(*(p[:, 0] - p[:, 2]).T),
            ],
            axis=1,
        )
        return d.max(axis=1)

    def triangle(self, k: int) -> Triangle2D:
        return Triangle2D.from_array(self.vertices[self.triangles[k]])

    def __iter__(self):
        for k in range(self.N):
            yield self.triangle(k)

    def barycentric(self, x: float, y: float) -> np.ndarray:
        """Barycentric coordinates of one point in every triangle, ``(N, 3)``."""
        p = self.corners
        x1, y1 = p[:, 0, 0], p[:, 0, 1]
        x2, y2 = p[:, 1, 0], p[:, 1, 1]
        x3, y3 = p[:, 2, 0], p[:, 2, 1]
        two_a = 2.0 * self._signed_areas
        l1 = ((x2 - x) * (y3 - y) - (x3 - x) * (y2 - y)) / two_a
        l2 = ((x3 - x) * (y1 - y) - (x1 - x) * (y3 - y)) / two_a
        l3 = ((x1 - x) * (y2 - y) - (x2 - x) * (y1 - y)) / two_a
        return np.stack([l1, l2, l3], axis=1)


def uniform_grid_mesh(n: int, diagonal: str = "anti") -> TriMesh:
    """Unit square split into ``n x n`` cells of two triangles each.

    ``diagonal="anti"`` cuts every cell from its bottom-right to its top-left
    corner; ``"main"`` cuts from bottom-left to top-right. The lower triangle
    of each cell comes first and all ``2 n^2`` triangles are counter-clockwise.
    Errors of direction-sensitive functions such as ``exp(x + y)`` depend on
    this choice; the anti-diagonal grid is the one that reproduces the
    published "regular" triangulation errors.
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DomainError(f"grid size must be a positive integer, got {n!r}")
    if diagonal not in ("anti", "main"):
        raise DomainError(f"diagonal must be 'anti' or 'main', got {diagonal!r}")
    n = int(n)
    s = np.linspace(0.0, 1.0, n + 1)
    xx, yy = np.meshgrid(s, s)
    verts = np.column_stack([xx.ravel(), yy.ravel()])
    j, i = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    a = (j * (n + 1) + i).ravel()  # bottom-left
    b = a + 1  # bottom-right
    c = a + n + 2  # top-right
    d = a + n + 1  # top-left
    tris = np.empty((2 * n * n, 3), dtype=np.int64)
    if diagonal == "anti":
        tris[0::2] = np.column_stack([a, b, d])
        tris[1::2] = np.column_stack([b, c, d])
    else:
        tris[0::2] = np.column_stack([a, b, c])
        tris[1::2] = np.column_stack([a, c, d])
    return TriMesh(verts, tris)


def locate(mesh: TriMesh, p) -> int | None:
    """Index of the lowest-numbered triangle containing ``p``, or ``None``."""
    lam = mesh.barycentric(float(p[0]), float(p[1]))
    hits = np.flatnonzero(np.all(lam >= -LOCATE_TOL, axis=1))
    return int(hits[0]) if hits.size else None


# --- Triangle (.node / .ele) format -------------------------------------------


def _data_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _ints(tokens, lineno, source, what):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise MeshParseError(f"expected integers in {what}: {' '.join(tokens)!r}", source, lineno) from None


def _parse_node(text: str, source: str):
    lines = list(_data_lines(text))
    if not lines:
        raise MeshParseError("empty .node input", source)
    lineno, head = lines[0]
    if len(head) < 2:
        raise MeshParseError("header needs '<#vertices> <dim> [<#attrs> <#markers>]'", source, lineno)
    counts = _ints(head[:4], lineno, source, "header")
    nvert, dim = counts[0], counts[1]
    nattr = counts[2] if len(counts) > 2 else 0
    nmark = counts[3] if len(counts) > 3 else 0
    if dim != 2:
        raise MeshParseError(f"dimension must be 2, got {dim}", source, lineno)
    if nvert < 3 or nattr < 0 or nmark not in (0, 1):
        raise MeshParseError(f"invalid header counts {counts}", source, lineno)
    rows = lines[1:]
    if len(rows) != nvert:
        where = rows[nvert][0] if len(rows) > nvert else (rows[-1][0] if rows else lineno)
        raise MeshParseError(f"header declares {nvert} vertices, found {len(rows)}", source, where)
    coords = np.empty((nvert, 2))
    base = None
    for k, (ln, tok) in enumerate(rows):
        if len(tok) < 3:
            raise MeshParseError("vertex row needs '<index> <x> <y>'", source, ln)
        if len(tok) > 3 + nattr + nmark:
            raise MeshParseError(f"too many fields on vertex row ({len(tok)})", source, ln)
        (idx,) = _ints(tok[:1], ln, source, "vertex index")
        if base is None:
            if idx not in (0, 1):
                raise MeshParseError(f"first vertex index must be 0 or 1, got {idx}", source, ln)
            base = idx
        if idx != base + k:
            raise MeshParseError(f"vertex index {idx} out of sequence (expected {base + k})", source, ln)
        try:
            coords[k] = float(tok[1]), float(tok[2])
        except ValueError:
            raise MeshParseError(f"bad coordinates {tok[1:3]}", source, ln) from None
        if not np.all(np.isfinite(coords[k])):
            raise MeshParseError("non-finite coordinate", source, ln)
    return coords, base


def _parse_ele(text: str, nvert: int, base: int, source: str):
    lines = list(_data_lines(text))
    if not lines:
        raise MeshParseError("empty .ele input", source)
    lineno, head = lines[0]
    counts = _ints(head[:3], lineno, source, "header")
    if len(counts) < 2:
        raise MeshParseError("header needs '<#triangles> <nodes-per-triangle> [<#attrs>]'", source, lineno)
    ntri, npt = counts[0], counts[1]
    nattr = counts[2] if len(counts) > 2 else 0
    if npt != 3:
        raise MeshParseError(f"only 3-node triangles are supported, got {npt}", source, lineno)
    if ntri < 1 or nattr < 0:
        raise MeshParseError(f"invalid header counts {counts}", source, lineno)
    rows = lines[1:]
    if len(rows) != ntri:
        where = rows[ntri][0] if len(rows) > ntri else (rows[-1][0] if rows else lineno)
        raise MeshParseError(f"header declares {ntri} triangles, found {len(rows)}", source, where)
    tris = np.empty((ntri, 3), dtype=np.int64)
    for k, (ln, tok) in enumerate(rows):
        if len(tok) < 4 or len(tok) > 4 + nattr:
            raise MeshParseError(f"triangle row needs 4 to {4 + nattr} fields, got {len(tok)}", source, ln)
        idx, *corner = _ints(tok[:4], ln, source, "triangle row")
        if idx != base + k:
            raise MeshParseError(f"triangle index {idx} out of sequence (expected {base + k})", source, ln)
        for c in corner:
            if not base <= c < base + nvert:
                raise MeshParseError(f"vertex {c} out of range [{base}, {base + nvert - 1}]", source, ln)
        tris[k] = [c - base for c in corner]
    return tris


def load_triangle_mesh(node_text: str, ele_text: str, *, node_source="<node>", ele_source="<ele>") -> TriMesh:
    """Build a :class:`TriMesh` from the contents of Triangle .node/.ele files.

    Attributes and boundary markers are read past and dropped. The index
    base (0 or 1) is taken from the first vertex row and applied to the
    .ele file as well.
    """
    coords, base = _parse_node(node_text, node_source)
    tris = _parse_ele(ele_text, len(coords), base, ele_source)
    try:
        return TriMesh(coords, tris)
    except GeometryError as exc:
        raise MeshParseError(str(exc), ele_source) from exc


def read_triangle_mesh(node_path, ele_path) -> TriMesh:
    node_path, ele_path = Path(node_path), Path(ele_path)
    return load_triangle_mesh(
        node_path.read_text(),
        ele_path.read_text(),
        node_source=str(node_path),
        ele_source=str(ele_path),
    )


def format_triangle_mesh(mesh: TriMesh, base: int = 1) -> tuple[str, str]:
    """Serialize ``mesh`` as (.node text, .ele text)."""
    node = [f"{len(mesh.vertices)} 2 0 0"]
    node += [f"{k + base} {x!r} {y!r}" for k, (x, y) in enumerate(mesh.vertices.tolist())]
    ele = [f"{mesh.N} 3 0"]
    ele += [f"{k + base} {a + base} {b + base} {c + base}" for k, (a, b, c) in enumerate(mesh.triangles.tolist())]
    return "\n".join(node) + "\n", "\n".join(ele) + "\n"


def write_triangle_mesh(mesh: TriMesh, prefix, base: int = 1) -> tuple[Path, Path]:
    prefix = Path(prefix)
    node_text, ele_text = format_triangle_mesh(mesh, base)
    node_path = prefix.with_name(prefix.name + ".node")
    ele_path = prefix.with_name(prefix.name + ".ele")
    node_path.write_text(node_text)
    ele_path.write_text(ele_text)
    return node_path, ele_path
