"""Local interpolation operators and their piecewise global assembly.

The CR operator maps ``f`` to ``sum_j I_j(f) theta_j``. The enriched
operators map ``f`` to ``sum_j I_j(f) b_j + E_j(f) e_j`` where ``(b, e)`` is
the dual basis of the family and ``E_j`` its weighted functionals; the result
is stored in AF3 coordinates.

Functions ``f`` are called as ``f(x, y)`` with numpy arrays and must
broadcast.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import elements as el
from .errors import DomainError
from .meshkit import LOCATE_TOL, TriMesh, Triangle2D, locate
from .quadrature import gauss_jacobi, gauss_legendre

CR = "cr"
KINDS = (CR, el.C_ALPHA, el.E_BETA)
EVAL_TOL = 1e-10


@dataclass(frozen=True)
class Scheme:
    """An element choice: ``cr``, ``c-alpha`` or ``e-beta`` plus its parameter."""

    kind: str
    param: float | None = None
    dof_quadrature_order: int = el.DOF_NODES

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown scheme {self.kind!r}; expected one of {', '.join(KINDS)}")
        if self.kind == CR:
            if self.param is not None:
                raise DomainError("the cr scheme takes no parameter")
        else:
            param = 1.0 if self.param is None else self.param
            object.__setattr__(self, "param", el.check_parameter(self.kind, param))
        order = self.dof_quadrature_order
        if isinstance(order, bool) or int(order) != order or not 1 <= order <= 64:
            raise DomainError(f"DoF quadrature order must be in [1, 64], got {order!r}")
        object.__setattr__(self, "dof_quadrature_order", int(order))

    @classmethod
    def parse(cls, text: str, dof_quadrature_order: int = el.DOF_NODES) -> "Scheme":
        """Parse ``cr``, ``c-alpha[:value]`` or ``e-beta[:value]``."""
        kind, _, value = text.strip().lower().partition(":")
        if kind == CR:
            if value:
                raise DomainError("the cr scheme takes no parameter")
            return cls(CR, None, dof_quadrature_order)
        try:
            param = float(value) if value else None
        except ValueError:
            raise DomainError(f"bad parameter in scheme {text!r}") from None
        return cls(kind, param, dof_quadrature_order)

    @property
    def label(self) -> str:
        return CR if self.kind == CR else f"{self.kind}:{self.param:g}"

    @property
    def enriched(self) -> bool:
        return self.kind != CR

    @property
    def n_dofs(self) -> int:
        return 6 if self.enriched else 3

    @cached_property
    def to_af3(self) -> np.ndarray:
        return el.dof_to_af3(self.kind if self.enriched else None, self.param)

    @cached_property
    def dof_nodes(self) -> tuple[np.ndarray, np.ndarray]:
        """Barycentric nodes ``(D, n, 3)`` and weights ``(D, n)`` of the DoFs."""
        n = self.dof_quadrature_order
        unit = gauss_legendre(n)
        lam = [el.segment_barycentric("cr", j, unit.nodes) for j in (1, 2, 3)]
        w = [unit.weights] * 3
        if self.enriched:
            jac = gauss_jacobi(n, self.param)
            seg = "f" if self.kind == el.C_ALPHA else "g"
            lam += [el.segment_barycentric(seg, j, jac.nodes) for j in (1, 2, 3)]
            w += [jac.weights] * 3
        lam, w = np.array(lam), np.array(w)
        lam.setflags(write=False)
        w.setflags(write=False)
        return lam, w


def dof_values(corners: np.ndarray, scheme: Scheme, f) -> np.ndarray:
    """All DoFs of ``f`` on a batch of triangles ``corners (N, 3, 2)``; ``(N, D)``."""
    lam, w = scheme.dof_nodes
    pts = np.einsum("dqa,nab->ndqb", lam, corners)
    vals = np.broadcast_to(np.asarray(f(pts[..., 0], pts[..., 1]), dtype=float), pts.shape[:-1])
    return np.einsum("ndq,dq->nd", vals, w)


@dataclass(frozen=True)
class LocalInterpolant:
    """Interpolant on one triangle.

    ``coeffs`` holds the three edge means for ``cr`` (coordinates in the
    ``theta`` basis) and the six AF3 coordinates for the enriched schemes.
    """

    tri_index: int
    scheme: Scheme
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float).reshape(-1)
        if c.size != self.scheme.n_dofs:
            raise DomainError(f"{self.scheme.label} needs {self.scheme.n_dofs} coefficients, got {c.size}")
        if not np.all(np.isfinite(c)):
            raise DomainError("non-finite interpolant coefficients")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def af3(self) -> np.ndarray:
        return self.scheme.to_af3 @ self.coeffs if not self.scheme.enriched else self.coeffs

    def as_quad(self, tri: Triangle2D) -> el.QuadOnTri:
        return el.QuadOnTri(tri, self.af3)


def _local_coeffs(dofs: np.ndarray, scheme: Scheme) -> np.ndarray:
    return dofs @ scheme.to_af3.T if scheme.enriched else dofs


def interpolate_local(tri: Triangle2D, scheme: Scheme, f, tri_index: int = 0) -> LocalInterpolant:
    dofs = dof_values(tri.vertices[None], scheme, f)
    return LocalInterpolant(tri_index, scheme, _local_coeffs(dofs, scheme)[0])


def evaluate_local(interp: LocalInterpolant, tri: Triangle2D, p) -> float:
    """Value of the interpolant at ``p``, which must lie in ``tri``."""
    lam = tri.barycentric(p[0], p[1])
    if np.min(lam) < -EVAL_TOL:
        raise DomainError(f"point {tuple(p)} lies outside the triangle")
    return float(el.af3_values(lam) @ interp.af3)


@dataclass(frozen=True)
class GlobalApproximant:
    """Independent local interpolants, one per mesh triangle (no continuity)."""

    mesh: TriMesh
    scheme: Scheme
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.shape != (self.mesh.N, self.scheme.n_dofs):
            raise DomainError(f"expected coefficients of shape {(self.mesh.N, self.scheme.n_dofs)}, got {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def __len__(self) -> int:
        return self.mesh.N

    def __getitem__(self, k: int) -> LocalInterpolant:
        return LocalInterpolant(k, self.scheme, self.coeffs[k])

    def __iter__(self):
        return (self[k] for k in range(len(self)))

    @property
    def af3(self) -> np.ndarray:
        """AF3 coordinates of every local interpolant, ``(N, 6)``."""
        if self.scheme.enriched:
            return self.coeffs
        return self.coeffs @ self.scheme.to_af3.T

    def evaluate(self, p) -> float:
        """Value at ``p``; on shared edges the lowest-indexed triangle wins."""
        k = locate(self.mesh, p)
        if k is None:
            raise DomainError(f"point {tuple(p)} is outside the mesh (tolerance {LOCATE_TOL})")
        return evaluate_local(self[k], self.mesh.triangle(k), p)


def interpolate_global(mesh: TriMesh, scheme: Scheme, f, chunk: int = 8192) -> GlobalApproximant:
    corners = mesh.corners
    out = np.empty((mesh.N, scheme.n_dofs))
    for s in range(0, mesh.N, chunk):
        out[s : s + chunk] = _local_coeffs(dof_values(corners[s : s + chunk], scheme, f), scheme)
    return GlobalApproximant(mesh, scheme, out)


def scheme_dofs(tri: Triangle2D, scheme: Scheme, f) -> np.ndarray:
    """The scheme's DoFs of ``f`` on ``tri`` through the single-triangle functionals."""
    n = scheme.dof_quadrature_order
    out = [el.dof_cr(tri, j, f, gauss_legendre(n)) for j in (1, 2, 3)]
    if scheme.kind == el.C_ALPHA:
        rule = gauss_jacobi(n, scheme.param)
        out += [el.dof_f_enr(tri, j, scheme.param, f, rule) for j in (1, 2, 3)]
    elif scheme.kind == el.E_BETA:
        rule = gauss_jacobi(n, scheme.param)
        out += [el.dof_g_enr(tri, j, scheme.param, f, rule) for j in (1, 2, 3)]
    return np.array(out)


def dof_consistency(interp: LocalInterpolant, tri: Triangle2D, scheme: Scheme, f) -> float:
    """Largest ``|DoF(Pi f) - DoF(f)|`` over all DoFs of the scheme."""
    pf = interp.as_quad(tri)
    return float(np.max(np.abs(scheme_dofs(tri, scheme, pf) - scheme_dofs(tri, scheme, f))))
