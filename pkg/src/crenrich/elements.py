"""Degrees of freedom and dual bases for the CR element and its enrichments.

Every quadratic on a triangle is stored in the AF3 basis

    phi_i = lam_i (3 lam_i - 2)         (vertex functions)
    bub_i = 6 lam_{i+1} lam_{i+2}       (edge bubbles)

whose dual functionals are vertex evaluation and the edge means, so the six
AF3 coordinates of ``p`` are ``(p(v_1), p(v_2), p(v_3), I_1(p), I_2(p), I_3(p))``.

Two enrichment families are provided. ``c-alpha`` adds the weighted line
integrals ``F_j`` along the median from ``v_j`` to the opposite midpoint;
``e-beta`` adds ``G_j`` along the segment from ``v_j`` to the centroid. Both
use the symmetric Jacobi weight ``t^a (1 - t)^a``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, QuadratureMisuseError, SingularParameterError
from .meshkit import Triangle2D
from .quadrature import QuadratureRule, beta, gauss_jacobi, gauss_legendre

DOF_NODES = 16
SINGULAR_ALPHA = -6.0 / 7.0
SINGULAR_TOL = 1e-10

C_ALPHA = "c-alpha"
E_BETA = "e-beta"
FAMILIES = (C_ALPHA, E_BETA)

_EYE = np.eye(3)


def _check_index(i):
    if i not in (1, 2, 3):
        raise DomainError(f"local index must be 1, 2 or 3, got {i!r}")
    return i - 1


def check_parameter(family: str, value: float) -> float:
    """Validate a family parameter; returns it as a float."""
    if family not in FAMILIES:
        raise DomainError(f"unknown family {family!r}")
    value = float(value)
    if not math.isfinite(value) or value <= -1.0:
        raise DomainError(f"{family} parameter must be > -1, got {value}")
    if family == C_ALPHA and abs(value - SINGULAR_ALPHA) <= SINGULAR_TOL:
        raise SingularParameterError(
            f"parameter -6/7 excluded: c-alpha is not unisolvent at alpha={value}"
        )
    return value


# --- the AF3 basis -------------------------------------------------------------


def af3_values(lam) -> np.ndarray:
    """All six AF3 basis functions at barycentric points ``lam`` (``(..., 3)``)."""
    lam = np.asarray(lam, dtype=float)
    l1, l2, l3 = lam[..., 0], lam[..., 1], lam[..., 2]
    return np.stack(
        [
            l1 * (3.0 * l1 - 2.0),
            l2 * (3.0 * l2 - 2.0),
            l3 * (3.0 * l3 - 2.0),
            6.0 * l2 * l3,
            6.0 * l3 * l1,
            6.0 * l1 * l2,
        ],
        axis=-1,
    )


def af3_phi(tri: Triangle2D, i: int, p):
    """Vertex function ``phi_i = lam_i (1 - 3 lam_{i+1} - 3 lam_{i+2})`` at ``p``."""
    k = _check_index(i)
    lam = tri.barycentric(p[0], p[1])
    return lam[..., k] * (1.0 - 3.0 * lam[..., (k + 1) % 3] - 3.0 * lam[..., (k + 2) % 3])


def af3_bubble(tri: Triangle2D, i: int, p):
    """Edge bubble ``6 lam_{i+1} lam_{i+2}`` at ``p``."""
    k = _check_index(i)
    lam = tri.barycentric(p[0], p[1])
    return 6.0 * lam[..., (k + 1) % 3] * lam[..., (k + 2) % 3]


@dataclass(frozen=True)
class QuadOnTri:
    """Quadratic polynomial on ``tri`` given by its six AF3 coordinates."""

    tri: Triangle2D
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float).reshape(6)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def vertex_values(self) -> np.ndarray:
        return self.coeffs[:3]

    @property
    def edge_means(self) -> np.ndarray:
        return self.coeffs[3:]

    def at_barycentric(self, lam):
        return af3_values(lam) @ self.coeffs

    def __call__(self, x, y):
        return self.at_barycentric(self.tri.barycentric(x, y))

    def __add__(self, other: "QuadOnTri") -> "QuadOnTri":
        return QuadOnTri(self.tri, self.coeffs + other.coeffs)

    def __mul__(self, s: float) -> "QuadOnTri":
        return QuadOnTri(self.tri, s * self.coeffs)

    __rmul__ = __mul__


def af3_expand(tri: Triangle2D, f) -> QuadOnTri:
    """AF3 representation built from the AF3 functionals of ``f``.

    Reproduces ``f`` exactly when ``f`` is quadratic.
    """
    verts = tri.vertices
    vals = np.broadcast_to(np.asarray(f(verts[:, 0], verts[:, 1]), dtype=float), (3,))
    means = [dof_cr(tri, j, f) for j in (1, 2, 3)]
    return QuadOnTri(tri, np.concatenate([vals, means]))


# --- degrees of freedom --------------------------------------------------------


def segment_barycentric(kind: str, j: int, t) -> np.ndarray:
    """Barycentric coordinates along the integration segment of a DoF.

    ``kind`` is ``"cr"`` (edge ``v_{j+1} -> v_{j+2}``), ``"f"`` (``v_j`` to the
    midpoint ``m_j``) or ``"g"`` (``v_j`` to the centroid). The segment point is
    ``t * start + (1 - t) * end``.
    """
    k = _check_index(j)
    t = np.asarray(t, dtype=float)[..., None]
    if kind == "cr":
        start, end = _EYE[(k + 1) % 3], _EYE[(k + 2) % 3]
    elif kind == "f":
        start, end = _EYE[k], 0.5 * (1.0 - _EYE[k])
    elif kind == "g":
        start, end = _EYE[k], np.full(3, 1.0 / 3.0)
    else:
        raise DomainError(f"unknown segment kind {kind!r}")
    return t * start + (1.0 - t) * end


def _apply(tri, kind, j, f, rule):
    lam = segment_barycentric(kind, j, rule.nodes)
    pts = tri.point_at(lam)
    vals = np.broadcast_to(np.asarray(f(pts[:, 0], pts[:, 1]), dtype=float), rule.nodes.shape)
    return float(rule.weights @ vals)


def dof_vertex(tri: Triangle2D, j: int, f) -> float:
    """Point evaluation at vertex ``v_j``."""
    v = tri.vertex(j)
    _check_index(j)
    return float(f(v.x, v.y))


def dof_cr(tri: Triangle2D, j: int, f, rule: QuadratureRule | None = None) -> float:
    """Mean of ``f`` over the edge opposite ``v_j``."""
    if rule is None:
        rule = gauss_legendre(DOF_NODES)
    elif rule.weight_kind != "unit":
        raise QuadratureMisuseError("edge means need a unit-weight rule")
    return _apply(tri, "cr", j, f, rule)


def dof_f_enr(tri: Triangle2D, j: int, alpha: float, f, rule: QuadratureRule | None = None) -> float:
    """Jacobi-weighted integral of ``f`` from ``v_j`` to the midpoint ``m_j``."""
    if rule is None:
        rule = gauss_jacobi(DOF_NODES, float(alpha))
    elif not rule.matches(alpha):
        raise QuadratureMisuseError(f"rule weight {rule.weight_kind}({rule.alpha}) does not match alpha={alpha}")
    return _apply(tri, "f", j, f, rule)


def dof_g_enr(tri: Triangle2D, j: int, beta_: float, f, rule: QuadratureRule | None = None) -> float:
    """Jacobi-weighted integral of ``f`` from ``v_j`` to the centroid."""
    if rule is None:
        rule = gauss_jacobi(DOF_NODES, float(beta_))
    elif not rule.matches(beta_):
        raise QuadratureMisuseError(f"rule weight {rule.weight_kind}({rule.alpha}) does not match beta={beta_}")
    return _apply(tri, "g", j, f, rule)


# --- closed-form constants -----------------------------------------------------


@dataclass(frozen=True)
class CAlphaCoefficients:
    alpha: float
    gamma: float
    h: float
    K: float
    c: float
    d: float
    L: float
    det: float


@dataclass(frozen=True)
class EBetaCoefficients:
    beta: float
    nu: float
    sigma: float
    r: float
    m: float
    L: float
    det: float


def coeffs_c_alpha(alpha: float) -> CAlphaCoefficients:
    a = check_parameter(C_ALPHA, alpha)
    gamma = beta(a + 2.0, a + 1.0)
    q = (a + 6.0) * (7.0 * a + 6.0)
    return CAlphaCoefficients(
        alpha=a,
        gamma=gamma,
        h=-(5.0 * a + 6.0) / (4.0 * (2.0 * a + 3.0)),
        K=-a / (2.0 * a + 3.0),
        c=3.0 * (11.0 * a * a + 20.0 * a + 12.0) / q,
        d=3.0 * (-3.0 * a * a + 8.0 * a + 12.0) / q,
        L=-q / (8.0 * (2.0 * a + 3.0) ** 2),
        det=-(gamma**3) * (6.0 + a) ** 2 * (6.0 + 7.0 * a) / (32.0 * (3.0 + 2.0 * a) ** 3),
    )


def coeffs_e_beta(beta_: float) -> EBetaCoefficients:
    b = check_parameter(E_BETA, beta_)
    nu = beta(b + 2.0, b + 1.0) / (3.0 * (2.0 * b + 3.0))
    L = 18.0 * (b + 1.0) * (b + 2.0)
    return EBetaCoefficients(
        beta=b,
        nu=nu,
        sigma=3.0 * b + 4.0,
        r=6.0 * (7.0 * b * b + 18.0 * b + 12.0) / L,
        m=6.0 * (b * b + 6.0 * b + 6.0) / L,
        L=L,
        det=-54.0 * nu**3 * (b + 1.0) * (b + 2.0) ** 2,
    )


def enrichment_system(family: str, value: float, *, sigma_shift: float = 0.0) -> np.ndarray:
    """3x3 matrix mapping vertex values to the enriched DoFs of a quadratic
    with vanishing edge means. ``sigma_shift`` perturbs the e-beta constant
    (negative-control hook for the verification battery)."""
    if family == C_ALPHA:
        k = coeffs_c_alpha(value)
        return k.gamma * ((k.K - k.h) * _EYE + k.h)
    k = coeffs_e_beta(value)
    s = k.sigma + sigma_shift
    return k.nu * ((2.0 + s) * _EYE - s)


def dof_to_af3(family: str | None, value: float | None = None, *, sigma_shift: float = 0.0) -> np.ndarray:
    """Linear map from a scheme's DoF vector to AF3 coordinates.

    ``family=None`` is plain CR: a ``(6, 3)`` matrix acting on the three edge
    means. The enriched families give ``(6, 6)`` matrices acting on
    ``(I_1, I_2, I_3, E_1, E_2, E_3)``; column ``i`` holds the AF3
    coordinates of the ``i``-th dual basis function.
    """
    if family is None:
        top = np.ones((3, 3)) - 2.0 * _EYE
        return np.vstack([top, _EYE])
    M = np.zeros((6, 6))
    M[3:, :3] = _EYE
    if family == C_ALPHA:
        k = coeffs_c_alpha(value)
        M[:3, :3] = (k.c - k.d) * _EYE + k.d
        M[:3, 3:] = ((k.K + 2.0 * k.h) * _EYE - k.h) / (k.gamma * k.L)
    elif family == E_BETA:
        k = coeffs_e_beta(value)
        s = k.sigma + sigma_shift
        M[:3, :3] = (k.r - k.m) * _EYE + k.m
        M[:3, 3:] = ((2.0 * s - 2.0) * _EYE - s) / (k.nu * k.L)
    else:
        raise DomainError(f"unknown family {family!r}")
    return M


def _basis(tri, M):
    return tuple(QuadOnTri(tri, M[:, i]) for i in range(M.shape[1]))


def basis_c_alpha(tri: Triangle2D, alpha: float):
    """Dual basis ``(psi_1..3), (zeta_1..3)`` of the c-alpha element on ``tri``."""
    b = _basis(tri, dof_to_af3(C_ALPHA, alpha))
    return b[:3], b[3:]


def basis_e_beta(tri: Triangle2D, beta_: float):
    """Dual basis ``(tau_1..3), (rho_1..3)`` of the e-beta element on ``tri``."""
    b = _basis(tri, dof_to_af3(E_BETA, beta_))
    return b[:3], b[3:]


def basis_cr(tri: Triangle2D):
    """CR basis ``theta_j = 1 - 2 lam_j`` as AF3 quadratics."""
    return _basis(tri, dof_to_af3(None))


# --- unisolvence -----------------------------------------------------------------


def _p2_monomials(tri):
    def make(k, power):
        def g(x, y):
            return tri.barycentric(x, y)[..., k] ** power

        return g

    return [make(k, 1) for k in range(3)] + [make(k, 2) for k in range(3)]


def unisolvence_matrix(tri: Triangle2D, family: str, value: float, n: int = DOF_NODES) -> np.ndarray:
    """DoFs of an enriched family applied to ``lam_1, lam_2, lam_3, lam_1^2, lam_2^2, lam_3^2``.

    Rows are ``I_1, I_2, I_3`` followed by the three enriched functionals.
    """
    value = check_parameter(family, value)
    unit = gauss_legendre(n)
    jac = gauss_jacobi(n, value)
    enr = dof_f_enr if family == C_ALPHA else dof_g_enr
    A = np.empty((6, 6))
    for col, g in enumerate(_p2_monomials(tri)):
        for j in (1, 2, 3):
            A[j - 1, col] = dof_cr(tri, j, g, unit)
            A[j + 2, col] = enr(tri, j, value, g, jac)
    return A
