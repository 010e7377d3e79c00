"""Numeric verification battery behind ``crenrich verify``.

Each check compares a closed-form statement about the elements (duality of
a basis, a 3x3 system and its determinant, polynomial reproduction, ...)
against the same quantity computed by quadrature, on random triangles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import elements as el
from .meshkit import Triangle2D
from .operators import Scheme, dof_values, scheme_dofs
from .quadrature import beta, gauss_jacobi


@dataclass(frozen=True)
class CheckResult:
    """``value <= tol`` for residual checks, ``value >= tol`` when ``at_least``."""

    name: str
    value: float
    tol: float
    at_least: bool = False

    @property
    def passed(self) -> bool:
        if not np.isfinite(self.value):
            return False
        return self.value >= self.tol if self.at_least else self.value <= self.tol

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        rel = ">=" if self.at_least else "<="
        return f"{status}  {self.name:<24} {self.value:.3e} {rel} {self.tol:.0e}"


def random_triangles(count: int, rng: np.random.Generator, min_area: float = 0.05) -> list[Triangle2D]:
    out = []
    while len(out) < count:
        pts = rng.uniform(-1.0, 1.0, size=(3, 2))
        a = 0.5 * abs((pts[1, 0] - pts[0, 0]) * (pts[2, 1] - pts[0, 1]) - (pts[2, 0] - pts[0, 0]) * (pts[1, 1] - pts[0, 1]))
        if a > min_area:
            out.append(Triangle2D.from_array(pts))
    return out


def _phi(tri, k):
    return el.QuadOnTri(tri, np.eye(6)[k])


def _row_scaled_det(U):
    # weight masses shrink fast with the parameter, so compare shapes not sizes
    return abs(np.linalg.det(U / np.abs(U).max(axis=1, keepdims=True)))


def _relerr(a, b):
    return abs(a - b) / abs(b)


def run_verification(
    alpha: float = 1.0,
    beta_: float = 1.0,
    n_triangles: int = 20,
    seed: int = 0,
    sigma_shift: float = 0.0,
) -> list[CheckResult]:
    """Run every check; ``sigma_shift`` corrupts the e-beta constant sigma
    (used to show that the battery detects a wrong ledger)."""
    rng = np.random.default_rng(seed)
    alpha = el.check_parameter(el.C_ALPHA, alpha)
    beta_ = el.check_parameter(el.E_BETA, beta_)
    tris = random_triangles(n_triangles, rng)
    results = []

    z = rng.uniform(0.1, 10.0, size=(50, 2))
    sym = max(_relerr(beta(a, b), beta(b, a)) for a, b in z)
    rec = max(_relerr(beta(a + 1, b), a / (a + b) * beta(a, b)) for a, b in z)
    results.append(CheckResult("beta-identities", max(sym, rec), 1e-13))

    mom = 0.0
    for p in (alpha, beta_):
        rule = gauss_jacobi(el.DOF_NODES, p)
        for m in range(2 * el.DOF_NODES):
            mom = max(mom, _relerr(rule.weights @ rule.nodes**m, beta(p + m + 1, p + 1)))
    results.append(CheckResult("jacobi-moments", mom, 1e-12))

    cr = Scheme("cr")
    af3 = 0.0
    for tri in tris:
        for k in range(6):
            b = _phi(tri, k)
            got = np.concatenate([[el.dof_vertex(tri, j, b) for j in (1, 2, 3)], scheme_dofs(tri, cr, b)])
            af3 = max(af3, np.max(np.abs(got - np.eye(6)[k])))
    results.append(CheckResult("af3-duality", af3, 1e-12))

    families = (
        (el.C_ALPHA, alpha, el.coeffs_c_alpha(alpha).det, 0.0),
        (el.E_BETA, beta_, el.coeffs_e_beta(beta_).det, sigma_shift),
    )
    for family, p, det_closed, shift in families:
        scheme = Scheme(family, p)
        system = el.enrichment_system(family, p, sigma_shift=shift)
        M = el.dof_to_af3(family, p, sigma_shift=shift)

        system_err = det_err = dual = repro = 0.0
        for tri in tris:
            numeric = np.array([scheme_dofs(tri, scheme, _phi(tri, k))[3:] for k in range(3)]).T
            system_err = max(system_err, np.max(np.abs(numeric - system)) / abs(system).max())
            det_err = max(det_err, _relerr(np.linalg.det(numeric), det_closed))

            basis = [el.QuadOnTri(tri, M[:, i]) for i in range(6)]
            D = np.array([scheme_dofs(tri, scheme, b) for b in basis])
            # basis coefficients grow like 4^p, relative error is what is meaningful
            dual = max(dual, np.max(np.abs(D - np.eye(6))) / max(1.0, np.abs(M).max()))

            for _ in range(3):
                p2 = el.QuadOnTri(tri, rng.normal(size=6))
                coeffs = dof_values(tri.vertices[None], scheme, p2)[0] @ M.T
                lam = rng.dirichlet(np.ones(3), size=50)
                diff = el.af3_values(lam) @ coeffs - p2.at_barycentric(lam)
                repro = max(repro, np.max(np.abs(diff)))

        results.append(CheckResult(f"{family}-system", system_err, 1e-12))
        results.append(CheckResult(f"{family}-determinant", det_err, 1e-12))
        results.append(CheckResult(f"{family}-duality", dual, 1e-10))
        results.append(CheckResult(f"{family}-reproduction", repro, 1e-10))

        worst = min(_row_scaled_det(el.unisolvence_matrix(tri, family, p)) for tri in tris[:5])
        results.append(CheckResult(f"{family}-unisolvence", worst, 1e-10, at_least=True))

    return results
