"""Enriched Crouzeix-Raviart interpolation on triangle meshes.

Two one-parameter families of quadratic enrichments (``c-alpha`` and
``e-beta``) of the nonconforming linear element, together with the mesh,
quadrature and experiment tooling needed to measure their L1 accuracy.
"""

__version__ = "0.1.0"

from .errors import (
    CrenrichError,
    DomainError,
    GeometryError,
    MeshParseError,
    QuadratureMisuseError,
    SingularParameterError,
)
from .meshkit import (
    Barycentric,
    Point2D,
    Triangle2D,
    TriMesh,
    load_triangle_mesh,
    locate,
    read_triangle_mesh,
    uniform_grid_mesh,
    write_triangle_mesh,
)
from .quadrature import (
    QuadratureRule,
    TriangleRuleConfig,
    beta,
    gauss_jacobi,
    gauss_legendre,
    integrate_on_triangle,
    ln_gamma,
    triangle_rule,
)
from .elements import (
    C_ALPHA,
    E_BETA,
    QuadOnTri,
    coeffs_c_alpha,
    coeffs_e_beta,
    dof_to_af3,
    unisolvence_matrix,
)
from .operators import (
    CR,
    GlobalApproximant,
    LocalInterpolant,
    Scheme,
    evaluate_local,
    interpolate_global,
    interpolate_local,
)
from .experiments import (
    RENKA,
    ErrorReport,
    ErrorRow,
    convergence_study,
    error_table,
    l1_error,
    mesh_convergence_study,
    renka,
    table_emit,
)

__all__ = [
    "CrenrichError",
    "DomainError",
    "GeometryError",
    "MeshParseError",
    "QuadratureMisuseError",
    "SingularParameterError",
    "Barycentric",
    "Point2D",
    "Triangle2D",
    "TriMesh",
    "load_triangle_mesh",
    "locate",
    "read_triangle_mesh",
    "uniform_grid_mesh",
    "write_triangle_mesh",
    "QuadratureRule",
    "TriangleRuleConfig",
    "beta",
    "gauss_jacobi",
    "gauss_legendre",
    "integrate_on_triangle",
    "ln_gamma",
    "triangle_rule",
    "C_ALPHA",
    "E_BETA",
    "QuadOnTri",
    "coeffs_c_alpha",
    "coeffs_e_beta",
    "dof_to_af3",
    "unisolvence_matrix",
    "CR",
    "GlobalApproximant",
    "LocalInterpolant",
    "Scheme",
    "evaluate_local",
    "interpolate_global",
    "interpolate_local",
    "RENKA",
    "ErrorReport",
    "ErrorRow",
    "convergence_study",
    "error_table",
    "l1_error",
    "mesh_convergence_study",
    "renka",
    "table_emit",
]
