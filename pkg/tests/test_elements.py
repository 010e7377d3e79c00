import numpy as np
import pytest
from scipy import integrate

from crenrich import elements as el
from crenrich.errors import DomainError, QuadratureMisuseError, SingularParameterError
from crenrich.meshkit import Triangle2D
from crenrich.quadrature import gauss_jacobi, gauss_legendre

REF = Triangle2D((0, 0), (1, 0), (0, 1))
ALPHAS = [-0.9, -0.5, 0.0, 1.0, 3.0]
BETAS = [-0.9, 0.0, 1.0, 3.0]


def jacobi_integral(g, p, q=None):
    """Oracle: int_0^1 t^p (1-t)^q g(t) dt by adaptive quadrature."""
    q = p if q is None else q
    val, _ = integrate.quad(g, 0, 1, weight="alg", wvar=(p, q), epsabs=1e-14, epsrel=1e-12, limit=200)
    return val


def segment_functional(tri, kind, j, f, p, q=None):
    def g(t):
        x, y = tri.point_at(el.segment_barycentric(kind, j, t))
        return f(x, y)
    return jacobi_integral(g, p, q)


def phi(tri, k):
    return el.QuadOnTri(tri, np.eye(6)[k])


# --- parameters -------------------------------------------------------------


@pytest.mark.parametrize("value", [-6 / 7, -6 / 7 + 5e-11])
def test_singular_alpha_rejected(value):
    with pytest.raises(SingularParameterError, match="-6/7"):
        el.check_parameter(el.C_ALPHA, value)
    with pytest.raises(SingularParameterError):
        el.coeffs_c_alpha(value)


def test_e_beta_allows_minus_six_sevenths():
    assert el.check_parameter(el.E_BETA, -6 / 7) == pytest.approx(-6 / 7)


@pytest.mark.parametrize("family", el.FAMILIES)
@pytest.mark.parametrize("value", [-1.0, -3.0, np.inf, np.nan])
def test_parameter_must_exceed_minus_one(family, value):
    with pytest.raises(DomainError):
        el.check_parameter(family, value)


# --- AF3 basis ---------------------------------------------------------------


def test_af3_vertex_and_bubble_closed_forms(tri, rng):
    pts = tri.point_at(rng.dirichlet(np.ones(3), size=20))
    x, y = pts[:, 0], pts[:, 1]
    for i in (1, 2, 3):
        np.testing.assert_allclose(phi(tri, i - 1)(x, y), el.af3_phi(tri, i, (x, y)), atol=1e-13)
        np.testing.assert_allclose(phi(tri, i + 2)(x, y), el.af3_bubble(tri, i, (x, y)), atol=1e-13)


def test_af3_expand_reproduces_quadratics(tri, rng):
    c = rng.normal(size=6)
    f = lambda x, y: c[0] + c[1] * x + c[2] * y + c[3] * x * x + c[4] * x * y + c[5] * y * y
    q = el.af3_expand(tri, f)
    pts = tri.point_at(rng.dirichlet(np.ones(3), size=30))
    np.testing.assert_allclose(q(pts[:, 0], pts[:, 1]), f(pts[:, 0], pts[:, 1]), atol=1e-12)


def test_quad_on_tri_arithmetic(tri):
    a, b = phi(tri, 0), phi(tri, 3)
    np.testing.assert_array_equal((a + 2 * b).coeffs, [1, 0, 0, 2, 0, 0])
    assert (a + b).vertex_values.tolist() == [1, 0, 0]


def test_segment_endpoints():
    np.testing.assert_allclose(el.segment_barycentric("cr", 1, [1.0, 0.0]), [[0, 1, 0], [0, 0, 1]])
    np.testing.assert_allclose(el.segment_barycentric("f", 2, [1.0, 0.0]), [[0, 1, 0], [0.5, 0, 0.5]])
    np.testing.assert_allclose(el.segment_barycentric("g", 3, [0.0]), [[1 / 3] * 3])
    with pytest.raises(DomainError):
        el.segment_barycentric("h", 1, 0.5)
    with pytest.raises(DomainError):
        el.segment_barycentric("f", 4, 0.5)


# --- functionals ----------------------------------------------------------------


def test_functionals_against_adaptive_oracle(tri):
    f = lambda x, y: np.sin(x + 2 * y) + x * y
    for j in (1, 2, 3):
        assert el.dof_cr(tri, j, f) == pytest.approx(segment_functional(tri, "cr", j, f, 0.0), rel=1e-12)
        assert el.dof_f_enr(tri, j, 0.5, f) == pytest.approx(segment_functional(tri, "f", j, f, 0.5), rel=1e-12)
        assert el.dof_g_enr(tri, j, 2.0, f) == pytest.approx(segment_functional(tri, "g", j, f, 2.0), rel=1e-12)


def test_functionals_reject_mismatched_rules(tri):
    f = lambda x, y: x
    with pytest.raises(QuadratureMisuseError):
        el.dof_cr(tri, 1, f, gauss_jacobi(8, 1.0))
    with pytest.raises(QuadratureMisuseError):
        el.dof_f_enr(tri, 1, 1.0, f, gauss_jacobi(8, 2.0))
    with pytest.raises(QuadratureMisuseError):
        el.dof_g_enr(tri, 1, 1.0, f, gauss_legendre(8))


def test_f_enr_on_bubbles_at_alpha_one():
    # F_1(bubble_1) = 3/40, F_1(bubble_2) = F_1(bubble_3) = 1/10
    assert el.dof_f_enr(REF, 1, 1.0, phi(REF, 3)) == pytest.approx(3 / 40, rel=1e-13)
    assert el.dof_f_enr(REF, 1, 1.0, phi(REF, 4)) == pytest.approx(1 / 10, rel=1e-13)


# --- constants -----------------------------------------------------------------


@pytest.mark.parametrize("alpha", ALPHAS)
def test_gamma_alpha_is_beta_integral(alpha):
    k = el.coeffs_c_alpha(alpha)
    assert k.gamma == pytest.approx(jacobi_integral(lambda t: t, alpha), rel=1e-12)


@pytest.mark.parametrize("b", BETAS)
def test_nu_beta_is_scaled_beta_integral(b):
    k = el.coeffs_e_beta(b)
    assert k.nu == pytest.approx(jacobi_integral(lambda t: t, b) / (3 * (2 * b + 3)), rel=1e-12)
    assert k.sigma == 3 * b + 4
    assert k.L == pytest.approx(18 * (b + 1) * (b + 2))


def test_c_alpha_constants_at_one():
    k = el.coeffs_c_alpha(1.0)
    assert k.gamma == pytest.approx(1 / 12)
    assert k.h == pytest.approx(-11 / 20)
    assert k.K == pytest.approx(-1 / 5)
    assert k.c == pytest.approx(129 / 91)
    assert k.d == pytest.approx(51 / 91)
    assert k.L == pytest.approx(-91 / 200)


@pytest.mark.parametrize(
    "b, nu, r, m, det",
    [(0.0, 1 / 18, 2.0, 1.0, -1 / 27), (1.0, 1 / 180, 37 / 18, 13 / 18, -1 / 6000)],
)
def test_e_beta_constants(b, nu, r, m, det):
    k = el.coeffs_e_beta(b)
    assert (k.nu, k.r, k.m, k.det) == pytest.approx((nu, r, m, det), rel=1e-13)


def test_delta_alpha_at_zero():
    assert el.coeffs_c_alpha(0.0).det == pytest.approx(-1 / 32, rel=1e-13)


@pytest.mark.parametrize("b", [0.0, 0.5, 1.0, 2.0])
def test_r_beta_is_tau_vertex_value(b):
    k = el.coeffs_e_beta(b)
    assert k.r == pytest.approx((7 * b * b + 18 * b + 12) / (3 * b * b + 9 * b + 6))
    tau, _ = el.basis_e_beta(REF, b)
    assert tau[0].vertex_values[0] == pytest.approx(k.r)


# --- 3x3 systems ---------------------------------------------------------------------


@pytest.mark.parametrize("family, values, kind", [(el.C_ALPHA, ALPHAS, "f"), (el.E_BETA, BETAS, "g")])
def test_enrichment_system_matches_oracle(tri, family, values, kind):
    for p in values:
        oracle = np.array([[segment_functional(tri, kind, j, phi(tri, k), p) for k in range(3)] for j in (1, 2, 3)])
        np.testing.assert_allclose(el.enrichment_system(family, p), oracle, rtol=1e-11, atol=1e-14)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_delta_alpha_closed_form(alpha):
    k = el.coeffs_c_alpha(alpha)
    assert np.linalg.det(el.enrichment_system(el.C_ALPHA, alpha)) == pytest.approx(k.det, rel=1e-12)


@pytest.mark.parametrize("b", BETAS + [-6 / 7])
def test_delta_beta_closed_form(b):
    k = el.coeffs_e_beta(b)
    assert np.linalg.det(el.enrichment_system(el.E_BETA, b)) == pytest.approx(k.det, rel=1e-12)


def test_delta_alpha_vanishes_towards_minus_six_sevenths():
    # |Delta| / gamma^3 shrinks linearly as alpha -> -6/7 from either side
    s = -6 / 7
    scaled = [abs(el.coeffs_c_alpha(s + d).det) / el.coeffs_c_alpha(s + d).gamma ** 3 for d in (1e-1, 1e-2, 1e-3, 1e-4)]
    assert all(b < a for a, b in zip(scaled, scaled[1:]))
    assert scaled[-1] / scaled[-2] == pytest.approx(0.1, rel=1e-2)


# --- dual bases ---------------------------------------------------------------


@pytest.mark.parametrize("alpha", ALPHAS)
def test_c_alpha_duality(tris, alpha):
    for t in tris:
        psi, zeta = el.basis_c_alpha(t, alpha)
        D = np.array(
            [[el.dof_cr(t, j, b) for j in (1, 2, 3)] + [el.dof_f_enr(t, j, alpha, b) for j in (1, 2, 3)] for b in psi + zeta]
        )
        np.testing.assert_allclose(D, np.eye(6), atol=1e-10)


@pytest.mark.parametrize("b", BETAS)
def test_e_beta_duality(tris, b):
    for t in tris:
        tau, rho = el.basis_e_beta(t, b)
        D = np.array(
            [[el.dof_cr(t, j, q) for j in (1, 2, 3)] + [el.dof_g_enr(t, j, b, q) for j in (1, 2, 3)] for q in tau + rho]
        )
        np.testing.assert_allclose(D, np.eye(6), atol=1e-10)


def test_cr_basis_is_one_minus_two_lambda(tri, rng):
    lam = rng.dirichlet(np.ones(3), size=10)
    for j, th in enumerate(el.basis_cr(tri)):
        np.testing.assert_allclose(th.at_barycentric(lam), 1 - 2 * lam[:, j], atol=1e-14)
        assert [el.dof_cr(tri, i, th) for i in (1, 2, 3)] == pytest.approx(np.eye(3)[j], abs=1e-14)


@pytest.mark.parametrize("family, values", [(el.C_ALPHA, ALPHAS), (el.E_BETA, BETAS)])
def test_enriched_block_inverts_enrichment_system(family, values):
    # the second triple has zero edge means, so its vertex values invert the system
    for p in values:
        M = el.dof_to_af3(family, p)
        np.testing.assert_allclose(el.enrichment_system(family, p) @ M[:3, 3:], np.eye(3), atol=1e-10)


# --- weight exponent ---------------------------------------------------------------


@pytest.mark.parametrize("b", [0.25, 1.0, 2.0])
def test_symmetric_weight_gives_g_constants(b):
    k = el.coeffs_e_beta(b)
    for j in (1, 2, 3):
        g = [el.dof_g_enr(REF, j, b, phi(REF, i)) for i in range(3)]
        assert g[j - 1] == pytest.approx(2 * k.nu, rel=1e-12)
        assert [g[i] for i in range(3) if i != j - 1] == pytest.approx([-k.sigma * k.nu] * 2, rel=1e-12)


def test_printed_weight_exponent_is_inconsistent():
    # with t^b (1-t)^(1-b) at b=1, G_j(phi_j) = 1/6 instead of 2 nu = 1/90
    k = el.coeffs_e_beta(1.0)
    gjj = segment_functional(REF, "g", 1, phi(REF, 0), 1.0, 0.0)
    gjk = segment_functional(REF, "g", 1, phi(REF, 1), 1.0, 0.0)
    assert gjj == pytest.approx(1 / 6, rel=1e-12)
    assert gjj != pytest.approx(2 * k.nu, rel=1e-2)
    assert gjk != pytest.approx(-k.sigma * k.nu, rel=1e-2)


# --- unisolvence ---------------------------------------------------------------------


@pytest.mark.parametrize("family, value", [(el.C_ALPHA, a) for a in ALPHAS] + [(el.E_BETA, b) for b in BETAS + [5.0]])
def test_unisolvence_determinant_is_delta_over_108(tris, family, value):
    delta = (el.coeffs_c_alpha if family == el.C_ALPHA else el.coeffs_e_beta)(value).det
    for t in tris[:4]:
        U = el.unisolvence_matrix(t, family, value)
        assert U.shape == (6, 6)
        assert np.linalg.det(U) == pytest.approx(delta / 108, rel=1e-10)


@pytest.mark.parametrize("family, value", [(el.C_ALPHA, 1.0), (el.E_BETA, -0.9), (el.E_BETA, 0.0), (el.E_BETA, 1.0)])
def test_unisolvence_determinant_clearly_nonzero(tri, family, value):
    assert abs(np.linalg.det(el.unisolvence_matrix(tri, family, value))) > 1e-10


@pytest.mark.parametrize("b", [1.0, 5.0, 20.0])
def test_unisolvence_large_beta_after_mass_normalization(tri, b):
    # the raw determinant decays like the cube of the weight mass, but the
    # functionals stay independent once each weighted row is normalized
    U = el.unisolvence_matrix(tri, el.E_BETA, b)
    U[3:] /= gauss_jacobi(16, b).mass
    assert abs(np.linalg.det(U)) > 1e-4


def test_unisolvence_matrix_columns_are_monomials(tri):
    U = el.unisolvence_matrix(tri, el.C_ALPHA, 0.0)
    # I_j(lam_k) = 1/2 for j != k, 0 for j == k
    np.testing.assert_allclose(U[:3, :3], (1 - np.eye(3)) / 2, atol=1e-14)
