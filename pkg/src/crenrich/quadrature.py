"""Special functions and quadrature rules.

Line rules live on ``[0, 1]`` and come in two flavours: plain Gauss-Legendre
(unit weight) and Gauss-Jacobi for the symmetric weight ``t^a (1 - t)^a``.
Triangle integration composites a symmetric base rule (degree 8 by default,
the 7-point degree-5 rule on request) over a uniform ``4^k`` refinement of
the triangle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .meshkit import Triangle2D

MAX_LINE_NODES = 64

# --- log-gamma and Beta -------------------------------------------------------

_LANCZOS_G = 7
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_EULER_GAMMA = 0.57721566490153286061

# Bernoulli numbers B_2 .. B_16
_BERNOULLI = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6, -3617 / 510)


def _zeta(s: int, n: int = 10) -> float:
    """Riemann zeta at integer ``s >= 2`` by Euler-Maclaurin summation."""
    head = math.fsum(k ** -float(s) for k in range(1, n))
    tail = n ** (1.0 - s) / (s - 1) + 0.5 * n ** -float(s)
    rising = float(s)
    for m, b2m in enumerate(_BERNOULLI, start=1):
        tail += b2m / math.factorial(2 * m) * rising * n ** (-s - 2 * m + 1.0)
        rising *= (s + 2 * m - 1) * (s + 2 * m)
    return head + tail


# Taylor coefficients of ln Gamma(1 + z) for k >= 2: (-1)^k zeta(k) / k
_LNGAMMA1_SERIES = tuple((-1) ** k * _zeta(k) / k for k in range(2, 32))
_SERIES_RADIUS = 0.25


def _lngamma_near_one(z: float) -> float:
    acc = 0.0
    for c in reversed(_LNGAMMA1_SERIES):
        acc = (acc + c) * z
    return (acc - _EULER_GAMMA) * z


def _lanczos_lngamma(x: float) -> float:
    z = x - 1.0
    a = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        a += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * math.log(t) - t + math.log(a)


def ln_gamma(x: float) -> float:
    """Natural logarithm of the Gamma function for ``x > 0``.

    Lanczos approximation (g=7, 9 terms), with the reflection formula below
    1/2 and a Taylor expansion around the zeros at 1 and 2 so the result
    keeps its relative accuracy there.
    """
    x = float(x)
    if not x > 0.0 or math.isinf(x):
        raise DomainError(f"ln_gamma requires a finite x > 0, got {x}")
    if abs(x - 1.0) < _SERIES_RADIUS:
        return _lngamma_near_one(x - 1.0)
    if abs(x - 2.0) < _SERIES_RADIUS:
        z = x - 2.0
        return math.log1p(z) + _lngamma_near_one(z)
    if x < 0.5:
        return math.log(math.pi / math.sin(math.pi * x)) - _lanczos_lngamma(1.0 - x)
    return _lanczos_lngamma(x)


def beta(z1: float, z2: float) -> float:
    """Euler Beta function ``B(z1, z2)`` for positive arguments."""
    if not (z1 > 0 and z2 > 0):
        raise DomainError(f"beta requires positive arguments, got ({z1}, {z2})")
    return math.exp(ln_gamma(z1) + ln_gamma(z2) - ln_gamma(z1 + z2))


# --- line rules -----------------------------------------------------------------


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights on ``[0, 1]``.

    ``weight_kind`` is ``"unit"`` or ``"jacobi"``; for the latter ``alpha``
    is the exponent of the weight ``t^alpha (1 - t)^alpha``.
    """

    nodes: np.ndarray
    weights: np.ndarray
    weight_kind: str = "unit"
    alpha: float | None = None

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float)
        weights = np.array(self.weights, dtype=float)
        if nodes.shape != weights.shape or nodes.ndim != 1:
            raise ValueError("nodes and weights must be 1-D arrays of equal length")
        if self.weight_kind not in ("unit", "jacobi"):
            raise ValueError(f"unknown weight kind {self.weight_kind!r}")
        if (self.weight_kind == "jacobi") != (self.alpha is not None):
            raise ValueError("alpha is required for (and only for) Jacobi rules")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def mass(self) -> float:
        """Exact integral of the weight over ``[0, 1]``."""
        if self.weight_kind == "unit":
            return 1.0
        return beta(self.alpha + 1.0, self.alpha + 1.0)

    def matches(self, alpha: float | None) -> bool:
        if alpha is None:
            return self.weight_kind == "unit"
        return self.weight_kind == "jacobi" and self.alpha == float(alpha)

    def integrate(self, g) -> float:
        vals = np.broadcast_to(np.asarray(g(self.nodes), dtype=float), self.nodes.shape)
        return float(self.weights @ vals)


def _check_count(n):
    if isinstance(n, bool) or int(n) != n or not 1 <= n <= MAX_LINE_NODES:
        raise DomainError(f"number of nodes must be an integer in [1, {MAX_LINE_NODES}], got {n!r}")
    return int(n)


@lru_cache(maxsize=None)
def gauss_legendre(n: int) -> QuadratureRule:
    """``n``-point Gauss-Legendre rule on ``[0, 1]``, exact to degree ``2n - 1``."""
    n = _check_count(n)
    x, w = np.polynomial.legendre.leggauss(n)
    return QuadratureRule((x + 1.0) / 2.0, w / 2.0)


@lru_cache(maxsize=None)
def gauss_jacobi(n: int, alpha: float) -> QuadratureRule:
    """``n``-point Gauss rule on ``[0, 1]`` for the weight ``t^alpha (1-t)^alpha``.

    Golub-Welsch: the nodes are the eigenvalues of the Jacobi matrix of the
    monic recurrence for ``P_k^(alpha, alpha)`` on ``[-1, 1]``; the weights
    are the squared first eigenvector components times the weight's mass.
    Because the weight is symmetric the diagonal of the Jacobi matrix is zero.
    """
    n = _check_count(n)
    alpha = float(alpha)
    if not alpha > -1.0 or not math.isfinite(alpha):
        raise DomainError(f"Jacobi exponent must be > -1, got {alpha}")
    a = b = alpha
    k = np.arange(1, n, dtype=float)
    s = 2.0 * k + a + b
    with np.errstate(divide="ignore", invalid="ignore"):
        off2 = 4.0 * k * (k + a) * (k + b) * (k + a + b) / (s**2 * (s + 1.0) * (s - 1.0))
    if n > 1:
        # the k=1 term has a removable 0/0 at a + b = -1
        off2[0] = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b) ** 2 * (3.0 + a + b))
    jac = np.diag(np.sqrt(off2), 1)
    jac = jac + jac.T
    x, vec = np.linalg.eigh(jac)
    # symmetric weight: fold nodes to kill the O(eps) asymmetry of the solver
    x = 0.5 * (x - x[::-1])
    w = vec[0] ** 2
    w = 0.5 * (w + w[::-1])
    mass = beta(alpha + 1.0, alpha + 1.0)
    return QuadratureRule((x + 1.0) / 2.0, mass * w / w.sum(), "jacobi", alpha)


# --- triangle rules -------------------------------------------------------------


@dataclass(frozen=True)
class TriangleRuleConfig:
    """Composite triangle rule: base polynomial degree and refinement level."""

    base_degree: int = 8
    subdivision: int = 2

    def __post_init__(self):
        if int(self.base_degree) != self.base_degree or self.base_degree < 5:
            raise DomainError(f"base_degree must be an integer >= 5, got {self.base_degree!r}")
        if int(self.subdivision) != self.subdivision or self.subdivision < 0:
            raise DomainError(f"subdivision must be a non-negative integer, got {self.subdivision!r}")


def _radon7():
    r = math.sqrt(15.0)
    a1, a2 = (6.0 - r) / 21.0, (6.0 + r) / 21.0
    w1, w2 = (155.0 - r) / 1200.0, (155.0 + r) / 1200.0
    lam = [(1 / 3, 1 / 3, 1 / 3)]
    w = [9.0 / 40.0]
    for a, wa in ((a1, w1), (a2, w2)):
        b = 1.0 - 2.0 * a
        lam += [(b, a, a), (a, b, a), (a, a, b)]
        w += [wa] * 3
    return np.array(lam), np.array(w)


def _dunavant16():
    # degree-8 symmetric rule: centroid, three 3-point orbits, one 6-point orbit
    lam = [(1 / 3, 1 / 3, 1 / 3)]
    w = [0.144315607677787]
    for a, wa in (
        (0.459292588292723, 0.095091634267285),
        (0.170569307751760, 0.103217370534718),
        (0.050547228317031, 0.032458497623198),
    ):
        b = 1.0 - 2.0 * a
        lam += [(b, a, a), (a, b, a), (a, a, b)]
        w += [wa] * 3
    p, q = 0.008394777409958, 0.263112829634638
    r = 1.0 - p - q
    lam += [(p, q, r), (q, r, p), (r, p, q), (q, p, r), (p, r, q), (r, q, p)]
    w += [0.027230314174435] * 6
    return np.array(lam), np.array(w)


_SYMMETRIC = {5: _radon7, 8: _dunavant16}


def _collapsed(degree):
    n = (degree + 3) // 2
    x, wx = np.polynomial.legendre.leggauss(n)
    x, wx = (x + 1.0) / 2.0, wx / 2.0
    u, v = np.meshgrid(x, x, indexing="ij")
    wu, wv = np.meshgrid(wx, wx, indexing="ij")
    l2 = u.ravel()
    l3 = ((1.0 - u) * v).ravel()
    w = (2.0 * wu * wv * (1.0 - u)).ravel()
    return np.column_stack([1.0 - l2 - l3, l2, l3]), w


@lru_cache(maxsize=None)
def _reference_rule(base_degree: int, subdivision: int):
    lam0, w0 = _SYMMETRIC[base_degree]() if base_degree in _SYMMETRIC else _collapsed(base_degree)
    m = 2**subdivision
    g = lambda i, j: (1.0 - (i + j) / m, i / m, j / m)  # noqa: E731
    cells = []
    for i in range(m):
        for j in range(m - i):
            cells.append((g(i, j), g(i + 1, j), g(i, j + 1)))
            if i + j <= m - 2:
                cells.append((g(i + 1, j), g(i + 1, j + 1), g(i, j + 1)))
    corners = np.array(cells)  # (m^2, 3, 3)
    lam = np.einsum("qa,cab->cqb", lam0, corners).reshape(-1, 3)
    w = np.tile(w0 / m**2, len(cells))
    lam.setflags(write=False)
    w.setflags(write=False)
    return lam, w


def triangle_rule(cfg: TriangleRuleConfig = TriangleRuleConfig()) -> tuple[np.ndarray, np.ndarray]:
    """Reference composite rule as barycentric points ``(M, 3)`` and weights
    ``(M,)`` normalised to sum to one (multiply by the area to integrate)."""
    return _reference_rule(int(cfg.base_degree), int(cfg.subdivision))


def integrate_on_triangle(tri: Triangle2D, f, cfg: TriangleRuleConfig = TriangleRuleConfig()) -> float:
    """Approximate the integral of ``f(x, y)`` over ``tri``."""
    lam, w = triangle_rule(cfg)
    pts = tri.point_at(lam)
    vals = np.broadcast_to(np.asarray(f(pts[:, 0], pts[:, 1]), dtype=float), w.shape)
    return abs(tri.area) * float(w @ vals)
