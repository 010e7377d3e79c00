"""Renka test functions, L1 interpolation errors and refinement studies."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels
from .errors import DomainError
from .meshkit import TriMesh, uniform_grid_mesh
from .operators import Scheme, interpolate_global
from .quadrature import TriangleRuleConfig, triangle_rule


def _f1(x, y):
    return np.sin(2 * np.pi * x) * np.cos(2 * np.pi * y) / 2


def _f2(x, y):
    return 1 / (x**2 + y**2 + 8)


def _f3(x, y):
    return np.exp(-81 / 16 * ((x - 0.5) ** 2 + (y - 0.5) ** 2)) / 3


def _f4(x, y):
    return np.sqrt(64 - 81 * ((x - 0.5) ** 2 + (y - 0.5) ** 2)) / 9 - 0.5


def _f5(x, y):
    return np.exp(x + y)


def _f6(x, y):
    return 1 / (x**2 + y**2 + 25)


@dataclass(frozen=True)
class TestFunction:
    id: str
    func: object = field(repr=False, compare=False)
    formula: str = ""

    __test__ = False  # not a pytest class

    def __call__(self, x, y):
        return self.func(np.asarray(x, dtype=float), np.asarray(y, dtype=float))


RENKA = {
    "f1": TestFunction("f1", _f1, "sin(2 pi x) cos(2 pi y) / 2"),
    "f2": TestFunction("f2", _f2, "1 / (x^2 + y^2 + 8)"),
    "f3": TestFunction("f3", _f3, "exp(-81/16 ((x-.5)^2 + (y-.5)^2)) / 3"),
    "f4": TestFunction("f4", _f4, "sqrt(64 - 81 ((x-.5)^2 + (y-.5)^2)) / 9 - .5"),
    "f5": TestFunction("f5", _f5, "exp(x + y)"),
    "f6": TestFunction("f6", _f6, "1 / (x^2 + y^2 + 25)"),
}


def renka(id) -> TestFunction:
    """Renka test function by id (``"f1"`` .. ``"f6"`` or ``1`` .. ``6``)."""
    key = f"f{id}" if isinstance(id, int) and not isinstance(id, bool) else str(id).strip().lower()
    try:
        return RENKA[key]
    except KeyError:
        raise DomainError(f"unknown test function {id!r}; expected f1..f6") from None


# --- errors ---------------------------------------------------------------------


def l1_error_per_triangle(
    mesh: TriMesh,
    scheme: Scheme,
    f,
    cfg: TriangleRuleConfig = TriangleRuleConfig(),
    chunk: int = 4096,
) -> np.ndarray:
    """``integral_T |f - Pi_T f|`` for every triangle ``T`` of ``mesh``."""
    approx = interpolate_global(mesh, scheme, f)
    coeffs = np.ascontiguousarray(approx.af3)
    lam, w = triangle_rule(cfg)
    lam = np.ascontiguousarray(lam)
    w = np.ascontiguousarray(w)
    corners = mesh.corners
    out = np.empty(mesh.N)
    for s in range(0, mesh.N, chunk):
        e = slice(s, s + chunk)
        pts = np.einsum("qa,nab->nqb", lam, corners[e])
        fv = np.broadcast_to(np.asarray(f(pts[..., 0], pts[..., 1]), dtype=float), pts.shape[:-1])
        out[e] = _kernels.abs_error_sums(coeffs[e], lam, w, np.ascontiguousarray(fv))
    return out * mesh.areas


def l1_error(mesh: TriMesh, scheme: Scheme, f, cfg: TriangleRuleConfig = TriangleRuleConfig()) -> float:
    """L1 norm of ``f - Pi f`` over the mesh (piecewise interpolant)."""
    err = math.fsum(l1_error_per_triangle(mesh, scheme, f, cfg).tolist())
    if not math.isfinite(err):
        raise FloatingPointError(f"non-finite L1 error for {scheme.label}")
    return err


# --- reports --------------------------------------------------------------------


@dataclass(frozen=True)
class ErrorRow:
    mesh: str
    N: int
    scheme: str
    param: float | None
    function: str
    l1_error: float
    order: float | None = None
    h: float | None = None

    @property
    def scheme_label(self) -> str:
        return self.scheme if self.param is None else f"{self.scheme}:{self.param:g}"


@dataclass
class ErrorReport:
    rows: list[ErrorRow] = field(default_factory=list)

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    @property
    def has_orders(self) -> bool:
        return any(r.order is not None for r in self.rows)

    def lookup(self, function: str, scheme_label: str, mesh: str | None = None) -> float:
        for r in self.rows:
            if r.function == function and r.scheme_label == scheme_label and (mesh is None or r.mesh == mesh):
                return r.l1_error
        raise KeyError((function, scheme_label, mesh))

    def orders(self, function: str, scheme_label: str) -> list[float]:
        return [
            r.order
            for r in self.rows
            if r.function == function and r.scheme_label == scheme_label and r.order is not None
        ]


def error_table(
    mesh: TriMesh,
    schemes,
    functions,
    cfg: TriangleRuleConfig = TriangleRuleConfig(),
    label: str = "mesh",
) -> ErrorReport:
    """L1 errors for every (function, scheme) pair on one mesh."""
    rows = []
    for fid in functions:
        tf = renka(fid) if not isinstance(fid, TestFunction) else fid
        for sc in schemes:
            rows.append(ErrorRow(label, mesh.N, sc.kind, sc.param, tf.id, l1_error(mesh, sc, tf, cfg)))
    return ErrorReport(rows)


def observed_orders(h, errors) -> list[float | None]:
    """``log(E_{i-1}/E_i) / log(h_{i-1}/h_i)``; ``None`` for the first entry."""
    out = [None]
    for i in range(1, len(errors)):
        out.append(math.log(errors[i - 1] / errors[i]) / math.log(h[i - 1] / h[i]))
    return out


def convergence_study(
    n_list,
    scheme: Scheme,
    tf,
    cfg: TriangleRuleConfig = TriangleRuleConfig(),
    diagonal: str = "anti",
) -> ErrorReport:
    """L1 errors on ``uniform_grid_mesh(n)`` for each ``n``, with observed orders (``h = 1/n``)."""
    n_list = [int(n) for n in n_list]
    if len(n_list) < 2:
        raise DomainError("a convergence study needs at least two grid sizes")
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise DomainError(f"grid sizes must be strictly increasing, got {n_list}")
    tf = renka(tf) if not isinstance(tf, TestFunction) else tf
    rows = []
    for n in n_list:
        mesh = uniform_grid_mesh(n, diagonal)
        rows.append(ErrorRow(f"grid{n}", mesh.N, scheme.kind, scheme.param, tf.id, l1_error(mesh, scheme, tf, cfg), h=1.0 / n))
    orders = observed_orders([r.h for r in rows], [r.l1_error for r in rows])
    return ErrorReport([replace(r, order=o) for r, o in zip(rows, orders)])


def mesh_convergence_study(
    meshes,
    scheme: Scheme,
    tf,
    cfg: TriangleRuleConfig = TriangleRuleConfig(),
) -> ErrorReport:
    """Like :func:`convergence_study` for ``(label, mesh)`` pairs, with
    ``h`` the largest triangle diameter of each mesh."""
    tf = renka(tf) if not isinstance(tf, TestFunction) else tf
    rows = [
        ErrorRow(label, m.N, scheme.kind, scheme.param, tf.id, l1_error(m, scheme, tf, cfg), h=float(m.diameters().max()))
        for label, m in meshes
    ]
    orders = observed_orders([r.h for r in rows], [r.l1_error for r in rows])
    return ErrorReport([replace(r, order=o) for r, o in zip(rows, orders)])


# --- emission -------------------------------------------------------------------


def _sci(x) -> str:
    return f"{x:.4e}"


def _order(x) -> str:
    return "" if x is None else f"{x:.4f}"


def _csv(report: ErrorReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    head = ["mesh", "N", "scheme", "param", "function", "l1_error"]
    with_order = report.has_orders
    w.writerow(head + ["order"] if with_order else head)
    for r in report:
        row = [r.mesh, r.N, r.scheme, "" if r.param is None else f"{r.param:g}", r.function, _sci(r.l1_error)]
        w.writerow(row + [_order(r.order)] if with_order else row)
    return buf.getvalue()


def _md_row(cells) -> str:
    return "| " + " | ".join(cells) + " |"


def _markdown(report: ErrorReport) -> str:
    meshes = list(dict.fromkeys((r.mesh, r.N) for r in report))
    if len(meshes) == 1 and not report.has_orders:
        schemes = list(dict.fromkeys(r.scheme_label for r in report))
        functions = list(dict.fromkeys(r.function for r in report))
        cell = {(r.function, r.scheme_label): _sci(r.l1_error) for r in report}
        lines = [
            f"L1 errors on {meshes[0][0]} (N={meshes[0][1]})",
            "",
            _md_row(["function"] + schemes),
            _md_row(["---"] * (len(schemes) + 1)),
        ]
        lines += [_md_row([f] + [cell.get((f, s), "") for s in schemes]) for f in functions]
        return "\n".join(lines) + "\n"
    head = ["mesh", "N", "scheme", "function", "L1 error", "order"]
    lines = [_md_row(head), _md_row(["---"] * len(head))]
    lines += [
        _md_row([r.mesh, str(r.N), r.scheme_label, r.function, _sci(r.l1_error), _order(r.order)])
        for r in report
    ]
    return "\n".join(lines) + "\n"


def table_emit(report: ErrorReport, format: str = "md") -> str:
    """Render a report as CSV or a markdown table (4 significant digits)."""
    if not len(report):
        raise DomainError("cannot emit an empty report")
    if format == "csv":
        return _csv(report)
    if format in ("md", "markdown"):
        return _markdown(report)
    raise DomainError(f"unknown table format {format!r}")
