import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crenrich.errors import GeometryError, MeshParseError
from crenrich.meshkit import (
    Point2D,
    Triangle2D,
    TriMesh,
    barycentric_at,
    format_triangle_mesh,
    load_triangle_mesh,
    locate,
    read_triangle_mesh,
    special_points,
    uniform_grid_mesh,
    write_triangle_mesh,
)

coord = st.floats(-10, 10, allow_nan=False)


def test_reference_triangle_area_and_orientation():
    t = Triangle2D((0, 0), (1, 0), (0, 1))
    assert t.area == pytest.approx(0.5)
    assert Triangle2D((0, 0), (0, 1), (1, 0)).area == pytest.approx(-0.5)
    assert t.diameter == pytest.approx(np.sqrt(2))


def test_degenerate_triangle_rejected():
    with pytest.raises(GeometryError):
        Triangle2D((0, 0), (1, 1), (2, 2))
    with pytest.raises(GeometryError):
        Triangle2D((0, 0), (1, 0), (np.nan, 1))


def test_cyclic_vertex_and_edges(tri):
    assert tri.vertex(4) == tri.v1
    assert tri.vertex(0) == tri.v3
    assert tri.edge(1) == (tri.v2, tri.v3)


def test_barycentric_of_vertices_and_centroid(tri):
    lam = tri.barycentric(tri.vertices[:, 0], tri.vertices[:, 1])
    np.testing.assert_allclose(lam, np.eye(3), atol=1e-14)
    c = tri.vertices.mean(axis=0)
    np.testing.assert_allclose(barycentric_at(tri, c), [1 / 3] * 3)


def test_special_points(tri):
    pts = special_points(tri)
    assert all(isinstance(p, Point2D) for p in pts)
    np.testing.assert_allclose(pts[-1], tri.vertices.mean(axis=0))


@settings(max_examples=60, deadline=None)
@given(st.lists(coord, min_size=6, max_size=6), st.floats(0, 1), st.floats(0, 1))
def test_barycentric_round_trip(xs, s, t):
    pts = np.array(xs).reshape(3, 2)
    try:
        tri = Triangle2D.from_array(pts)
    except GeometryError:
        return
    if abs(tri.area) < 1e-3:
        return
    lam = np.array([s, t * (1 - s), (1 - s) * (1 - t)])
    p = tri.point_at(lam)
    got = tri.barycentric(p[0], p[1])
    assert got.sum() == pytest.approx(1.0)
    np.testing.assert_allclose(got, lam, atol=1e-8)


@pytest.mark.parametrize("n", [1, 2, 5, 19])
@pytest.mark.parametrize("diagonal", ["anti", "main"])
def test_uniform_grid_counts_and_area(n, diagonal):
    m = uniform_grid_mesh(n, diagonal)
    assert m.N == 2 * n * n
    assert len(m.vertices) == (n + 1) ** 2
    assert np.all(m.signed_areas > 0)
    assert m.areas.sum() == pytest.approx(1.0)
    np.testing.assert_allclose(m.diameters(), np.sqrt(2) / n)


def test_uniform_grid_diagonal_direction():
    anti = uniform_grid_mesh(1, "anti").corners
    main = uniform_grid_mesh(1, "main").corners
    # the shared edge of the two cells
    def shared(c):
        a, b = {tuple(p) for p in c[0]}, {tuple(p) for p in c[1]}
        return a & b
    assert shared(anti) == {(1.0, 0.0), (0.0, 1.0)}
    assert shared(main) == {(0.0, 0.0), (1.0, 1.0)}


def test_uniform_grid_rejects_bad_input():
    with pytest.raises(ValueError):
        uniform_grid_mesh(0)
    with pytest.raises(ValueError):
        uniform_grid_mesh(3, "sideways")


def test_trimesh_validation():
    v = np.array([[0, 0], [1, 0], [0, 1], [1, 1]], float)
    with pytest.raises(GeometryError):
        TriMesh(v, np.array([[0, 1, 7]]))
    with pytest.raises(GeometryError):
        TriMesh(v, np.array([[0, 1, 1]]))
    m = TriMesh(v, np.array([[0, 1, 2], [1, 3, 2]]))
    with pytest.raises(ValueError):
        m.vertices[0, 0] = 5.0


def test_locate_agrees_with_brute_force(rng):
    m = uniform_grid_mesh(6)
    for p in rng.uniform(0, 1, size=(200, 2)):
        k = locate(m, p)
        expected = next(i for i, t in enumerate(m) if np.all(t.barycentric(*p) >= -1e-12))
        assert k == expected
    assert locate(m, (1.5, 0.5)) is None


def test_locate_shared_edge_picks_lowest_index():
    m = uniform_grid_mesh(1)
    assert locate(m, (0.5, 0.5)) == 0


@pytest.mark.parametrize("base", [0, 1])
def test_triangle_format_round_trip(base):
    m = uniform_grid_mesh(4)
    node, ele = format_triangle_mesh(m, base)
    back = load_triangle_mesh(node, ele)
    np.testing.assert_array_equal(back.vertices, m.vertices)
    np.testing.assert_array_equal(back.triangles, m.triangles)


def test_read_write_files(tmp_path):
    m = uniform_grid_mesh(3, "main")
    node, ele = write_triangle_mesh(m, tmp_path / "g3")
    assert node.name == "g3.node"
    back = read_triangle_mesh(node, ele)
    np.testing.assert_array_equal(back.triangles, m.triangles)


def test_parser_accepts_comments_attributes_and_markers():
    node = "# square\n4 2 1 1\n1 0 0 9.5 1\n2 1 0 0 1\n3 1 1 0 1  # corner\n4 0 1 0 1\n"
    ele = "2 3 1\n1 1 2 3 7\n2 1 3 4 7\n"
    m = load_triangle_mesh(node, ele)
    assert m.N == 2
    assert m.areas.sum() == pytest.approx(1.0)


@pytest.mark.parametrize(
    "node, ele, line, fragment",
    [
        ("3 3 0 0\n1 0 0\n2 1 0\n3 0 1\n", "1 3\n1 1 2 3\n", 1, "dimension"),
        ("3 2 0 0\n1 0 0\n2 1 0\n", "1 3\n1 1 2 3\n", 3, "declares 3 vertices"),
        ("3 2 0 0\n1 0 0\n3 1 0\n4 0 1\n", "1 3\n1 1 2 3\n", 3, "out of sequence"),
        ("3 2 0 0\n1 0 0\n2 1 x\n3 0 1\n", "1 3\n1 1 2 3\n", 3, "bad coordinates"),
        ("3 2 0 0\n1 0 0\n2 1 0\n3 0 1\n", "1 6\n1 1 2 3 4 5 6\n", 1, "3-node"),
        ("3 2 0 0\n1 0 0\n2 1 0\n3 0 1\n", "1 3\n1 1 2 4\n", 2, "out of range"),
    ],
)
def test_parser_errors_carry_line_numbers(node, ele, line, fragment):
    with pytest.raises(MeshParseError) as exc:
        load_triangle_mesh(node, ele, node_source="a.node", ele_source="a.ele")
    assert exc.value.line == line
    assert fragment in str(exc.value)
    assert f":{line}:" in str(exc.value)


def test_parser_degenerate_triangle_is_parse_error():
    node = "3 2\n0 0 0\n1 1 0\n2 2 0\n"
    ele = "1 3\n0 0 1 2\n"
    with pytest.raises(MeshParseError):
        load_triangle_mesh(node, ele)
