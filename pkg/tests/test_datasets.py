import io
import math

import numpy as np
import pytest

from schoenberg import datasets as ds
from schoenberg.errors import ParseError, SingularCovarianceError, ValidationError


def test_grid_layout():
    g = ds.generate_grid(10, 2.0)
    assert g.coordinates.shape == (100, 2) and g.labels is None
    np.testing.assert_array_equal(g.coordinates[:3], [[0, 0], [0, 2], [0, 4]])
    np.testing.assert_array_equal(g.coordinates[-1], [18, 18])
    with pytest.raises(ValidationError):
        ds.generate_grid(1)
    with pytest.raises(ValidationError):
        ds.generate_grid(4, 0.0)


def test_rod_deterministic_and_bounded():
    a, b = ds.generate_rod(500, seed=4), ds.generate_rod(500, seed=4)
    np.testing.assert_array_equal(a.coordinates, b.coordinates)
    assert not np.array_equal(a.coordinates, ds.generate_rod(500, seed=5).coordinates)
    X = a.coordinates
    assert X.shape == (500, 2)
    assert 0 <= X[:, 0].min() and X[:, 0].max() < 1000
    assert 0 <= X[:, 1].min() and X[:, 1].max() < 1


def test_rod_means():
    X = ds.generate_rod(1000, seed=11).coordinates
    sd = 1 / math.sqrt(12) / math.sqrt(1000)
    assert abs(X[:, 0].mean() - 500) < 3 * 1000 * sd
    assert abs(X[:, 1].mean() - 0.5) < 3 * sd


def test_rod_draw_order():
    rng = np.random.Generator(np.random.PCG64(8))
    u = rng.random(20)
    X = ds.generate_rod(10, seed=8).coordinates
    np.testing.assert_array_equal(X[:, 0], 1000 * u[:10])
    np.testing.assert_array_equal(X[:, 1], u[10:])


def test_circles_structure():
    c = ds.generate_circles(seed=3)
    assert c.coordinates.shape == (150, 2)
    np.testing.assert_array_equal(c.labels, np.repeat([1, 2, 3], 50))
    np.testing.assert_array_equal(c.coordinates, ds.generate_circles(seed=3).coordinates)
    r = np.hypot(*c.coordinates.T)
    for g, (rad, s) in enumerate(zip(ds.CIRCLE_RADII, ds.CIRCLE_SDS), start=1):
        assert abs(r[c.labels == g].mean() - rad) < 3 * s / math.sqrt(50)


def test_point_cloud_validation():
    with pytest.raises(ValidationError):
        ds.PointCloud(np.zeros((0, 2)))
    with pytest.raises(ValidationError):
        ds.PointCloud(np.array([[np.nan, 1.0]]))
    with pytest.raises(ValidationError):
        ds.PointCloud(np.zeros((3, 2)), labels=[1, 2])


def test_squared_distances_examples():
    D = ds.squared_distances(np.array([[0.0, 0.0], [3.0, 4.0], [0.0, 1.0]]))
    np.testing.assert_array_equal(D, [[0, 25, 1], [25, 0, 18], [1, 18, 0]])


def test_squared_distances_triangle_inequality(rng):
    X = rng.standard_normal((15, 4))
    d = np.sqrt(ds.squared_distances(X))
    assert np.all(d[:, :, None] <= d[:, None, :] + d.T[None, :, :] + 1e-12)


def test_mahalanobis_total_covariance(rng):
    X = rng.standard_normal((200, 3)) @ np.array([[2.0, 0, 0], [1.0, 0.5, 0], [0, 0.3, 4.0]])
    Z = ds.mahalanobis_standardize(ds.PointCloud(X)).coordinates
    np.testing.assert_allclose(np.cov(Z, rowvar=False), np.eye(3), atol=1e-8)
    np.testing.assert_allclose(Z.mean(axis=0), 0, atol=1e-12)


def test_mahalanobis_axis_scaling(rng):
    X = rng.standard_normal((50, 2))
    Y = X * [10.0, 0.01]
    za = ds.mahalanobis_standardize(ds.PointCloud(X)).coordinates
    zb = ds.mahalanobis_standardize(ds.PointCloud(Y)).coordinates
    np.testing.assert_allclose(ds.squared_distances(za), ds.squared_distances(zb), rtol=1e-9, atol=1e-12)


def test_mahalanobis_idempotent_distances(rng):
    X = rng.standard_normal((40, 3))
    once = ds.mahalanobis_standardize(ds.PointCloud(X))
    twice = ds.mahalanobis_standardize(once)
    np.testing.assert_allclose(ds.squared_distances(twice), ds.squared_distances(once), rtol=1e-9, atol=1e-12)


def test_mahalanobis_within_groups(rng):
    X = np.vstack([rng.standard_normal((30, 2)), rng.standard_normal((30, 2)) + 5])
    labels = np.repeat([1, 2], 30)
    Z = ds.mahalanobis_standardize(ds.PointCloud(X, labels), within_groups=True)
    S = ds._pooled_within_covariance(Z.coordinates, labels)
    np.testing.assert_allclose(S, np.eye(2), atol=1e-10)
    with pytest.raises(ValidationError):
        ds.mahalanobis_standardize(ds.PointCloud(X), within_groups=True)


def test_mahalanobis_singular(rng):
    x = rng.standard_normal(20)
    X = np.column_stack([x, 2 * x, rng.standard_normal(20)])
    with pytest.raises(SingularCovarianceError) as info:
        ds.mahalanobis_standardize(ds.PointCloud(X))
    d = info.value.directions[0]
    assert abs(abs(d @ np.array([2.0, -1.0, 0.0])) / math.sqrt(5) - 1) < 1e-6


def test_mahalanobis_drops_constant_column(rng, caplog):
    X = np.column_stack([rng.standard_normal(20), np.full(20, 3.0)])
    Z = ds.mahalanobis_standardize(ds.PointCloud(X))
    assert Z.p == 1
    assert "near-constant" in caplog.text


def write(tmp_path, text, name="in.csv"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def test_load_csv_round_trip(tmp_path, rng):
    X = rng.standard_normal((7, 3))
    labels = np.array([1, 2, 1, 2, 2, 1, 1])
    path = tmp_path / "c.csv"
    ds.write_csv(path, X, labels)
    c = ds.load_csv(path)
    np.testing.assert_array_equal(c.coordinates, X)
    np.testing.assert_array_equal(c.labels, labels)
    assert path.read_text().splitlines()[0] == "x1,x2,x3,label"


def test_load_csv_unlabelled(tmp_path):
    c = ds.load_csv(write(tmp_path, "x1,x2\n1,2\n3,4\n\n"))
    assert c.labels is None and c.n == 2


@pytest.mark.parametrize("text,line,fragment", [
    ("", 1, "empty"),
    ("x1,x2\n", 2, "no data"),
    ("x1,y\n1,2\n", 1, "'y'"),
    ("x1,x2\n1,2\n3\n", 3, "fields"),
    ("x1,x2\n1,2\n3,abc\n", 3, "non-numeric"),
    ("x1,label\n1,one\n", 2, "label"),
    ("x1,label\n1,1\n2,3\n", None, "empty"),
])
def test_load_csv_errors(tmp_path, text, line, fragment):
    with pytest.raises(ParseError, match=fragment) as info:
        ds.load_csv(write(tmp_path, text))
    if line is not None:
        assert info.value.line == line
        assert str(info.value).startswith(f"line {line}:")


def test_load_iris_layout(iris_csv):
    c = ds.load_csv(iris_csv)
    assert c.coordinates.shape == (150, 4)
    np.testing.assert_array_equal(np.bincount(c.labels), [0, 50, 50, 50])


def test_write_csv_to_stream_and_format():
    buf = io.StringIO()
    ds.write_csv(buf, [[0.1, 2.0]], prefix="dim")
    assert buf.getvalue() == "dim1,dim2\n0.1,2.0\n"
    assert ds.format_number(1 / 3) == "0.3333333333333333"


def test_load_matrix_and_vector(tmp_path):
    M = ds.load_matrix(write(tmp_path, "0,1\n1,0\n"))
    np.testing.assert_array_equal(M, [[0, 1], [1, 0]])
    with pytest.raises(ParseError):
        ds.load_matrix(write(tmp_path, "0,1,2\n1,0,3\n"))
    v = ds.load_vector(write(tmp_path, "1\n2\n\n3\n", "v.txt"))
    np.testing.assert_array_equal(v, [1, 2, 3])
    with pytest.raises(ParseError) as info:
        ds.load_vector(write(tmp_path, "1\nx\n", "v.txt"))
    assert info.value.line == 2
