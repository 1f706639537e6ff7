import numpy as np
import pytest

from helecell import geometry as geo
from helecell import mfs
from helecell.errors import EvaluationAtSingularityError, PlacementError
from oracles import gauss_flux


def _polygon_solution(n, g_fn, r_a=1.0):
    cache = geo.build_geometry(geo.regular_polygon(n))
    pts = mfs.place_points(cache, r_a)
    return cache, mfs.solve_dirichlet(cache, pts, g_fn(cache.midpoint))


def _re_z3(x):
    z = x[..., 0] + 1j * x[..., 1]
    return (z ** 3).real


def _ring(radius, m=64):
    a = 2 * np.pi * np.arange(m) / m
    return radius * np.column_stack((np.cos(a), np.sin(a)))


def test_dummy_points():
    z = mfs.place_dummy_points(4)
    np.testing.assert_allclose(z[0], [0.0, 1000.0], atol=1e-10)
    np.testing.assert_allclose(z[3], [1000.0, 0.0], atol=1e-10)
    np.testing.assert_allclose(np.hypot(*mfs.place_dummy_points(37).T), 1000.0, rtol=1e-15)


def test_amano_collinear_case():
    # rectangle whose bottom edge is split into equal pieces
    x = np.array([[0, 0], [1, 0], [2, 0], [3, 0], [3, 1], [0, 1]], dtype=float)
    cache = geo.build_geometry(geo.PolygonalCurve(x))
    y = mfs.place_singular_points(cache, 1.0)
    # midpoint of edge 2 is (1.5, 0); its neighbours (0.5, 0) and (2.5, 0) are d = 1 apart from it
    d = 1.0
    np.testing.assert_allclose(y[2], cache.midpoint[2] + d * np.array([0.0, -1.0]), atol=1e-15)


@pytest.mark.parametrize("n,radius,r_a", [(12, 1.0, 1.0), (50, 2.0, 0.5), (128, 1.0, 1.0)])
def test_amano_regular_polygon(n, radius, r_a):
    cache = geo.build_geometry(geo.regular_polygon(n, radius))
    y = mfs.place_singular_points(cache, r_a)
    rho = radius * np.cos(np.pi / n)
    np.testing.assert_allclose(np.hypot(*cache.midpoint.T), rho, rtol=1e-14)
    chord = 2 * radius * np.cos(np.pi / n) * np.sin(2 * np.pi / n)
    np.testing.assert_allclose(np.hypot(*y.T), rho + 0.5 * r_a * chord, rtol=1e-13)
    # radial direction
    cross = y[:, 0] * cache.midpoint[:, 1] - y[:, 1] * cache.midpoint[:, 0]
    np.testing.assert_allclose(cross, 0.0, atol=1e-13)


def test_amano_inside_concave_region():
    x = np.array([[0, 0], [3, 0], [3, 3], [2, 3], [2, 1], [1, 1], [1, 3], [0, 3]], dtype=float)
    cache = geo.build_geometry(geo.PolygonalCurve(x))
    with pytest.raises(PlacementError) as err:
        mfs.place_singular_points(cache, 1.0)
    assert err.value.index is not None
    y = mfs.place_singular_points(cache, 2.0)
    assert not geo.points_in_polygon(x, y).any()


def test_fundamental_solution_values():
    np.testing.assert_allclose(mfs.fundamental_gradient(np.array([2.0, 0.0])), [1 / (4 * np.pi), 0.0])
    assert mfs.fundamental_solution(np.array([1.0, 0.0])) == 0.0
    assert mfs.fundamental_solution(np.array([np.e, 0.0])) == pytest.approx(1 / (2 * np.pi))


def test_flux_weights_against_quadrature():
    cache = geo.build_geometry(geo.regular_polygon(32, 0.1))
    pts = mfs.MfsPointSets(np.array([[5.0, 0.3], [-2.0, 4.0], [0.0, -3.0]]), mfs.place_dummy_points(3))
    h = mfs.flux_weights(cache, pts)
    for j in range(3):
        def grad(x, j=j):
            return mfs.fundamental_gradient(x - pts.singular[j]) - mfs.fundamental_gradient(x - pts.dummy[j])
        fine = gauss_flux(cache.vertices, grad)
        assert abs(fine) < 1e-12
        assert abs(h[j] - fine) < 1e-6


def test_quadrature_oracle_sanity():
    x = geo.regular_polygon(40).vertices
    assert gauss_flux(x, lambda p: mfs.fundamental_gradient(p - [0.1, 0.2])) == pytest.approx(1.0, rel=1e-10)


def test_constant_data():
    cache, sol = _polygon_solution(40, lambda m: np.full(len(m), 3.25))
    p = _ring(0.7, 17)
    np.testing.assert_allclose(sol.potential(p), 3.25, atol=1e-10)
    np.testing.assert_allclose(sol.gradient(p), 0.0, atol=1e-9)


def test_harmonic_data_converges_with_n():
    errs = []
    for n in (32, 64, 128):
        _, sol = _polygon_solution(n, _re_z3)
        q = _ring(0.5)
        errs.append(np.abs(sol.potential(q) - _re_z3(q)).max())
        assert sol.constraint_residual <= 1e-10
    assert errs[0] > errs[1] > errs[2]


def test_harmonic_data_wider_amano_offset():
    # the offset relative to the mesh sets the accuracy; r_a = 2 is well below 1e-6 at N = 128
    _, sol = _polygon_solution(128, _re_z3, r_a=2.0)
    q = _ring(0.5)
    assert np.abs(sol.potential(q) - _re_z3(q)).max() < 1e-6


def test_constraint_residual_perturbed_curves(rng):
    for _ in range(5):
        a = 2 * np.pi * np.arange(1, 81) / 80
        r = 1 + 0.05 * np.cos(3 * a + rng.uniform(0, 6)) + 0.03 * np.sin(7 * a)
        cache = geo.build_geometry(geo.PolygonalCurve(np.column_stack((r * np.cos(a), r * np.sin(a)))))
        sol = mfs.solve_dirichlet(cache, mfs.place_points(cache, 1.0), rng.standard_normal(80))
        assert sol.constraint_residual <= 1e-10


def test_collocation_rows_satisfied(rng):
    cache = geo.build_geometry(geo.regular_polygon(60))
    g = rng.standard_normal(60)
    sol = mfs.solve_dirichlet(cache, mfs.place_points(cache, 1.0), g)
    np.testing.assert_allclose(sol.potential(cache.midpoint), g, atol=1e-9)
    nd = np.einsum("ij,ij->i", sol.gradient(cache.midpoint), cache.edge_normal)
    np.testing.assert_allclose(sol.normal_derivative, nd, rtol=1e-10, atol=1e-10)


def test_trivial_solution():
    pts = mfs.place_points(geo.build_geometry(geo.regular_polygon(8)), 1.0)
    sol = mfs.MfsSolution(5.0, np.zeros(8), pts, np.ones(8))
    q = _ring(0.3, 5)
    np.testing.assert_array_equal(sol.potential(q), 5.0)
    np.testing.assert_array_equal(sol.gradient(q), 0.0)
    assert sol.constraint_residual == 0.0


def test_single_charge():
    pts = mfs.MfsPointSets(np.array([[0.0, 0.0]]), np.array([[1000.0, 0.0]]))
    sol = mfs.MfsSolution(0.0, np.array([1.0]), pts, np.array([1.0]))
    assert sol.potential(np.array([1.0, 0.0])) == pytest.approx(-np.log(999) / (2 * np.pi), rel=1e-14)
    assert mfs.evaluate_potential(sol, np.array([1.0, 0.0])) == sol.potential(np.array([1.0, 0.0]))


def test_gradient_finite_differences(rng):
    x = geo.regular_polygon(50).vertices * (1 + 0.1 * np.cos(3 * np.arange(50) * 2 * np.pi / 50))[:, None]
    cache = geo.build_geometry(geo.PolygonalCurve(x))
    sol = mfs.solve_dirichlet(cache, mfs.place_points(cache, 1.0), np.sin(3 * cache.midpoint[:, 0]))
    rho = np.sqrt(rng.uniform(0, 0.6, 100))
    th = rng.uniform(0, 2 * np.pi, 100)
    p = np.column_stack((rho * np.cos(th), rho * np.sin(th)))
    eps = 1e-6
    fd = np.column_stack([
        (sol.potential(p + eps * e) - sol.potential(p - eps * e)) / (2 * eps) for e in np.eye(2)
    ])
    g = mfs.evaluate_gradient(sol, p)
    err = np.linalg.norm(g - fd, axis=1) / np.maximum(np.linalg.norm(g, axis=1), 1e-3)
    assert err.max() <= 1e-6


def test_evaluation_at_singular_point():
    cache = geo.build_geometry(geo.regular_polygon(10))
    pts = mfs.place_points(cache, 1.0)
    sol = mfs.solve_dirichlet(cache, pts, np.ones(10))
    with pytest.raises(EvaluationAtSingularityError):
        sol.potential(pts.singular[3])
    with pytest.raises(EvaluationAtSingularityError):
        sol.gradient(pts.dummy[0])


def test_wrong_data_length():
    cache = geo.build_geometry(geo.regular_polygon(10))
    with pytest.raises(ValueError):
        mfs.solve_dirichlet(cache, mfs.place_points(cache, 1.0), np.ones(9))


def test_rotation_equivariance():
    n = 64
    base = geo.regular_polygon(n).vertices * (1 + 0.05 * np.cos(5 * 2 * np.pi * np.arange(1, n + 1) / n))[:, None]
    th = 0.3
    rot = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
    p = np.array([0.1, 0.05])
    out = []
    for x, q in ((base, p), (base @ rot.T, rot @ p)):
        cache = geo.build_geometry(geo.PolygonalCurve(x))
        sol = mfs.solve_dirichlet(cache, mfs.place_points(cache, 1.0), cache.curvature)
        out.append(sol.potential(q))
    assert out[0] == pytest.approx(out[1], abs=1e-8)
