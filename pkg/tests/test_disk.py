import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stairtile.disk import (
    boundary_curve,
    disk_area,
    disk_from_function,
    eval_f,
    make_disk,
    normalize_quadrilateral,
    normalize_triangle,
    square,
    triangle,
)
from stairtile.errors import (
    BadDomain,
    Degenerate,
    NegativeHeight,
    NotConvex,
    NotConvexQuad,
    NotMonotone,
    OutOfDomain,
)
from stairtile.properties import random_convex_quad, random_disk

from oracles import raster_area

TENT = [(0, 1), (0.5, 0.75), (1, 0.25)]


def test_make_disk_basic_shapes():
    assert triangle().breakpoints == ((0.0, 1.0), (1.0, 0.0))
    assert square().breakpoints == ((0.0, 1.0), (1.0, 1.0))
    assert triangle().is_triangle and square().is_square


def test_make_disk_merges_collinear_points():
    d = make_disk([(0, 1), (0.25, 0.75), (0.5, 0.5), (1, 0)])
    assert d.breakpoints == ((0.0, 1.0), (1.0, 0.0))


def test_make_disk_rejects_sagging_f():
    with pytest.raises(NotConvex):
        make_disk([(0, 1), (0.5, 0.5), (1, 0.25)])


def test_make_disk_accepts_bulging_f():
    d = make_disk([(0, 1), (0.5, 1), (1, 0.25)])
    assert len(d.breakpoints) == 3


@pytest.mark.parametrize(
    "pts, err",
    [
        ([(0, 1), (0.9, 0)], BadDomain),
        ([(0, 0.8), (1, 0)], BadDomain),
        ([(0.1, 1), (1, 0)], BadDomain),
        ([(0, 1), (1, -0.2)], NegativeHeight),
        ([(0, 1), (0.5, 1.2), (1, 0)], NotMonotone),
        ([(0, 1), (0.5, 0.8), (0.4, 0.6), (1, 0)], BadDomain),
    ],
)
def test_make_disk_errors(pts, err):
    with pytest.raises(err):
        make_disk(pts)


def test_eval_f_examples():
    assert eval_f(triangle(), 0.25) == pytest.approx(0.75)
    assert eval_f(square(), 0.9) == 1.0
    assert eval_f(make_disk(TENT), 0.75) == pytest.approx(0.5)
    assert eval_f(triangle(), 0.0) == 1.0
    with pytest.raises(OutOfDomain):
        eval_f(triangle(), 1.1)


def test_disk_area_examples():
    assert disk_area(triangle()) == pytest.approx(0.5)
    assert disk_area(square()) == 1.0
    # trapezoids 0.5*(1+0.75)/2 + 0.5*(0.75+0.25)/2
    assert disk_area(make_disk(TENT)) == pytest.approx(0.6875, abs=1e-15)
    assert raster_area(TENT) == pytest.approx(0.6875, rel=5e-3)


def test_boundary_curve():
    assert boundary_curve(triangle()).vertices == ((0.0, 1.0), (1.0, 0.0))
    assert boundary_curve(square()).vertices == ((0.0, 1.0), (1.0, 1.0), (1.0, 0.0))
    d = make_disk([(0, 1), (0.5, 0.75), (1, 0)])
    assert boundary_curve(d).vertices == ((0.0, 1.0), (0.5, 0.75), (1.0, 0.0))


def test_disk_from_function_samples():
    d = disk_from_function(lambda x: 1 - x**2, samples=64)
    assert len(d.breakpoints) == 65
    assert d.area == pytest.approx(2 / 3, abs=1e-4)


def test_random_disks_are_monotone_and_midpoint_concave():
    rng = np.random.default_rng(11)
    x = np.linspace(0, 1, 1000)
    for _ in range(50):
        d = random_disk(rng)
        y = eval_f(d, x)
        assert np.all(np.diff(y) <= 1e-15)
        a, b = rng.uniform(0, 1, (2, 200))
        assert np.all(d.f((a + b) / 2) >= (d.f(a) + d.f(b)) / 2 - 1e-12)
        assert abs(disk_area(d) - raster_area(d.breakpoints)) <= 5e-3 * disk_area(d)


def test_normalize_triangle_identity_and_scaling():
    d, m = normalize_triangle((0, 0), (1, 0), (0, 1))
    assert d == triangle()
    assert np.allclose(m.matrix, np.eye(2)) and np.allclose(m.translation, 0)
    _, m = normalize_triangle((0, 0), (2, 0), (0, 2))
    assert np.allclose(m.matrix, np.diag([0.5, 0.5]))


def test_normalize_triangle_general():
    d, m = normalize_triangle((1, 1), (4, 2), (2, 5))
    assert d == triangle()
    # inverse of [[3, 1], [1, 4]] is [[4, -1], [-1, 3]] / 11
    assert np.allclose(m.matrix, np.array([[4, -1], [-1, 3]]) / 11, atol=1e-12)
    assert np.allclose(m.translation, [-3 / 11, -2 / 11], atol=1e-12)
    assert np.allclose(m.apply([(1, 1), (4, 2), (2, 5)]), [(0, 0), (1, 0), (0, 1)], atol=1e-9)


def test_normalize_triangle_degenerate():
    with pytest.raises(Degenerate):
        normalize_triangle((0, 0), (1, 1), (2, 2))


def test_normalize_quadrilateral_square():
    d, m = normalize_quadrilateral((0, 0), (1, 0), (1, 1), (0, 1))
    assert d == square()
    assert np.allclose(m.apply([(0, 0), (1, 0), (0, 1)]), [(0, 0), (1, 0), (0, 1)])


def test_normalize_quadrilateral_normal_form_example():
    d, m = normalize_quadrilateral((0, 0), (1, 0), (0.5, 1), (0, 1))
    assert d.breakpoints == ((0.0, 1.0), (0.5, 1.0), (1.0, 0.0))
    img = m.apply([(0, 0), (1, 0), (0.5, 1), (0, 1)])
    assert sorted(map(tuple, np.round(img, 9))) == sorted([(0, 0), (1, 0), (0.5, 1), (0, 1)])


def test_normalize_quadrilateral_not_convex():
    with pytest.raises(NotConvexQuad):
        normalize_quadrilateral((0, 0), (2, 0), (0.5, 0.5), (0, 2))
    with pytest.raises(NotConvexQuad):
        normalize_quadrilateral((0, 0), (1, 0), (2, 0), (0, 1))


def test_random_quadrilaterals_reach_feasible_normal_form():
    rng = np.random.default_rng(3)
    for _ in range(100):
        quad = random_convex_quad(rng)
        d, m = normalize_quadrilateral(*quad)
        img = m.apply(quad)
        target = np.asarray(d.polygon())
        # every mapped vertex is a vertex of the normalised polygon
        for p in img:
            assert np.min(np.linalg.norm(target - p, axis=1)) < 1e-9
        if len(d.breakpoints) == 3:
            x, y = d.breakpoints[1]
            assert 0 <= x <= 1 and 0 <= y <= 1 and x + y >= 1 - 1e-9


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_quadrilateral_normalization_is_affinely_invariant(seed):
    rng = np.random.default_rng(seed)
    quad = random_convex_quad(rng)
    a = rng.normal(size=(2, 2))
    while abs(np.linalg.det(a)) < 0.1:
        a = rng.normal(size=(2, 2))
    moved = quad @ a.T + rng.normal(size=2)
    d1, _ = normalize_quadrilateral(*quad)
    d2, _ = normalize_quadrilateral(*moved[rng.permutation(4)])
    assert len(d1.breakpoints) == len(d2.breakpoints)
    assert np.allclose(d1.breakpoints, d2.breakpoints, atol=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_triangle_normalization_maps_vertices(seed):
    rng = np.random.default_rng(seed)
    tri = rng.normal(size=(3, 2))
    e1, e2 = tri[1] - tri[0], tri[2] - tri[0]
    if abs(e1[0] * e2[1] - e1[1] * e2[0]) < 1e-3:
        return
    d, m = normalize_triangle(*tri)
    assert np.allclose(m.apply(tri), [(0, 0), (1, 0), (0, 1)], atol=1e-9)
    assert np.allclose(m.inverse().compose(m).matrix, np.eye(2), atol=1e-9)
