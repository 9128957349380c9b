import numpy as np
import pytest

from stairtile.disk import square, triangle
from stairtile.errors import BadAbscissas, NotRectilinear, NotSimple, NotStair, UnsupportedSignature
from stairtile.lattice import Lattice, verify_lattice_tiling
from stairtile.properties import random_disk
from stairtile.stair import StairPolygon, build_stair, classify_stair, stair_area, stair_lattice

from oracles import can_surround, polyomino_cells

L_HEXAGON = [(0, 0), (0, 2), (1, 2), (1, 1), (2, 1), (2, 0)]


def _same_ring(a, b):
    a = [tuple(np.round(p, 12)) for p in a]
    b = [tuple(np.round(p, 12)) for p in b]
    if len(a) != len(b):
        return False
    k = a.index(b[0]) if b[0] in a else -1
    return k >= 0 and a[k:] + a[:k] == b


def test_build_stair_triangle_hexagon():
    s = build_stair(triangle(), (1 / 3, 2 / 3))
    expected = [(0, 0), (2 / 3, 0), (2 / 3, 1 / 3), (1 / 3, 1 / 3), (1 / 3, 2 / 3), (0, 2 / 3)]
    assert _same_ring(s.vertices, expected)
    assert s.signature == (0, 1, 0, 0)


def test_build_stair_square_and_collapse():
    s = build_stair(square(), (1.0,))
    assert s.signature == (0, 0, 0, 0) and s.area == 1.0
    s = build_stair(triangle(), (0.5, 0.5 + 1e-15))
    assert s.signature == (0, 0, 0, 0)
    assert len(s.vertices) == 4


@pytest.mark.parametrize("xs", [(), (0.0, 0.5), (0.5, 0.4), (0.3, 1.2), (0.5, 0.5)])
def test_build_stair_bad_abscissas(xs):
    with pytest.raises(BadAbscissas):
        build_stair(triangle(), xs)


def test_stair_area_examples():
    assert stair_area(build_stair(triangle(), (1 / 3, 2 / 3))) == pytest.approx(1 / 3, abs=1e-15)
    assert stair_area(build_stair(square(), (1.0,))) == 1.0
    assert stair_area(build_stair(triangle(), (0.5,))) == pytest.approx(0.25, abs=1e-15)


def test_classify_examples():
    assert classify_stair([(0, 0), (3, 0), (3, 1), (0, 1)]) == (0, 0, 0, 0)
    assert classify_stair(L_HEXAGON) == (0, 1, 0, 0)
    # clockwise input gives the same answer
    assert classify_stair(L_HEXAGON[::-1]) == (0, 1, 0, 0)


def test_classify_general_signatures():
    pyramid = [(0, 0), (5, 0), (5, 1), (4, 1), (4, 2), (3, 2), (3, 3), (2, 3), (2, 2), (1, 2), (1, 1), (0, 1)]
    assert classify_stair(pyramid) == (2, 2, 0, 0)
    # bottom chain falls once then rises once
    boat = [(0, 1), (1, 1), (1, 0), (2, 0), (2, 1), (3, 1), (3, 3), (0, 3)]
    assert classify_stair(boat) == (0, 0, 1, 1)


def test_classify_rejects_non_stairs():
    u_shape = [(0, 0), (3, 0), (3, 2), (2, 2), (2, 1), (1, 1), (1, 2), (0, 2)]
    with pytest.raises(NotStair):
        classify_stair(u_shape)
    with pytest.raises(NotRectilinear):
        classify_stair([(0, 0), (1, 0), (0, 1)])
    bowtie = [(0, 0), (2, 0), (2, 1), (1, 1), (1, -1), (0, -1)]
    with pytest.raises((NotSimple, NotStair)):
        classify_stair(bowtie)


def test_build_stair_inside_disk_and_classified():
    rng = np.random.default_rng(5)
    for _ in range(100):
        d = random_disk(rng)
        n = int(rng.integers(1, 6))
        xs = np.sort(rng.choice(np.arange(1, 1001), n, replace=False)) / 1000
        s = build_stair(d, xs)
        v = np.asarray(s.vertices)
        assert np.all(v[:, 1] <= d.f(v[:, 0]) + 1e-12)
        sig = classify_stair(s.vertices)
        assert sig == s.signature and sig[0] == sig[2] == sig[3] == 0 and sig[1] <= n - 1


def test_stair_lattice_examples():
    tromino = StairPolygon(tuple(L_HEXAGON[:1] + [(2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]), (0, 1, 0, 0))
    v1, v2 = stair_lattice(tromino)
    assert v1 == (1, 1) and v2 == (2, -1)
    assert abs(Lattice(v1, v2).det) == pytest.approx(3)
    assert verify_lattice_tiling(tromino, Lattice(v1, v2), 3.0, 512).is_tiling

    assert stair_lattice(build_stair(square(), (1.0,))) == ((1.0, 0.0), (0.0, 1.0))

    s = build_stair(triangle(), (1 / 3, 2 / 3))
    v1, v2 = stair_lattice(s)
    assert np.allclose(v1, (1 / 3, 1 / 3)) and np.allclose(v2, (2 / 3, -1 / 3))
    assert abs(Lattice(v1, v2).det) == pytest.approx(1 / 3, abs=1e-12)


def test_stair_lattice_unsupported():
    pyramid = StairPolygon(((0, 0), (3, 0), (3, 1), (2, 1), (2, 2), (1, 2), (1, 1), (0, 1)), (1, 1, 0, 0))
    with pytest.raises(UnsupportedSignature):
        stair_lattice(pyramid)


def test_stair_lattice_tiles_for_random_disks():
    rng = np.random.default_rng(8)
    for _ in range(15):
        d = random_disk(rng)
        a, b = np.sort(rng.uniform(0.05, 1.0, 2))
        s = build_stair(d, (a, b))
        v1, v2 = stair_lattice(s)
        lat = Lattice(v1, v2)
        assert abs(lat.det) == pytest.approx(s.area, abs=1e-12)
        width = max(p[0] for p in s.vertices)
        height = max(p[1] for p in s.vertices)
        rep = verify_lattice_tiling(s, lat, 1.5 * max(width, height), 512)
        assert rep.single_fraction >= 0.999 and rep.off_boundary_bad == 0


def test_two_two_pyramid_cannot_tile():
    # (2, 2, 0, 0) stair with d1 > d2 + d3: no copy arrangement closes around it
    assert classify_stair([(0, 0), (5, 0), (5, 1), (4, 1), (4, 2), (3, 2), (3, 3), (2, 3),
                           (2, 2), (1, 2), (1, 1), (0, 1)]) == (2, 2, 0, 0)
    assert not can_surround(polyomino_cells([1, 2, 3, 2, 1]), 2)
    # positive controls: shapes of signature (0,1,0,0) and (1,1,0,0) do tile
    assert can_surround(polyomino_cells([2, 1]), 2)
    assert can_surround(polyomino_cells([1, 2, 1]), 2)
