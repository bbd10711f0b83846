"""Curve parametrizations, grid data, and interior sampling."""

import numpy as np
import pytest

from plateig import geometry


def test_circle_points_and_normals():
    c = geometry.make_curve("circle", r=2.0)
    g = geometry.grid(c, 16)
    assert np.allclose(np.hypot(g.points[:, 0], g.points[:, 1]), 2.0)
    # outward normal of a centered circle is the unit position vector
    assert np.allclose(g.normals, g.points / 2.0, atol=1e-14)
    assert np.allclose(g.jacobians, 2.0)
    assert np.allclose(g.curvatures, 0.5)


def test_normals_are_unit_and_orthogonal_to_velocity():
    for kind, kw in [
        ("ellipse", {"a": 1.0, "b": 0.6}),
        ("deformed", {"eps": 0.25}),
        ("peanut", {}),
    ]:
        c = geometry.make_curve(kind, **kw)
        g = geometry.grid(c, 64)
        v = c.velocity(g.t)
        assert np.allclose(np.hypot(g.normals[:, 0], g.normals[:, 1]), 1.0)
        assert np.max(np.abs(np.sum(g.normals * v, axis=1))) < 1e-13


def test_normals_point_outward():
    for kind, kw in [
        ("circle", {"r": 1.0}),
        ("ellipse", {"a": 1.0, "b": 0.5}),
        ("deformed", {"eps": 0.3}),
        ("peanut", {}),
    ]:
        c = geometry.make_curve(kind, **kw)
        g = geometry.grid(c, 64)
        stepped_out = g.points + 1e-3 * g.normals
        stepped_in = g.points - 1e-3 * g.normals
        assert not geometry.points_inside(c, stepped_out).any()
        assert geometry.points_inside(c, stepped_in).all()


def test_velocity_and_acceleration_match_finite_differences():
    h = 1e-6
    t = np.linspace(0.1, 6.2, 23)
    for kind, kw in [
        ("ellipse", {"a": 1.0, "b": 0.7}),
        ("deformed", {"eps": 0.2}),
        ("peanut", {}),
    ]:
        c = geometry.make_curve(kind, **kw)
        fd_v = (c.position(t + h) - c.position(t - h)) / (2 * h)
        fd_a = (c.velocity(t + h) - c.velocity(t - h)) / (2 * h)
        assert np.max(np.abs(fd_v - c.velocity(t))) < 1e-8
        assert np.max(np.abs(fd_a - c.acceleration(t))) < 1e-8


def test_areas_match_closed_forms():
    # ellipse pi*a*b; the cos(2t) deformation is area-neutral; the peanut
    # rho^2 = (3 cos^2 t + 1)/4 integrates to 5 pi / 8
    assert geometry.area(geometry.make_curve("circle", r=1.5)) == pytest.approx(
        np.pi * 1.5**2, abs=1e-12
    )
    assert geometry.area(geometry.make_curve("ellipse", a=1.0, b=0.5)) == pytest.approx(
        np.pi / 2, abs=1e-12
    )
    for eps in (0.1, 0.2, 0.3):
        assert geometry.area(geometry.make_curve("deformed", eps=eps)) == pytest.approx(
            0.75 * np.pi, abs=1e-12
        )
    assert geometry.area(geometry.make_curve("peanut")) == pytest.approx(
        5 * np.pi / 8, abs=1e-12
    )


def test_ellipse_curvature_closed_form():
    a, b = 1.0, 0.5
    c = geometry.make_curve("ellipse", a=a, b=b)
    g = geometry.grid(c, 32)
    want = a * b / (a**2 * np.sin(g.t) ** 2 + b**2 * np.cos(g.t) ** 2) ** 1.5
    assert np.allclose(g.curvatures, want, rtol=1e-12)


def test_grid_rejects_bad_node_counts():
    c = geometry.make_curve("circle", r=1.0)
    with pytest.raises(ValueError):
        geometry.grid(c, 15)
    with pytest.raises(ValueError):
        geometry.grid(c, 8)


def test_make_curve_validation():
    with pytest.raises(ValueError):
        geometry.make_curve("star")
    with pytest.raises(ValueError):
        geometry.make_curve("circle", r=-1.0)
    with pytest.raises(ValueError):
        geometry.make_curve("ellipse", a=0.0, b=1.0)
    with pytest.raises(ValueError):
        geometry.make_curve("deformed", eps=0.5)
    with pytest.raises(ValueError):
        geometry.make_curve("peanut", r=1.0)


def test_points_inside_known_cases():
    c = geometry.make_curve("ellipse", a=1.0, b=0.5)
    pts = np.array([[0.0, 0.0], [0.9, 0.0], [0.0, 0.45], [1.1, 0.0], [0.0, 0.6], [-2.0, -2.0]])
    assert list(geometry.points_inside(c, pts)) == [True, True, True, False, False, False]


def test_interior_points_are_inside_and_deterministic():
    for kind, kw in [("peanut", {}), ("deformed", {"eps": 0.3}), ("ellipse", {"a": 1.0, "b": 0.5})]:
        c = geometry.make_curve(kind, **kw)
        pts = geometry.interior_points(c, 30, np.random.default_rng(123))
        assert pts.shape == (30, 2)
        assert geometry.points_inside(c, pts).all()
        again = geometry.interior_points(c, 30, np.random.default_rng(123))
        assert np.array_equal(pts, again)
        other = geometry.interior_points(c, 30, np.random.default_rng(124))
        assert not np.array_equal(pts, other)


def test_interior_points_stay_off_the_boundary():
    c = geometry.make_curve("peanut")
    pts = geometry.interior_points(c, 200, np.random.default_rng(0))
    dense = c.position(2 * np.pi * np.arange(512) / 512)
    gaps = np.min(
        np.hypot(pts[:, None, 0] - dense[None, :, 0], pts[:, None, 1] - dense[None, :, 1]),
        axis=1,
    )
    assert gaps.min() > 0.01
