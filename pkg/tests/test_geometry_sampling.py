import numpy as np
import pytest

from pluginsert.geometry import InvalidArgument, PlugModel, sample_surface


def classify(plug, pts):
    """bottom / side / top counts; rim points (z=0 boundary) count as side."""
    z = pts[:, 2]
    s2 = plug.sdf(np.concatenate([pts[:, :2], np.full((len(pts), 1), plug.height / 2)], 1))
    on_boundary = np.abs(s2) < 1e-7
    bottom = (np.abs(z) < 1e-9) & ~on_boundary
    top = np.abs(z - plug.height) < 1e-9
    side = ~bottom & ~top
    return bottom.sum(), side.sum(), top.sum()


def test_box_m8_includes_all_bottom_corners():
    plug = PlugModel("box", (30.0, 20.0), 40.0)
    pts = sample_surface(plug, 8)
    corners = {(sx * 15.0, sy * 10.0, 0.0) for sx in (1, -1) for sy in (1, -1)}
    got = {tuple(np.round(p, 9)) for p in pts}
    assert corners <= got


def test_prism_includes_bottom_vertices():
    plug = PlugModel("prism3", (30.0,), 40.0)
    pts = sample_surface(plug, 10)
    k = np.sqrt(3.0)
    verts = np.array([[-15.0, -15.0 / k, 0.0], [15.0, -15.0 / k, 0.0], [0.0, 30.0 / k, 0.0]])
    for v in verts:
        assert np.min(np.linalg.norm(pts - v, axis=1)) < 1e-9


@pytest.mark.parametrize(
    "plug",
    [
        PlugModel("cylinder", (50.0,), 50.0),
        PlugModel("box", (50.0, 40.0), 50.0),
        PlugModel("prism3", (50.0,), 50.0),
    ],
)
def test_face_counts_proportional_to_area(plug):
    m = 1000
    pts = sample_surface(plug, m)
    assert len(pts) == m
    if plug.primitive == "cylinder":
        a = plug.dims[0] / 2
        areas = (np.pi * a * a, 2 * np.pi * a * plug.height, np.pi * a * a)
    elif plug.primitive == "box":
        wx, wy = plug.dims
        areas = (wx * wy, 2 * (wx + wy) * plug.height, wx * wy)
    else:
        s = plug.dims[0]
        areas = (np.sqrt(3) / 4 * s * s, 3 * s * plug.height, np.sqrt(3) / 4 * s * s)
    counts = classify(plug, pts)
    shares = np.asarray(areas) / sum(areas)
    for got, share in zip(counts, shares):
        expected = share * m
        assert abs(got - expected) <= 0.2 * expected


@pytest.mark.parametrize(
    "plug",
    [
        PlugModel("cylinder", (50.0,), 50.0),
        PlugModel("box", (50.0, 40.0), 50.0),
        PlugModel("prism3", (50.0,), 50.0),
    ],
)
def test_samples_lie_on_surface(plug):
    pts = sample_surface(plug, 1000)
    assert np.abs(plug.sdf(pts)).max() < 1e-6


def test_sampling_is_deterministic_per_seed():
    plug = PlugModel("cylinder", (50.0,), 50.0)
    a = sample_surface(plug, 500, seed=3)
    b = sample_surface(plug, 500, seed=3)
    c = sample_surface(plug, 500, seed=4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_minimum_sample_count():
    plug = PlugModel("cylinder", (50.0,), 50.0)
    with pytest.raises(InvalidArgument):
        sample_surface(plug, 3)
