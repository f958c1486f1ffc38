import math

import numpy as np
import pytest

from pluginsert.geometry import Pose, rpy_matrix


def random_rotation(rng):
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    w, x, y, z = q
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


def random_pose(rng, t_range=100.0):
    return Pose(rng.uniform(-t_range, t_range, 3), random_rotation(rng))


def pose_near_socket(rng, scene, xy=6.0, z_lo=-5.0, z_hi=15.0, tilt=10.0):
    """Plug pose loosely hovering around the cavity opening."""
    t = np.array(
        [rng.uniform(-xy, xy), rng.uniform(-xy, xy), rng.uniform(z_lo, z_hi)]
    )
    base = scene.socket.base_pose
    rot = rpy_matrix(*rng.uniform(-tilt, tilt, 3)) @ base.rotation
    return Pose(base.transform(t), rot)


def socket_surface_cloud(socket, n_target, rng):
    """Brute-force random point cloud on the socket solid surface.

    Independent of the production SDF: faces are enumerated explicitly and
    the opening hole is cut by a locally implemented 2D membership test.
    """
    prim, a, b, depth, hx, hy, hz = socket.kernel_params

    def inside_section(x, y):
        if prim == 0:
            return np.hypot(x, y) <= a
        if prim == 1:
            return (np.abs(x) <= a) & (np.abs(y) <= b)
        k = math.sqrt(3.0)
        v = np.array([[-a, -a / k], [a, -a / k], [0.0, 2.0 * a / k]])
        ok = np.ones_like(x, dtype=bool)
        for i in range(3):
            p0, p1 = v[i], v[(i + 1) % 3]
            e = p1 - p0
            ok &= e[0] * (y - p0[1]) - e[1] * (x - p0[0]) >= 0
        return ok

    def boundary(u):
        if prim == 0:
            ang = 2 * np.pi * u
            return a * np.cos(ang), a * np.sin(ang)
        if prim == 1:
            poly = np.array([[a, b], [-a, b], [-a, -b], [a, -b]])
        else:
            k = math.sqrt(3.0)
            poly = np.array([[-a, -a / k], [a, -a / k], [0.0, 2.0 * a / k]])
        e = np.roll(poly, -1, axis=0) - poly
        ln = np.linalg.norm(e, axis=1)
        cum = np.concatenate([[0.0], np.cumsum(ln)])
        s = u * cum[-1]
        idx = np.clip(np.searchsorted(cum, s, side="right") - 1, 0, len(poly) - 1)
        f = (s - cum[idx]) / ln[idx]
        pts = poly[idx] + e[idx] * f[:, None]
        return pts[:, 0], pts[:, 1]

    if prim == 0:
        perim = 2 * math.pi * a
    elif prim == 1:
        perim = 4 * (a + b)
    else:
        perim = 6 * a
    areas = {
        "xwall": 2 * hy * hz,
        "ywall": 2 * hx * hz,
        "top": 4 * hx * hy,
        "bottom": 4 * hx * hy,
        "cavwall": perim * depth,
        "cavbot": 2 * hx * hy * 0.5,
    }
    total = sum(areas.values()) + areas["xwall"] + areas["ywall"]
    parts = []
    for sign in (1, -1):
        n = int(n_target * areas["xwall"] / total)
        parts.append(
            np.stack(
                [np.full(n, sign * hx), rng.uniform(-hy, hy, n), rng.uniform(-hz, 0, n)], 1
            )
        )
        n = int(n_target * areas["ywall"] / total)
        parts.append(
            np.stack(
                [rng.uniform(-hx, hx, n), np.full(n, sign * hy), rng.uniform(-hz, 0, n)], 1
            )
        )
    n = int(n_target * areas["top"] / total) * 2
    x, y = rng.uniform(-hx, hx, n), rng.uniform(-hy, hy, n)
    keep = ~inside_section(x, y)
    parts.append(np.stack([x[keep], y[keep], np.zeros(keep.sum())], 1))
    n = int(n_target * areas["bottom"] / total)
    parts.append(np.stack([rng.uniform(-hx, hx, n), rng.uniform(-hy, hy, n), np.full(n, -hz)], 1))
    n = int(n_target * areas["cavwall"] / total)
    bx, by = boundary(rng.uniform(0, 1, n))
    parts.append(np.stack([bx, by, rng.uniform(-depth, 0, n)], 1))
    n = int(n_target * areas["cavbot"] / total) * 2
    x, y = rng.uniform(-hx, hx, n), rng.uniform(-hy, hy, n)
    keep = inside_section(x, y)
    parts.append(np.stack([x[keep], y[keep], np.full(keep.sum(), -depth)], 1))

    # 1D features: block edges + corners + cavity rim/bottom curves.  Points
    # projecting onto these would otherwise dominate the oracle error.
    n_e = max(200, n_target // 200)
    lin = np.linspace(0.0, 1.0, n_e)
    for sx in (1, -1):
        for sy in (1, -1):
            parts.append(np.stack([np.full(n_e, sx * hx), np.full(n_e, sy * hy), -hz * lin], 1))
    for szv in (0.0, -hz):
        for sx in (1, -1):
            parts.append(np.stack([np.full(n_e, sx * hx), hy * (2 * lin - 1), np.full(n_e, szv)], 1))
            parts.append(np.stack([hx * (2 * lin - 1), np.full(n_e, sx * hy), np.full(n_e, szv)], 1))
    bx, by = boundary(lin)
    parts.append(np.stack([bx, by, np.zeros(n_e)], 1))  # opening rim
    parts.append(np.stack([bx, by, np.full(n_e, -depth)], 1))  # cavity bottom edge
    local = np.concatenate(parts, 0)
    return socket.base_pose.transform(local)


@pytest.fixture(scope="session")
def catalog_scenes():
    from pluginsert.scene import catalog

    return catalog()
