"""SE(3) pose algebra and plug/socket geometric queries.

Units are millimetres and degrees throughout.  Rotations are stored as 3x3
orthonormal matrices; twists carry a degree-valued axis-angle increment.

Frames: the plug origin sits at the bottom-face centroid with +z along the
plug axis (the solid occupies z in [0, height]).  The socket origin sits at
the centre of the cavity opening with +z up; the outer block occupies
z in [-block_height, 0] and the cavity descends to z = -cavity_depth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from . import kernels

_PRIM_CODES = {
    "cylinder": kernels.PRIM_CYLINDER,
    "box": kernels.PRIM_BOX,
    "prism3": kernels.PRIM_PRISM3,
}

DEG = math.pi / 180.0


class InvalidArgument(ValueError):
    """A geometric argument violates its precondition."""


class DegenerateGeometry(RuntimeError):
    """The queried configuration is outside the model's validity range."""


# ---------------------------------------------------------------------------
# rotations


def rot_x(deg: float) -> np.ndarray:
    c, s = math.cos(deg * DEG), math.sin(deg * DEG)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rot_y(deg: float) -> np.ndarray:
    c, s = math.cos(deg * DEG), math.sin(deg * DEG)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def rot_z(deg: float) -> np.ndarray:
    c, s = math.cos(deg * DEG), math.sin(deg * DEG)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def rpy_matrix(roll_deg: float, pitch_deg: float, yaw_deg: float) -> np.ndarray:
    """Rz(yaw) @ Ry(pitch) @ Rx(roll)."""
    return rot_z(yaw_deg) @ rot_y(pitch_deg) @ rot_x(roll_deg)


def axis_angle_matrix(rotvec_deg) -> np.ndarray:
    """Rodrigues' formula; the input axis-angle vector is in degrees."""
    w = np.asarray(rotvec_deg, dtype=np.float64) * DEG
    angle = float(np.linalg.norm(w))
    if angle < 1e-14:
        return np.eye(3)
    k = w / angle
    kx, ky, kz = k
    hat = np.array([[0.0, -kz, ky], [kz, 0.0, -kx], [-ky, kx, 0.0]])
    return np.eye(3) + math.sin(angle) * hat + (1.0 - math.cos(angle)) * (hat @ hat)


def _quat_from_matrix(rot: np.ndarray) -> np.ndarray:
    """Unit quaternion (w, x, y, z) via Shepperd's method (stable at all angles)."""
    m00, m01, m02 = rot[0]
    m10, m11, m12 = rot[1]
    m20, m21, m22 = rot[2]
    tr = m00 + m11 + m22
    if tr > max(m00, m11, m22):
        s = math.sqrt(tr + 1.0) * 2.0
        q = np.array([0.25 * s, (m21 - m12) / s, (m02 - m20) / s, (m10 - m01) / s])
    elif m00 >= m11 and m00 >= m22:
        s = math.sqrt(1.0 + m00 - m11 - m22) * 2.0
        q = np.array([(m21 - m12) / s, 0.25 * s, (m01 + m10) / s, (m02 + m20) / s])
    elif m11 >= m22:
        s = math.sqrt(1.0 + m11 - m00 - m22) * 2.0
        q = np.array([(m02 - m20) / s, (m01 + m10) / s, 0.25 * s, (m12 + m21) / s])
    else:
        s = math.sqrt(1.0 + m22 - m00 - m11) * 2.0
        q = np.array([(m10 - m01) / s, (m02 + m20) / s, (m12 + m21) / s, 0.25 * s])
    return q / np.linalg.norm(q)


def matrix_log(rot: np.ndarray) -> np.ndarray:
    """Axis-angle vector (degrees) of a rotation matrix; robust near 0 and pi."""
    q = _quat_from_matrix(rot)
    if q[0] < 0.0:
        q = -q
    vec = q[1:]
    nv = float(np.linalg.norm(vec))
    if nv < 1e-12:
        return 2.0 * vec / q[0] / DEG
    angle = 2.0 * math.atan2(nv, q[0])
    return vec * (angle / nv) / DEG


def rotation_angle_deg(rot: np.ndarray) -> float:
    tr = np.clip((np.trace(rot) - 1.0) * 0.5, -1.0, 1.0)
    return math.acos(tr) / DEG


# ---------------------------------------------------------------------------
# poses and twists


@dataclass(frozen=True, eq=False)
class Pose:
    """Rigid transform: world = rotation @ local + translation (mm)."""

    translation: np.ndarray
    rotation: np.ndarray

    def __post_init__(self):
        t = np.array(self.translation, dtype=np.float64).reshape(3)
        r = np.array(self.rotation, dtype=np.float64).reshape(3, 3)
        err = np.abs(r.T @ r - np.eye(3)).max()
        if err >= 1e-9:
            raise InvalidArgument(f"rotation not orthonormal (|R'R-I|={err:.2e})")
        if np.linalg.det(r) <= 0.0:
            raise InvalidArgument("rotation has non-positive determinant")
        t.setflags(write=False)
        r.setflags(write=False)
        object.__setattr__(self, "translation", t)
        object.__setattr__(self, "rotation", r)

    @staticmethod
    def identity() -> "Pose":
        return Pose(np.zeros(3), np.eye(3))

    @staticmethod
    def from_rpy(translation, roll_deg=0.0, pitch_deg=0.0, yaw_deg=0.0) -> "Pose":
        return Pose(np.asarray(translation, dtype=np.float64), rpy_matrix(roll_deg, pitch_deg, yaw_deg))

    def transform(self, points) -> np.ndarray:
        p = np.asarray(points, dtype=np.float64)
        return p @ self.rotation.T + self.translation

    def as_row(self) -> np.ndarray:
        """12-vector: translation then row-major rotation entries."""
        return np.concatenate([self.translation, self.rotation.reshape(9)])


@dataclass(frozen=True, eq=False)
class Twist:
    """Small SE(3) increment: translation in mm, axis-angle rotation in degrees."""

    d_translation: np.ndarray
    d_rotation: np.ndarray

    def __post_init__(self):
        dt = np.array(self.d_translation, dtype=np.float64).reshape(3)
        dr = np.array(self.d_rotation, dtype=np.float64).reshape(3)
        dt.setflags(write=False)
        dr.setflags(write=False)
        object.__setattr__(self, "d_translation", dt)
        object.__setattr__(self, "d_rotation", dr)

    @staticmethod
    def zero() -> "Twist":
        return Twist(np.zeros(3), np.zeros(3))

    @staticmethod
    def from_array(a) -> "Twist":
        a = np.asarray(a, dtype=np.float64).reshape(6)
        return Twist(a[:3], a[3:])

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.d_translation, self.d_rotation])

    def clamp_per_axis(self, max_tr: float, max_rot: float) -> "Twist":
        return Twist(
            np.clip(self.d_translation, -max_tr, max_tr),
            np.clip(self.d_rotation, -max_rot, max_rot),
        )

    def clamp_norms(self, max_tr: float, max_rot: float) -> "Twist":
        """Direction-preserving clamp of the translational / rotational parts."""
        dt, dr = self.d_translation, self.d_rotation
        nt = float(np.linalg.norm(dt))
        if nt > max_tr:
            dt = dt * (max_tr / nt)
        nr = float(np.linalg.norm(dr))
        if nr > max_rot:
            dr = dr * (max_rot / nr)
        return Twist(dt, dr)


def compose(a: Pose, b: Pose) -> Pose:
    """Rigid transform a then-applied-over b (a frame composed with b)."""
    return Pose(a.rotation @ b.translation + a.translation, a.rotation @ b.rotation)


def invert(p: Pose) -> Pose:
    rt = p.rotation.T
    return Pose(-(rt @ p.translation), rt)


def pose_delta(src: Pose, dst: Pose) -> Twist:
    """Twist that carries ``src`` onto ``dst`` (rotation about src's origin)."""
    return Twist(dst.translation - src.translation, matrix_log(dst.rotation @ src.rotation.T))


def apply_twist(pose: Pose, twist: Twist) -> Pose:
    """World-frame twist application; the rotation pivots on the pose origin."""
    return Pose(
        pose.translation + twist.d_translation,
        axis_angle_matrix(twist.d_rotation) @ pose.rotation,
    )


def translational_distance(a: Pose, b: Pose) -> float:
    return float(np.linalg.norm(a.translation - b.translation))


def rotational_distance_deg(a: Pose, b: Pose) -> float:
    return rotation_angle_deg(a.rotation @ b.rotation.T)


# ---------------------------------------------------------------------------
# solids


@dataclass(frozen=True)
class PlugModel:
    """Plug solid: a cross-section primitive extruded along +z from z=0.

    dims: cylinder (diameter,), box (width_x, width_y), prism3 (side,).
    """

    primitive: str
    dims: tuple
    height: float

    def __post_init__(self):
        if self.primitive not in _PRIM_CODES:
            raise InvalidArgument(f"unknown primitive {self.primitive!r}")
        object.__setattr__(self, "dims", tuple(float(d) for d in self.dims))
        expected = 2 if self.primitive == "box" else 1
        if len(self.dims) != expected:
            raise InvalidArgument(f"{self.primitive} expects {expected} cross-section dims")
        if any(d <= 0 for d in self.dims) or self.height <= 0:
            raise InvalidArgument("plug dimensions must be strictly positive")

    @property
    def section_params(self) -> tuple:
        """(a, b) as consumed by the kernels (half-extents / radius / half-side)."""
        if self.primitive == "cylinder":
            return self.dims[0] * 0.5, 0.0
        if self.primitive == "box":
            return self.dims[0] * 0.5, self.dims[1] * 0.5
        return self.dims[0] * 0.5, 0.0

    def sdf(self, points) -> np.ndarray:
        """Exact SDF of the plug solid at plug-frame points."""
        a, b = self.section_params
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        return kernels.plug_sdf_points(pts, _PRIM_CODES[self.primitive], a, b, self.height)


@dataclass(frozen=True, eq=False)
class SocketModel:
    """Socket solid: an outer block with a matching open cavity cut from the top."""

    primitive: str
    cavity_dims: tuple
    cavity_depth: float
    block: tuple  # outer (size_x, size_y, height)
    base_pose: Pose
    tolerance: float

    def __post_init__(self):
        if self.primitive not in _PRIM_CODES:
            raise InvalidArgument(f"unknown primitive {self.primitive!r}")
        object.__setattr__(self, "cavity_dims", tuple(float(d) for d in self.cavity_dims))
        object.__setattr__(self, "block", tuple(float(d) for d in self.block))
        if self.tolerance <= 0:
            raise InvalidArgument("tolerance must be strictly positive")
        if self.cavity_depth <= 0 or self.cavity_depth > self.block[2]:
            raise InvalidArgument("cavity depth must lie within the block height")
        a, b = self.section_params
        hx, hy = self.block[0] * 0.5, self.block[1] * 0.5
        lateral_ok = (a < hx and a < hy) if self.primitive != "box" else (a < hx and b < hy)
        if not lateral_ok:
            raise InvalidArgument("cavity does not fit inside the outer block")

    @property
    def section_params(self) -> tuple:
        if self.primitive == "cylinder":
            return self.cavity_dims[0] * 0.5, 0.0
        if self.primitive == "box":
            return self.cavity_dims[0] * 0.5, self.cavity_dims[1] * 0.5
        return self.cavity_dims[0] * 0.5, 0.0

    @property
    def kernel_params(self) -> tuple:
        a, b = self.section_params
        return (
            _PRIM_CODES[self.primitive],
            a,
            b,
            self.cavity_depth,
            self.block[0] * 0.5,
            self.block[1] * 0.5,
            self.block[2],
        )

    def at_pose(self, pose: Pose) -> "SocketModel":
        return replace(self, base_pose=pose)

    def goal_pose(self) -> Pose:
        """Pose of a fully inserted plug origin: cavity bottom, socket orientation."""
        return compose(self.base_pose, Pose(np.array([0.0, 0.0, -self.cavity_depth]), np.eye(3)))

    def retract_pose(self, retract_height: float) -> Pose:
        return compose(self.base_pose, Pose(np.array([0.0, 0.0, retract_height]), np.eye(3)))


@dataclass(frozen=True, eq=False)
class AnchorPath:
    """Ordered anchors from the retract pose (index 0) down to the goal."""

    anchors: tuple

    def __post_init__(self):
        if len(self.anchors) < 2:
            raise InvalidArgument("an anchor path needs at least 2 anchors")
        ref = self.anchors[-1]
        spacing = None
        for prev, cur in zip(self.anchors, self.anchors[1:]):
            if rotational_distance_deg(prev, ref) > 1e-9:
                raise InvalidArgument("anchors must share the goal orientation")
            step = translational_distance(prev, cur)
            if spacing is None:
                spacing = step
            elif abs(step - spacing) > 1e-9:
                raise InvalidArgument("anchor spacing must be uniform")
        object.__setattr__(self, "anchors", tuple(self.anchors))

    def __len__(self):
        return len(self.anchors)

    @property
    def goal(self) -> Pose:
        return self.anchors[-1]

    def translations(self) -> np.ndarray:
        return np.stack([a.translation for a in self.anchors])


# ---------------------------------------------------------------------------
# surface sampling


def _halton(count: int, base: int, start: int) -> np.ndarray:
    out = np.empty(count)
    for j in range(count):
        i = start + j
        f = 1.0
        r = 0.0
        while i > 0:
            f /= base
            r += f * (i % base)
            i //= base
        out[j] = r
    return out


def _halton2(count: int, start: int) -> np.ndarray:
    return np.stack([_halton(count, 2, start), _halton(count, 3, start)], axis=1)


def _tri_vertices(half_side: float) -> np.ndarray:
    k = math.sqrt(3.0)
    return np.array(
        [
            [-half_side, -half_side / k],
            [half_side, -half_side / k],
            [0.0, 2.0 * half_side / k],
        ]
    )


def _section_polygon(plug: PlugModel):
    """Polygon vertices of the cross-section, or None for the cylinder."""
    a, b = plug.section_params
    if plug.primitive == "box":
        return np.array([[a, b], [-a, b], [-a, -b], [a, -b]])
    if plug.primitive == "prism3":
        return _tri_vertices(a)
    return None


def _polygon_boundary(poly: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Points at arc-lengths ``s`` along the closed polygon."""
    edges = np.roll(poly, -1, axis=0) - poly
    lengths = np.linalg.norm(edges, axis=1)
    cum = np.concatenate([[0.0], np.cumsum(lengths)])
    s = np.mod(s, cum[-1])
    idx = np.clip(np.searchsorted(cum, s, side="right") - 1, 0, len(poly) - 1)
    frac = (s - cum[idx]) / lengths[idx]
    return poly[idx] + edges[idx] * frac[:, None]


def _section_boundary(plug: PlugModel, u: np.ndarray) -> np.ndarray:
    """Boundary points for normalized arc parameter u in [0,1)."""
    a, _ = plug.section_params
    poly = _section_polygon(plug)
    if poly is None:
        ang = 2.0 * math.pi * u
        return np.stack([a * np.cos(ang), a * np.sin(ang)], axis=1)
    perim = float(np.linalg.norm(np.roll(poly, -1, axis=0) - poly, axis=1).sum())
    return _polygon_boundary(poly, u * perim)


def _section_interior(plug: PlugModel, uv: np.ndarray) -> np.ndarray:
    a, b = plug.section_params
    u, v = uv[:, 0], uv[:, 1]
    if plug.primitive == "cylinder":
        r = a * np.sqrt(u)
        ang = 2.0 * math.pi * v
        return np.stack([r * np.cos(ang), r * np.sin(ang)], axis=1)
    if plug.primitive == "box":
        return np.stack([(u - 0.5) * 2.0 * a, (v - 0.5) * 2.0 * b], axis=1)
    v0, v1, v2 = _tri_vertices(a)
    su = np.sqrt(u)[:, None]
    return (1.0 - su) * v0 + su * (1.0 - v[:, None]) * v1 + su * v[:, None] * v2


def _face_areas(plug: PlugModel) -> tuple:
    """(bottom, side, top) areas."""
    a, b = plug.section_params
    if plug.primitive == "cylinder":
        area = math.pi * a * a
        perim = 2.0 * math.pi * a
    elif plug.primitive == "box":
        area = 4.0 * a * b
        perim = 4.0 * (a + b)
    else:
        area = math.sqrt(3.0) * a * a
        perim = 6.0 * a
    return area, perim * plug.height, area


def _largest_remainder(total: int, weights) -> list:
    w = np.asarray(weights, dtype=np.float64)
    exact = total * w / w.sum()
    counts = np.floor(exact).astype(int)
    order = np.argsort(-(exact - counts), kind="stable")
    for i in range(total - int(counts.sum())):
        counts[order[i % len(counts)]] += 1
    return counts.tolist()


@lru_cache(maxsize=128)
def _sample_surface_cached(plug: PlugModel, m: int, seed: int) -> np.ndarray:
    corners3 = np.empty((0, 3))
    poly = _section_polygon(plug)
    if poly is not None:
        corners3 = np.concatenate([poly, np.zeros((len(poly), 1))], axis=1)
    n_c = min(len(corners3), m)
    corners3 = corners3[:n_c]

    n_bottom, n_side, n_top = _largest_remainder(m - n_c, _face_areas(plug))
    n_edge = min(math.ceil(0.05 * m), n_side)

    start = 1 + 4096 * (seed % 65536)
    parts = [corners3]
    if n_edge:
        u = (np.arange(n_edge) + 0.5 + _halton(1, 2, start + 7)[0]) / n_edge
        rim = _section_boundary(plug, np.mod(u, 1.0))
        parts.append(np.concatenate([rim, np.zeros((n_edge, 1))], axis=1))
    if n_side - n_edge:
        uv = _halton2(n_side - n_edge, start + 101)
        wall = _section_boundary(plug, uv[:, 0])
        parts.append(np.concatenate([wall, (uv[:, 1] * plug.height)[:, None]], axis=1))
    if n_bottom:
        sec = _section_interior(plug, _halton2(n_bottom, start + 211))
        parts.append(np.concatenate([sec, np.zeros((n_bottom, 1))], axis=1))
    if n_top:
        sec = _section_interior(plug, _halton2(n_top, start + 307))
        parts.append(np.concatenate([sec, np.full((n_top, 1), plug.height)], axis=1))
    pts = np.concatenate(parts, axis=0)
    pts.setflags(write=False)
    return pts


def sample_surface(plug: PlugModel, m: int, seed: int = 0) -> np.ndarray:
    """Deterministic quasi-uniform boundary samples, rim-biased.

    Bottom-face rim vertices are always included first; a slice of the side
    wall quota is placed on the bottom rim edge; the remainder is allocated
    to faces proportionally to area and filled with a Halton sequence
    offset by ``seed``.
    """
    if m < 4:
        raise InvalidArgument("need at least 4 surface samples")
    return _sample_surface_cached(plug, int(m), int(seed))


# ---------------------------------------------------------------------------
# distance queries


def socket_sdf(socket: SocketModel, point) -> float:
    """Signed distance (mm) from a world-frame point to the socket solid."""
    p = np.asarray(point, dtype=np.float64).reshape(3)
    local = socket.base_pose.rotation.T @ (p - socket.base_pose.translation)
    return float(kernels.socket_sdf_points(local[None, :], *socket.kernel_params)[0])


def _sdf_gradient(socket: SocketModel, point, h: float = 1e-5) -> np.ndarray:
    g = np.zeros(3)
    for i in range(3):
        dp = np.zeros(3)
        dp[i] = h
        g[i] = socket_sdf(socket, point + dp) - socket_sdf(socket, point - dp)
    g /= 2.0 * h
    n = np.linalg.norm(g)
    return g / n if n > 1e-12 else np.array([0.0, 0.0, 1.0])


def _composed_frames(plug_pose: Pose, socket: SocketModel):
    rs, ts = socket.base_pose.rotation, socket.base_pose.translation
    rot = rs.T @ plug_pose.rotation
    trans = rs.T @ (plug_pose.translation - ts)
    return rot, trans


def closest_pair(plug: PlugModel, plug_pose: Pose, socket: SocketModel, m: int = 1000, seed: int = 0):
    """Closest (plug point, socket point, separation) for the posed plug.

    The plug side is discretized by ``m`` surface samples; the socket side is
    evaluated analytically.  Separation is clamped to >= 0.
    """
    samples = sample_surface(plug, m, seed)
    rot, trans = _composed_frames(plug_pose, socket)
    dmin, imin, dmax = kernels.min_socket_sdf(samples, rot, trans, *socket.kernel_params)
    if dmax < -socket.cavity_depth:
        raise DegenerateGeometry("every surface sample is buried deeper than the cavity")
    p_plug = plug_pose.transform(samples[imin])
    grad = _sdf_gradient(socket, p_plug)
    p_socket = p_plug - dmin * grad
    return p_plug, p_socket, max(dmin, 0.0)


def penetration_depth(plug: PlugModel, plug_pose: Pose, socket: SocketModel, m: int = 1000, seed: int = 0) -> float:
    """Deepest sampled intrusion of the plug surface into socket material (mm)."""
    samples = sample_surface(plug, m, seed)
    rot, trans = _composed_frames(plug_pose, socket)
    dmin, _, _ = kernels.min_socket_sdf(samples, rot, trans, *socket.kernel_params)
    return max(0.0, -dmin)


def medial_anchor_path(socket: SocketModel, retract_height: float, k: int) -> AnchorPath:
    """k poses along the cavity axis from the retract pose down to the goal."""
    if k < 2:
        raise InvalidArgument("anchor path needs k >= 2")
    if retract_height <= 0:
        raise InvalidArgument("retract height must be positive")
    z = np.linspace(retract_height, -socket.cavity_depth, k)
    rot = socket.base_pose.rotation
    anchors = [
        Pose(socket.base_pose.transform(np.array([0.0, 0.0, zi])), rot) for zi in z
    ]
    return AnchorPath(tuple(anchors))
