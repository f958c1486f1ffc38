"""Pure-numpy geometry kernels.

Reference implementation of the hot queries: signed distance to the socket
solid (outer block minus an open cavity) and fused transform+SDF reductions
over plug surface samples.  The compiled backend in ``_fast.pyx`` mirrors
these formulas operation-for-operation so results are bit-identical.

Conventions (socket frame): +z is the insertion axis, the cavity opening is
centred on the origin in the z=0 plane, the block occupies z in [-hz, 0],
the cavity descends to z = -depth.  Primitive codes: 0 cylinder (a=radius),
1 box (a,b half-extents), 2 regular triangle (a=half side, vertex on +y).
"""

import math

import numpy as np

BACKEND = "ref"

PRIM_CYLINDER = 0
PRIM_BOX = 1
PRIM_PRISM3 = 2


def _cross_section_sd(x, y, prim, a, b):
    """2D signed distance to the cavity cross-section (negative inside)."""
    if prim == PRIM_CYLINDER:
        return np.sqrt(x * x + y * y) - a
    if prim == PRIM_BOX:
        qx = np.abs(x) - a
        qy = np.abs(y) - b
        ox = np.maximum(qx, 0.0)
        oy = np.maximum(qy, 0.0)
        return np.sqrt(ox * ox + oy * oy) + np.minimum(np.maximum(qx, qy), 0.0)
    if prim == PRIM_PRISM3:
        k = math.sqrt(3.0)
        px = np.abs(x) - a
        py = y + a / k
        flip = px + k * py > 0.0
        fx = (px - k * py) * 0.5
        fy = (-k * px - py) * 0.5
        px = np.where(flip, fx, px)
        py = np.where(flip, fy, py)
        px = px - np.clip(px, -2.0 * a, 0.0)
        d = np.sqrt(px * px + py * py)
        return np.where(py > 0.0, -d, np.where(py < 0.0, d, 0.0))
    raise ValueError(f"unknown primitive code {prim}")


def _box3(x, y, z, hx, hy, hz):
    """SDF of the outer block, occupying |x|<=hx, |y|<=hy, z in [-hz, 0]."""
    zc = z + 0.5 * hz
    qx = np.abs(x) - hx
    qy = np.abs(y) - hy
    qz = np.abs(zc) - 0.5 * hz
    ox = np.maximum(qx, 0.0)
    oy = np.maximum(qy, 0.0)
    oz = np.maximum(qz, 0.0)
    outside = np.sqrt(ox * ox + oy * oy + oz * oz)
    inside = np.minimum(np.maximum(qx, np.maximum(qy, qz)), 0.0)
    return outside + inside


def socket_sdf_points(pts, prim, a, b, depth, hx, hy, hz):
    """Exact SDF of the socket solid at socket-frame points (n,3)."""
    pts = np.asarray(pts, dtype=np.float64)
    x, y, z = pts[..., 0], pts[..., 1], pts[..., 2]
    s2 = _cross_section_sd(x, y, prim, a, b)
    d_blk = _box3(x, y, z, hx, hy, hz)
    # Cavity modelled as the semi-infinite prism z >= -depth so its open top
    # never counts as a surface.
    wz = -(z + depth)
    os2 = np.maximum(s2, 0.0)
    owz = np.maximum(wz, 0.0)
    d_cav = np.minimum(np.maximum(s2, wz), 0.0) + np.sqrt(os2 * os2 + owz * owz)

    r_material = np.maximum(d_blk, -d_cav)
    r_in_cavity = np.minimum(-s2, z + depth)
    r_above = np.minimum(np.sqrt(s2 * s2 + z * z), z + depth)

    material = (d_blk <= 0.0) & (d_cav >= 0.0)
    in_cavity = (d_cav < 0.0) & (z <= 0.0)
    above = (z > 0.0) & (s2 < 0.0)
    return np.where(
        material, r_material, np.where(in_cavity, r_in_cavity, np.where(above, r_above, d_blk))
    )


def plug_sdf_points(pts, prim, a, b, height):
    """Exact SDF of the plug solid (cross-section extruded over z in [0, h])."""
    pts = np.asarray(pts, dtype=np.float64)
    x, y, z = pts[..., 0], pts[..., 1], pts[..., 2]
    s2 = _cross_section_sd(x, y, prim, a, b)
    wz = np.abs(z - 0.5 * height) - 0.5 * height
    os2 = np.maximum(s2, 0.0)
    owz = np.maximum(wz, 0.0)
    return np.minimum(np.maximum(s2, wz), 0.0) + np.sqrt(os2 * os2 + owz * owz)


def _transform(samples, rot, trans):
    """Apply q = rot @ p + trans row-wise without BLAS so the summation
    order matches the compiled backend exactly."""
    x = samples[:, 0]
    y = samples[:, 1]
    z = samples[:, 2]
    qx = (rot[0, 0] * x + rot[0, 1] * y) + rot[0, 2] * z + trans[0]
    qy = (rot[1, 0] * x + rot[1, 1] * y) + rot[1, 2] * z + trans[1]
    qz = (rot[2, 0] * x + rot[2, 1] * y) + rot[2, 2] * z + trans[2]
    return qx, qy, qz


def min_socket_sdf(samples, rot, trans, prim, a, b, depth, hx, hy, hz):
    """Transform plug-frame samples into the socket frame and reduce the SDF.

    Returns (min value, index of first minimum, max value).
    """
    samples = np.ascontiguousarray(samples, dtype=np.float64)
    qx, qy, qz = _transform(samples, rot, trans)
    d = socket_sdf_points(np.stack([qx, qy, qz], axis=-1), prim, a, b, depth, hx, hy, hz)
    imin = int(np.argmin(d))
    return float(d[imin]), imin, float(d.max())


def socket_sdf_transformed(samples, rot, trans, prim, a, b, depth, hx, hy, hz):
    """Full SDF vector over transformed samples (diagnostics / tests)."""
    samples = np.ascontiguousarray(samples, dtype=np.float64)
    qx, qy, qz = _transform(samples, rot, trans)
    return socket_sdf_points(np.stack([qx, qy, qz], axis=-1), prim, a, b, depth, hx, hy, hz)
