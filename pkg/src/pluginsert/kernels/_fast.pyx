# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled geometry kernels.

Mirrors ``_ref.py`` operation-for-operation (same expressions, same
association order, no FMA contraction) so both backends produce identical
values.  Keep the two files in sync; ``tests/test_kernels.py`` enforces
parity on random inputs.
"""

from libc.math cimport fabs, sqrt

import numpy as np

BACKEND = "fast"

PRIM_CYLINDER = 0
PRIM_BOX = 1
PRIM_PRISM3 = 2


cdef inline double _dmin(double a, double b) nogil:
    return a if a < b else b


cdef inline double _dmax(double a, double b) nogil:
    return a if a > b else b


cdef inline double _cross_section_sd(double x, double y, int prim, double a, double b) nogil:
    cdef double qx, qy, ox, oy, k, px, py, fx, fy, d, c
    if prim == 0:
        return sqrt(x * x + y * y) - a
    if prim == 1:
        qx = fabs(x) - a
        qy = fabs(y) - b
        ox = _dmax(qx, 0.0)
        oy = _dmax(qy, 0.0)
        return sqrt(ox * ox + oy * oy) + _dmin(_dmax(qx, qy), 0.0)
    # regular triangle, vertex on +y, a = half side
    k = sqrt(3.0)
    px = fabs(x) - a
    py = y + a / k
    if px + k * py > 0.0:
        fx = (px - k * py) * 0.5
        fy = (-k * px - py) * 0.5
        px = fx
        py = fy
    c = _dmin(_dmax(px, -2.0 * a), 0.0)
    px = px - c
    d = sqrt(px * px + py * py)
    if py > 0.0:
        return -d
    if py < 0.0:
        return d
    return 0.0


cdef inline double _box3(double x, double y, double z, double hx, double hy, double hz) nogil:
    cdef double zc, qx, qy, qz, ox, oy, oz
    zc = z + 0.5 * hz
    qx = fabs(x) - hx
    qy = fabs(y) - hy
    qz = fabs(zc) - 0.5 * hz
    ox = _dmax(qx, 0.0)
    oy = _dmax(qy, 0.0)
    oz = _dmax(qz, 0.0)
    return sqrt(ox * ox + oy * oy + oz * oz) + _dmin(_dmax(qx, _dmax(qy, qz)), 0.0)


cdef inline double _socket_sdf(double x, double y, double z, int prim, double a, double b,
                               double depth, double hx, double hy, double hz) nogil:
    cdef double s2, d_blk, wz, os2, owz, d_cav
    s2 = _cross_section_sd(x, y, prim, a, b)
    d_blk = _box3(x, y, z, hx, hy, hz)
    wz = -(z + depth)
    os2 = _dmax(s2, 0.0)
    owz = _dmax(wz, 0.0)
    d_cav = _dmin(_dmax(s2, wz), 0.0) + sqrt(os2 * os2 + owz * owz)
    if d_blk <= 0.0 and d_cav >= 0.0:
        return _dmax(d_blk, -d_cav)
    if d_cav < 0.0 and z <= 0.0:
        return _dmin(-s2, z + depth)
    if z > 0.0 and s2 < 0.0:
        return _dmin(sqrt(s2 * s2 + z * z), z + depth)
    return d_blk


def socket_sdf_points(pts, int prim, double a, double b, double depth,
                      double hx, double hy, double hz):
    cdef const double[:, ::1] p = np.ascontiguousarray(pts, dtype=np.float64)
    cdef Py_ssize_t n = p.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            out[i] = _socket_sdf(p[i, 0], p[i, 1], p[i, 2], prim, a, b, depth, hx, hy, hz)
    return out_arr


def plug_sdf_points(pts, int prim, double a, double b, double height):
    cdef const double[:, ::1] p = np.ascontiguousarray(pts, dtype=np.float64)
    cdef Py_ssize_t n = p.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i
    cdef double s2, wz, os2, owz
    with nogil:
        for i in range(n):
            s2 = _cross_section_sd(p[i, 0], p[i, 1], prim, a, b)
            wz = fabs(p[i, 2] - 0.5 * height) - 0.5 * height
            os2 = _dmax(s2, 0.0)
            owz = _dmax(wz, 0.0)
            out[i] = _dmin(_dmax(s2, wz), 0.0) + sqrt(os2 * os2 + owz * owz)
    return out_arr


def min_socket_sdf(samples, rot, trans, int prim, double a, double b, double depth,
                   double hx, double hy, double hz):
    cdef const double[:, ::1] s = np.ascontiguousarray(samples, dtype=np.float64)
    cdef const double[:, ::1] r = np.ascontiguousarray(rot, dtype=np.float64)
    cdef const double[::1] t = np.ascontiguousarray(trans, dtype=np.float64)
    cdef Py_ssize_t n = s.shape[0]
    cdef Py_ssize_t i, imin = 0
    cdef double x, y, z, qx, qy, qz, d
    cdef double dmin = 1e300
    cdef double dmax = -1e300
    with nogil:
        for i in range(n):
            x = s[i, 0]
            y = s[i, 1]
            z = s[i, 2]
            qx = (r[0, 0] * x + r[0, 1] * y) + r[0, 2] * z + t[0]
            qy = (r[1, 0] * x + r[1, 1] * y) + r[1, 2] * z + t[1]
            qz = (r[2, 0] * x + r[2, 1] * y) + r[2, 2] * z + t[2]
            d = _socket_sdf(qx, qy, qz, prim, a, b, depth, hx, hy, hz)
            if d < dmin:
                dmin = d
                imin = i
            if d > dmax:
                dmax = d
    return dmin, imin, dmax


def socket_sdf_transformed(samples, rot, trans, int prim, double a, double b, double depth,
                           double hx, double hy, double hz):
    cdef const double[:, ::1] s = np.ascontiguousarray(samples, dtype=np.float64)
    cdef const double[:, ::1] r = np.ascontiguousarray(rot, dtype=np.float64)
    cdef const double[::1] t = np.ascontiguousarray(trans, dtype=np.float64)
    cdef Py_ssize_t n = s.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i
    cdef double x, y, z, qx, qy, qz
    with nogil:
        for i in range(n):
            x = s[i, 0]
            y = s[i, 1]
            z = s[i, 2]
            qx = (r[0, 0] * x + r[0, 1] * y) + r[0, 2] * z + t[0]
            qy = (r[1, 0] * x + r[1, 1] * y) + r[1, 2] * z + t[1]
            qz = (r[2, 0] * x + r[2, 1] * y) + r[2, 2] * z + t[2]
            out[i] = _socket_sdf(qx, qy, qz, prim, a, b, depth, hx, hy, hz)
    return out_arr
