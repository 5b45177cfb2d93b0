# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled line-integration and backprojection kernels.

Same contracts as ``tomonoise._pykernels``; see there for the argument layout.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sin, cos, floor, ceil, fabs, M_PI

cnp.import_array()

cdef enum:
    KERNEL_LINEAR = 0
    KERNEL_LANCZOS3 = 1

# cos(pi*k/3), sin(pi*k/3) for tap offsets k = -2..3
cdef double[6] _C3 = [-0.5, 0.5, 1.0, 0.5, -0.5, -1.0]
cdef double[6] _S3 = [-0.8660254037844386, -0.8660254037844386, 0.0,
                      0.8660254037844386, 0.8660254037844386, 0.0]


cdef inline void _lanczos3_weights(double frac, double* w) noexcept nogil:
    # weights for taps i0-2 .. i0+3 at distance d = frac - k
    cdef double s1, s3, c3, d, sgn
    cdef int k
    if frac == 0.0:
        for k in range(6):
            w[k] = 0.0
        w[2] = 1.0
        return
    s1 = sin(M_PI * frac)
    s3 = sin(M_PI * frac / 3.0)
    c3 = cos(M_PI * frac / 3.0)
    sgn = 1.0
    for k in range(6):
        # k index 0..5 maps to offset -2..3; (-1)^offset
        d = frac - (k - 2)
        sgn = 1.0 if ((k - 2) % 2 == 0) else -1.0
        w[k] = 3.0 * (sgn * s1) * (s3 * _C3[k] - c3 * _S3[k]) / (M_PI * M_PI * d * d)


# weights tabulated on TABLE_BINS fractional positions, linearly interpolated
cdef enum:
    TABLE_BINS = 4096
cdef double _TABLE[TABLE_BINS + 1][6]


cdef void _fill_table() noexcept:
    cdef int q
    for q in range(TABLE_BINS + 1):
        _lanczos3_weights(q / <double>TABLE_BINS, _TABLE[q])
    # frac == 1 is the frac == 0 pattern shifted by one tap
    for q in range(6):
        _TABLE[TABLE_BINS][q] = 1.0 if q == 3 else 0.0


_fill_table()


cdef inline void _table_weights(double frac, double* w) noexcept nogil:
    cdef double pos = frac * TABLE_BINS
    cdef int q = <int>pos
    cdef double t
    cdef int k
    if q >= TABLE_BINS:
        q = TABLE_BINS - 1
    t = pos - q
    for k in range(6):
        w[k] = _TABLE[q][k] + t * (_TABLE[q + 1][k] - _TABLE[q][k])


cdef inline double _sample(const double[:, ::1] img, double u, double v,
                           int nx, int ny, int kernel) noexcept nogil:
    cdef int i0, j0, i, j, ii, jj
    cdef double fu, fv, acc, row
    cdef double[6] wu
    cdef double[6] wv
    i0 = <int>floor(u)
    j0 = <int>floor(v)
    fu = u - i0
    fv = v - j0
    acc = 0.0
    if kernel == KERNEL_LINEAR:
        for j in range(2):
            jj = j0 + j
            if jj < 0 or jj >= ny:
                continue
            row = 0.0
            for i in range(2):
                ii = i0 + i
                if ii < 0 or ii >= nx:
                    continue
                row += (fu if i == 1 else 1.0 - fu) * img[jj, ii]
            acc += (fv if j == 1 else 1.0 - fv) * row
        return acc
    _table_weights(fu, wu)
    _table_weights(fv, wv)
    if i0 >= 2 and j0 >= 2 and i0 + 3 < nx and j0 + 3 < ny:
        for j in range(6):
            row = 0.0
            for i in range(6):
                row += wu[i] * img[j0 + j - 2, i0 + i - 2]
            acc += wv[j] * row
        return acc
    for j in range(6):
        jj = j0 + j - 2
        if jj < 0 or jj >= ny or wv[j] == 0.0:
            continue
        row = 0.0
        for i in range(6):
            ii = i0 + i - 2
            if ii < 0 or ii >= nx:
                continue
            row += wu[i] * img[jj, ii]
        acc += wv[j] * row
    return acc


def line_integrals(const double[:, ::1] img, double a, double b,
                   const double[::1] phis, const double[::1] ps,
                   double ds, int kernel):
    """Rectangle-rule integrals of the image interpolant along lines x.w(phi) = p."""
    cdef Py_ssize_t n_lines = phis.shape[0]
    cdef int ny = img.shape[0]
    cdef int nx = img.shape[1]
    cdef double sx = 2.0 * a / nx
    cdef double sy = 2.0 * b / ny
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out_arr = np.zeros(n_lines)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t l
    cdef long n, k
    cdef double c, s, p, t0, t1, ta, tb, dt, t, x, y, acc, px, py
    with nogil:
        for l in range(n_lines):
            c = cos(phis[l])
            s = sin(phis[l])
            p = ps[l]
            px = p * c
            py = p * s
            # point = (px - t s, py + t c); clip t to the rectangle
            t0 = -1e300
            t1 = 1e300
            if fabs(s) > 1e-15:
                ta = (px - a) / s
                tb = (px + a) / s
                if ta > tb:
                    ta, tb = tb, ta
                if ta > t0:
                    t0 = ta
                if tb < t1:
                    t1 = tb
            elif fabs(px) > a:
                continue
            if fabs(c) > 1e-15:
                ta = (-b - py) / c
                tb = (b - py) / c
                if ta > tb:
                    ta, tb = tb, ta
                if ta > t0:
                    t0 = ta
                if tb < t1:
                    t1 = tb
            elif fabs(py) > b:
                continue
            if t1 <= t0:
                continue
            n = <long>ceil((t1 - t0) / ds)
            if n < 1:
                n = 1
            dt = (t1 - t0) / n
            acc = 0.0
            for k in range(n):
                t = t0 + (k + 0.5) * dt
                x = px - t * s
                y = py + t * c
                acc += _sample(img, (x + a) / sx - 0.5, (y + b) / sy - 0.5, nx, ny, kernel)
            out[l] = acc * dt
    return out_arr


def backproject_linear(const double[:, ::1] rows, const double[::1] phis,
                       const double[::1] weights, double p0, double dp,
                       double a, double b, int nx, int ny, double[:, ::1] out):
    """Accumulate ``sum_i weights[i] * rows[i](x.w(phi_i))`` into ``out`` (ny, nx).

    ``rows[i, j]`` is sampled at ``p0 + j*dp``; linear interpolation, zero outside.
    """
    cdef Py_ssize_t n_ang = rows.shape[0]
    cdef Py_ssize_t n_p = rows.shape[1]
    cdef double sx = 2.0 * a / nx
    cdef double sy = 2.0 * b / ny
    cdef Py_ssize_t i, ix, iy
    cdef long j
    cdef double c, s, wgt, y, q, dq, q_row, q_end, fr, v
    cdef const double* r
    cdef double* o
    with nogil:
        for i in range(n_ang):
            c = cos(phis[i])
            s = sin(phis[i])
            wgt = weights[i]
            dq = sx * c / dp
            r = &rows[i, 0]
            for iy in range(ny):
                y = -b + (iy + 0.5) * sy
                q_row = ((-a + 0.5 * sx) * c + y * s - p0) / dp
                q_end = q_row + (nx - 1) * dq
                o = &out[iy, 0]
                if q_row >= 0.0 and q_end >= 0.0 and q_row < n_p - 1 and q_end < n_p - 1:
                    # whole image row reads strictly inside the sample row
                    for ix in range(nx):
                        q = q_row + ix * dq
                        j = <long>q
                        fr = q - j
                        o[ix] += wgt * (r[j] + fr * (r[j + 1] - r[j]))
                    continue
                for ix in range(nx):
                    q = q_row + ix * dq
                    j = <long>floor(q)
                    fr = q - j
                    if j >= 0 and j + 1 < n_p:
                        v = r[j] + fr * (r[j + 1] - r[j])
                    elif j == n_p - 1:
                        v = (1.0 - fr) * r[j]
                    elif j == -1:
                        v = fr * r[0]
                    else:
                        continue
                    o[ix] += wgt * v
    return out
