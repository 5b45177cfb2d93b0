"""Pure-numpy versions of the hot kernels in ``_core.pyx``.

Image arrays are ``(ny, nx)`` on the cell-centered grid of ``[-a, a] x [-b, b]``.
``kernel`` is 0 for bilinear and 1 for Lanczos-3 image interpolation.
"""
import numpy as np

KERNEL_LINEAR = 0
KERNEL_LANCZOS3 = 1

# points evaluated per vectorized block
_BLOCK = 1 << 18


def _lanczos3_weights(frac):
    d = frac[..., None] - np.arange(-2, 4)
    return np.where(np.abs(d) < 3, np.sinc(d) * np.sinc(d / 3.0), 0.0)


def _sample(img, u, v, kernel):
    ny, nx = img.shape
    i0 = np.floor(u).astype(np.int64)
    j0 = np.floor(v).astype(np.int64)
    fu = u - i0
    fv = v - j0
    if kernel == KERNEL_LINEAR:
        wu = np.stack([1.0 - fu, fu], axis=-1)
        wv = np.stack([1.0 - fv, fv], axis=-1)
        offs = np.arange(2)
    else:
        wu = _lanczos3_weights(fu)
        wv = _lanczos3_weights(fv)
        offs = np.arange(-2, 4)
    ii = i0[:, None] + offs
    jj = j0[:, None] + offs
    okx = (ii >= 0) & (ii < nx)
    oky = (jj >= 0) & (jj < ny)
    wu = np.where(okx, wu, 0.0)
    wv = np.where(oky, wv, 0.0)
    ii = np.clip(ii, 0, nx - 1)
    jj = np.clip(jj, 0, ny - 1)
    vals = img[jj[:, :, None], ii[:, None, :]]
    return np.einsum("pj,pji,pi->p", wv, vals, wu)


def line_integrals(img, a, b, phis, ps, ds, kernel):
    img = np.ascontiguousarray(img, dtype=np.float64)
    ny, nx = img.shape
    sx, sy = 2.0 * a / nx, 2.0 * b / ny
    phis = np.asarray(phis, dtype=np.float64)
    ps = np.asarray(ps, dtype=np.float64)
    c, s = np.cos(phis), np.sin(phis)
    px, py = ps * c, ps * s
    t0 = np.full(phis.shape, -1e300)
    t1 = np.full(phis.shape, 1e300)
    valid = np.ones(phis.shape, dtype=bool)
    with np.errstate(divide="ignore", invalid="ignore"):
        big = np.abs(s) > 1e-15
        ta = np.where(big, (px - a) / s, -1e300)
        tb = np.where(big, (px + a) / s, 1e300)
        t0 = np.maximum(t0, np.minimum(ta, tb))
        t1 = np.minimum(t1, np.maximum(ta, tb))
        valid &= big | (np.abs(px) <= a)
        big = np.abs(c) > 1e-15
        ta = np.where(big, (-b - py) / c, -1e300)
        tb = np.where(big, (b - py) / c, 1e300)
        t0 = np.maximum(t0, np.minimum(ta, tb))
        t1 = np.minimum(t1, np.maximum(ta, tb))
        valid &= big | (np.abs(py) <= b)
    valid &= t1 > t0
    out = np.zeros(phis.shape)
    idx = np.nonzero(valid)[0]
    if idx.size == 0:
        return out
    n = np.maximum(np.ceil((t1[idx] - t0[idx]) / ds).astype(np.int64), 1)
    dt = (t1[idx] - t0[idx]) / n
    # expand every line into its quadrature points, in blocks of lines
    start = 0
    while start < idx.size:
        csum = np.cumsum(n[start:])
        stop = start + max(1, int(np.searchsorted(csum, _BLOCK)))
        sel = slice(start, stop)
        counts = n[sel]
        line_of = np.repeat(np.arange(counts.size), counts)
        k = np.arange(line_of.size) - np.repeat(np.cumsum(counts) - counts, counts)
        li = idx[sel][line_of]
        t = t0[li] + (k + 0.5) * dt[sel][line_of]
        x = px[li] - t * s[li]
        y = py[li] + t * c[li]
        vals = _sample(img, (x + a) / sx - 0.5, (y + b) / sy - 0.5, kernel)
        out[idx[sel]] = np.bincount(line_of, weights=vals, minlength=counts.size) * dt[sel]
        start = stop
    return out


def backproject_linear(rows, phis, weights, p0, dp, a, b, nx, ny, out):
    rows = np.asarray(rows, dtype=np.float64)
    n_p = rows.shape[1]
    sx, sy = 2.0 * a / nx, 2.0 * b / ny
    xs = -a + (np.arange(nx) + 0.5) * sx
    ys = -b + (np.arange(ny) + 0.5) * sy
    padded = np.zeros(n_p + 2)
    for i in range(rows.shape[0]):
        c, s = np.cos(phis[i]), np.sin(phis[i])
        q = ((xs[None, :] * c + ys[:, None] * s) - p0) / dp
        j = np.floor(q).astype(np.int64)
        fr = q - j
        # padded[k + 1] holds rows[i, k]; one zero sample on each side
        padded[1:-1] = rows[i]
        jl = np.clip(j + 1, 0, n_p + 1)
        jr = np.clip(j + 2, 0, n_p + 1)
        inside = (j >= -1) & (j <= n_p - 1)
        v = np.where(inside, padded[jl] + fr * (padded[jr] - padded[jl]), 0.0)
        out += weights[i] * v
    return out
