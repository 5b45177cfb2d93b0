"""Reconstruction from samples by convolution interpolation, resampling and frequency cropping.

Samples outside the set are treated as zero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .grid import GridSpec, Image, Sinogram, SinogramSpec
from .kernels import Kernel, evaluate, fourier_sup, get_kernel, l2_norm_sq


@dataclass(frozen=True, eq=False)
class SampleSet1D:
    values: np.ndarray
    step: float = 1.0
    origin: float = 0.0

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError("sample step must be positive")
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))

    def positions(self) -> np.ndarray:
        return self.origin + self.step * np.arange(self.values.size)


@dataclass(frozen=True, eq=False)
class SampleSet2D:
    """Samples ``values[j, i]`` at ``(origin[0] + i*step[0], origin[1] + j*step[1])``."""

    values: np.ndarray
    step: tuple = (1.0, 1.0)
    origin: tuple = (0.0, 0.0)

    def __post_init__(self):
        if isinstance(self.step, (int, float)):
            object.__setattr__(self, "step", (float(self.step), float(self.step)))
        if isinstance(self.origin, (int, float)):
            object.__setattr__(self, "origin", (float(self.origin), float(self.origin)))
        if min(self.step) <= 0:
            raise ValueError("sample step must be positive")
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))


def _require_finite(kernel: Kernel):
    if not kernel.is_finite:
        raise ValueError("sinc has infinite support; use fourier_upsample for band-limited resampling")


def weight_matrix(n_in: int, u, kernel: Kernel) -> sparse.csr_matrix:
    """Sparse ``W[q, k] = kernel(u[q] - k)`` for fractional sample indices ``u``."""
    _require_finite(kernel)
    u = np.asarray(u, dtype=np.float64).ravel()
    r = int(math.ceil(kernel.support_radius))
    base = np.floor(u).astype(np.int64)
    offs = np.arange(-r, r + 2)
    cols = base[:, None] + offs[None, :]
    w = evaluate(kernel, u[:, None] - cols)
    keep = (cols >= 0) & (cols < n_in) & (w != 0.0)
    rows = np.broadcast_to(np.arange(u.size)[:, None], cols.shape)
    return sparse.csr_matrix((w[keep], (rows[keep], cols[keep])), shape=(u.size, n_in))


def interpolate(samples, kernel, query):
    """Evaluate ``sum_k f_k kernel((x - x_k)/step)`` at query points.

    For 2-D sample sets ``query`` is a pair ``(xq, yq)`` of equal-shape arrays and the
    kernel is the tensor product.
    """
    kernel = get_kernel(kernel)
    _require_finite(kernel)
    if isinstance(samples, SampleSet1D):
        xq = np.asarray(query, dtype=np.float64)
        u = (xq - samples.origin) / samples.step
        return (weight_matrix(samples.values.size, u, kernel) @ samples.values).reshape(xq.shape)
    xq, yq = (np.asarray(q, dtype=np.float64) for q in query)
    u = ((xq - samples.origin[0]) / samples.step[0]).ravel()
    v = ((yq - samples.origin[1]) / samples.step[1]).ravel()
    ny, nx = samples.values.shape
    r = int(math.ceil(kernel.support_radius))
    offs = np.arange(-r, r + 2)
    ci = np.floor(u).astype(np.int64)[:, None] + offs
    cj = np.floor(v).astype(np.int64)[:, None] + offs
    wu = np.where((ci >= 0) & (ci < nx), evaluate(kernel, u[:, None] - ci), 0.0)
    wv = np.where((cj >= 0) & (cj < ny), evaluate(kernel, v[:, None] - cj), 0.0)
    vals = samples.values[np.clip(cj, 0, ny - 1)[:, :, None], np.clip(ci, 0, nx - 1)[:, None, :]]
    return np.einsum("qj,qji,qi->q", wv, vals, wu).reshape(xq.shape)


def _fine_indices(n: int, m: int, align: str) -> np.ndarray:
    if align == "cell":
        return (np.arange(n * m) + 0.5) / m - 0.5
    if align == "node":
        return np.arange((n - 1) * m + 1) / m
    raise ValueError(f"align must be 'cell' or 'node', not {align!r}")


def upsample_array(values: np.ndarray, m: int, kernel, align: str = "cell", axes=None) -> np.ndarray:
    """Separable ``m``-fold upsampling along ``axes`` (default: all)."""
    if m < 2:
        raise ValueError("upsampling factor must be >= 2")
    kernel = get_kernel(kernel)
    out = np.asarray(values, dtype=np.float64)
    axes = range(out.ndim) if axes is None else axes
    for ax in axes:
        n = out.shape[ax]
        W = weight_matrix(n, _fine_indices(n, m, align), kernel)
        moved = np.moveaxis(out, ax, 0)
        res = W @ moved.reshape(n, -1)
        out = np.moveaxis(res.reshape((W.shape[0],) + moved.shape[1:]), 0, ax)
    return np.ascontiguousarray(out)


def upsample(data, m: int, kernel="lanczos3", align: str = "cell"):
    """Upsample an Image, Sinogram or array by ``m`` per axis on the same physical extent.

    ``align="cell"`` keeps the cell-centered convention (``n*m`` samples);
    ``align="node"`` places the first and last fine samples on the coarse ones
    (``(n-1)*m + 1`` samples) and is only available for raw arrays.
    """
    if isinstance(data, Image):
        if align != "cell":
            raise ValueError("images are cell-centered; use align='cell'")
        g = data.grid
        return Image(GridSpec(g.nx * m, g.ny * m, g.a, g.b), upsample_array(data.values, m, kernel))
    if isinstance(data, Sinogram):
        if align != "cell":
            raise ValueError("sinograms are cell-centered; use align='cell'")
        s = data.spec
        spec = SinogramSpec(s.geometry, s.n_angle * m, s.n_offset * m, s.R, s.half_circle)
        return Sinogram(spec, upsample_array(data.values, m, kernel))
    return upsample_array(data, m, kernel, align)


def decimate(data, m: int, offset: int = 0):
    """Keep every ``m``-th sample per axis starting at ``offset``; no filtering."""
    arr = data.values if isinstance(data, (Image, Sinogram)) else np.asarray(data)
    if m < 1 or any(n % m for n in arr.shape):
        raise ValueError(f"shape {arr.shape} is not divisible by {m}")
    if not 0 <= offset < m:
        raise ValueError("offset must lie in [0, m)")
    sl = tuple(slice(offset, None, m) for _ in arr.shape)
    out = np.ascontiguousarray(arr[sl])
    if isinstance(data, Image):
        g = data.grid
        return Image(GridSpec(g.nx // m, g.ny // m, g.a, g.b), out)
    if isinstance(data, Sinogram):
        s = data.spec
        return Sinogram(SinogramSpec(s.geometry, s.n_angle // m, s.n_offset // m, s.R, s.half_circle), out)
    return out


def crop_mask(shape, m: float) -> np.ndarray:
    """Boolean mask of DFT modes with ``|k/n| <= 1/(2m)`` on every axis (unshifted order)."""
    mask = np.ones(shape, dtype=bool)
    for ax, n in enumerate(shape):
        keep = np.abs(np.fft.fftfreq(n)) <= 0.5 / m
        sh = [1] * len(shape)
        sh[ax] = n
        mask &= keep.reshape(sh)
    return mask


def frequency_crop(data: np.ndarray, m: float) -> np.ndarray:
    """Hard-crop the spectrum to the centered box of relative side ``1/m``."""
    if m < 1:
        raise ValueError("crop factor must be >= 1")
    arr = np.asarray(data, dtype=np.float64)
    spec = np.fft.fftn(arr, norm="ortho")
    spec[~crop_mask(arr.shape, m)] = 0.0
    return np.real(np.fft.ifftn(spec, norm="ortho"))


def fourier_upsample(values: np.ndarray, m: int, axis: int = -1) -> np.ndarray:
    """Band-limited (zero-padded DFT) ``m``-fold upsampling on a cell-centered grid."""
    v = np.moveaxis(np.asarray(values, dtype=np.float64), axis, -1)
    n = v.shape[-1]
    raw = np.fft.fft(v, axis=-1)
    k = np.fft.fftfreq(n) * n
    # fine cell centers sit at coarse index i/m + delta
    delta = 0.5 / m - 0.5
    spec = raw * np.exp(2j * np.pi * k * delta / n)
    big = np.zeros(v.shape[:-1] + (n * m,), dtype=complex)
    half = (n + 1) // 2
    big[..., :half] = spec[..., :half]
    big[..., n * m - (n - half):] = spec[..., half:]
    if n % 2 == 0:
        # the Nyquist term is split evenly between +n/2 and -n/2
        h = n // 2
        big[..., h] = 0.5 * raw[..., h] * np.exp(1j * np.pi * delta)
        big[..., n * m - h] = 0.5 * raw[..., h] * np.exp(-1j * np.pi * delta)
    out = np.real(np.fft.ifft(big, axis=-1)) * m
    return np.moveaxis(out, -1, axis)


def norm_bound_check(samples, kernel, oversample: int = 16) -> tuple[float, float]:
    """Measured ``||f_h||^2`` of the interpolant and the bound ``C step^n sum |f_k|^2``.

    ``C = sup |khat|^2``. The measured norm is computed exactly per kernel through
    the sample autocorrelation: ``||f_h||^2 = step^n sum_j r(j) a(j)`` where
    ``a(j) = int k(x) k(x - j) dx``.
    """
    kernel = get_kernel(kernel)
    _require_finite(kernel)
    if isinstance(samples, SampleSet1D):
        vals = samples.values[None, :]
        steps = (samples.step,)
    else:
        vals = samples.values
        steps = samples.step
    C = fourier_sup(kernel) ** 2
    total = float(np.sum(vals**2))
    rhs = C * math.prod(steps) * total
    # kernel autocorrelation a(j) at integer lags, Gauss-Legendre on half-unit panels
    r = int(math.ceil(kernel.support_radius))
    lags = np.arange(-2 * r, 2 * r + 1)
    nodes, weights = np.polynomial.legendre.leggauss(32)
    edges = np.arange(-r - 1, r + 1, 0.5)
    x = (0.25 * nodes[None, :] + edges[:, None] + 0.25).ravel()
    w = np.tile(0.25 * weights, edges.size)
    kx = evaluate(kernel, x)
    auto = np.array([np.sum(w * kx * evaluate(kernel, x - j)) for j in lags])
    # linear sample autocorrelation r(j) via a zero-padded FFT
    pad = tuple(n + 4 * r + 1 for n in vals.shape)
    F = np.fft.rfft2(vals, s=pad)
    acf = np.fft.irfft2(np.abs(F) ** 2, s=pad)
    if isinstance(samples, SampleSet1D):
        lhs = float(np.dot(auto, acf[0, lags])) * steps[0]
    else:
        lhs = float(auto @ acf[np.ix_(lags, lags)] @ auto) * steps[0] * steps[1]
    return lhs, rhs
