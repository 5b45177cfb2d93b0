"""Fan-beam geometry: forward projection, rebinning to parallel coordinates and inversion.

Sources sit at ``R w(alpha)``; the ray with fan angle ``beta`` is the line
``x . w(alpha + beta - pi/2) = R sin(beta)``.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import integrate, special

from .grid import Geometry, GridSpec, Image, Sinogram, SinogramSpec, default_parallel_spec, sinogram_grid
from .kernels import get_kernel
from .radon import RAMP, fbp_invert, line_integrals
from .sampling import weight_matrix


def default_fan_spec(N: int, a: float = 1.0, oversample: int = 1) -> SinogramSpec:
    """``N_alpha = N_beta = ceil(2 pi N)`` rounded up to even, times ``oversample``."""
    n = int(math.ceil(2 * math.pi * N))
    n += n % 2
    return SinogramSpec.fan(oversample * n, oversample * n, math.sqrt(2.0) * a)


def fan_to_line(alpha, beta, R: float):
    """Map fan coordinates to parallel ``(phi, p)`` with ``phi`` wrapped to ``[-pi, pi)``."""
    alpha = np.asarray(alpha, dtype=np.float64)
    beta = np.asarray(beta, dtype=np.float64)
    phi = _wrap(alpha + beta - 0.5 * math.pi)
    return phi, R * np.sin(beta)


def line_to_fan(phi, p, R: float):
    """Inverse of ``fan_to_line``; raises for ``|p| > R``."""
    p = np.asarray(p, dtype=np.float64)
    if np.any(np.abs(p) > R * (1 + 1e-12)):
        raise ValueError("offset |p| exceeds the source radius R")
    beta = np.arcsin(np.clip(p / R, -1.0, 1.0))
    return _wrap(np.asarray(phi, dtype=np.float64) - beta + 0.5 * math.pi), beta


def _wrap(angle):
    return (np.asarray(angle) + math.pi) % (2 * math.pi) - math.pi


def _require_fan(spec: SinogramSpec):
    if spec.geometry is not Geometry.FAN:
        raise ValueError("operation requires a fan-geometry sinogram")


def fan_forward(img: Image, spec: SinogramSpec, oversample: int = 2, kernel: str = "lanczos3") -> Sinogram:
    """Line integrals of the image along every fan ray of ``spec``."""
    _require_fan(spec)
    alphas, betas = sinogram_grid(spec)
    phi, p = fan_to_line(alphas[:, None], betas[None, :], spec.R)
    return Sinogram(spec, line_integrals(img, phi, p, oversample, kernel))


def fan_to_parallel(sino: Sinogram, parallel_spec: SinogramSpec, beta_kernel: str = "lanczos3") -> Sinogram:
    """Rebin a fan sinogram onto a parallel grid with the same ``R``.

    Lanczos-3 (or ``beta_kernel``) in ``beta`` with zero extension, then linear in
    ``alpha`` with periodic wrap.
    """
    _require_fan(sino.spec)
    if parallel_spec.geometry is not Geometry.PARALLEL:
        raise ValueError("target spec must be parallel")
    if not math.isclose(parallel_spec.R, sino.spec.R, rel_tol=1e-12):
        raise ValueError("fan and parallel radii differ")
    fs = sino.spec
    phis, ps = sinogram_grid(parallel_spec)
    _, betas_out = line_to_fan(0.0, ps, fs.R)
    beta0 = -0.5 * math.pi + 0.5 * fs.offset_step
    u = (betas_out - beta0) / fs.offset_step
    # beta pass: depends on p only, shared by every alpha row
    W = weight_matrix(fs.n_offset, u, get_kernel(beta_kernel))
    cols = (W @ sino.values.T).T  # (n_alpha, n_p)
    alpha = phis[:, None] - betas_out[None, :] + 0.5 * math.pi
    alpha0 = -math.pi + 0.5 * fs.angle_step
    v = ((alpha - alpha0) / fs.angle_step) % fs.n_angle
    i0 = np.floor(v).astype(np.int64)
    fr = v - i0
    i0 %= fs.n_angle
    i1 = (i0 + 1) % fs.n_angle
    j = np.broadcast_to(np.arange(ps.size)[None, :], i0.shape)
    out = (1.0 - fr) * cols[i0, j] + fr * cols[i1, j]
    return Sinogram(parallel_spec, out)


def fan_fbp(sino: Sinogram, grid: GridSpec, profile=RAMP, parallel_spec: SinogramSpec | None = None,
            **fbp_kwargs) -> Image:
    """Rebin to parallel coordinates, then filtered backprojection."""
    _require_fan(sino.spec)
    if parallel_spec is None:
        base = default_parallel_spec(grid.nx, grid.a)
        parallel_spec = SinogramSpec.parallel(base.n_angle, base.n_offset, sino.spec.R)
    return fbp_invert(fan_to_parallel(sino, parallel_spec), grid, profile, **fbp_kwargs)


def position_factor(x, R: float) -> float:
    """``(1/2pi) int_0^{2pi} sqrt(1 - (|x|^2/R^2) cos^2 t) dt`` by adaptive quadrature."""
    r2 = float(np.dot(np.ravel(x), np.ravel(x))) / R**2
    if r2 > 1.0 + 1e-12:
        raise ValueError("point lies outside the source circle")
    r2 = min(r2, 1.0)
    val, _ = integrate.quad(lambda t: math.sqrt(max(1.0 - r2 * math.cos(t) ** 2, 0.0)),
                            0.0, 0.5 * math.pi, epsabs=1e-12, epsrel=1e-11, limit=200)
    return 4.0 * val / (2.0 * math.pi)


def position_factor_elliptic(r, R: float):
    """Same factor via the complete elliptic integral: ``(2/pi) E(|x|^2/R^2)``."""
    return 2.0 / math.pi * special.ellipe((np.asarray(r, dtype=np.float64) / R) ** 2)


def disk_average_position_factor(radius: float = 1.0, R: float = math.sqrt(2.0)) -> float:
    """Mean of the position factor over the disk ``|x| <= radius``."""
    val, _ = integrate.quad(lambda r: r * position_factor((r, 0.0), R), 0.0, radius,
                            epsabs=1e-12, epsrel=1e-11)
    return 2.0 * val / radius**2
