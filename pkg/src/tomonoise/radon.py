"""Parallel-beam Radon transform, ramp filtering and filtered backprojection.

Lines are ``x . w(phi) = p`` with ``w(phi) = (cos phi, sin phi)``. The default
angular range is the full circle ``[-pi, pi)``, so every line is sampled twice
and the inversion constant is ``1/(4 pi)``; the half-circle mode uses ``1/(2 pi)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from . import _backend
from .grid import Geometry, GridSpec, Image, Sinogram, SinogramSpec, sinogram_grid
from .kernels import LANCZOS3
from .sampling import weight_matrix

PROFILES = ("ramp", "hann", "cosine", "custom")


@dataclass(frozen=True, eq=False)
class FilterProfile:
    """Window ``nu0`` on ``[0, 1]`` applied to the ramp as ``|k| nu0(|k|/B_p)``.

    ``band_Bp=None`` means the Nyquist frequency of the sinogram's offset grid.
    """

    name: str = "ramp"
    band_Bp: float | None = None
    table: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        name = self.name.lower()
        if name not in PROFILES:
            raise ValueError(f"unknown filter {self.name!r}; expected one of {PROFILES}")
        object.__setattr__(self, "name", name)
        if name == "custom":
            if self.table is None or len(self.table) < 2:
                raise ValueError("custom filter needs a table of at least two values on [0, 1]")
            t = np.asarray(self.table, dtype=np.float64)
            if not 0 < t[0] <= 1:
                raise ValueError("nu0(0) must lie in (0, 1]")
            object.__setattr__(self, "table", t)
        if self.band_Bp is not None and not self.band_Bp > 0:
            raise ValueError("band limit must be positive")

    def nu0(self, t):
        """Window value at relative frequency ``t = |k|/B_p``; zero for ``t > 1``."""
        t = np.abs(np.asarray(t, dtype=np.float64))
        inside = t <= 1.0
        if self.name == "ramp":
            v = np.ones_like(t)
        elif self.name == "hann":
            v = np.cos(0.5 * np.pi * t) ** 2
        elif self.name == "cosine":
            v = np.cos(0.5 * np.pi * t)
        else:
            grid = np.linspace(0.0, 1.0, self.table.size)
            v = np.interp(np.minimum(t, 1.0), grid, self.table)
        return np.where(inside, v, 0.0)


RAMP = FilterProfile("ramp")
HANN = FilterProfile("hann")
COSINE = FilterProfile("cosine")


def get_profile(name) -> FilterProfile:
    return name if isinstance(name, FilterProfile) else FilterProfile(name)


def c_nu(profile: FilterProfile) -> float:
    """``3 * int_0^1 rho^2 nu0(rho)^2 d rho``."""
    profile = get_profile(profile)
    if profile.name == "ramp":
        return 1.0
    val, _ = integrate.quad(lambda r: r * r * float(profile.nu0(r)) ** 2, 0.0, 1.0,
                            epsabs=1e-13, epsrel=1e-12, limit=200)
    return 3.0 * val


def _require_parallel(spec: SinogramSpec):
    if spec.geometry is not Geometry.PARALLEL:
        raise ValueError("operation requires a parallel-geometry sinogram")


def line_integrals(img: Image, phis, ps, oversample: int = 2, kernel: str = "lanczos3") -> np.ndarray:
    """Integrals of the image interpolant along arbitrary lines ``x . w(phi) = p``.

    Rectangle rule with step ``min(pixel)/oversample``; lines are clipped to the image rectangle.
    """
    if oversample < 1:
        raise ValueError("oversampling factor must be >= 1")
    g = img.grid
    phis = np.ascontiguousarray(phis, dtype=np.float64)
    ps = np.ascontiguousarray(ps, dtype=np.float64)
    shape = np.broadcast_shapes(phis.shape, ps.shape)
    phis = np.ascontiguousarray(np.broadcast_to(phis, shape).ravel())
    ps = np.ascontiguousarray(np.broadcast_to(ps, shape).ravel())
    ds = min(g.step_x, g.step_y) / oversample
    out = _backend.line_integrals(img.values, g.a, g.b, phis, ps, ds, _backend.kernel_code(kernel))
    return np.asarray(out).reshape(shape)


def forward(img: Image, spec: SinogramSpec, oversample: int = 2, kernel: str = "lanczos3") -> Sinogram:
    """Parallel-beam Radon transform sampled on ``spec``."""
    _require_parallel(spec)
    angles, offsets = sinogram_grid(spec)
    vals = line_integrals(img, angles[:, None], offsets[None, :], oversample, kernel)
    return Sinogram(spec, vals)


def _pad_length(n: int, pad: bool, factor: int = 2) -> int:
    if not pad:
        return n
    return factor * (1 << (n - 1).bit_length())


def ramp_response(L: int, step: float, periodic: bool = False) -> np.ndarray:
    """Ramp multiplier on the ``rfft`` bins of a length-``L`` row with sample step ``step``.

    For zero-padded rows this is the DFT of the sampled band-limited ramp kernel
    (``1/(4 s^2)`` at 0, ``-1/(pi n s)^2`` at odd ``n``), which equals ``|k|`` away from
    zero frequency but does not discard the mean and so avoids a constant offset.
    Periodic rows use ``|k|`` exactly.
    """
    k = 2.0 * math.pi * np.fft.rfftfreq(L, d=step)
    if periodic:
        return k
    n = np.fft.fftfreq(L) * L
    h = np.zeros(L)
    h[n == 0] = 0.25 / step**2
    odd = (n % 2) == 1
    h[odd] = -1.0 / (math.pi * n[odd] * step) ** 2
    return 2.0 * math.pi * step * np.real(np.fft.rfft(h))


def _filter_rows(rows: np.ndarray, step: float, multiplier, pad: bool = True, upsample: int = 1,
                 pad_factor: int = 2, keep_tails: bool = False):
    """Apply a Fourier multiplier along the last axis.

    ``multiplier(k, ramp)`` receives the angular frequencies of the rfft bins and the
    matching ramp response.

    Returns ``(filtered, p_shift)``; ``filtered[:, j]`` sits at ``p_first + p_shift + j*step/upsample``.
    """
    n = rows.shape[-1]
    L = _pad_length(n, pad, pad_factor)
    F = np.fft.rfft(rows, n=L, axis=-1)
    k = 2.0 * math.pi * np.fft.rfftfreq(L, d=step)
    F *= multiplier(k, ramp_response(L, step, periodic=not pad))
    if upsample == 1:
        out = np.fft.irfft(F, n=L, axis=-1)
        if keep_tails:
            return out, 0.0
        return out[..., :n], 0.0
    if L % 2 == 0:
        # the old Nyquist bin becomes an ordinary bin of the longer transform
        F[..., -1] *= 0.5
    fine = np.fft.irfft(F, n=L * upsample, axis=-1) * upsample
    u = upsample
    # one coarse step of tail on each side; negative offsets wrap to the end
    out = np.concatenate([fine[..., -u:], fine[..., : n * u + 1]], axis=-1)
    return out, -step


def ramp_filter(sino: Sinogram, profile=RAMP, pad: bool = True) -> Sinogram:
    """Multiply every angle row by ``|k| nu0(|k|/B_p)`` in the DFT domain.

    Rows are zero-padded to twice the next power of two unless ``pad=False``
    (periodic filtering).
    """
    _require_parallel(sino.spec)
    profile = get_profile(profile)
    step = sino.spec.offset_step
    band = profile.band_Bp or math.pi / step
    out, _ = _filter_rows(sino.values, step, lambda k, ramp: ramp * profile.nu0(k / band), pad)
    return sino.with_values(out)


def backproject(sino: Sinogram, grid: GridSpec, kernel: str = "linear") -> Image:
    """Discrete adjoint ``f(x) = dphi * sum_i g(phi_i, x . w(phi_i))``.

    ``kernel`` selects the interpolation in ``p``: ``"linear"`` (compiled) or ``"lanczos3"``.
    """
    _require_parallel(sino.spec)
    spec = sino.spec
    angles, offsets = sinogram_grid(spec)
    weights = np.full(spec.n_angle, spec.angle_step)
    return Image(grid, _backproject_rows(sino.values, angles, weights, offsets[0], spec.offset_step,
                                         grid, kernel))


def _backproject_rows(rows, angles, weights, p0, dp, grid: GridSpec, kernel="linear") -> np.ndarray:
    out = np.zeros(grid.shape)
    if kernel == "linear":
        _backend.backproject_linear(np.ascontiguousarray(rows), np.ascontiguousarray(angles),
                                    np.ascontiguousarray(weights, dtype=np.float64),
                                    float(p0), float(dp), grid.a, grid.b, grid.nx, grid.ny, out)
        return out
    if kernel != "lanczos3":
        raise ValueError(f"unsupported backprojection kernel {kernel!r}")
    X, Y = grid.mesh()
    n_p = rows.shape[1]
    for i, phi in enumerate(angles):
        u = ((X * math.cos(phi) + Y * math.sin(phi)) - p0) / dp
        out += weights[i] * (weight_matrix(n_p, u, LANCZOS3) @ rows[i]).reshape(grid.shape)
    return out


def fbp_invert(sino: Sinogram, grid: GridSpec, profile=RAMP, upsample: int = 8,
               kernel: str = "linear", chunk: int = 64) -> Image:
    """Filtered backprojection ``f = R' nu(D_p)|D_p| g / (2 * angle span)``.

    With ``upsample > 1`` the filtered rows are evaluated on a ``upsample``-times finer
    offset grid by DFT zero padding before the linear backprojection, which keeps the
    interpolation transfer close to one over the whole band. Angles are processed in
    chunks of ``chunk`` rows to bound memory.
    """
    _require_parallel(sino.spec)
    profile = get_profile(profile)
    spec = sino.spec
    angles, offsets = sinogram_grid(spec)
    step = spec.offset_step
    band = profile.band_Bp or math.pi / step
    mult = lambda k, ramp: ramp * profile.nu0(k / band)  # noqa: E731
    weights = np.full(spec.n_angle, spec.angle_step / (2.0 * spec.angle_span))
    out = np.zeros(grid.shape)
    u = max(1, int(upsample)) if kernel == "linear" else 1
    for start in range(0, spec.n_angle, chunk):
        sl = slice(start, min(start + chunk, spec.n_angle))
        rows, shift = _filter_rows(sino.values[sl], step, mult, True, u)
        out += _backproject_rows(rows, angles[sl], weights[sl], offsets[0] + shift, step / u, grid, kernel)
    return Image(grid, out)


def half_ramp_norm_sq(sino: Sinogram) -> float:
    """``|| |D_p|^{1/2} g ||^2`` over the sampled angle range, offsets extended by zero."""
    _require_parallel(sino.spec)
    spec = sino.spec
    out, _ = _filter_rows(sino.values, spec.offset_step, lambda k, ramp: np.sqrt(k), True, 1,
                          pad_factor=4, keep_tails=True)
    return float(np.sum(out**2)) * spec.angle_step * spec.offset_step
