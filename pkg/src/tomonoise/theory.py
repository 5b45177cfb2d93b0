"""Closed-form noise predictions for the parallel and fan-beam inversions."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize, signal

from .grid import GridSpec, Image, Sinogram, l2_norm, sinogram_grid
from .radon import _backproject_rows, _filter_rows, _pad_length, c_nu, get_profile, ramp_response

# sqrt(pi/48): discrete noise ratio of the unfiltered inversion
DISCRETE_COEFFICIENT = math.sqrt(math.pi / 48.0)


@dataclass(frozen=True)
class Prediction:
    name: str
    value: float
    formula: str

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError(f"prediction {self.name} is not finite")


def gamma_sharp(step: float, sigma: float, dim: int = 2) -> float:
    """Flat density ``s^n sigma^2 / (2 pi)^n`` of white noise on a grid of step ``s``."""
    return step**dim * sigma**2 / (2 * math.pi) ** dim


def predict_unfiltered_std_ratio(B: float, B_phi: float, B_p: float, h: float = 1.0) -> float:
    """``STD(f)/STD(g) = B^{3/2} / sqrt(24 B_phi B_p h)``."""
    if min(B, B_phi, B_p, h) <= 0:
        raise ValueError("band limits and h must be positive")
    return B**1.5 / math.sqrt(24.0 * B_phi * B_p * h)


def sharp_sampling_ratio(B: float, R: float, h: float = 1.0) -> float:
    """Unfiltered ratio for ``B_p = B`` and ``B_phi = R B``: ``sqrt(B / (24 R h))``."""
    return predict_unfiltered_std_ratio(B, R * B, B, h)


def discrete_band(N: int, a: float = 1.0) -> float:
    """Band limit ``B = N pi / (sqrt2 a)`` of the sharply sampled sinogram (``N_p = 2N`` over ``[-sqrt2 a, sqrt2 a]``)."""
    return N * math.pi / (math.sqrt(2.0) * a)


def predict_filtered_std_ratio(profile, N: int = 1, a: float = 1.0) -> float:
    """``sqrt(pi/48) sqrt(c_nu) sqrt(N) / a``; with ``N = a = 1`` this is the tabulated coefficient."""
    return DISCRETE_COEFFICIENT * math.sqrt(c_nu(get_profile(profile))) * math.sqrt(N) / a


def predict_parallel_density(xi_abs, profile, gamma: float, B: float):
    """``|xi| nu0(|xi|/B)^2 gamma / (4 pi)`` inside the band, zero outside."""
    xi_abs = np.abs(np.asarray(xi_abs, dtype=np.float64))
    nu = get_profile(profile).nu0(xi_abs / B)
    return xi_abs * nu**2 * gamma / (4 * math.pi)


def fan_anisotropy_factor(x, direction, R: float):
    """``sqrt(1 - (x . xi)^2 / (R^2 |xi|^2))`` for the unit direction of ``xi``."""
    x = np.asarray(x, dtype=np.float64)
    d = np.asarray(direction, dtype=np.float64)
    if float(np.dot(x, x)) > R * R * (1 + 1e-12):
        raise ValueError("point lies outside the source circle")
    d = d / np.linalg.norm(d, axis=-1, keepdims=True)
    q = np.tensordot(d, x, axes=([-1], [0])) / R
    return np.sqrt(np.clip(1.0 - q * q, 0.0, None))


def predict_fan_density(x, direction, xi_abs, R: float, profile, gamma: float, B: float):
    return predict_parallel_density(xi_abs, profile, gamma, B) * fan_anisotropy_factor(x, direction, R)


def profile_peak(profile) -> float:
    """Location of the maximum of ``rho nu0(rho)^2`` on ``[0, 1]``."""
    prof = get_profile(profile)
    res = optimize.minimize_scalar(lambda r: -r * float(prof.nu0(r)) ** 2, bounds=(0.0, 1.0),
                                   method="bounded", options={"xatol": 1e-10})
    return float(res.x)


def predict_power_autocovariance(k: int, m: int, sigma: float, mu4: float, N: int, dim: int = 1) -> float:
    """``sigma^4 [k = m] + sigma^4 [k = -m] + (mu4 - 3 sigma^4) / N^n`` for a real white field."""
    same = (k - m) % N == 0
    opposite = (k + m) % N == 0
    return sigma**4 * (same + opposite) + (mu4 - 3 * sigma**4) / N**dim


def moment4(dist: str, sigma: float = 1.0) -> float:
    if dist == "gaussian":
        return 3 * sigma**4
    if dist == "uniform":
        return 1.8 * sigma**4
    raise ValueError(f"unknown distribution {dist!r}")


def riesz_norm_sq(img: Image, method: str = "riesz") -> float:
    """``|| |D|^{-1/2} f ||^2`` of the piecewise-constant image.

    ``"riesz"`` evaluates ``(1/2pi) sum f(x) f(y) / |x - y|`` in real space (the
    self cell uses the mean of ``1/|x|`` over a cell). ``"dft"`` sums ``|f_hat|^2/|xi|``
    over a twice zero-padded DFT with the zero mode dropped, which discards the
    mean and underestimates for nonnegative images.
    """
    g = img.grid
    f = img.values
    if not np.any(f):
        raise ValueError("zero image")
    sx, sy = g.step_x, g.step_y
    if method == "riesz":
        ny, nx = f.shape
        X = np.arange(-(nx - 1), nx) * sx
        Y = np.arange(-(ny - 1), ny) * sy
        XX, YY = np.meshgrid(X, Y)
        r = np.hypot(XX, YY)
        with np.errstate(divide="ignore"):
            ker = 1.0 / r
        # mean of 1/|x| over a rectangle cell centered at 0
        ker[ny - 1, nx - 1] = _cell_mean_inverse_distance(sx, sy)
        conv = signal.fftconvolve(f, ker, mode="same")
        return float(np.sum(f * conv)) * (sx * sy) ** 2 / (2 * math.pi)
    if method == "dft":
        shape = (2 * f.shape[0], 2 * f.shape[1])
        F = np.fft.fft2(f, s=shape)
        k2 = 2 * math.pi * np.fft.fftfreq(shape[0], d=sy)
        k1 = 2 * math.pi * np.fft.fftfreq(shape[1], d=sx)
        K = np.hypot(*np.meshgrid(k1, k2))
        K[0, 0] = np.inf
        # continuous FT ~ s1 s2 F; measure (2pi)^2 / (L1 L2) per mode
        total = np.sum(np.abs(F) ** 2 / K) * (sx * sy) ** 2 / (shape[0] * sy * shape[1] * sx)
        return float(total)
    raise ValueError("method must be 'riesz' or 'dft'")


def _cell_mean_inverse_distance(sx: float, sy: float) -> float:
    # closed form of (1/(sx sy)) int over [-sx/2, sx/2] x [-sy/2, sy/2] of 1/|x|
    a, b = 0.5 * sx, 0.5 * sy
    d = math.hypot(a, b)
    val = 4 * (a * math.log((b + d) / a) + b * math.log((a + d) / b))
    return val / (sx * sy)


def predict_k_factor(f: Image, noise_ratio: float, method: str = "riesz") -> float:
    """``K = (||f_noise|| / ||g_noise||) sqrt(4 pi) || |D|^{-1/2} f || / ||f||``."""
    nf = l2_norm(f)
    if nf == 0:
        raise ValueError("zero image")
    return noise_ratio * math.sqrt(4 * math.pi * riesz_norm_sq(f, method)) / nf


def predict_radon_norm(f: Image, method: str = "riesz") -> float:
    """``||Rf||`` over the full circle, ``sqrt(4 pi) || |D|^{-1/2} f ||``."""
    return math.sqrt(4 * math.pi * riesz_norm_sq(f, method))


def predict_multiplicative_variance(Rf: Sinogram, grid: GridSpec, profile, sigma: float) -> Image:
    """Pointwise variance of the filtered inversion of ``(1 + w) Rf`` with white ``w``.

    The noise ``w Rf`` is independent across samples with variance ``sigma^2 Rf^2``, so
    each filtered row has variance ``sigma^2 (h^2 * Rf^2)`` for the discrete filter kernel
    ``h``; these are backprojected with squared weights.
    """
    spec = Rf.spec
    prof = get_profile(profile)
    step = spec.offset_step
    band = prof.band_Bp or math.pi / step
    L = _pad_length(spec.n_offset, True)
    k = 2 * math.pi * np.fft.rfftfreq(L, d=step)
    h = np.fft.irfft(ramp_response(L, step) * prof.nu0(k / band), n=L)
    H2 = np.fft.rfft(h * h)
    rows, _ = _filter_rows(Rf.values**2, step, lambda kk, ramp: H2, True, 1)
    angles, offsets = sinogram_grid(spec)
    w = np.full(spec.n_angle, (spec.angle_step / (2.0 * spec.angle_span)) ** 2)
    return Image(grid, sigma**2 * _backproject_rows(rows, angles, w, offsets[0], step, grid))
