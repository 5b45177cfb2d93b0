"""Periodograms, radial binning, windowed local spectra and DFT noise statistics.

All transforms use the unitary DFT, so ``sum(power) == sum(values**2)``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .grid import Image
from .noise import gen_white, trial_seed


@dataclass(frozen=True, eq=False)
class SpectrumEstimate:
    """Centered power ``|DFT|^2`` with per-axis angular frequencies (radians per unit length).

    ``axes[d]`` belongs to array axis ``d``; for images that is ``(xi_2, xi_1)``.
    """

    power: np.ndarray
    axes: tuple

    @property
    def relative_axes(self) -> tuple:
        """Frequencies as fractions of each axis' Nyquist, in ``[-1, 1)``."""
        return tuple(2.0 * np.fft.fftshift(np.fft.fftfreq(n)) for n in self.power.shape)


@dataclass(frozen=True, eq=False)
class RadialProfile:
    centers: np.ndarray  # relative radius, 1 = axis Nyquist
    mean_power: np.ndarray
    n_modes: np.ndarray
    overflow_power: float
    overflow_modes: int


def periodogram(data, steps=None) -> SpectrumEstimate:
    arr = data.values if isinstance(data, Image) else np.asarray(data, dtype=np.float64)
    if steps is None:
        steps = (data.grid.step_y, data.grid.step_x) if isinstance(data, Image) else (1.0,) * arr.ndim
    steps = tuple(np.broadcast_to(steps, (arr.ndim,)))
    F = np.fft.fftshift(np.fft.fftn(arr, norm="ortho"))
    axes = tuple(2 * math.pi * np.fft.fftshift(np.fft.fftfreq(n, d=s)) for n, s in zip(arr.shape, steps))
    return SpectrumEstimate(np.abs(F) ** 2, axes)


def _relative_radius(spec: SpectrumEstimate) -> np.ndarray:
    grids = np.meshgrid(*spec.relative_axes, indexing="ij")
    return np.sqrt(sum(g * g for g in grids))


def radial_profile(spec: SpectrumEstimate, n_bins: int = 25) -> RadialProfile:
    """Mean power on ``n_bins`` equal-width annuli from 0 to the axis Nyquist.

    Modes beyond the axis Nyquist (the corners) go into a separate overflow bin.
    """
    if n_bins < 1:
        raise ValueError("need at least one bin")
    rho = _relative_radius(spec).ravel()
    pw = spec.power.ravel()
    inside = rho <= 1.0
    idx = np.minimum((rho[inside] * n_bins).astype(np.int64), n_bins - 1)
    counts = np.bincount(idx, minlength=n_bins)
    sums = np.bincount(idx, weights=pw[inside], minlength=n_bins)
    with np.errstate(invalid="ignore"):
        means = sums / counts
    over = ~inside
    n_over = int(np.count_nonzero(over))
    centers = (np.arange(n_bins) + 0.5) / n_bins
    return RadialProfile(centers, means, counts, float(pw[over].mean()) if n_over else float("nan"), n_over)


def write_profile_csv(profile: RadialProfile, path, scale: float = 1.0) -> None:
    """Columns ``bin_center, mean_power, n_modes``; ``scale`` converts relative radii to physical units."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["bin_center", "mean_power", "n_modes"])
        for c, m, n in zip(profile.centers, profile.mean_power, profile.n_modes):
            w.writerow([repr(float(c * scale)), repr(float(m)), int(n)])


def hann_taper(n: int) -> np.ndarray:
    """Raised cosine sampled at cell centers, strictly positive."""
    return 0.5 - 0.5 * np.cos(2 * math.pi * (np.arange(n) + 0.5) / n)


def windowed_local_spectrum(img: Image, center, window_side: int) -> SpectrumEstimate:
    """Periodogram of a Hann-tapered ``window_side`` square crop around ``center = (x1, x2)``.

    The taper is normalized to unit mean square, so white noise keeps its level.
    """
    g = img.grid
    ix = int(round((center[0] + g.a) / g.step_x - 0.5))
    iy = int(round((center[1] + g.b) / g.step_y - 0.5))
    lo_x, lo_y = ix - window_side // 2, iy - window_side // 2
    if window_side < 2 or lo_x < 0 or lo_y < 0 or lo_x + window_side > g.nx or lo_y + window_side > g.ny:
        raise ValueError("window does not fit inside the image")
    crop = img.values[lo_y:lo_y + window_side, lo_x:lo_x + window_side]
    t = hann_taper(window_side)
    w = np.outer(t, t)
    w /= math.sqrt(float(np.mean(w * w)))
    return periodogram(crop * w, (g.step_y, g.step_x))


@dataclass(frozen=True)
class Anisotropy:
    angle: float  # principal axis of the power, radians in (-pi/2, pi/2], measured from xi_1
    eccentricity: float  # largest / smallest second moment
    reliable: bool


def anisotropy_axis(spec: SpectrumEstimate, exclude_radius: float = 2.0, weight=None) -> Anisotropy:
    """Principal axis of the second-moment tensor ``sum power xi xi^T``.

    Works in mode-index units and skips modes within ``exclude_radius`` of zero.
    ``weight`` optionally multiplies the power (e.g. a band mask).
    """
    if spec.power.ndim != 2:
        raise ValueError("anisotropy needs a 2-D spectrum")
    ny, nx = spec.power.shape
    k2 = np.fft.fftshift(np.fft.fftfreq(ny)) * ny
    k1 = np.fft.fftshift(np.fft.fftfreq(nx)) * nx
    K2, K1 = np.meshgrid(k2, k1, indexing="ij")
    pw = spec.power * (np.hypot(K1, K2) > exclude_radius)
    if weight is not None:
        pw = pw * weight
    # moments in relative units so non-square windows are treated alike
    u1, u2 = K1 / (nx / 2), K2 / (ny / 2)
    T = np.array([[np.sum(pw * u1 * u1), np.sum(pw * u1 * u2)],
                  [np.sum(pw * u1 * u2), np.sum(pw * u2 * u2)]])
    vals, vecs = np.linalg.eigh(T)
    if vals[0] <= 0:
        return Anisotropy(0.0, float("inf"), True)
    v = vecs[:, 1]
    ang = math.atan2(v[1], v[0])
    if ang <= -math.pi / 2:
        ang += math.pi
    elif ang > math.pi / 2:
        ang -= math.pi
    ecc = float(vals[1] / vals[0])
    return Anisotropy(ang, ecc, ecc > 1.05)


def flatness_statistic(data, alpha=None) -> float:
    """``N^-n sum_k alpha(k/N) |f_hat(k)|^2`` with unitary DFT.

    ``alpha`` is a callable of the per-axis relative frequencies in ``[-1/2, 1/2)``
    (unshifted order), an array tabulated on the modes, or None for ``alpha = 1``.
    """
    arr = np.asarray(data, dtype=np.float64)
    pw = np.abs(np.fft.fftn(arr, norm="ortho")) ** 2
    if alpha is None:
        a = 1.0
    elif callable(alpha):
        a = alpha(*np.meshgrid(*(np.fft.fftfreq(n) for n in arr.shape), indexing="ij"))
    else:
        a = np.asarray(alpha, dtype=np.float64)
    return float(np.sum(a * pw)) / arr.size


def max_relative_deviation(data, sigma: float = 1.0, n_bins: int = 25) -> float:
    """Largest relative deviation of the binned periodogram from ``sigma**2``."""
    prof = radial_profile(periodogram(data), n_bins)
    return float(np.nanmax(np.abs(prof.mean_power / sigma**2 - 1.0)))


@dataclass(frozen=True, eq=False)
class AutocovarianceEstimate:
    probes: tuple
    cov: np.ndarray
    stderr: np.ndarray
    mu4: float
    n_trials: int


def power_autocovariance(dist: str = "gaussian", sigma: float = 1.0, N: int = 256, n_trials: int = 10_000,
                         seed: int = 0, probes=(0, 1, 2, -1)) -> AutocovarianceEstimate:
    """Monte-Carlo ``cov(|f_hat(k)|^2, |f_hat(m)|^2)`` for 1-D white noise on a probe set of modes."""
    probes = tuple(int(k) for k in probes)
    ks = np.asarray(probes) % N
    P = np.empty((n_trials, len(probes)))
    m4 = 0.0
    for t in range(n_trials):
        f = gen_white(N, dist, sigma, trial_seed(seed, t))
        F = np.fft.fft(f, norm="ortho")
        P[t] = np.abs(F[ks]) ** 2
        m4 += float(np.mean(f**4))
    D = P - P.mean(axis=0)
    prods = D[:, :, None] * D[:, None, :]
    cov = prods.sum(axis=0) / (n_trials - 1)
    se = prods.std(axis=0, ddof=1) / math.sqrt(n_trials)
    return AutocovarianceEstimate(probes, cov, se, m4 / n_trials, n_trials)
