"""Seeded noise generators: additive white, moving-average correlated, multiplicative,
Beer-Lambert CT and Poisson counting noise.

Every generator is a pure function of its parameters and a 64-bit seed. Trial ``t``
of a run seeded with ``seed`` uses ``trial_seed(seed, t)``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .grid import Sinogram

RNG_ID = "numpy.PCG64"
KINDS = ("white", "correlated", "multiplicative", "ct", "poisson")
DISTS = ("gaussian", "uniform")
_MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def trial_seed(seed: int, trial: int) -> int:
    """Stream seed for one trial: ``splitmix64(seed XOR trial)``."""
    return splitmix64((int(seed) ^ int(trial)) & _MASK64)


def rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed) & _MASK64))


@dataclass(frozen=True)
class NoiseSpec:
    kind: str
    sigma: float = 1.0
    dist: str = "gaussian"
    taps: tuple = (1.0,)
    scale: float = 80.0
    seed: int = 0
    floor: float = 1e-6
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown noise kind {self.kind!r}; expected one of {KINDS}")
        if self.dist not in DISTS:
            raise ValueError(f"unknown distribution {self.dist!r}")
        if self.kind != "poisson" and not self.sigma >= 0:
            raise ValueError("sigma must be nonnegative")
        if self.kind in ("white", "correlated") and not self.sigma > 0:
            raise ValueError("sigma must be positive")
        if self.kind == "poisson" and not self.scale > 0:
            raise ValueError("Poisson scale must be positive")
        if self.kind == "correlated" and (len(self.taps) == 0 or not np.all(np.isfinite(self.taps))):
            raise ValueError("correlated noise needs a nonempty finite tap list")

    def to_record(self) -> dict:
        rec = asdict(self)
        rec["taps"] = list(self.taps)
        rec["rng"] = RNG_ID
        return rec


def gen_white(shape, dist: str = "gaussian", sigma: float = 1.0, seed: int = 0) -> np.ndarray:
    """i.i.d. zero-mean draws with variance ``sigma**2``; uniform is on ``[-sqrt3 sigma, sqrt3 sigma]``."""
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    g = rng(seed)
    if dist == "gaussian":
        return sigma * g.standard_normal(shape)
    if dist == "uniform":
        h = math.sqrt(3.0) * sigma
        return g.uniform(-h, h, shape)
    raise ValueError(f"unknown distribution {dist!r}")


def gen_correlated(shape, taps, sigma_w: float = 1.0, seed: int = 0, dist: str = "gaussian") -> np.ndarray:
    """Moving average ``f_k = sum_j c(j) w_{k+j}`` along the last axis over white ``w``."""
    c = np.asarray(taps, dtype=np.float64)
    if c.size == 0:
        raise ValueError("taps must be nonempty")
    shape = tuple(np.atleast_1d(shape))
    n = shape[-1]
    w = gen_white(shape[:-1] + (n + c.size - 1,), dist, sigma_w, seed)
    out = np.zeros(shape)
    for j, cj in enumerate(c):
        out += cj * w[..., j:j + n]
    return out


def implied_autocovariance(taps, sigma_w: float = 1.0) -> dict[int, float]:
    """``beta(m) = sigma_w^2 sum_j c(j) c(j+m)`` for all lags with nonzero support."""
    c = np.asarray(taps, dtype=np.float64)
    full = np.correlate(c, c, mode="full") * sigma_w**2
    lags = np.arange(-(c.size - 1), c.size)
    return {int(m): float(v) for m, v in zip(lags, full)}


def implied_spectrum(taps, xi, sigma_w: float = 1.0):
    """``beta_check(xi) = sum_m beta(m) exp(i m xi)`` (real and even), ``xi`` in radians per sample."""
    xi = np.asarray(xi, dtype=np.float64)
    out = np.zeros_like(xi)
    for m, b in implied_autocovariance(taps, sigma_w).items():
        out += b * np.cos(m * xi)
    return out


def apply_multiplicative(sino: Sinogram, sigma: float, seed: int = 0) -> Sinogram:
    """``(1 + w) g`` with ``w`` white Gaussian of standard deviation ``sigma``."""
    if sigma == 0:
        return sino
    w = gen_white(sino.values.shape, "gaussian", sigma, seed)
    return sino.with_values((1.0 + w) * sino.values)


def apply_ct(sino: Sinogram, sigma: float, seed: int = 0, floor: float = 1e-6) -> tuple[Sinogram, int]:
    """Beer-Lambert intensity noise: ``-log(exp(-g) + n)`` with Gaussian ``n``.

    Intensities at or below ``floor`` are clamped to it; the number of clamped
    samples is returned alongside the sinogram.
    """
    if sigma == 0:
        return sino, 0
    n = gen_white(sino.values.shape, "gaussian", sigma, seed)
    inten = np.exp(-sino.values) + n
    low = inten <= floor
    inten[low] = floor
    return sino.with_values(-np.log(inten)), int(np.count_nonzero(low))


def apply_poisson(sino: Sinogram, scale: float, seed: int = 0) -> Sinogram:
    """``Poisson(scale * g) / scale`` samplewise."""
    if not scale > 0:
        raise ValueError("Poisson scale must be positive")
    if np.any(sino.values < 0):
        raise ValueError("Poisson noise needs a nonnegative sinogram")
    counts = rng(seed).poisson(scale * sino.values)
    return sino.with_values(counts / scale)


def apply_noise(sino: Sinogram, spec: NoiseSpec, seed: int | None = None):
    """Dispatch on ``spec.kind``. Returns ``(noisy, clamp_count)``."""
    seed = spec.seed if seed is None else seed
    if spec.kind == "white":
        return sino.with_values(sino.values + gen_white(sino.values.shape, spec.dist, spec.sigma, seed)), 0
    if spec.kind == "correlated":
        noise = gen_correlated(sino.values.shape, spec.taps, spec.sigma, seed, spec.dist)
        return sino.with_values(sino.values + noise), 0
    if spec.kind == "multiplicative":
        return apply_multiplicative(sino, spec.sigma, seed), 0
    if spec.kind == "ct":
        return apply_ct(sino, spec.sigma, seed, spec.floor)
    return apply_poisson(sino, spec.scale, seed), 0
