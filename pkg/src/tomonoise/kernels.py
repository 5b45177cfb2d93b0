"""Interpolation kernels in sample units.

Each kernel is even and cardinal (value 1 at 0, 0 at the other integers).
Fourier profiles use the convention ``khat(xi) = int k(x) exp(-i x xi) dx``,
so a kernel that integrates to one has ``khat(0) = 1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import optimize

FAMILIES = ("sinc", "lanczos", "linear", "nearest", "catmull_rom")

# Gauss-Legendre nodes per panel; panels never longer than one sample unit
_GL_NODES = 24


@dataclass(frozen=True)
class Kernel:
    family: str
    order: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown kernel family {self.family!r}")
        if self.family == "lanczos" and self.order < 1:
            raise ValueError("Lanczos order must be a positive integer")

    @property
    def name(self) -> str:
        return f"lanczos{self.order}" if self.family == "lanczos" else self.family

    @property
    def support_radius(self) -> float:
        return {
            "sinc": math.inf,
            "lanczos": float(self.order),
            "linear": 1.0,
            "nearest": 0.5,
            "catmull_rom": 2.0,
        }[self.family]

    @property
    def is_finite(self) -> bool:
        return self.family != "sinc"

    def __call__(self, x):
        return evaluate(self, x)


SINC = Kernel("sinc")
LANCZOS3 = Kernel("lanczos", 3)
LINEAR = Kernel("linear")
NEAREST = Kernel("nearest")
CATMULL_ROM = Kernel("catmull_rom")


def get_kernel(name) -> Kernel:
    """Look a kernel up by name: ``sinc``, ``lanczosK``, ``linear``, ``nearest``, ``catmull_rom``."""
    if isinstance(name, Kernel):
        return name
    key = name.lower().replace("-", "_")
    if key.startswith("lanczos"):
        return Kernel("lanczos", int(key[7:] or 3))
    if key in ("catmullrom", "cubic"):
        key = "catmull_rom"
    return Kernel(key)


def evaluate(kernel: Kernel, x):
    """Closed-form kernel values; zero outside the support."""
    x = np.asarray(x, dtype=np.float64)
    ax = np.abs(x)
    fam = kernel.family
    if fam == "sinc":
        return np.sinc(x)
    if fam == "lanczos":
        k = kernel.order
        return np.where(ax < k, np.sinc(x) * np.sinc(x / k), 0.0)
    if fam == "linear":
        return np.maximum(1.0 - ax, 0.0)
    if fam == "nearest":
        return np.where(ax < 0.5, 1.0, np.where(ax == 0.5, 0.5, 0.0))
    # Catmull-Rom, Keys cubic with a = -1/2
    inner = (1.5 * ax - 2.5) * ax * ax + 1.0
    outer = ((-0.5 * ax + 2.5) * ax - 4.0) * ax + 2.0
    return np.where(ax <= 1.0, inner, np.where(ax < 2.0, outer, 0.0))


def _panels(radius: float, xi_max: float):
    """Panel edges on [0, radius]: unit panels, subdivided for oscillatory weights."""
    sub = max(1, int(math.ceil(xi_max / math.pi)))
    edges = np.linspace(0.0, radius, int(math.ceil(radius)) * sub + 1)
    nodes, weights = np.polynomial.legendre.leggauss(_GL_NODES)
    lo, hi = edges[:-1, None], edges[1:, None]
    x = 0.5 * (hi - lo) * nodes[None, :] + 0.5 * (hi + lo)
    w = 0.5 * (hi - lo) * weights[None, :]
    return x.ravel(), w.ravel()


def fourier_profile(kernel: Kernel, xi):
    """Kernel Fourier transform at angular frequency ``xi`` (radians per sample)."""
    xi = np.asarray(xi, dtype=np.float64)
    axi = np.abs(xi)
    fam = kernel.family
    if fam == "sinc":
        return np.where(axi <= math.pi, 1.0, 0.0)
    if fam == "linear":
        return np.sinc(xi / (2 * math.pi)) ** 2
    if fam == "nearest":
        return np.sinc(xi / (2 * math.pi))
    xmax = float(np.max(axi)) if axi.size else 0.0
    x, w = _panels(kernel.support_radius, xmax)
    vals = evaluate(kernel, x) * w
    flat = axi.ravel()
    out = np.empty(flat.size)
    block = max(1, (1 << 22) // max(x.size, 1))
    for i in range(0, flat.size, block):
        out[i:i + block] = 2.0 * np.cos(np.outer(flat[i:i + block], x)) @ vals
    return out.reshape(axi.shape)


@lru_cache(maxsize=None)
def l2_norm_sq(kernel: Kernel) -> float:
    """``int k(x)^2 dx`` over the real line."""
    fam = kernel.family
    if fam in ("sinc", "nearest"):
        return 1.0
    if fam == "linear":
        return 2.0 / 3.0
    x, w = _panels(kernel.support_radius, math.pi)
    return float(2.0 * np.sum(evaluate(kernel, x) ** 2 * w))


@lru_cache(maxsize=None)
def fourier_sup(kernel: Kernel) -> float:
    """``sup |khat|``, the constant in the sample-norm bound."""
    if kernel.family in ("sinc", "linear", "nearest"):
        return 1.0
    xi = np.linspace(0.0, 8 * math.pi, 2001)
    vals = np.abs(fourier_profile(kernel, xi))
    i = int(np.argmax(vals))
    lo, hi = xi[max(i - 1, 0)], xi[min(i + 1, xi.size - 1)]
    if hi == lo:
        return float(vals[i])
    res = optimize.minimize_scalar(
        lambda t: -abs(float(fourier_profile(kernel, t))), bounds=(lo, hi), method="bounded",
        options={"xatol": 1e-12},
    )
    return max(float(vals[i]), -float(res.fun))
