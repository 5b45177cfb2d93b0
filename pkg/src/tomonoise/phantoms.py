"""Analytic test images evaluated at cell centers."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .grid import GridSpec, Image

# Modified Shepp-Logan (Toft): intensity, semi-axes, center, rotation in degrees
SHEPP_LOGAN = (
    (1.0, 0.69, 0.92, 0.0, 0.0, 0.0),
    (-0.8, 0.6624, 0.8740, 0.0, -0.0184, 0.0),
    (-0.2, 0.1100, 0.3100, 0.22, 0.0, -18.0),
    (-0.2, 0.1600, 0.4100, -0.22, 0.0, 18.0),
    (0.1, 0.2100, 0.2500, 0.0, 0.35, 0.0),
    (0.1, 0.0460, 0.0460, 0.0, 0.1, 0.0),
    (0.1, 0.0460, 0.0460, 0.0, -0.1, 0.0),
    (0.1, 0.0460, 0.0230, -0.08, -0.605, 0.0),
    (0.1, 0.0230, 0.0230, 0.0, -0.606, 0.0),
    (0.1, 0.0230, 0.0460, 0.06, -0.605, 0.0),
)

# three disks of different size and intensity, values in [0, 1]
THREE_DISKS = (((-0.35, 0.3), 0.35, 1.0), ((0.4, 0.25), 0.2, 0.6), ((0.05, -0.45), 0.3, 0.35))

KINDS = ("shepp", "disks", "gaussian", "planewave")


@dataclass(frozen=True)
class PhantomSpec:
    kind: str
    grid: GridSpec
    disks: tuple = THREE_DISKS
    width: float = 0.15
    amplitude: float = 1.0
    mode: tuple = (4, 0)
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown phantom {self.kind!r}; expected one of {KINDS}")
        if self.kind == "disks":
            for (cx, cy), r, amp in self.disks:
                if r <= 0 or not math.isfinite(amp):
                    raise ValueError("disk radius must be positive and amplitude finite")
                if abs(cx) + r > self.grid.a or abs(cy) + r > self.grid.b:
                    raise ValueError(f"disk at ({cx}, {cy}) radius {r} leaves the image")


def ellipse_values(X, Y, ellipses) -> np.ndarray:
    out = np.zeros_like(X, dtype=np.float64)
    for amp, ax, ay, cx, cy, deg in ellipses:
        th = math.radians(deg)
        c, s = math.cos(th), math.sin(th)
        xr = (X - cx) * c + (Y - cy) * s
        yr = -(X - cx) * s + (Y - cy) * c
        out += np.where((xr / ax) ** 2 + (yr / ay) ** 2 <= 1.0, amp, 0.0)
    return out


def shepp_logan_values(X, Y) -> np.ndarray:
    """Modified Shepp-Logan in [0, 1]."""
    # clip rounding residue from cancelling amplitudes
    return np.clip(ellipse_values(X, Y, SHEPP_LOGAN), 0.0, 1.0)


def disk_values(X, Y, disks) -> np.ndarray:
    out = np.zeros_like(X, dtype=np.float64)
    for (cx, cy), r, amp in disks:
        out += np.where((X - cx) ** 2 + (Y - cy) ** 2 <= r * r, amp, 0.0)
    return out


def evaluate(spec: PhantomSpec, X, Y) -> np.ndarray:
    if spec.kind == "shepp":
        return shepp_logan_values(X, Y)
    if spec.kind == "disks":
        return disk_values(X, Y, spec.disks)
    if spec.kind == "gaussian":
        return spec.amplitude * np.exp(-(X**2 + Y**2) / (2 * spec.width**2))
    kx, ky = spec.mode
    return spec.amplitude * np.cos(math.pi * (kx * X / spec.grid.a + ky * Y / spec.grid.b))


def render(spec: PhantomSpec) -> Image:
    X, Y = spec.grid.mesh()
    return Image(spec.grid, evaluate(spec, X, Y))


def shepp_logan(N: int, a: float = 1.0) -> Image:
    return render(PhantomSpec("shepp", GridSpec.square(N, a)))


def three_disks(N: int, a: float = 1.0) -> Image:
    return render(PhantomSpec("disks", GridSpec.square(N, a)))


def gaussian_bump(N: int, width: float = 0.15, amplitude: float = 1.0, a: float = 1.0) -> Image:
    return render(PhantomSpec("gaussian", GridSpec.square(N, a), width=width, amplitude=amplitude))


def gaussian_radon(p, width: float = 0.15, amplitude: float = 1.0):
    """Exact line integrals of the Gaussian bump: ``sqrt(2 pi) w exp(-p^2 / 2w^2)``."""
    p = np.asarray(p, dtype=np.float64)
    return amplitude * math.sqrt(2 * math.pi) * width * np.exp(-(p**2) / (2 * width**2))


def disk_radon(phi, p, center=(0.0, 0.0), radius: float = 0.5, amplitude: float = 1.0):
    """Exact chord-length line integrals of a disk indicator."""
    phi = np.asarray(phi, dtype=np.float64)
    p = np.asarray(p, dtype=np.float64)
    q = p - (center[0] * np.cos(phi) + center[1] * np.sin(phi))
    return amplitude * 2.0 * np.sqrt(np.maximum(radius**2 - q**2, 0.0))


def ellipse_radon(phi, p, ellipses) -> np.ndarray:
    """Exact line integrals of a sum of constant-intensity ellipses."""
    phi = np.asarray(phi, dtype=np.float64)
    p = np.asarray(p, dtype=np.float64)
    out = np.zeros(np.broadcast_shapes(phi.shape, p.shape))
    for amp, ax, ay, cx, cy, deg in ellipses:
        th = math.radians(deg)
        pr = p - (cx * np.cos(phi) + cy * np.sin(phi))
        a2 = (ax * np.cos(phi - th)) ** 2 + (ay * np.sin(phi - th)) ** 2
        out += amp * np.where(pr**2 < a2, 2 * ax * ay * np.sqrt(np.maximum(a2 - pr**2, 0.0)) / a2, 0.0)
    return out

