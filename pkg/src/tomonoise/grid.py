"""Grids, images, sinograms, discrete norms and empirical statistics.

All samples are cell-centered: an axis of ``n`` samples over ``[-a, a]`` has
step ``2a/n`` and its first sample at ``-a + a/n``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np


class Geometry(str, Enum):
    PARALLEL = "Parallel"
    FAN = "Fan"


def cell_centers(n: int, lo: float, hi: float) -> np.ndarray:
    step = (hi - lo) / n
    return lo + (np.arange(n) + 0.5) * step


@dataclass(frozen=True)
class GridSpec:
    nx: int
    ny: int
    half_width_a: float = 1.0
    half_height_b: float = 1.0

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise ValueError(f"grid needs at least 2x2 samples, got {self.nx}x{self.ny}")
        if not (self.half_width_a > 0 and self.half_height_b > 0):
            raise ValueError("grid extents must be positive")

    @classmethod
    def square(cls, n: int, a: float = 1.0) -> "GridSpec":
        return cls(n, n, a, a)

    @property
    def a(self) -> float:
        return self.half_width_a

    @property
    def b(self) -> float:
        return self.half_height_b

    @property
    def shape(self) -> tuple[int, int]:
        return (self.ny, self.nx)

    @property
    def step_x(self) -> float:
        return 2.0 * self.a / self.nx

    @property
    def step_y(self) -> float:
        return 2.0 * self.b / self.ny

    @property
    def cell_area(self) -> float:
        return self.step_x * self.step_y

    def x_coords(self) -> np.ndarray:
        return cell_centers(self.nx, -self.a, self.a)

    def y_coords(self) -> np.ndarray:
        return cell_centers(self.ny, -self.b, self.b)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Coordinate arrays ``(X, Y)`` of shape ``(ny, nx)``; row index runs along y."""
        return np.meshgrid(self.x_coords(), self.y_coords())

    def band_limits(self) -> tuple[float, float]:
        """Per-axis Nyquist band limits ``(pi*nx/2a, pi*ny/2b)``."""
        return math.pi * self.nx / (2 * self.a), math.pi * self.ny / (2 * self.b)

    def default_radius(self) -> float:
        """Radius of the disk circumscribing the image rectangle."""
        return math.hypot(self.a, self.b)


@dataclass(frozen=True, eq=False)
class Image:
    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        v = np.ascontiguousarray(self.values, dtype=np.float64)
        if v.shape != self.grid.shape:
            raise ValueError(f"values shape {v.shape} does not match grid {self.grid.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("image values must be finite")
        object.__setattr__(self, "values", v)

    def with_values(self, values: np.ndarray) -> "Image":
        return Image(self.grid, values)


@dataclass(frozen=True)
class SinogramSpec:
    geometry: Geometry
    n_angle: int
    n_offset: int
    radius_R: float = math.sqrt(2.0)
    half_circle: bool = False

    def __post_init__(self):
        object.__setattr__(self, "geometry", Geometry(self.geometry))
        if self.n_angle < 2 or self.n_offset < 2:
            raise ValueError("sinogram needs at least 2 angles and 2 offsets")
        if not self.radius_R > 0:
            raise ValueError("radius must be positive")
        if self.half_circle and self.geometry is not Geometry.PARALLEL:
            raise ValueError("half-circle sampling is only defined for parallel geometry")

    @classmethod
    def parallel(cls, n_angle: int, n_offset: int, R: float = math.sqrt(2.0), half_circle: bool = False):
        return cls(Geometry.PARALLEL, n_angle, n_offset, R, half_circle)

    @classmethod
    def fan(cls, n_alpha: int, n_beta: int, R: float = math.sqrt(2.0)):
        return cls(Geometry.FAN, n_alpha, n_beta, R)

    @property
    def R(self) -> float:
        return self.radius_R

    @property
    def angle_span(self) -> float:
        return math.pi if self.half_circle else 2.0 * math.pi

    @property
    def angle_step(self) -> float:
        return self.angle_span / self.n_angle

    @property
    def offset_range(self) -> tuple[float, float]:
        if self.geometry is Geometry.FAN:
            return -math.pi / 2, math.pi / 2
        return -self.R, self.R

    @property
    def offset_step(self) -> float:
        lo, hi = self.offset_range
        return (hi - lo) / self.n_offset

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_angle, self.n_offset)


@dataclass(frozen=True, eq=False)
class Sinogram:
    spec: SinogramSpec
    values: np.ndarray

    def __post_init__(self):
        v = np.ascontiguousarray(self.values, dtype=np.float64)
        if v.shape != self.spec.shape:
            raise ValueError(f"values shape {v.shape} does not match spec {self.spec.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("sinogram values must be finite")
        object.__setattr__(self, "values", v)

    def with_values(self, values: np.ndarray) -> "Sinogram":
        return Sinogram(self.spec, values)


def sinogram_grid(spec: SinogramSpec) -> tuple[np.ndarray, np.ndarray]:
    """Cell-centered ``(angles, offsets)`` sample coordinates."""
    lo_ang = 0.0 if spec.half_circle else -math.pi
    angles = cell_centers(spec.n_angle, lo_ang, lo_ang + spec.angle_span)
    lo, hi = spec.offset_range
    return angles, cell_centers(spec.n_offset, lo, hi)


def default_parallel_spec(N: int, a: float = 1.0, oversample: int = 1) -> SinogramSpec:
    """Sharp sampling ``N_phi = 2*pi*N`` (rounded up to even), ``N_p = 2N``, times ``oversample``."""
    n_phi = int(math.ceil(2 * math.pi * N))
    n_phi += n_phi % 2
    return SinogramSpec.parallel(oversample * n_phi, oversample * 2 * N, math.sqrt(2.0) * a)


@dataclass(frozen=True)
class Stats:
    mean: float
    var: float
    std: float
    l2_norm: float


def stats(values, zero_mean: bool = False) -> Stats:
    """Empirical statistics with double-precision accumulation.

    With ``zero_mean=True`` the variance is the mean of squares, the convention
    used for zero-mean noise fields.
    """
    v = np.asarray(values, dtype=np.float64).ravel()
    if v.size == 0:
        raise ValueError("stats of an empty collection")
    mean = float(np.mean(v))
    msq = float(np.mean(v * v))
    var = msq if zero_mean else max(msq - mean * mean, 0.0)
    return Stats(mean=mean, var=var, std=math.sqrt(var), l2_norm=float(np.sqrt(np.sum(v * v))))


def l2_norm(img: Image) -> float:
    """Discrete L2 norm ``sqrt(4ab/(nx*ny) * sum f_ij^2)``."""
    g = img.grid
    return math.sqrt(4 * g.a * g.b / (g.nx * g.ny) * float(np.sum(img.values**2)))


def sinogram_l2_norm(sino: Sinogram) -> float:
    """L2 norm over the sampled (angle, offset) domain."""
    s = sino.spec
    return math.sqrt(s.angle_step * s.offset_step * float(np.sum(sino.values**2)))


def std0(values) -> float:
    """Root mean square, i.e. STD of a zero-mean field."""
    v = np.asarray(values, dtype=np.float64)
    return math.sqrt(float(np.mean(v * v)))


# --- I/O -------------------------------------------------------------------

def write_image_csv(img: Image, path) -> None:
    g = img.grid
    with open(path, "w") as fh:
        fh.write("nx,ny,a,b\n")
        fh.write(f"{g.nx},{g.ny},{g.a!r},{g.b!r}\n")
        np.savetxt(fh, img.values, delimiter=",", fmt="%.17g")


def read_image_csv(path) -> Image:
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "nx,ny,a,b":
            raise ValueError(f"{path}: not an image CSV (header {header!r})")
        nx, ny, a, b = fh.readline().strip().split(",")
        values = np.loadtxt(fh, delimiter=",", ndmin=2)
    return Image(GridSpec(int(nx), int(ny), float(a), float(b)), values)


def write_sinogram_csv(sino: Sinogram, path) -> None:
    s = sino.spec
    with open(path, "w") as fh:
        fh.write(f"geometry,{s.geometry.value}{',half' if s.half_circle else ''}\n")
        fh.write(f"n_angle,{s.n_angle}\n")
        fh.write(f"n_offset,{s.n_offset}\n")
        fh.write(f"R,{s.R!r}\n")
        np.savetxt(fh, sino.values, delimiter=",", fmt="%.17g")


def read_sinogram_csv(path) -> Sinogram:
    with open(path) as fh:
        head = [fh.readline().strip().split(",") for _ in range(4)]
        keys = [h[0] for h in head]
        if keys != ["geometry", "n_angle", "n_offset", "R"]:
            raise ValueError(f"{path}: not a sinogram CSV (header keys {keys})")
        values = np.loadtxt(fh, delimiter=",", ndmin=2)
    spec = SinogramSpec(
        Geometry(head[0][1]), int(head[1][1]), int(head[2][1]), float(head[3][1]),
        half_circle=len(head[0]) > 2 and head[0][2] == "half",
    )
    return Sinogram(spec, values)


def write_pgm(values: np.ndarray, path, flip: bool = True) -> None:
    """Binary P5 greymap after affine rescale to [0, 255].

    Rows are flipped by default so that +y points up in viewers.
    """
    v = np.asarray(values, dtype=np.float64)
    lo, hi = float(v.min()), float(v.max())
    scaled = np.zeros_like(v) if hi == lo else (v - lo) / (hi - lo) * 255.0
    data = np.clip(np.rint(scaled), 0, 255).astype(np.uint8)
    if flip:
        data = data[::-1]
    h, w = data.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(np.ascontiguousarray(data).tobytes())


def read_pgm(path) -> np.ndarray:
    raw = Path(path).read_bytes()
    tokens = []
    pos = 0
    while len(tokens) < 4:
        while raw[pos:pos + 1].isspace():
            pos += 1
        start = pos
        while not raw[pos:pos + 1].isspace():
            pos += 1
        tokens.append(raw[start:pos].decode("ascii"))
    if tokens[0] != "P5":
        raise ValueError("not a binary PGM")
    w, h = int(tokens[1]), int(tokens[2])
    data = np.frombuffer(raw[pos + 1:pos + 1 + w * h], dtype=np.uint8)
    return data.reshape(h, w)
