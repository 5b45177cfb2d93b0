"""Noise propagation through discrete parallel and fan-beam Radon inversions."""
from ._backend import BACKEND
from .fan import default_fan_spec, fan_fbp, fan_forward, fan_to_parallel, position_factor
from .grid import GridSpec, Image, Sinogram, SinogramSpec, default_parallel_spec, l2_norm, stats
from .noise import NoiseSpec, apply_noise, gen_correlated, gen_white, trial_seed
from .phantoms import PhantomSpec, render
from .radon import COSINE, HANN, RAMP, FilterProfile, backproject, fbp_invert, forward, ramp_filter

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "COSINE", "HANN", "RAMP", "FilterProfile", "GridSpec", "Image", "NoiseSpec", "PhantomSpec",
    "Sinogram", "SinogramSpec", "apply_noise", "backproject", "default_fan_spec", "default_parallel_spec",
    "fan_fbp", "fan_forward", "fan_to_parallel", "fbp_invert", "forward", "gen_correlated", "gen_white",
    "l2_norm", "position_factor", "ramp_filter", "render", "stats", "trial_seed",
]
