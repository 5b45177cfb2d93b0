"""Command line entry point ``radon``."""
from __future__ import annotations

import argparse
import inspect
import math
import os
import sys

from . import experiments as ex
from .fan import default_fan_spec, fan_fbp, fan_forward
from .grid import (GridSpec, SinogramSpec, default_parallel_spec, read_image_csv, read_sinogram_csv,
                   write_image_csv, write_pgm, write_sinogram_csv)
from .phantoms import PhantomSpec, render
from .radon import fbp_invert, forward
from .spectral import periodogram, radial_profile, write_profile_csv

EXPERIMENT_COMMANDS = {
    "table1": ex.exp_table1,
    "filtered": ex.exp_filtered_ratio,
    "profile": ex.exp_radial_profile,
    "fan-aniso": ex.exp_fan_anisotropy,
    "pct-noise": ex.exp_percentage_noise,
    "nonadditive": ex.exp_nonadditive,
    "flatness": ex.exp_flatness,
    "autocov": ex.exp_autocovariance,
    "interp-spectrum": ex.exp_interpolated_spectrum,
}


def read_config(path) -> tuple[dict, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment. Returns (values, raw text)."""
    with open(path) as fh:
        text = fh.read()
    out = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{n}: expected 'key = value'")
        k, v = (s.strip() for s in line.split("=", 1))
        out[k.replace("-", "_")] = v
    return out, text


def _coerce(value: str, default):
    if "," in value or isinstance(default, tuple):
        parts = [p for p in value.replace("(", "").replace(")", "").split(",") if p.strip()]
        return tuple(float(p) if "." in p or "e" in p.lower() else int(p) for p in parts)
    if value.lower() == "none":
        return None
    if isinstance(default, bool):
        return value.lower() in ("1", "true", "yes", "on")
    if isinstance(default, int):
        return int(value)
    if isinstance(default, float) or default is None:
        try:
            return float(value) if default is not None or "." in value or "e" in value.lower() else int(value)
        except ValueError:
            return value
    return value


def _experiment_kwargs(fn, params: dict, args) -> dict:
    sig = inspect.signature(fn)
    kw = {}
    for key, val in params.items():
        if key not in sig.parameters:
            raise SystemExit(f"unknown parameter {key!r} for {fn.__name__}")
        kw[key] = _coerce(val, sig.parameters[key].default)
    if args.seed is not None and "seed" in sig.parameters:
        kw["seed"] = args.seed
    if args.trials is not None:
        for name in ("n_trials", "n_seeds"):
            if name in sig.parameters:
                kw[name] = args.trials
                break
    return kw


def _parse_params(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise SystemExit(f"parameter {item!r} must look like key=value")
        k, v = item.split("=", 1)
        out[k.strip().replace("-", "_")] = v.strip()
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="base 64-bit seed")
    common.add_argument("--trials", type=int, default=None, help="number of Monte-Carlo trials")
    common.add_argument("--out-dir", default="out", help="directory for reports and images")
    common.add_argument("--format", choices=("csv", "pgm"), default="csv", help="image output format")
    common.add_argument("--config", help="plain 'key = value' parameter file")

    p = argparse.ArgumentParser(prog="radon", description="Radon transform noise laboratory")
    sub = p.add_subparsers(dest="command", required=True)
    for name, fn in EXPERIMENT_COMMANDS.items():
        sp = sub.add_parser(name, parents=[common], help=(fn.__doc__ or name).strip().splitlines()[0])
        sp.add_argument("params", nargs="*", metavar="key=value", help="experiment parameters")

    sp = sub.add_parser("phantom", parents=[common], help="render a phantom image")
    sp.add_argument("--kind", default="shepp", choices=("shepp", "disks", "gaussian", "planewave"))
    sp.add_argument("--n", type=int, default=300)
    sp.add_argument("--out", required=True)

    for name in ("forward", "fan-forward"):
        sp = sub.add_parser(name, parents=[common], help=f"{name.replace('-', ' ')} projection of an image")
        src = sp.add_mutually_exclusive_group(required=True)
        src.add_argument("--phantom", choices=("shepp", "disks", "gaussian", "planewave"))
        src.add_argument("--input", "--in", dest="input", help="image CSV")
        sp.add_argument("--n", type=int, default=300, help="image size for --phantom")
        sp.add_argument("--m", type=int, default=2, help="line-integration oversampling")
        if name == "forward":
            sp.add_argument("--nphi", type=int)
            sp.add_argument("--np", type=int, dest="n_p")
        else:
            sp.add_argument("--nalpha", type=int)
            sp.add_argument("--nbeta", type=int)
        sp.add_argument("--out", required=True)

    for name in ("invert", "fan-invert"):
        sp = sub.add_parser(name, parents=[common], help="filtered backprojection of a sinogram CSV")
        sp.add_argument("--input", "--in", dest="input", required=True)
        sp.add_argument("--n", type=int, required=True, help="output image size")
        sp.add_argument("--filter", default="ramp", choices=("ramp", "hann", "cosine"))
        sp.add_argument("--out", required=True)

    sp = sub.add_parser("spectrum", parents=[common], help="radial power profile of an image CSV")
    sp.add_argument("--input", "--in", dest="input", required=True)
    sp.add_argument("--bins", type=int, default=25)
    sp.add_argument("--out", required=True)
    return p


def _write_image(img, path, fmt):
    if fmt == "pgm" or path.endswith(".pgm"):
        write_pgm(img.values, path)
    else:
        write_image_csv(img, path)


def _run_experiment(args) -> int:
    fn = EXPERIMENT_COMMANDS[args.command]
    params, raw = ({}, None)
    if args.config:
        params, raw = read_config(args.config)
    params.update(_parse_params(args.params))
    kw = _experiment_kwargs(fn, params, args)
    rep = fn(**kw)
    if raw is not None:
        rep.config["config_file"] = raw
    paths = rep.write(args.out_dir, args.format)
    for c in rep.checks:
        print(f"{'PASS' if c.passed else 'FAIL'} {rep.experiment}.{c.name}: {c.value:.6g} (target {c.target:.6g})")
    print(f"report: {paths[0]}")
    return 0 if rep.passed else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command in EXPERIMENT_COMMANDS:
        return _run_experiment(args)
    if args.out and os.path.dirname(args.out):
        os.makedirs(os.path.dirname(args.out), exist_ok=True)
    if args.command == "phantom":
        _write_image(render(PhantomSpec(args.kind, GridSpec.square(args.n))), args.out, args.format)
        return 0
    if args.command in ("forward", "fan-forward"):
        img = (render(PhantomSpec(args.phantom, GridSpec.square(args.n))) if args.phantom
               else read_image_csv(args.input))
        N = img.grid.nx
        if args.command == "forward":
            base = default_parallel_spec(N, img.grid.a)
            spec = SinogramSpec.parallel(args.nphi or base.n_angle, args.n_p or base.n_offset, base.R)
            sino = forward(img, spec, args.m)
        else:
            base = default_fan_spec(N, img.grid.a)
            spec = SinogramSpec.fan(args.nalpha or base.n_angle, args.nbeta or base.n_offset, base.R)
            sino = fan_forward(img, spec, args.m)
        write_sinogram_csv(sino, args.out)
        return 0
    if args.command in ("invert", "fan-invert"):
        sino = read_sinogram_csv(args.input)
        a = sino.spec.R / math.sqrt(2.0)
        grid = GridSpec.square(args.n, a)
        img = fbp_invert(sino, grid, args.filter) if args.command == "invert" else fan_fbp(sino, grid, args.filter)
        _write_image(img, args.out, args.format)
        return 0
    # spectrum
    img = read_image_csv(args.input)
    write_profile_csv(radial_profile(periodogram(img), args.bins), args.out, img.grid.band_limits()[0])
    return 0


if __name__ == "__main__":
    sys.exit(main())
