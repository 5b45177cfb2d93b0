"""Time the compiled and pure-Python kernels on the same workloads.

Each backend runs in its own interpreter because the choice is fixed at import.

    python3 benchmarks/bench_backends.py [--n 128] [--repeat 3]
"""
import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
import tomonoise
from tomonoise.grid import GridSpec, default_parallel_spec
from tomonoise.phantoms import shepp_logan
from tomonoise.radon import backproject, forward

n, repeat = int(sys.argv[1]), int(sys.argv[2])
img = shepp_logan(n)
spec = default_parallel_spec(n)
out = {"backend": tomonoise.BACKEND}
for kernel in ("linear", "lanczos3"):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        sino = forward(img, spec, 2, kernel=kernel)
        best = min(best, time.perf_counter() - t)
    out[f"forward_{kernel}"] = best
best = float("inf")
for _ in range(repeat):
    t = time.perf_counter()
    rec = backproject(sino, GridSpec.square(n))
    best = min(best, time.perf_counter() - t)
out["backproject_linear"] = best
out["checksum"] = float(np.sum(sino.values)) + float(np.sum(rec.values))
print(json.dumps(out))
"""


def run(backend: str, n: int, repeat: int) -> dict:
    env = dict(os.environ)
    if backend == "python":
        env["TOMONOISE_BACKEND"] = "python"
    else:
        env.pop("TOMONOISE_BACKEND", None)
    res = subprocess.run([sys.executable, "-c", WORKER, str(n), str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=128)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    results = [run(b, args.n, args.repeat) for b in ("cython", "python")]
    if results[0]["backend"] != "cython":
        print("compiled extension not built; only the fallback is available")
    print(f"N = {args.n}, best of {args.repeat}")
    print(f"{'task':<22}" + "".join(f"{r['backend']:>12}" for r in results) + f"{'speedup':>10}")
    for key in ("forward_linear", "forward_lanczos3", "backproject_linear"):
        a, b = results[0][key], results[1][key]
        print(f"{key:<22}{a:>11.3f}s{b:>11.3f}s{b / a:>9.1f}x")
    rel = abs(results[0]["checksum"] - results[1]["checksum"]) / abs(results[1]["checksum"])
    print(f"checksum relative difference: {rel:.2e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
