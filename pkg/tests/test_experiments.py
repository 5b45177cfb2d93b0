import json
import math
import os

import numpy as np
import pytest

from tomonoise import experiments as ex
from tomonoise import theory
from tomonoise.grid import GridSpec, Image


def _same(a, b):
    assert a.to_json() == b.to_json()


def test_check_tolerance():
    assert ex.Check("x", 1.02, 1.0, 0.03).passed
    assert not ex.Check("x", 1.04, 1.0, 0.03).passed
    assert ex.Check("x", 0.5, 0.0, 0.6, relative=False).passed


def test_spread():
    s = ex.spread([1.0, 2.0, 3.0])
    assert s["mean"] == 2.0
    assert s["half_range_rel"] == pytest.approx(0.5)
    assert s["std_rel"] == pytest.approx(0.5)
    assert s["n"] == 3


def test_table1_small_and_rerun():
    rep = ex.exp_table1(N=32, m=2, n_trials=2, seed=7)
    assert rep.aggregate["mean"] == pytest.approx(theory.DISCRETE_COEFFICIENT, rel=0.1)
    assert len(rep.trials) == 2
    _same(rep, ex.rerun(rep))


def test_table1_seed_changes_output():
    a = ex.exp_table1(N=24, m=1, n_trials=1, seed=1)
    b = ex.exp_table1(N=24, m=1, n_trials=1, seed=2)
    assert a.trials[0]["ratio"] != b.trials[0]["ratio"]


def test_filtered_small_and_rerun():
    rep = ex.exp_filtered_ratio(N=40, profile="hann", n_trials=2)
    assert rep.aggregate["mean"] == pytest.approx(theory.predict_filtered_std_ratio("hann"), rel=0.1)
    _same(rep, ex.rerun(rep))


def test_profile_small():
    rep = ex.exp_radial_profile(N=48, profile="hann", n_trials=2)
    assert rep.aggregate["correlation"] > 0.95
    _same(rep, ex.rerun(rep))


def test_fan_small_and_rerun():
    rep = ex.exp_fan_anisotropy(N=64, window=12, n_trials=2, corner=(-0.6, 0.6))
    assert set(rep.aggregate) >= {"oval_axis_deg", "density_ratio", "eccentricity"}
    _same(rep, ex.rerun(rep))


def test_pct_noise_linear_in_noise_level():
    a = ex.exp_percentage_noise(noise_pct=10.0, N=64, seed=3)
    b = ex.exp_percentage_noise(noise_pct=20.0, N=64, seed=3)
    assert b.aggregate["output_noise_pct"] == pytest.approx(2 * a.aggregate["output_noise_pct"], rel=0.02)
    assert a.aggregate["measured_K"] == pytest.approx(b.aggregate["measured_K"], rel=0.02)
    _same(a, ex.rerun(a))


def test_pct_noise_zero():
    rep = ex.exp_percentage_noise(noise_pct=0.0, N=32)
    assert rep.aggregate["output_noise_pct"] == 0.0
    assert rep.passed


def test_nonadditive_zero_phantom():
    rep = ex.exp_nonadditive(phantom="disks", N=32, n_angle=200, n_trials=2)
    assert rep.aggregate["noise_std"] > 0
    z = ex.exp_nonadditive(phantom="planewave", N=32, n_angle=200, n_trials=1, sigma=0.0)
    assert z.aggregate["noise_std"] == 0.0


def test_nonadditive_poisson_large_scale():
    rep = ex.exp_nonadditive(phantom="shepp", model="poisson", scale=1e6, N=48, n_angle=300, n_trials=2)
    assert rep.aggregate["relative_error"] < 0.01
    low = ex.exp_nonadditive(phantom="shepp", model="poisson", scale=1e2, N=48, n_angle=300, n_trials=2)
    assert low.aggregate["relative_error"] > rep.aggregate["relative_error"]


def test_nonadditive_ct_clamps_reported():
    rep = ex.exp_nonadditive(phantom="shepp", model="ct", sigma=1.5, N=32, n_angle=200, n_trials=1)
    assert rep.aggregate["clamped"] > 0
    assert rep.trials[0]["clamped"] == rep.aggregate["clamped"]
    quiet = ex.exp_nonadditive(phantom="shepp", model="ct", sigma=0.01, N=32, n_angle=200, n_trials=1)
    assert quiet.aggregate["clamped"] == 0


def test_nonadditive_rerun():
    rep = ex.exp_nonadditive(N=32, n_angle=200, n_trials=1)
    assert "noise" in rep.config
    _same(rep, ex.rerun(rep))


def test_flatness_small():
    rep = ex.exp_flatness(N_list=(100, 10_000), n_seeds=5)
    assert rep.aggregate["medians"][1] < rep.aggregate["medians"][0]
    _same(rep, ex.rerun(rep))


def test_autocovariance_small():
    rep = ex.exp_autocovariance(N=64, n_trials=2000, dist="uniform")
    assert rep.passed
    assert rep.aggregate["empirical_mu4"] == pytest.approx(1.8, rel=0.05)


def test_interp_spectrum_small():
    rep = ex.exp_interpolated_spectrum(N=64, m=2, n_trials=100)
    assert rep.aggregate["correlation"] > 0.98
    c = ex.exp_interpolated_spectrum(N=64, m=2, taps=(1.0, 0.5), n_trials=100)
    assert c.experiment == "correlated_spectrum"
    _same(c, ex.rerun(c))


def test_interpolated_theory_nyquist_alias():
    # with m = 1 the aliased kernel powers sum over all integer shifts
    w = np.array([0.3])
    val = ex.interpolated_spectrum_theory(w, 1, n_alias=40)
    assert val[0] > 0


def test_report_write(tmp_path):
    rep = ex.exp_radial_profile(N=32, profile="cosine", n_trials=1)
    rep.images["demo"] = Image(GridSpec.square(4), np.eye(4))
    paths = rep.write(tmp_path, "pgm")
    assert all(os.path.exists(p) for p in paths)
    d = json.loads(open(paths[0]).read())
    assert d["experiment"] == "profile_cosine"
    assert d["config"]["N"] == 32
    assert d["rng"] and d["backend"] in ("cython", "python")
    assert isinstance(d["passed"], bool)
    assert any(p.endswith(".pgm") for p in paths)
    assert any(p.endswith("_profile.csv") for p in paths)
    lines = open(paths[1]).read().splitlines()
    assert lines[0] == "name,value,formula"
    assert math.isfinite(float(lines[1].split(",")[1]))
