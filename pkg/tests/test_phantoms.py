import math

import numpy as np
import pytest
from scipy import integrate

from tomonoise.grid import GridSpec
from tomonoise.phantoms import (SHEPP_LOGAN, PhantomSpec, disk_radon, ellipse_radon, gaussian_bump, gaussian_radon,
                                render, shepp_logan, three_disks)


def test_empty_disks_zero():
    assert not np.any(render(PhantomSpec("disks", GridSpec.square(32), disks=())).values)


def test_disk_area():
    g = GridSpec.square(256)
    img = render(PhantomSpec("disks", g, disks=(((0.0, 0.0), 0.5, 1.0),)))
    assert img.values.sum() * g.cell_area == pytest.approx(math.pi * 0.25, rel=0.01)


def test_gaussian_radon_closed_form():
    w = 0.15
    for p in (0.0, 0.1, 0.3):
        num = integrate.quad(lambda t: math.exp(-(p * p + t * t) / (2 * w * w)), -np.inf, np.inf)[0]
        assert float(gaussian_radon(p, w)) == pytest.approx(num, rel=1e-10)


def test_ellipse_radon_matches_disk():
    phi = np.linspace(-3, 3, 7)[:, None]
    p = np.linspace(-0.6, 0.6, 13)[None, :]
    np.testing.assert_allclose(ellipse_radon(phi, p, [(1.0, 0.5, 0.5, 0.1, -0.2, 17.0)]),
                               disk_radon(phi, p, (0.1, -0.2), 0.5), atol=1e-14)


def test_shepp_range_and_determinism():
    a, b = shepp_logan(64), shepp_logan(64)
    np.testing.assert_array_equal(a.values, b.values)
    assert a.values.min() >= 0.0 and a.values.max() <= 1.0
    assert len(SHEPP_LOGAN) == 10
    d = three_disks(64).values
    assert d.min() >= 0 and d.max() <= 1


def test_refinement_consistency():
    # value at the cell nearest a fixed point converges as N doubles
    pt = (0.123, -0.211)
    vals = []
    for N in (32, 64, 128, 256, 512):
        img = gaussian_bump(N)
        g = img.grid
        i = int(round((pt[0] + 1) / g.step_x - 0.5))
        j = int(round((pt[1] + 1) / g.step_y - 0.5))
        vals.append(img.values[j, i])
    exact = math.exp(-(pt[0] ** 2 + pt[1] ** 2) / (2 * 0.15**2))
    errs = [abs(v - exact) for v in vals]
    assert errs[-1] < errs[0] and errs[-1] < 0.01


def test_planewave():
    g = GridSpec.square(16)
    img = render(PhantomSpec("planewave", g, mode=(2, 0), amplitude=0.5))
    X, _ = g.mesh()
    np.testing.assert_allclose(img.values, 0.5 * np.cos(2 * math.pi * X))


def test_validation():
    with pytest.raises(ValueError):
        PhantomSpec("photo", GridSpec.square(8))
    with pytest.raises(ValueError):
        PhantomSpec("disks", GridSpec.square(8), disks=(((0.8, 0.0), 0.5, 1.0),))
    with pytest.raises(ValueError):
        PhantomSpec("disks", GridSpec.square(8), disks=(((0.0, 0.0), -0.1, 1.0),))
    with pytest.raises(ValueError):
        PhantomSpec("disks", GridSpec.square(8), disks=(((0.0, 0.0), 0.1, math.inf),))
