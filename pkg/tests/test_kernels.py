import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tomonoise.kernels import (CATMULL_ROM, LANCZOS3, LINEAR, NEAREST, SINC, Kernel, evaluate, fourier_profile,
                               fourier_sup, get_kernel, l2_norm_sq)
from scipy import integrate

FINITE = [LANCZOS3, Kernel("lanczos", 2), LINEAR, NEAREST, CATMULL_ROM]


def test_lanczos3_values():
    assert evaluate(LANCZOS3, 0.0) == 1.0
    assert abs(evaluate(LANCZOS3, 1.0)) < 1e-15 and abs(evaluate(LANCZOS3, 2.0)) < 1e-15
    assert evaluate(LANCZOS3, 3.5) == 0.0


def test_sinc_and_linear_values():
    assert evaluate(SINC, 0.5) == pytest.approx(2 / math.pi, rel=1e-14)
    assert evaluate(LINEAR, 0.25) == 0.75


@pytest.mark.parametrize("k", FINITE + [SINC], ids=lambda k: k.name)
def test_cardinality_and_evenness(k):
    r = 6 if not k.is_finite else int(k.support_radius)
    js = np.arange(-r, r + 1)
    np.testing.assert_allclose(evaluate(k, js), (js == 0).astype(float), atol=1e-12)
    x = np.linspace(-4, 4, 401)
    np.testing.assert_array_equal(evaluate(k, x), evaluate(k, -x))


@given(st.floats(0, 1))
def test_linear_partition_of_unity(x):
    assert float(evaluate(LINEAR, x) + evaluate(LINEAR, 1 - x)) == pytest.approx(1.0, abs=1e-15)


def test_sinc_profile():
    assert fourier_profile(SINC, 0.0) == 1.0
    assert fourier_profile(SINC, 1.1 * math.pi) == 0.0


def test_lanczos3_profile():
    # the kernel integrates to 0.99706, not exactly one; the passband is flat to a few 1e-3
    integral, _ = integrate.quad(lambda x: float(evaluate(LANCZOS3, x)), -3, 3, points=[-2, -1, 0, 1, 2],
                                 epsabs=1e-13)
    assert float(fourier_profile(LANCZOS3, 0.0)) == pytest.approx(integral, abs=1e-9)
    assert float(fourier_profile(LANCZOS3, 0.0)) == pytest.approx(1.0, abs=5e-3)
    assert float(fourier_profile(LANCZOS3, 0.4 * math.pi)) == pytest.approx(1.0, rel=0.03)


@pytest.mark.parametrize("k", [LINEAR, NEAREST, LANCZOS3, CATMULL_ROM], ids=lambda k: k.name)
def test_profile_matches_direct_quadrature(k):
    r = k.support_radius
    for xi in (0.3, 2.0, 5.5):
        direct, _ = integrate.quad(lambda x: float(evaluate(k, x)) * math.cos(xi * x), -r, r,
                                   points=list(np.arange(-math.ceil(r), math.ceil(r) + 1) * 0.5), limit=400,
                                   epsabs=1e-13)
        assert float(fourier_profile(k, xi)) == pytest.approx(direct, abs=1e-8)


def test_l2_norms():
    assert l2_norm_sq(SINC) == 1.0
    assert l2_norm_sq(LINEAR) == pytest.approx(2 / 3, abs=1e-8)
    assert l2_norm_sq(LANCZOS3) == pytest.approx(0.888, abs=1e-3)


@pytest.mark.parametrize("k", [LANCZOS3, CATMULL_ROM, LINEAR], ids=lambda k: k.name)
def test_parseval(k):
    xi = np.linspace(0.0, 30 * math.pi, 30001)
    val = 2 * integrate.trapezoid(fourier_profile(k, xi) ** 2, xi) / (2 * math.pi)
    assert val == pytest.approx(l2_norm_sq(k), abs=1e-4 if k is not LINEAR else 2e-3)


def test_fourier_sup():
    assert fourier_sup(LINEAR) == 1.0
    assert fourier_sup(LANCZOS3) >= float(fourier_profile(LANCZOS3, 0.0))


def test_get_kernel():
    assert get_kernel("Lanczos3") == LANCZOS3
    assert get_kernel("catmull-rom") == CATMULL_ROM
    assert get_kernel(LINEAR) is LINEAR
    with pytest.raises(ValueError):
        get_kernel("spline")
    with pytest.raises(ValueError):
        Kernel("lanczos", 0)
    assert Kernel("lanczos", 4).support_radius == 4.0
