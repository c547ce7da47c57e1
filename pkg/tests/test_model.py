import math

import numpy as np
import pytest

from sharpcross.errors import DegenerateModel
from sharpcross.model import (CoefficientModel, as_model, basis_at, moments_at,
                              moments_direct)


def unit(n):
    return CoefficientModel.brownian(n)


def true_basis(model, x):
    a, b, ls = basis_at(model, x)
    s = math.exp(ls)
    return a * s, b * s


# --- construction -------------------------------------------------------------

def test_sigma_length_checked():
    with pytest.raises(ValueError):
        CoefficientModel(2, (1.0, 1.0))


@pytest.mark.parametrize("sigma", [(1.0, -1.0), (1.0, math.nan), (1.0, math.inf)])
def test_sigma_values_checked(sigma):
    with pytest.raises(ValueError):
        CoefficientModel(1, sigma)


def test_all_zero_sigma_rejected():
    with pytest.raises(DegenerateModel):
        CoefficientModel(2, (0.0, 0.0, 0.0))


@pytest.mark.parametrize("n", [-1, 1.5, True])
def test_bad_degree(n):
    with pytest.raises(ValueError):
        CoefficientModel(n, (1.0,))


def test_brownian_defaults_to_unit_sigma0():
    m = CoefficientModel.brownian(3)
    assert m.sigma == (1.0, 1.0, 1.0, 1.0)
    assert m.unit_variance
    assert CoefficientModel.brownian(3, sigma0=0.0).sigma[0] == 0.0


def test_as_model_forms():
    assert as_model(2).sigma == (1.0, 1.0, 1.0)
    assert as_model(2, 2.0).sigma == (2.0, 2.0, 2.0)
    assert as_model(2, [1, 2, 3], sigma0=0).sigma == (0.0, 2.0, 3.0)


# --- basis sums ---------------------------------------------------------------

def test_basis_n1_x0():
    a, b = true_basis(unit(1), 0.0)
    assert list(a) == [1.0, 0.0]
    assert list(b) == [1.0, 1.0]


def test_basis_n3_x1():
    a, b = true_basis(unit(3), 1.0)
    k = np.arange(4)
    assert np.array_equal(a, 4 - k)
    assert np.array_equal(b, (12 - k**2 + k) / 2)


def test_basis_n2_x2():
    a, b = true_basis(unit(2), 2.0)
    np.testing.assert_allclose(a, [7, 6, 4], rtol=1e-15)
    np.testing.assert_allclose(b, [5, 5, 4], rtol=1e-15)


@pytest.mark.parametrize("n", [0, 1, 7, 50, 100])
def test_basis_at_one_is_integral(n):
    a, b = true_basis(unit(n), 1.0)
    k = np.arange(n + 1)
    np.testing.assert_allclose(a, n - k + 1, rtol=1e-14)
    np.testing.assert_allclose(b, (n * (n + 1) - (k - 1) * k) / 2, rtol=1e-14)


def test_basis_negative_outer_sign():
    # a_0(-2) for n=3: 1 - 2 + 4 - 8
    a, b = true_basis(unit(3), -2.0)
    assert a[0] == pytest.approx(-5.0, rel=1e-15)
    assert b[0] == pytest.approx(1 - 4 + 12, rel=1e-15)


def test_b_is_derivative_of_a():
    rng = np.random.default_rng(11)
    h = 1e-6
    for _ in range(100):
        n = int(rng.integers(1, 21))
        x = float(rng.uniform(0.1, 2.0) * rng.choice([-1, 1]))
        m = unit(n)
        ap, _ = true_basis(m, x + h)
        am, _ = true_basis(m, x - h)
        _, b = true_basis(m, x)
        fd = (ap - am) / (2 * h)
        np.testing.assert_allclose(fd, b, rtol=1e-6, atol=1e-6 * np.max(np.abs(b)))


# --- moments ------------------------------------------------------------------

def test_moments_n1_x0():
    assert moments_at(unit(1), 0.0).as_tuple() == pytest.approx((1, 2, 1, 1), rel=1e-15)


def test_moments_n1_x1():
    assert moments_at(unit(1), 1.0).as_tuple() == pytest.approx((5, 2, 3, 1), rel=1e-15)


@pytest.mark.parametrize("x", [-3.0, 0.0, 0.5, 7.0])
def test_moments_constant_polynomial(x):
    assert moments_at(unit(0), x).as_tuple() == (1.0, 0.0, 0.0, 0.0)


def test_moments_direct_examples():
    assert moments_direct(unit(1), 0.0).as_tuple() == (1.0, 2.0, 1.0, 1.0)
    assert moments_direct(CoefficientModel(0, (2.0,)), 3.0).as_tuple() == (4.0, 0.0, 0.0, 0.0)
    m = moments_at(unit(5), -1.0).as_tuple()
    assert m == pytest.approx(moments_direct(unit(5), -1.0).as_tuple(), rel=1e-12)


def _close(got, ref, floor):
    return abs(got - ref) <= 1e-10 * max(abs(ref), floor)


def test_moments_match_direct_randomized():
    rng = np.random.default_rng(2024)
    for _ in range(500):
        n = int(rng.integers(0, 51))
        sigma = rng.uniform(0.0, 2.0, n + 1)
        sigma[rng.integers(0, n + 1)] = rng.uniform(0.5, 2.0)
        x = float(rng.uniform(-4, 4))
        model = CoefficientModel(n, tuple(sigma))
        try:
            ref = moments_direct(model, x)
        except DegenerateModel:
            with pytest.raises(DegenerateModel):
                moments_at(model, x)
            continue
        got = moments_at(model, x).as_tuple()
        a2, b2, d, e2 = ref.as_tuple()
        assert _close(got[0], a2, 0.0)
        assert _close(got[1], b2, 0.0)
        # D and E^2 can vanish by cancellation; judge them on the natural scale
        assert _close(got[2], d, math.sqrt(a2 * b2) * 1e-3)
        assert _close(got[3], e2, a2 * b2 * 1e-3)


def test_cauchy_schwarz_and_nonnegative_e2():
    rng = np.random.default_rng(5)
    for _ in range(300):
        n = int(rng.integers(1, 200))
        x = float(rng.uniform(-3, 3))
        m = moments_at(unit(n), x)
        assert m.e2 >= 0.0
        assert m.d**2 <= m.a2 * m.b2 * (1 + 1e-12)


def test_scaling_law():
    rng = np.random.default_rng(9)
    for _ in range(50):
        n = int(rng.integers(1, 30))
        sigma = rng.uniform(0.2, 2.0, n + 1)
        c = float(rng.uniform(0.1, 10.0))
        x = float(rng.uniform(-2.5, 2.5))
        m1 = moments_at(CoefficientModel(n, tuple(sigma)), x).as_tuple()
        m2 = moments_at(CoefficientModel(n, tuple(c * sigma)), x).as_tuple()
        for v1, v2, p in zip(m1, m2, (2, 2, 2, 4)):
            assert v2 == pytest.approx(c**p * v1, rel=1e-12)


def test_zero_variance_at_origin_is_degenerate():
    m = CoefficientModel.brownian(4, sigma0=0.0)
    with pytest.raises(DegenerateModel):
        moments_at(m, 0.0)
    assert moments_at(m, 0.3).a2 > 0


def test_large_degree_stays_finite():
    m = moments_at(unit(3000), 2.0)
    assert math.isfinite(m.intensity) and m.intensity > 0
    assert math.isfinite(m.log_var_ratio)
    assert m.log_scale > 700  # the unscaled values would overflow
