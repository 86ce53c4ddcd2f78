import numpy as np
import pytest
import scipy.special as sp

from se2fft.special import bessel_j, bessel_zero, mcmahon_guess


def test_values_at_origin():
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(1, 0.0) == 0.0
    assert bessel_j(7, 0.0) == 0.0


def test_against_scipy_on_0_100():
    x = np.linspace(0, 100, 4001)
    for m in (0, 1, 2, 3, 7, 12, 20):
        err = np.max(np.abs(bessel_j(m, x) - sp.jv(m, x)))
        assert err <= 1e-12, (m, err)


def test_negative_argument_parity():
    x = np.array([-3.2, -9.5, -0.4])
    assert np.allclose(bessel_j(3, x), -bessel_j(3, -x), atol=1e-15)
    assert np.allclose(bessel_j(2, x), bessel_j(2, -x), atol=1e-15)


def test_scalar_and_array_agree():
    xs = np.array([0.3, 7.99, 8.0, 8.01, 40.0])
    assert np.allclose(bessel_j(4, xs), [bessel_j(4, float(v)) for v in xs], rtol=0, atol=1e-15)


def test_first_zero():
    z = bessel_zero(0, 1)
    assert z == pytest.approx(2.404825557695773, abs=1e-12)
    assert abs(bessel_j(0, 2.404825557695773)) <= 1e-10


def test_zeros_table():
    for m in (0, 1, 5, 20):
        zs = [bessel_zero(m, n) for n in range(1, 51)]
        assert np.all(np.diff(zs) > 0)
        assert np.max(np.abs(np.array(zs) - sp.jn_zeros(m, 50))) <= 1e-11
        assert max(abs(bessel_j(m, z)) for z in zs) <= 1e-10


def test_interlacing_sign():
    z1, z2 = bessel_zero(0, 1), bessel_zero(0, 2)
    assert z2 > z1
    assert np.sign(bessel_j(0, 0.5 * (z1 + z2))) == -np.sign(bessel_j(0, 1e-3))


def test_mcmahon_is_close_for_large_n():
    assert abs(mcmahon_guess(3, 40) - bessel_zero(3, 40)) < 1e-6


def test_zero_range():
    with pytest.raises(ValueError):
        bessel_zero(21, 1)
    with pytest.raises(ValueError):
        bessel_zero(0, 51)
    with pytest.raises(ValueError):
        bessel_zero(0, 0)
