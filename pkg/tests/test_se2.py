import math

import numpy as np
import pytest
from scipy.linalg import expm

from se2fft import testlib
from se2fft.se2 import (
    SE2Element,
    Se2Tangent,
    compose,
    exp_hat,
    inverse,
    is_radial_in_translations,
    log_vee,
    wrap_angle,
    wrap_angle_signed,
)


def close(g, h, tol=1e-12):
    # compare angles on the circle so 2*pi - eps and 0 count as equal
    dt = abs(wrap_angle_signed(g.theta - h.theta))
    return abs(g.x - h.x) <= tol and abs(g.y - h.y) <= tol and dt <= tol


def random_element(rng):
    return SE2Element(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-10, 10))


def test_theta_is_wrapped():
    assert SE2Element(0, 0, -math.pi / 2).theta == pytest.approx(3 * math.pi / 2)
    assert SE2Element(0, 0, 2 * math.pi).theta == 0.0
    assert 0.0 <= wrap_angle(-1e-20) < 2 * math.pi
    assert wrap_angle_signed(math.pi) == pytest.approx(math.pi)
    assert wrap_angle_signed(-math.pi) == pytest.approx(math.pi)


def test_compose_examples():
    g = compose(SE2Element(1, 0, math.pi / 2), SE2Element(1, 0, 0))
    assert close(g, SE2Element(1, 1, math.pi / 2))
    h = SE2Element(0.3, -0.2, 1.1)
    assert close(compose(SE2Element.identity(), h), h)
    g = compose(SE2Element(2, 3, math.pi), SE2Element(1, 0, math.pi))
    assert close(g, SE2Element(1, 3, 0))


def test_inverse_examples():
    assert close(inverse(SE2Element.identity()), SE2Element.identity())
    assert close(inverse(SE2Element(1, 0, math.pi / 2)), SE2Element(0, 1, 3 * math.pi / 2))
    rng = np.random.default_rng(1)
    for _ in range(50):
        g = random_element(rng)
        assert close(compose(inverse(g), g), SE2Element.identity())


def test_matrix_is_rigid():
    rng = np.random.default_rng(2)
    for _ in range(50):
        m = random_element(rng).matrix()
        R = m[:2, :2]
        assert np.allclose(R.T @ R, np.eye(2), atol=1e-14)
        assert np.linalg.det(R) == pytest.approx(1.0)
        assert np.array_equal(m[2], [0, 0, 1])


def test_hat_structure():
    A = Se2Tangent(0.3, -1.2, 0.7).hat()
    assert np.array_equal(A[2], [0, 0, 0])
    assert np.allclose(A[:2, :2], -A[:2, :2].T)


def test_log_vee_trivial_cases():
    for t in (-3.0, -0.5, 0.0, 1e-7, 2.0, math.pi):
        v = log_vee(SE2Element(0, 0, t))
        assert (v.v1, v.v2) == (0.0, 0.0)
        assert v.omega == pytest.approx(wrap_angle_signed(t), abs=1e-15)
    v = log_vee(SE2Element(0.3, -0.4, 0))
    assert (v.v1, v.v2, v.omega) == (0.3, -0.4, 0.0)


def test_log_vee_quarter_turn_against_expm():
    g = SE2Element(1, 0, math.pi / 2)
    v = log_vee(g)
    assert v.v1 == pytest.approx(math.pi / 4, abs=1e-14)
    assert v.v2 == pytest.approx(-math.pi / 4, abs=1e-14)
    assert v.omega == pytest.approx(math.pi / 2, abs=1e-15)
    assert np.allclose(expm(v.hat()), g.matrix(), atol=1e-12)


def test_log_vee_branch_point():
    # V(pi) is invertible, so the closed form stays finite at theta = pi
    g = SE2Element(0.2, 0.1, math.pi)
    v = log_vee(g)
    assert v.omega == pytest.approx(math.pi)
    assert np.allclose(expm(v.hat()), g.matrix(), atol=1e-10)


def test_log_vee_small_angles_continuous():
    # the Taylor branch must join the closed form without a jump
    for w in (9.9e-5, 1e-4, 1.01e-4, -1e-4):
        a = log_vee(SE2Element(0.3, 0.2, w))
        b = exp_hat(a)
        assert close(b, SE2Element(0.3, 0.2, w), tol=1e-13)


def test_exp_hat_matches_expm():
    rng = np.random.default_rng(3)
    for _ in range(100):
        t = Se2Tangent(rng.normal(), rng.normal(), rng.uniform(-math.pi, math.pi))
        assert np.allclose(exp_hat(t).matrix(), expm(t.hat()), atol=1e-12)


def test_is_radial_examples():
    assert is_radial_in_translations(testlib.RadialSE2Gaussian(0.005, math.pi / 4), tol=1e-12)
    assert is_radial_in_translations(testlib.Constant(2.0))
    dg = testlib.DeformedGaussian(np.diag([25.0, 10.0]), 0.4, math.pi)
    assert not is_radial_in_translations(dg, tol=1e-6)
    # the hand-picked witness: x = (0.1, 0) against its quarter-turn (0, 0.1)
    a = dg(0.1, 0.0, 1.0)
    b = dg(0.0, 0.1, 1.0)
    assert abs(a - b) == pytest.approx(abs(math.exp(-0.25) - math.exp(-0.1)) * abs(dg(0, 0, 1.0)))


def test_is_radial_rejects_zero_samples():
    with pytest.raises(ValueError):
        is_radial_in_translations(testlib.Constant(1.0), samples=0)
