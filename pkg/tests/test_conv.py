import math

import numpy as np
import pytest

from se2fft import conv, dft3, oracle, testlib
from se2fft.conv import (
    ConvPlan,
    RadialityWarning,
    conv_ffs_grid,
    conv_theorem_check,
    multi_conv_grid,
    multi_conv_stream,
)
from se2fft.ffs import ffc_all
from se2fft.grid import BandLimit, DimensionError, SampledField, sample


def radial_trig(K, rng):
    """A trigonometric polynomial in theta only, hence radial in translations."""
    c = np.zeros(BandLimit(K).grid.dims, dtype=complex)
    Kx, Ky, Kr = K
    c[Kx, Ky, :] = rng.normal(size=2 * Kr + 1) + 1j * rng.normal(size=2 * Kr + 1)
    return testlib.TrigPoly(K, c), c


def general_trig(K, rng):
    c = rng.normal(size=BandLimit(K).grid.dims) + 1j * rng.normal(size=BandLimit(K).grid.dims)
    return testlib.TrigPoly(K, c), c


def stream(F, P, q, K):
    out = []
    multi_conv_stream(F, P, q, K, lambda p, x: out.append((p, x)))
    assert [p for p, _ in out] == list(range(1, q + 1))
    return [x for _, x in out]


def test_plan_validation():
    plan = ConvPlan((2, 3, 1))
    assert plan.N.dims == (5, 7, 3)
    assert plan.W.shape == (5, 7, 3)
    with pytest.raises(DimensionError):
        ConvPlan((2, 2, 2), (5, 5, 4))


def test_coefficient_identity_n_equals_l():
    K = BandLimit((4, 3, 5))
    F = sample(testlib.paper_deformed_gaussian(), K.grid)
    P = sample(testlib.RadialSE2Gaussian(0.05, 1.0), K.grid)
    out = conv_ffs_grid(F, P, ConvPlan(K))
    cf, cp, co = (ffc_all(X, K).cube for X in (F, P, out))
    assert np.max(np.abs(co - cf * cp)) <= 1e-12
    assert conv_theorem_check(F, P, out, K) <= 1e-12


def test_radial_gaussian_pair_against_trapezoid():
    K = BandLimit((8, 8, 8))
    r = testlib.RadialSE2Gaussian(0.005)
    F = sample(r, K.grid)
    out = conv_ffs_grid(F, F, ConvPlan(K))
    T = oracle.se2_convolution_direct_grid(r, r, K.grid, oracle.trapezoid_on_grid(K.grid))
    assert np.max(np.abs(out.values - T)) <= 5e-3


def test_constant_kernel():
    K = BandLimit((3, 2, 4))
    F = sample(testlib.paper_se2_gaussian(), K.grid)
    P = sample(testlib.Constant(1.0), K.grid)
    for N in (K.grid.dims, (9, 8, 12)):
        out = conv_ffs_grid(F, P, ConvPlan(K, N))
        # only k = 0 survives, leaving the sample mean of F everywhere
        assert np.max(np.abs(out.values - F.values.mean())) <= 1e-12


def test_conv_theorem_check_on_harmonics():
    rng = np.random.default_rng(50)
    K = (2, 3, 2)
    f, cf = general_trig(K, rng)
    rho, cr = radial_trig(K, rng)
    L = BandLimit(K).grid
    # the continuous convolution of trig polynomials has coefficients cf * cr
    exact = testlib.TrigPoly(K, cf * cr)
    res = conv_theorem_check(sample(f, L), sample(rho, L), sample(exact, L), K)
    assert res <= 1e-9


def test_conv_theorem_check_zero():
    K = (2, 2, 2)
    Z = sample(testlib.Constant(0.0), BandLimit(K).grid)
    assert conv_theorem_check(Z, Z, Z, K) == 0.0


def test_conv_theorem_residual_shrinks_with_k():
    f = testlib.PolarHarmonic(1, 1, 1, radius=0.25)
    r = testlib.RadialSE2Gaussian(0.005)
    res = {}
    for K in (8, 16):
        L = BandLimit(K).grid
        T = oracle.se2_convolution_direct_grid(f, r, L, oracle.trapezoid_on_grid(L))
        res[K] = conv_theorem_check(sample(f, L), sample(r, L), SampledField(L, T), (K, K, K))
    assert res[16] < res[8]


def test_conv_theorem_check_shape_error():
    with pytest.raises(DimensionError):
        Z = sample(testlib.Constant(0.0), (5, 5, 5))
        conv_theorem_check(Z, Z, sample(testlib.Constant(0.0), (5, 5, 7)), (2, 2, 2))


def test_multi_conv_q1_equals_conv():
    K = BandLimit((3, 4, 2))
    F = sample(testlib.paper_deformed_gaussian(), K.grid)
    P = sample(testlib.RadialSE2Gaussian(0.02, 0.5), K.grid)
    for N in (K.grid.dims, (10, 12, 9)):
        plan = ConvPlan(K, N)
        a = conv_ffs_grid(F, P, plan).values
        b = multi_conv_grid(F, P, 1, plan).values
        assert np.max(np.abs(a - b)) <= 1e-12 * max(1.0, np.abs(a).max())


def test_multi_conv_power_rule():
    rng = np.random.default_rng(51)
    K = (2, 2, 3)
    L = BandLimit(K).grid
    f, cf = general_trig(K, rng)
    rho, cr = radial_trig(K, rng)
    F, P = sample(f, L), sample(rho, L)
    for q in (2, 3):
        out = multi_conv_grid(F, P, q, ConvPlan(K))
        assert np.max(np.abs(ffc_all(out, K).cube - cf * cr**q)) <= 1e-10


def test_multi_conv_even_q_mask():
    # for even q, skipping W equals multiplying by W^2, the support mask
    K = BandLimit((2, 3, 2))
    N = (9, 10, 7)
    F = sample(testlib.paper_deformed_gaussian(), K.grid)
    P = sample(testlib.RadialSE2Gaussian(0.05), K.grid)
    plan = ConvPlan(K, N)
    nL = K.grid.size
    QF = dft3.embed_spectrum(dft3.dft3(F), K, N).values / nL
    QP = dft3.embed_spectrum(dft3.dft3(P), K, N).values / nL
    explicit = dft3.idft3(plan.W**2 * QF * QP**2).values * plan.N.size
    assert np.max(np.abs(multi_conv_grid(F, P, 2, plan).values - explicit)) <= 1e-15


def test_two_stage_pipeline_matches_q2():
    K = BandLimit((8, 8, 8))
    r = testlib.RadialSE2Gaussian(0.005)
    f = testlib.DeformedGaussian(np.diag([1 / 0.025, 1 / 0.0025]), 0.0125, math.pi / 4)
    F, P = sample(f, K.grid), sample(r, K.grid)
    plan = ConvPlan(K)
    two = conv_ffs_grid(conv_ffs_grid(F, P, plan), P, plan)
    assert np.max(np.abs(two.values - multi_conv_grid(F, P, 2, plan).values)) <= 5e-3


def test_multi_conv_rejects_bad_q():
    K = BandLimit((1, 1, 1))
    F = sample(testlib.Constant(1.0), K.grid)
    with pytest.raises(ValueError):
        multi_conv_grid(F, F, 0, ConvPlan(K))
    with pytest.raises(ValueError):
        multi_conv_stream(F, F, 0, K, lambda p, x: None)


def test_stream_q1_equals_conv():
    K = BandLimit((3, 3, 3))
    F = sample(testlib.paper_deformed_gaussian(), K.grid)
    P = sample(testlib.RadialSE2Gaussian(0.05), K.grid)
    (only,) = stream(F, P, 1, K)
    assert np.max(np.abs(only.values - conv_ffs_grid(F, P, ConvPlan(K)).values)) <= 1e-15


def test_stream_harmonic_coefficients():
    rng = np.random.default_rng(52)
    K = (2, 1, 2)
    L = BandLimit(K).grid
    f, cf = general_trig(K, rng)
    rho, cr = radial_trig(K, rng)
    for p, out in enumerate(stream(sample(f, L), sample(rho, L), 3, K), start=1):
        assert np.max(np.abs(ffc_all(out, K).cube - cf * cr**p)) <= 1e-10


def test_stream_matches_grid_per_order():
    K = BandLimit((4, 5, 4))
    f = testlib.DeformedGaussian(np.diag([1 / 0.025, 1 / 0.0025]), 0.0125, math.pi / 4)
    F = sample(f, K.grid)
    P = sample(testlib.RadialSE2Gaussian(0.005, math.pi / 4), K.grid)
    plan = ConvPlan(K)
    for p, out in enumerate(stream(F, P, 5, K), start=1):
        ref = multi_conv_grid(F, P, p, plan).values
        assert np.max(np.abs(out.values - ref)) <= 1e-9 * max(1.0, np.abs(ref).max())


def test_stream_fft_count(monkeypatch):
    calls = {"fwd": 0, "inv": 0}
    fwd, inv = dft3.dft3, dft3.idft3

    def count_fwd(X):
        calls["fwd"] += 1
        return fwd(X)

    def count_inv(X):
        calls["inv"] += 1
        return inv(X)

    monkeypatch.setattr(conv._dft, "dft3", count_fwd)
    monkeypatch.setattr(conv._dft, "idft3", count_inv)
    K = BandLimit((2, 2, 2))
    F = sample(testlib.paper_deformed_gaussian(), K.grid)
    for q in (1, 4, 7):
        calls.update(fwd=0, inv=0)
        stream(F, F, q, K)
        assert calls == {"fwd": 2, "inv": q}


def test_bilinear_in_f():
    K = BandLimit((3, 3, 3))
    F = sample(testlib.paper_deformed_gaussian(), K.grid)
    P = sample(testlib.RadialSE2Gaussian(0.05), K.grid)
    plan = ConvPlan(K, (8, 9, 10))
    a = 2.5 - 0.5j
    lhs = conv_ffs_grid(SampledField(K.grid, a * F.values), P, plan).values
    rhs = a * conv_ffs_grid(F, P, plan).values
    assert np.max(np.abs(lhs - rhs)) <= 1e-12


def test_radiality_warning():
    K = BandLimit((2, 2, 2))
    F = sample(testlib.Constant(1.0), K.grid)
    bad = testlib.DeformedGaussian(np.diag([25.0, 10.0]), 0.4, math.pi)
    with pytest.warns(RadialityWarning):
        conv_ffs_grid(F, sample(bad, K.grid), ConvPlan(K), rho=bad)
    good = testlib.RadialSE2Gaussian(0.01)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("error")
        conv_ffs_grid(F, sample(good, K.grid), ConvPlan(K), rho=good)


def test_dimension_errors():
    K = BandLimit((2, 2, 2))
    F = sample(testlib.Constant(1.0), (5, 5, 5))
    G = sample(testlib.Constant(1.0), (5, 5, 6))
    with pytest.raises(DimensionError):
        conv_ffs_grid(F, G, ConvPlan(K))
