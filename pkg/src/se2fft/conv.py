"""Convolutional finite Fourier series and multi-convolution pipelines.

For rho radial in translations, the coefficients of f * rho are
approximated by the products fhat[k; L] * rhohat[k; L]. Evaluating that
series on an N-grid reduces to one inverse FFT of W . Q_f . Q_rho.

All transforms go through ``dft3.dft3`` / ``dft3.idft3`` looked up at
call time, so instrumentation can count them.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import dft3 as _dft
from .ffs import ffc_all
from .grid import DimensionError, SampledField, as_band, as_grid


class RadialityWarning(UserWarning):
    """The kernel failed the numerical radial-in-translations check."""


@dataclass(frozen=True)
class ConvPlan:
    """Band limit K, output grid N and the cached weight array W."""

    K: object
    N: object = None
    W: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        K = as_band(self.K)
        N = K.grid if self.N is None else as_grid(self.N)
        if not N >= K.grid:
            raise DimensionError(f"output grid {N.dims} is smaller than 2K+1 = {K.grid.dims}")
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "W", _dft.weight_array(K, N).values)

    @property
    def L(self):
        return self.K.grid


def _check_inputs(F: SampledField, P: SampledField, K):
    L = K.grid
    for name, X in (("F", F), ("P", P)):
        if X.spec.dims != L.dims:
            raise DimensionError(f"{name} dims {X.spec.dims} must equal 2K+1 = {L.dims}")


def _maybe_check_radial(rho):
    if rho is None:
        return
    from .se2 import is_radial_in_translations

    if not is_radial_in_translations(rho, samples=256, tol=1e-8):
        warnings.warn("kernel is not radial in translations", RadialityWarning, stacklevel=3)


def _embed(Xhat, plan: ConvPlan) -> np.ndarray:
    if plan.N.dims == plan.L.dims:
        return Xhat.values
    return _dft.embed_spectrum(Xhat, plan.K, plan.N).values


def conv_ffs_grid(F: SampledField, P: SampledField, plan: ConvPlan, rho=None) -> SampledField:
    """S_K[f, rho] on the plan's N-grid: |N| / |L|^2 * idft3(W . Q_F . Q_P).

    If the kernel descriptor ``rho`` is given it is checked for radiality
    first; a failure only emits a ``RadialityWarning``.
    """
    _check_inputs(F, P, plan.K)
    _maybe_check_radial(rho)
    Fh = _dft.dft3(F)
    Ph = _dft.dft3(P)
    H = plan.W * _embed(Fh, plan) * _embed(Ph, plan)
    scale = plan.N.size / plan.L.size**2
    return SampledField(plan.N, _dft.idft3(H).values * scale)


def multi_conv_grid(F: SampledField, P: SampledField, q: int, plan: ConvPlan, rho=None) -> SampledField:
    """S_K^q[f, rho] on the N-grid: |N| / |L|^(q+1) * idft3(W^q . Q_F . Q_P^q).

    W^q is W for odd q; for even q it is the support mask, already implied
    by the zero padding of Q_F, so W is skipped. Each factor is normalised
    by |L| before the power to keep the product in range.
    """
    q = int(q)
    if q < 1:
        raise ValueError("q must be >= 1")
    _check_inputs(F, P, plan.K)
    _maybe_check_radial(rho)
    nL = plan.L.size
    QF = _embed(_dft.dft3(F), plan) / nL
    QP = _embed(_dft.dft3(P), plan) / nL
    H = QF * QP**q
    if q % 2 == 1:
        H = plan.W * H
    return SampledField(plan.N, _dft.idft3(H).values * plan.N.size)


def multi_conv_stream(F: SampledField, P: SampledField, q: int, K, sink) -> None:
    """Emit approximations of f * rho^(p) for p = 1..q on the L-grid.

    ``sink(p, field)`` is called in order. The running spectrum keeps the
    unnormalised product W . V . P^ and 1/|L|^p is applied only to each
    emitted field, so the whole run costs two forward and q inverse FFTs.
    """
    q = int(q)
    if q < 1:
        raise ValueError("q must be >= 1")
    K = as_band(K)
    _check_inputs(F, P, K)
    W = _dft.weight_array(K, K.grid).values
    V = _dft.dft3(F).values
    Ph = _dft.dft3(P).values
    nL = K.grid.size
    for p in range(1, q + 1):
        H = W * V * Ph
        sink(p, SampledField(K.grid, _dft.idft3(H).values / float(nL) ** p))
        V = H


def conv_theorem_check(F: SampledField, P: SampledField, conv: SampledField, K) -> float:
    """max over |k| <= K of |conv^[k; L] - F^[k; L] P^[k; L]|."""
    K = as_band(K)
    for name, X in (("F", F), ("P", P), ("conv", conv)):
        if X.spec.dims != K.grid.dims:
            raise DimensionError(f"{name} dims {X.spec.dims} must equal 2K+1 = {K.grid.dims}")
    cf = ffc_all(F, K).cube
    cp = ffc_all(P, K).cube
    cc = ffc_all(conv, K).cube
    return float(np.max(np.abs(cc - cf * cp)))
