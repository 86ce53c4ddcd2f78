"""Finite Fourier coefficients and finite Fourier series on the fundamental domain.

Coefficients of a field sampled on the odd grid L = 2K + 1 are sign-weighted
DFT values: fhat[k; L] = (-1)^(k1+k2) / |L| * Fhat(tau_L(k)). The sign
comes from the -1/2 offset of the x and y grids.
"""

from __future__ import annotations

import math

import numpy as np

from . import dft3 as _dft
from .grid import DimensionError, SampledField, as_band, as_grid, tau

TWO_PI = 2.0 * math.pi


def basis_phi(k, point) -> complex:
    """phi_k(x, y, theta) = exp(2 pi i (k1 x + k2 y)) exp(i k3 theta)."""
    k1, k2, k3 = k
    x, y, t = point
    return complex(np.exp(1j * (TWO_PI * (k1 * x + k2 * y) + k3 * t)))


def basis_phi_arrays(k, x, y, theta):
    k1, k2, k3 = k
    return np.exp(1j * (TWO_PI * (k1 * np.asarray(x) + k2 * np.asarray(y)) + k3 * np.asarray(theta)))


def _xy_sign(k1: int, k2: int) -> float:
    return -1.0 if (k1 + k2) % 2 else 1.0


class FourierCoefficientSet:
    """All coefficients with |k| <= K held as a cube.

    ``cube[k1 + Kx, k2 + Ky, k3 + Kr]`` is the coefficient of phi_k, so the
    flat (C order) index runs k1-major over -Kx..Kx, then k2, then k3.
    """

    __slots__ = ("K", "cube")

    def __init__(self, K, cube):
        self.K = as_band(K)
        c = np.asarray(cube, dtype=np.complex128)
        shape = self.K.grid.dims
        if c.size != shape[0] * shape[1] * shape[2]:
            raise DimensionError(f"coefficient cube must have shape {shape}")
        self.cube = c.reshape(shape)

    def _pos(self, k):
        Kx, Ky, Kr = self.K.K
        k1, k2, k3 = (int(a) for a in k)
        if abs(k1) > Kx or abs(k2) > Ky or abs(k3) > Kr:
            raise IndexError(f"k={k} outside band limit {self.K.K}")
        return k1 + Kx, k2 + Ky, k3 + Kr

    def __getitem__(self, k) -> complex:
        return complex(self.cube[self._pos(k)])

    def flat_index(self, k) -> int:
        a, b, c = self._pos(k)
        _, ly, lr = self.cube.shape
        return (a * ly + b) * lr + c

    def indices(self):
        """Iterate over all k in flat order."""
        Kx, Ky, Kr = self.K.K
        for a in range(-Kx, Kx + 1):
            for b in range(-Ky, Ky + 1):
                for c in range(-Kr, Kr + 1):
                    yield (a, b, c)

    @property
    def flat(self) -> np.ndarray:
        return self.cube.reshape(-1)

    def to_spectrum(self):
        """Invert ``ffc_all``: the L-grid spectrum whose coefficients are this set."""
        L = self.K.grid
        return _dft.Spectrum(L, np.fft.ifftshift(self.cube * sign_cube(self.K) * L.size))


def ffc_direct(F: SampledField, k) -> complex:
    """Sample average of F * conj(phi_k) over the grid."""
    X, Y, T = F.spec.mesh()
    return complex(np.mean(F.values * np.conj(basis_phi_arrays(k, X, Y, T))))


def ffc(F: SampledField, k, Fhat=None) -> complex:
    """Finite Fourier coefficient of F at k, read off one DFT value.

    Pass a precomputed ``Fhat`` to avoid repeating the transform.
    """
    if Fhat is None:
        Fhat = _dft.dft3(F)
    Lx, Ly, Lr = F.spec.dims
    k1, k2, k3 = (int(a) for a in k)
    v = Fhat.values[tau(Lx, k1), tau(Ly, k2), tau(Lr, k3)]
    return complex(_xy_sign(k1, k2) * v / F.spec.size)


def coeffs_from_spectrum(Fhat, K) -> FourierCoefficientSet:
    K = as_band(K)
    v = Fhat.values if isinstance(Fhat, SampledField) else np.asarray(Fhat)
    L = K.grid
    if v.shape != L.dims:
        raise DimensionError(f"spectrum dims {v.shape} do not match 2K+1 = {L.dims}")
    return FourierCoefficientSet(K, np.fft.fftshift(v) * sign_cube(K) / L.size)


def ffc_all(F: SampledField, K) -> FourierCoefficientSet:
    """All coefficients |k| <= K from a single dft3 of F sampled on 2K+1."""
    K = as_band(K)
    if F.spec.dims != K.grid.dims:
        raise DimensionError(f"field dims {F.spec.dims} must equal 2K+1 = {K.grid.dims}")
    return coeffs_from_spectrum(_dft.dft3(F), K)


def plan_order_for_accuracy(grad_sup: float, k, eps: float) -> int:
    """Smallest K guaranteed by the 32 |grad f| / K error bound, at least 1."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    if grad_sup < 0:
        raise ValueError("grad_sup must be nonnegative")
    kinf = max(abs(int(a)) for a in k)
    return max(1, int(math.ceil(max(32.0 * grad_sup / eps, kinf))))


def series_eval_point(C: FourierCoefficientSet, point) -> complex:
    """Direct sum of c_k phi_k at one point."""
    x, y, t = point
    Kx, Ky, Kr = C.K.K
    ex = np.exp(TWO_PI * 1j * np.arange(-Kx, Kx + 1) * x)
    ey = np.exp(TWO_PI * 1j * np.arange(-Ky, Ky + 1) * y)
    et = np.exp(1j * np.arange(-Kr, Kr + 1) * t)
    return complex(np.einsum("abc,a,b,c->", C.cube, ex, ey, et))


def series_eval_grid(Fhat, K, N) -> SampledField:
    """S_K[f] on the N-grid: (|N| / |L|) idft3(Q).

    The (-1)^(k1+k2) coefficient signs cancel against the phase of the
    N-grid offset, so no weight array is needed here.
    """
    K = as_band(K)
    N = as_grid(N)
    L = K.grid
    if N.dims == L.dims:
        return _dft.idft3(Fhat)
    Q = _dft.embed_spectrum(Fhat, K, N)
    out = _dft.idft3(Q)
    return SampledField(N, out.values * (N.size / L.size))


def sign_cube(K) -> np.ndarray:
    """(-1)^(k1+k2) over the coefficient cube, broadcastable to its shape."""
    K = as_band(K)
    k1, k2 = (np.arange(-k, k + 1) for k in K.K[:2])
    return np.where((k1[:, None] + k2[None, :]) % 2 == 0, 1.0, -1.0)[:, :, None]



def ffc_1d(U, a: float, b: float, K: int) -> np.ndarray:
    """Finite Fourier coefficients on [a, b] for |k| <= K, indexed [k + K].

    Basis e_k(x) = exp(2 pi i k x / (b - a)); samples at x_i = a + i (b - a) / L
    with L = 2K + 1.
    """
    K = int(K)
    if K < 0 or not b > a:
        raise ValueError("need K >= 0 and b > a")
    L = 2 * K + 1
    x = a + (b - a) * np.arange(L) / L
    Uhat = np.fft.fft(np.asarray(U(x), dtype=np.complex128))
    k = np.arange(-K, K + 1)
    # e_k(x_i) = kappa^k exp(2 pi i k i / L) with kappa = exp(2 pi i a / (b - a))
    kappa = np.exp(-TWO_PI * 1j * k * a / (b - a))
    return kappa * Uhat[k % L] / L
