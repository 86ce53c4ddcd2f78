"""Slow reference computations: quadrature coefficients and direct convolution.

Nothing here calls an FFT. Coefficients are plain weighted sums against
explicit exponentials and the convolution is a brute-force sum over the
quadrature nodes, built on the group operations in ``se2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import se2
from .grid import as_band

TWO_PI = 2.0 * math.pi
RULES = ("midpoint", "trapezoid")

# bound on the number of complex temporaries per vectorised block
_BLOCK = 1 << 21


@dataclass(frozen=True)
class QuadratureSpec:
    """Tensor-product rule on the fundamental domain with equal weights.

    ``trapezoid`` is the periodic trapezoid rule (left endpoints, the same
    nodes as the sampling grid); ``midpoint`` shifts every node by half a
    cell.
    """

    resolution: tuple[int, int, int]
    rule: str = "midpoint"

    def __post_init__(self):
        r = self.resolution
        if np.ndim(r) == 0:
            r = (r, r, r)
        r = tuple(int(a) for a in r)
        if len(r) != 3 or min(r) < 2:
            raise ValueError(f"resolution must be three integers >= 2, got {self.resolution!r}")
        if self.rule not in RULES:
            raise ValueError(f"rule must be one of {RULES}, got {self.rule!r}")
        object.__setattr__(self, "resolution", r)

    def nodes(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        off = 0.5 if self.rule == "midpoint" else 0.0
        nx, ny, nr = self.resolution
        x = -0.5 + (np.arange(nx) + off) / nx
        y = -0.5 + (np.arange(ny) + off) / ny
        t = TWO_PI * (np.arange(nr) + off) / nr
        return x, y, t

    @property
    def size(self) -> int:
        nx, ny, nr = self.resolution
        return nx * ny * nr


def trapezoid_on_grid(L) -> QuadratureSpec:
    """T_L: the trapezoid rule whose nodes are the sampling grid L."""
    dims = L.dims if hasattr(L, "dims") else L
    return QuadratureSpec(tuple(dims), "trapezoid")


def fourier_coeff_quadrature(f, k, q: QuadratureSpec) -> complex:
    """Average of f * conj(phi_k) over the quadrature nodes."""
    k1, k2, k3 = (int(a) for a in k)
    x, y, t = q.nodes()
    ex = np.exp(-TWO_PI * 1j * k1 * x)
    ey = np.exp(-TWO_PI * 1j * k2 * y)
    et = np.exp(-1j * k3 * t)
    total = 0.0 + 0.0j
    step = max(1, _BLOCK // (len(y) * len(t)))
    for a in range(0, len(x), step):
        xs = x[a : a + step]
        vals = f(xs[:, None, None], y[None, :, None], t[None, None, :])
        total += np.einsum("abc,a,b,c->", vals, ex[a : a + step], ey, et)
    return complex(total / q.size)


def fourier_coeffs_quadrature_all(f, K, q: QuadratureSpec) -> np.ndarray:
    """Quadrature coefficients for every |k| <= K as a cube indexed [k + K].

    Uses separable exponential matrices, one contraction per axis.
    """
    K = as_band(K)
    Kx, Ky, Kr = K.K
    x, y, t = q.nodes()
    ex = np.exp(-TWO_PI * 1j * np.outer(x, np.arange(-Kx, Kx + 1)))
    ey = np.exp(-TWO_PI * 1j * np.outer(y, np.arange(-Ky, Ky + 1)))
    et = np.exp(-1j * np.outer(t, np.arange(-Kr, Kr + 1)))
    out = np.zeros((2 * Kx + 1, 2 * Ky + 1, 2 * Kr + 1), dtype=np.complex128)
    step = max(1, _BLOCK // (len(y) * len(t)))
    for a in range(0, len(x), step):
        xs = x[a : a + step]
        vals = np.asarray(f(xs[:, None, None], y[None, :, None], t[None, None, :]), dtype=np.complex128)
        tmp = vals @ et  # (cx, ny, 2Kr+1)
        tmp = np.einsum("abc,bm->amc", tmp, ey)
        out += np.einsum("amc,al->lmc", tmp, ex[a : a + step])
    return out / q.size


def _node_samples(f, q: QuadratureSpec):
    x, y, t = q.nodes()
    X, Y, T = np.meshgrid(x, y, t, indexing="ij")
    vals = np.asarray(f(X, Y, T), dtype=np.complex128).ravel()
    keep = vals != 0
    return X.ravel()[keep], Y.ravel()[keep], T.ravel()[keep], vals[keep]


def se2_convolution_direct_many(f, rho, hx, hy, ht, q: QuadratureSpec) -> np.ndarray:
    """(f * rho)(h) = average over nodes g of f(g) rho(g^-1 o h), for many h.

    ``hx, hy, ht`` are equal-length 1D arrays. Nodes where f is exactly
    zero contribute nothing and are skipped.
    """
    hx, hy, ht = (np.asarray(a, dtype=float).ravel() for a in (hx, hy, ht))
    gx, gy, gt, fv = _node_samples(f, q)
    out = np.zeros(hx.shape, dtype=np.complex128)
    if fv.size == 0:
        return out
    step = max(1, _BLOCK // fv.size)
    for a in range(0, hx.size, step):
        sl = slice(a, a + step)
        rx, ry, rt = se2.inverse_compose_arrays(
            gx[None, :], gy[None, :], gt[None, :], hx[sl, None], hy[sl, None], ht[sl, None]
        )
        out[sl] = rho(rx, ry, rt) @ fv
    return out / q.size


def se2_convolution_direct(f, rho, h, q: QuadratureSpec) -> complex:
    """Direct quadrature of the SE(2) convolution at one element ``h``."""
    if not isinstance(h, se2.SE2Element):
        h = se2.SE2Element(*h)
    out = se2_convolution_direct_many(f, rho, [h.x], [h.y], [h.theta], q)
    return complex(out[0])


def se2_convolution_direct_grid(f, rho, N, q: QuadratureSpec) -> np.ndarray:
    """Direct convolution at every point of the grid ``N``; returns shape N.dims."""
    from .grid import as_grid

    N = as_grid(N)
    X, Y, T = N.mesh()
    return se2_convolution_direct_many(f, rho, X, Y, T, q).reshape(N.dims)


def support_mass_outside(f, radius: float, q: QuadratureSpec) -> float:
    """max |f| over nodes whose translation lies outside the disk of ``radius``."""
    x, y, t = q.nodes()
    X, Y, T = np.meshgrid(x, y, t, indexing="ij")
    outside = np.hypot(X, Y) > radius
    if not outside.any():
        return 0.0
    return float(np.max(np.abs(f(X[outside], Y[outside], T[outside]))))
