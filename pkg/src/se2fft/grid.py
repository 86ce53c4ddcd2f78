"""Fundamental domain sampling grids and the sampled-field container.

The fundamental domain is [-1/2, 1/2)^2 x [0, 2*pi). A grid of size
(Lx, Ly, Lr) uses left endpoints only, so no seam sample is duplicated.
Fields are held as complex arrays of shape (Lx, Ly, Lr); flattening in C
order gives the i-major, l-fastest file layout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi


class DimensionError(ValueError):
    """Raised when grid, band limit or array dimensions are incompatible."""


class SamplingError(ValueError):
    """Raised when a function evaluates to a non-finite value on a grid."""

    def __init__(self, index, point, value):
        self.index = tuple(int(i) for i in index)
        self.point = point
        self.value = value
        super().__init__(
            f"non-finite value {value!r} at grid index {self.index} (point {point})"
        )


def _triple(v, name: str) -> tuple[int, int, int]:
    if np.ndim(v) == 0:
        v = (v, v, v)
    t = tuple(int(a) for a in v)
    if len(t) != 3:
        raise DimensionError(f"{name} must have three components, got {v!r}")
    return t


@dataclass(frozen=True)
class GridSpec:
    """Grid size vector L = (Lx, Ly, Lr)."""

    dims: tuple[int, int, int]

    def __post_init__(self):
        dims = _triple(self.dims, "dims")
        if min(dims) < 1:
            raise DimensionError(f"grid dims must be >= 1, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def size(self) -> int:
        return self.dims[0] * self.dims[1] * self.dims[2]

    def axes(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """The 1D coordinate vectors x_i, y_j and theta_l."""
        lx, ly, lr = self.dims
        x = -0.5 + np.arange(lx) / lx
        y = -0.5 + np.arange(ly) / ly
        t = TWO_PI * np.arange(lr) / lr
        return x, y, t

    def mesh(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return np.meshgrid(*self.axes(), indexing="ij")

    def __ge__(self, other: "GridSpec") -> bool:
        return all(a >= b for a, b in zip(self.dims, other.dims))


@dataclass(frozen=True)
class BandLimit:
    """Order vector K = (Kx, Ky, Kr) of a finite Fourier series."""

    K: tuple[int, int, int]

    def __post_init__(self):
        K = _triple(self.K, "K")
        if min(K) < 1:
            raise DimensionError(f"band limit must be >= 1 in every axis, got {K}")
        object.__setattr__(self, "K", K)

    @property
    def grid(self) -> GridSpec:
        """The odd grid L = 2K + 1."""
        return GridSpec(tuple(2 * k + 1 for k in self.K))

    @property
    def min(self) -> int:
        return min(self.K)


def as_grid(g) -> GridSpec:
    return g if isinstance(g, GridSpec) else GridSpec(g)


def as_band(K) -> BandLimit:
    return K if isinstance(K, BandLimit) else BandLimit(K)


class SampledField:
    """Complex samples of a function on a grid.

    ``values`` has shape ``spec.dims``; ``flat`` is the layout-ordered
    vector, index ((i-1)*Ly + (j-1))*Lr + (l-1).
    """

    __slots__ = ("spec", "values")

    def __init__(self, spec, values):
        spec = as_grid(spec)
        arr = np.asarray(values, dtype=np.complex128)
        if arr.size != spec.size:
            raise DimensionError(
                f"field has {arr.size} values but grid {spec.dims} needs {spec.size}"
            )
        self.spec = spec
        self.values = arr.reshape(spec.dims)

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.spec.dims

    @property
    def flat(self) -> np.ndarray:
        return self.values.reshape(-1)

    def __repr__(self):
        return f"{type(self).__name__}(dims={self.dims})"


def grid_points(spec) -> np.ndarray:
    """All grid points as an array of shape (Lx*Ly*Lr, 3) in layout order."""
    X, Y, T = as_grid(spec).mesh()
    return np.stack([X.ravel(), Y.ravel(), T.ravel()], axis=1)


def tau(L: int, k: int) -> int:
    """Nonnegative remainder of k modulo L."""
    if L < 1:
        raise ValueError("L must be >= 1")
    return int(k) % int(L)


def sample(f, spec) -> SampledField:
    """Evaluate ``f(x, y, theta)`` at every point of the grid."""
    spec = as_grid(spec)
    X, Y, T = spec.mesh()
    vals = np.broadcast_to(np.asarray(f(X, Y, T), dtype=np.complex128), spec.dims)
    bad = ~np.isfinite(vals)
    if bad.any():
        idx = np.argwhere(bad)[0]
        i, j, l = idx
        point = (float(X[i, j, l]), float(Y[i, j, l]), float(T[i, j, l]))
        raise SamplingError(idx, point, complex(vals[i, j, l]))
    return SampledField(spec, vals.copy())


def periodize_point(x: float, y: float) -> tuple[float, float]:
    """Representative of (x, y) modulo Z^2 in [-1/2, 1/2)^2."""
    s = x - math.floor(x + 0.5)
    t = y - math.floor(y + 0.5)
    # rounding can push a value that should be -1/2 up to exactly +1/2
    if s >= 0.5:
        s -= 1.0
    if t >= 0.5:
        t -= 1.0
    return s, t


def periodize_arrays(x, y):
    """Vectorised ``periodize_point``."""
    s = np.asarray(x, dtype=float)
    t = np.asarray(y, dtype=float)
    s = s - np.floor(s + 0.5)
    t = t - np.floor(t + 0.5)
    s = np.where(s >= 0.5, s - 1.0, s)
    t = np.where(t >= 0.5, t - 1.0, t)
    return s, t


def periodize_function(f, shift_radius: int):
    """Finite lattice periodization of ``f`` over |l1|, |l2| <= shift_radius."""
    from .testlib import Periodized

    return Periodized(f, int(shift_radius))
