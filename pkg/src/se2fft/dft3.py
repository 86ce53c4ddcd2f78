"""3D DFT with unnormalized forward and 1/(LMN) inverse, plus Q and W arrays.

The fast transforms delegate to ``numpy.fft`` (pocketfft), which handles
arbitrary lengths including primes. ``naive_dft3`` is a literal triple
sum kept as an independent reference.
"""

from __future__ import annotations

import numpy as np

from .grid import DimensionError, GridSpec, SampledField, as_band, as_grid

NAIVE_SIZE_LIMIT = 4096


class Spectrum(SampledField):
    """DFT values of a sampled field, same shape and layout as the field."""

    __slots__ = ()


def _values(X) -> np.ndarray:
    if isinstance(X, SampledField):
        return X.values
    arr = np.asarray(X, dtype=np.complex128)
    if arr.ndim != 3:
        raise DimensionError(f"expected a 3D array, got shape {arr.shape}")
    return arr


def dft3(X) -> Spectrum:
    v = _values(X)
    return Spectrum(GridSpec(v.shape), np.fft.fftn(v, axes=(0, 1, 2)))


def idft3(X) -> SampledField:
    v = _values(X)
    return SampledField(GridSpec(v.shape), np.fft.ifftn(v, axes=(0, 1, 2)))


def _dft_matrix(n: int, sign: int) -> np.ndarray:
    # reduce the integer product first so large indices keep full accuracy
    a = np.arange(n)
    return np.exp(sign * 2j * np.pi * (np.outer(a, a) % n) / n)


def _naive(X, sign: int) -> np.ndarray:
    v = _values(X)
    if v.size > NAIVE_SIZE_LIMIT:
        raise ValueError(
            f"naive DFT refused: {v.size} points exceeds the limit of {NAIVE_SIZE_LIMIT}"
        )
    ex, ey, ez = (_dft_matrix(n, sign) for n in v.shape)
    return np.einsum("ijk,il,jm,kn->lmn", v, ex, ey, ez, optimize=False)


def naive_dft3(X) -> Spectrum:
    """Literal triple-sum forward DFT (reference only, size-guarded)."""
    out = _naive(X, -1)
    return Spectrum(GridSpec(out.shape), out)


def naive_idft3(X) -> SampledField:
    """Literal triple-sum inverse DFT with the 1/(LMN) factor."""
    out = _naive(X, +1)
    return SampledField(GridSpec(out.shape), out / out.size)


def _check_embedding(K, N):
    K = as_band(K)
    N = as_grid(N)
    L = K.grid
    if not N >= L:
        raise DimensionError(f"target grid {N.dims} is smaller than 2K+1 = {L.dims}")
    return K, L, N


def _axis_maps(k: int, n: int):
    """Output and input positions of the low and high corner blocks on one axis."""
    l = 2 * k + 1
    out = np.concatenate([np.arange(k + 1), np.arange(n - k, n)])
    src = np.concatenate([np.arange(k + 1), np.arange(k + 1, l)])
    return out, src


def embed_spectrum(Fhat, K, N) -> Spectrum:
    """Zero-padded embedding Q of an L-spectrum into an N-spectrum."""
    K, L, N = _check_embedding(K, N)
    v = _values(Fhat)
    if v.shape != L.dims:
        raise DimensionError(f"spectrum dims {v.shape} do not match 2K+1 = {L.dims}")
    if N.dims == L.dims:
        return Spectrum(N, v.copy())
    (ox, sx), (oy, sy), (oz, sz) = (_axis_maps(k, n) for k, n in zip(K.K, N.dims))
    Q = np.zeros(N.dims, dtype=np.complex128)
    Q[np.ix_(ox, oy, oz)] = v[np.ix_(sx, sy, sz)]
    return Spectrum(N, Q)


def signed_frequencies(k: int, n: int) -> np.ndarray:
    """Signed frequency carried by each bin of an n-point axis padded from order k.

    Bins outside the corner blocks are marked with a large sentinel that
    callers mask out.
    """
    f = np.full(n, np.iinfo(np.int64).max // 4, dtype=np.int64)
    f[: k + 1] = np.arange(k + 1)
    f[n - k :] = np.arange(-k, 0)
    return f


def support_mask(K, N) -> np.ndarray:
    K, L, N = _check_embedding(K, N)
    m = [np.zeros(n, dtype=bool) for n in N.dims]
    for mask, k, n in zip(m, K.K, N.dims):
        mask[: k + 1] = True
        mask[n - k :] = True
    return m[0][:, None, None] & m[1][None, :, None] & m[2][None, None, :]


def weight_array(K, N) -> Spectrum:
    """Alternating array W: (-1)^(k1+k2) on the corner blocks, 0 elsewhere."""
    K, L, N = _check_embedding(K, N)
    fx = signed_frequencies(K.K[0], N.dims[0])
    fy = signed_frequencies(K.K[1], N.dims[1])
    sx = np.where(fx % 2 == 0, 1.0, -1.0)
    sy = np.where(fy % 2 == 0, 1.0, -1.0)
    W = sx[:, None, None] * sy[None, :, None] * np.ones(N.dims[2])[None, None, :]
    W = np.where(support_mask(K, N), W, 0.0)
    return Spectrum(N, W.astype(np.complex128))


def hadamard(A, B) -> Spectrum:
    a, b = _values(A), _values(B)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    return Spectrum(GridSpec(a.shape), a * b)
