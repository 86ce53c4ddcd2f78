"""Bessel functions of the first kind of integer order and their zeros."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

MAX_ZERO_ORDER = 20
MAX_ZERO_INDEX = 50

# below this argument the ascending series is used directly
_SERIES_CUTOFF = 8.0
_RESCALE = 1e250


def _series(m: int, x: np.ndarray) -> np.ndarray:
    """Ascending power series sum_j (-1)^j (x/2)^(2j+m) / (j! (j+m)!)."""
    h = x / 2.0
    term = h**m / math.factorial(m)
    total = term.copy()
    q = -(h * h)
    for j in range(1, 80):
        term = term * q / (j * (j + m))
        total = total + term
        if np.all(np.abs(term) <= 1e-17 * np.maximum(np.abs(total), 1e-300)):
            break
    return total


def _miller(m: int, x: np.ndarray) -> np.ndarray:
    """Downward recurrence normalised by J0 + 2 sum_k J_2k = 1.

    Runs on a whole array at once, starting from an even order chosen for
    the largest argument.
    """
    xmax = float(np.max(x))
    start = int(xmax + m + 20 + 12 * xmax ** (1.0 / 3.0))
    start += start % 2
    j_next = np.zeros_like(x)
    j_cur = np.full_like(x, 1e-300)
    norm = np.zeros_like(x)
    result = np.zeros_like(x)
    for n in range(start, 0, -1):
        # J_{n-1} = (2n/x) J_n - J_{n+1}
        j_prev = (2.0 * n / x) * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        if n - 1 == m:
            result = j_cur.copy()
        if (n - 1) % 2 == 0 and n > 1:
            norm += 2.0 * j_cur
        big = np.abs(j_cur) > _RESCALE
        if big.any():
            scale = np.where(big, 1.0 / _RESCALE, 1.0)
            j_cur *= scale
            j_next *= scale
            result *= scale
            norm *= scale
    norm += j_cur
    return result / norm


def bessel_j(m: int, x):
    """J_m(x) for integer m >= 0 and x >= 0; accepts scalars or arrays.

    Negative arguments are handled through J_m(-x) = (-1)^m J_m(x).
    """
    m = int(m)
    if m < 0:
        raise ValueError("order must be nonnegative")
    arr = np.asarray(x, dtype=float)
    sign = np.where((arr < 0) & (m % 2 == 1), -1.0, 1.0)
    ax = np.abs(arr)
    out = np.empty_like(ax)
    small = ax < _SERIES_CUTOFF
    if small.any():
        out[small] = _series(m, ax[small])
    big = ~small
    if big.any():
        out[big] = _miller(m, ax[big])
    out = out * sign
    if out.ndim == 0:
        return float(out)
    return out


def _mcmahon(m: int, n: int) -> float:
    beta = (n + m / 2.0 - 0.25) * math.pi
    mu = 4.0 * m * m
    return beta - (mu - 1) / (8 * beta) - 4 * (mu - 1) * (7 * mu - 31) / (3 * (8 * beta) ** 3)


def _bisect(m: int, a: float, b: float, fa: float) -> float:
    while b - a > 1e-13:
        c = 0.5 * (a + b)
        fc = bessel_j(m, c)
        if fc == 0.0:
            return c
        if (fc > 0) == (fa > 0):
            a, fa = c, fc
        else:
            b = c
    return 0.5 * (a + b)


@lru_cache(maxsize=None)
def _zeros(m: int) -> tuple[float, ...]:
    """First MAX_ZERO_INDEX positive zeros of J_m.

    Zeros are bracketed by a sign-change scan starting at x = m (there are
    none in (0, m]), with steps well below the zero spacing of about pi.
    """
    zs = []
    step = 0.25
    a = max(float(m), 1e-3)
    fa = bessel_j(m, a)
    while len(zs) < MAX_ZERO_INDEX:
        b = a + step
        fb = bessel_j(m, b)
        if fb == 0.0:
            zs.append(b)
            a = b + 1e-9
            fa = bessel_j(m, a)
            continue
        if (fa > 0) != (fb > 0):
            zs.append(_bisect(m, a, b, fa))
        a, fa = b, fb
    return tuple(zs)


def bessel_zero(m: int, n: int) -> float:
    """n-th positive zero z_{m,n} of J_m (m <= 20, n <= 50)."""
    m, n = int(m), int(n)
    if not (0 <= m <= MAX_ZERO_ORDER) or not (1 <= n <= MAX_ZERO_INDEX):
        raise ValueError(
            f"bessel_zero supports 0 <= m <= {MAX_ZERO_ORDER}, 1 <= n <= {MAX_ZERO_INDEX}; got m={m}, n={n}"
        )
    return _zeros(m)[n - 1]


def mcmahon_guess(m: int, n: int) -> float:
    """Asymptotic estimate of z_{m,n}, useful as a sanity bracket."""
    return _mcmahon(int(m), int(n))
