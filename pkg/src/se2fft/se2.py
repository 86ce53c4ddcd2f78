"""Group algebra of SE(2), the planar rigid motions.

Elements are stored as a translation pair plus an angle in [0, 2*pi).
Besides the scalar API (``compose``, ``inverse``, ``log_vee``) there are
array versions operating on broadcastable numpy arrays of x, y and theta;
the quadrature oracles need those to stay tractable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi

# below this |omega| the closed forms of V and V^-1 switch to Taylor series
_SMALL_ANGLE = 1e-4


def wrap_angle(theta):
    """Map an angle (scalar or array) into [0, 2*pi)."""
    w = np.mod(theta, TWO_PI)
    # np.mod can return exactly 2*pi for tiny negative inputs
    w = np.where(w >= TWO_PI, 0.0, w)
    if np.ndim(w) == 0:
        return float(w)
    return w


def wrap_angle_signed(theta):
    """Map an angle (scalar or array) into (-pi, pi]."""
    w = math.pi - np.mod(math.pi - np.asarray(theta, dtype=float), TWO_PI)
    if np.ndim(w) == 0:
        return float(w)
    return w


@dataclass(frozen=True)
class SE2Element:
    """A planar pose ``(x, y, theta)`` with theta kept in [0, 2*pi)."""

    x: float
    y: float
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        object.__setattr__(self, "theta", wrap_angle(float(self.theta)))

    @classmethod
    def identity(cls) -> "SE2Element":
        return cls(0.0, 0.0, 0.0)

    @classmethod
    def from_matrix(cls, m) -> "SE2Element":
        m = np.asarray(m, dtype=float)
        return cls(m[0, 2], m[1, 2], math.atan2(m[1, 0], m[0, 0]))

    @property
    def translation(self) -> np.ndarray:
        return np.array([self.x, self.y])

    def matrix(self) -> np.ndarray:
        """3x3 homogeneous transformation matrix."""
        c, s = math.cos(self.theta), math.sin(self.theta)
        return np.array([[c, -s, self.x], [s, c, self.y], [0.0, 0.0, 1.0]])

    def __matmul__(self, other: "SE2Element") -> "SE2Element":
        return compose(self, other)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.theta)


@dataclass(frozen=True)
class Se2Tangent:
    """Element of the Lie algebra se(2) in vee coordinates ``(v1, v2, omega)``."""

    v1: float
    v2: float
    omega: float

    def hat(self) -> np.ndarray:
        return np.array(
            [
                [0.0, -self.omega, self.v1],
                [self.omega, 0.0, self.v2],
                [0.0, 0.0, 0.0],
            ]
        )

    def as_array(self) -> np.ndarray:
        return np.array([self.v1, self.v2, self.omega])

    def norm(self) -> float:
        return math.sqrt(self.v1**2 + self.v2**2 + self.omega**2)


def rotate(theta, x, y):
    """Apply R(theta) to the point(s) (x, y)."""
    c, s = np.cos(theta), np.sin(theta)
    return c * x - s * y, s * x + c * y


def compose(g: SE2Element, h: SE2Element) -> SE2Element:
    hx, hy = rotate(g.theta, h.x, h.y)
    return SE2Element(g.x + hx, g.y + hy, g.theta + h.theta)


def inverse(g: SE2Element) -> SE2Element:
    x, y = rotate(-g.theta, g.x, g.y)
    return SE2Element(-x, -y, -g.theta)


def compose_arrays(gx, gy, gt, hx, hy, ht):
    """Vectorised composition; returns (x, y, theta) with theta in [0, 2*pi)."""
    rx, ry = rotate(gt, hx, hy)
    return gx + rx, gy + ry, np.mod(gt + ht, TWO_PI)


def inverse_compose_arrays(gx, gy, gt, hx, hy, ht):
    """Vectorised ``g^-1 o h`` = (R(-theta_g)(x_h - x_g), theta_h - theta_g)."""
    rx, ry = rotate(-np.asarray(gt), np.asarray(hx) - gx, np.asarray(hy) - gy)
    return rx, ry, np.mod(np.asarray(ht) - gt, TWO_PI)


def _v_coeffs(omega):
    """Coefficients (a, b) with V(omega) = a I + b J."""
    omega = np.asarray(omega, dtype=float)
    small = np.abs(omega) < _SMALL_ANGLE
    safe = np.where(small, 1.0, omega)
    w2 = omega * omega
    a = np.where(small, 1.0 - w2 / 6.0 + w2 * w2 / 120.0, np.sin(safe) / safe)
    b = np.where(
        small,
        omega / 2.0 - omega * w2 / 24.0 + omega * w2 * w2 / 720.0,
        (1.0 - np.cos(safe)) / safe,
    )
    return a, b


def _v_inverse_coeffs(omega):
    """Coefficients (c, d) with V(omega)^-1 = c I + d J.

    V^-1 = (omega/2) cot(omega/2) I - (omega/2) J, which stays finite on
    the whole closed interval [-pi, pi].
    """
    omega = np.asarray(omega, dtype=float)
    small = np.abs(omega) < _SMALL_ANGLE
    safe = np.where(small, 1.0, omega)
    w2 = omega * omega
    half = safe / 2.0
    c = np.where(
        small,
        1.0 - w2 / 12.0 - w2 * w2 / 720.0,
        half * np.cos(half) / np.sin(half),
    )
    return c, -omega / 2.0


def log_vee_arrays(x, y, theta):
    """Vectorised matrix logarithm in vee coordinates.

    Returns ``(v1, v2, omega)`` with omega the angle wrapped to (-pi, pi].
    """
    omega = wrap_angle_signed(theta)
    c, d = _v_inverse_coeffs(omega)
    # (cI + dJ)(x, y) = (c x - d y, d x + c y)
    return c * x - d * y, d * x + c * y, omega


def log_vee(g: SE2Element) -> Se2Tangent:
    v1, v2, omega = log_vee_arrays(g.x, g.y, g.theta)
    return Se2Tangent(float(v1), float(v2), float(omega))


def exp_hat(t: Se2Tangent) -> SE2Element:
    """Closed-form exponential of the hat of ``t``."""
    a, b = _v_coeffs(t.omega)
    x = float(a * t.v1 - b * t.v2)
    y = float(b * t.v1 + a * t.v2)
    return SE2Element(x, y, t.omega)


def is_radial_in_translations(f, samples: int = 256, tol: float = 1e-10, seed: int = 0) -> bool:
    """Numerically check ``f(x, theta) == f(S x, theta)`` for random rotations S.

    ``f`` is any callable ``f(x, y, theta)`` accepting numpy arrays (a
    function descriptor qualifies). Draws ``samples`` seeded triples of a
    translation in the fundamental square, an angle and a rotation.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    x = rng.uniform(-0.5, 0.5, samples)
    y = rng.uniform(-0.5, 0.5, samples)
    theta = rng.uniform(0.0, TWO_PI, samples)
    alpha = rng.uniform(0.0, TWO_PI, samples)
    sx, sy = rotate(alpha, x, y)
    diff = np.abs(np.asarray(f(x, y, theta)) - np.asarray(f(sx, sy, theta)))
    return bool(np.all(diff <= tol))
