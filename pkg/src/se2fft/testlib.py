"""Analytic test functions on SE(2) and their JSON descriptors.

Every descriptor is an immutable callable ``f(x, y, theta)`` that
broadcasts over numpy arrays and returns complex values. Descriptors
serialise to ``{"kind": ..., "params": {...}}``; see ``from_json`` for the
accepted parameter names of each kind.
"""

from __future__ import annotations

import json
import math

import numpy as np

from . import se2
from .special import bessel_j, bessel_zero

TWO_PI = 2.0 * math.pi

# step of the central differences used when no analytic gradient is coded
FD_STEP = 1e-5


class DescriptorError(ValueError):
    """Invalid function descriptor; ``field`` names the offending parameter."""

    def __init__(self, message: str, field: str | None = None):
        self.field = field
        super().__init__(message if field is None else f"{field}: {message}")


def _check_positive_definite(M, name: str) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DescriptorError(f"expected a square matrix, got shape {M.shape}", name)
    if not np.allclose(M, M.T, rtol=0, atol=1e-12 * max(1.0, np.abs(M).max())):
        raise DescriptorError("matrix must be symmetric", name)
    for n in range(1, M.shape[0] + 1):
        if np.linalg.det(M[:n, :n]) <= 0:
            raise DescriptorError("matrix is not positive definite", name)
    return M


def _complex_to_json(c):
    c = complex(c)
    return c.real if c.imag == 0 else [c.real, c.imag]


def _complex_from_json(v, field):
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    raise DescriptorError(f"expected a number or [re, im], got {v!r}", field)


def _bcast(x, y, theta):
    x, y, theta = np.broadcast_arrays(
        np.asarray(x, dtype=float), np.asarray(y, dtype=float), np.asarray(theta, dtype=float)
    )
    return x, y, theta


class FunctionDescriptor:
    """Base class; subclasses implement ``_eval`` and ``params``."""

    kind: str = ""

    def __call__(self, x, y, theta):
        x, y, theta = _bcast(x, y, theta)
        return np.asarray(self._eval(x, y, theta), dtype=np.complex128)

    def eval(self, point) -> complex:
        x, y, t = point
        return complex(self(x, y, t))

    def _eval(self, x, y, theta):
        raise NotImplementedError

    def gradient(self, x, y, theta):
        """Analytic (d/dx, d/dy, d/dtheta), or None when not coded."""
        return None

    def params(self) -> dict:
        raise NotImplementedError

    def to_dict(self) -> dict:
        return {"kind": self.kind, "params": self.params()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def __eq__(self, other):
        return type(self) is type(other) and self.to_dict() == other.to_dict()

    def __hash__(self):
        return hash(self.to_json())

    def __repr__(self):
        return f"{type(self).__name__}({self.params()})"

    def __add__(self, other):
        return Sum((self, other))

    def __mul__(self, other):
        if isinstance(other, FunctionDescriptor):
            return Product((self, other))
        return Scale(other, self)

    __rmul__ = __mul__


class Constant(FunctionDescriptor):
    kind = "constant"

    def __init__(self, c=1.0):
        self.c = complex(c)

    def _eval(self, x, y, theta):
        return np.full(x.shape, self.c)

    def gradient(self, x, y, theta):
        z = np.zeros(np.broadcast(x, y, theta).shape)
        return z, z, z

    def params(self):
        return {"c": _complex_to_json(self.c)}


class Harmonic(FunctionDescriptor):
    """amp * exp(2 pi i (k1 x + k2 y)) * exp(i k3 theta)."""

    kind = "harmonic"

    def __init__(self, k, amp=1.0):
        self.k = tuple(int(a) for a in k)
        if len(self.k) != 3:
            raise DescriptorError("expected three integers", "k")
        self.amp = complex(amp)

    def _eval(self, x, y, theta):
        k1, k2, k3 = self.k
        return self.amp * np.exp(1j * (TWO_PI * (k1 * x + k2 * y) + k3 * theta))

    def gradient(self, x, y, theta):
        v = self(x, y, theta)
        k1, k2, k3 = self.k
        return 2j * math.pi * k1 * v, 2j * math.pi * k2 * v, 1j * k3 * v

    def params(self):
        return {"k": list(self.k), "amp": _complex_to_json(self.amp)}


class TrigPoly(FunctionDescriptor):
    """Trigonometric polynomial sum_{|k|<=K} c_k phi_k from a coefficient cube.

    ``coeffs[a, b, c]`` multiplies k = (a - Kx, b - Ky, c - Kr).
    """

    kind = "trig_poly"

    def __init__(self, K, coeffs):
        self.K = tuple(int(a) for a in K)
        c = np.asarray(coeffs, dtype=np.complex128)
        shape = tuple(2 * k + 1 for k in self.K)
        if c.size != shape[0] * shape[1] * shape[2]:
            raise DescriptorError(f"expected {shape} coefficients", "coeffs")
        self.coeffs = c.reshape(shape)

    def _eval(self, x, y, theta):
        Kx, Ky, Kr = self.K
        ex = np.exp(TWO_PI * 1j * np.multiply.outer(x.ravel(), np.arange(-Kx, Kx + 1)))
        ey = np.exp(TWO_PI * 1j * np.multiply.outer(y.ravel(), np.arange(-Ky, Ky + 1)))
        et = np.exp(1j * np.multiply.outer(theta.ravel(), np.arange(-Kr, Kr + 1)))
        out = np.einsum("pa,pb,pc,abc->p", ex, ey, et, self.coeffs, optimize=True)
        return out.reshape(x.shape)

    def params(self):
        flat = self.coeffs.reshape(-1)
        return {"K": list(self.K), "coeffs": [[float(c.real), float(c.imag)] for c in flat]}


class DeformedGaussian(FunctionDescriptor):
    """exp(-x^T H x) * exp(-(theta - nu)^2 / s), theta taken in [0, 2 pi)."""

    kind = "deformed_gaussian"

    def __init__(self, H, s, nu):
        self.H = _check_positive_definite(H, "H")
        if self.H.shape != (2, 2):
            raise DescriptorError("H must be 2x2", "H")
        self.s = float(s)
        if not self.s > 0:
            raise DescriptorError("must be positive", "s")
        self.nu = float(nu)

    @classmethod
    def from_inverse(cls, H_inv, s, nu):
        return cls(np.linalg.inv(np.asarray(H_inv, dtype=float)), s, nu)

    def _parts(self, x, y, theta):
        H = self.H
        hx = H[0, 0] * x + H[0, 1] * y
        hy = H[1, 0] * x + H[1, 1] * y
        dt = se2.wrap_angle(theta) - self.nu
        return hx, hy, dt

    def _eval(self, x, y, theta):
        hx, hy, dt = self._parts(x, y, theta)
        return np.exp(-(x * hx + y * hy) - dt * dt / self.s)

    def gradient(self, x, y, theta):
        x, y, theta = _bcast(x, y, theta)
        hx, hy, dt = self._parts(x, y, theta)
        v = np.exp(-(x * hx + y * hy) - dt * dt / self.s)
        return -2.0 * hx * v, -2.0 * hy * v, -2.0 * dt / self.s * v

    def params(self):
        return {"H": self.H.tolist(), "s": self.s, "nu": self.nu}


class SE2Gaussian(FunctionDescriptor):
    """exp(-v^T Sigma^-1 v / 2) with v = log(beta^-1 o g)^vee."""

    kind = "se2_gaussian"

    def __init__(self, beta, Sigma):
        if not isinstance(beta, se2.SE2Element):
            beta = se2.SE2Element(*beta)
        self.beta = beta
        self.Sigma = _check_positive_definite(Sigma, "Sigma")
        if self.Sigma.shape != (3, 3):
            raise DescriptorError("Sigma must be 3x3", "Sigma")
        self._Sinv = np.linalg.inv(self.Sigma)

    def _eval(self, x, y, theta):
        b = self.beta
        rx, ry, rt = se2.inverse_compose_arrays(b.x, b.y, b.theta, x, y, theta)
        v = np.stack(se2.log_vee_arrays(rx, ry, rt), axis=-1)
        quad = np.einsum("...i,ij,...j->...", v, self._Sinv, v)
        return np.exp(-0.5 * quad)

    def params(self):
        return {"beta": list(self.beta.as_tuple()), "Sigma": self.Sigma.tolist()}


class RadialSE2Gaussian(FunctionDescriptor):
    """exp(-|log(x, R_(theta - shift))^vee|^2 / (2 sigma^2)).

    The squared norm equals c(omega)^2 |x|^2 + (omega/2)^2 |x|^2 + omega^2,
    so the function depends on x only through |x|.
    """

    kind = "radial_se2_gaussian"

    def __init__(self, sigma2, shift=0.0):
        self.sigma2 = float(sigma2)
        if not self.sigma2 > 0:
            raise DescriptorError("must be positive", "sigma2")
        self.shift = float(shift)

    def _eval(self, x, y, theta):
        v1, v2, w = se2.log_vee_arrays(x, y, theta - self.shift)
        return np.exp(-(v1 * v1 + v2 * v2 + w * w) / (2.0 * self.sigma2))

    def params(self):
        return {"sigma2": self.sigma2, "shift": self.shift}


class PolarHarmonic(FunctionDescriptor):
    """Windowed polar harmonic J_m(z_{m,n} r / R) e^{i m phi} e^{i l theta} on r <= R.

    With the default R = 1/2 this is J_m(2 z_{m,n} r); the value vanishes
    for r > R and is continuous across r = R since J_m(z_{m,n}) = 0.
    """

    kind = "polar_harmonic"

    def __init__(self, m, n, l, radius=0.5):
        self.m, self.n, self.l = int(m), int(n), int(l)
        if self.m < 0:
            raise DescriptorError("must be nonnegative", "m")
        self.radius = float(radius)
        if not self.radius > 0:
            raise DescriptorError("must be positive", "radius")
        self.zero = bessel_zero(self.m, self.n)

    def _eval(self, x, y, theta):
        r = np.hypot(x, y)
        inside = r <= self.radius
        out = np.zeros(x.shape, dtype=np.complex128)
        if inside.any():
            ri = r[inside]
            radial = bessel_j(self.m, self.zero * ri / self.radius)
            phase = np.exp(1j * (self.m * np.arctan2(y[inside], x[inside]) + self.l * theta[inside]))
            out[inside] = radial * phase
        return out

    def params(self):
        return {"m": self.m, "n": self.n, "l": self.l, "radius": self.radius}


class Sum(FunctionDescriptor):
    kind = "sum"

    def __init__(self, terms):
        self.terms = tuple(terms)
        if not self.terms:
            raise DescriptorError("needs at least one term", "terms")

    def _eval(self, x, y, theta):
        return sum(t(x, y, theta) for t in self.terms)

    def gradient(self, x, y, theta):
        gs = [t.gradient(x, y, theta) for t in self.terms]
        if any(g is None for g in gs):
            return None
        return tuple(sum(g[i] for g in gs) for i in range(3))

    def params(self):
        return {"terms": [t.to_dict() for t in self.terms]}


class Scale(FunctionDescriptor):
    kind = "scale"

    def __init__(self, factor, f):
        self.factor = complex(factor)
        self.f = f

    def _eval(self, x, y, theta):
        return self.factor * self.f(x, y, theta)

    def gradient(self, x, y, theta):
        g = self.f.gradient(x, y, theta)
        if g is None:
            return None
        return tuple(self.factor * gi for gi in g)

    def params(self):
        return {"factor": _complex_to_json(self.factor), "f": self.f.to_dict()}


class Product(FunctionDescriptor):
    """Pointwise product, e.g. a harmonic times a window."""

    kind = "product"

    def __init__(self, terms):
        self.terms = tuple(terms)
        if not self.terms:
            raise DescriptorError("needs at least one term", "terms")

    def _eval(self, x, y, theta):
        out = self.terms[0](x, y, theta)
        for t in self.terms[1:]:
            out = out * t(x, y, theta)
        return out

    def params(self):
        return {"terms": [t.to_dict() for t in self.terms]}


class Periodized(FunctionDescriptor):
    """sum over |l1|, |l2| <= radius of f(x + l1, y + l2, theta)."""

    kind = "periodized"

    def __init__(self, f, shift_radius: int):
        self.f = f
        self.shift_radius = int(shift_radius)
        if self.shift_radius < 0:
            raise DescriptorError("must be nonnegative", "shift_radius")

    def _eval(self, x, y, theta):
        r = self.shift_radius
        out = np.zeros(x.shape, dtype=np.complex128)
        for a in range(-r, r + 1):
            for b in range(-r, r + 1):
                out = out + self.f(x + a, y + b, theta)
        return out

    def params(self):
        return {"f": self.f.to_dict(), "shift_radius": self.shift_radius}


def _get(params, name, field_prefix=""):
    if name not in params:
        raise DescriptorError("missing parameter", field_prefix + name)
    return params[name]


def from_dict(d: dict) -> FunctionDescriptor:
    """Build a descriptor from ``{"kind": ..., "params": {...}}``.

    Matrices may be given directly (``H``, ``Sigma``) or as inverses
    (``H_inv``, ``Sigma_inv``) since the usual parameter tables list the
    inverse.
    """
    if not isinstance(d, dict) or "kind" not in d:
        raise DescriptorError("descriptor must be an object with a 'kind'", "kind")
    kind = d["kind"]
    p = d.get("params", {})
    if not isinstance(p, dict):
        raise DescriptorError("must be an object", "params")
    try:
        if kind == "constant":
            return Constant(_complex_from_json(p.get("c", 1.0), "c"))
        if kind == "harmonic":
            return Harmonic(_get(p, "k"), _complex_from_json(p.get("amp", 1.0), "amp"))
        if kind == "trig_poly":
            raw = _get(p, "coeffs")
            coeffs = [_complex_from_json(c, "coeffs") for c in raw]
            return TrigPoly(_get(p, "K"), coeffs)
        if kind == "deformed_gaussian":
            if "H" in p:
                H = np.asarray(p["H"], dtype=float)
            elif "H_inv" in p:
                H = np.linalg.inv(np.asarray(p["H_inv"], dtype=float))
            else:
                raise DescriptorError("missing parameter (H or H_inv)", "H")
            return DeformedGaussian(H, _get(p, "s"), _get(p, "nu"))
        if kind == "se2_gaussian":
            if "Sigma" in p:
                S = np.asarray(p["Sigma"], dtype=float)
            elif "Sigma_inv" in p:
                S = np.linalg.inv(np.asarray(p["Sigma_inv"], dtype=float))
            else:
                raise DescriptorError("missing parameter (Sigma or Sigma_inv)", "Sigma")
            return SE2Gaussian(p.get("beta", [0.0, 0.0, 0.0]), S)
        if kind == "radial_se2_gaussian":
            return RadialSE2Gaussian(_get(p, "sigma2"), p.get("shift", 0.0))
        if kind == "polar_harmonic":
            return PolarHarmonic(_get(p, "m"), _get(p, "n"), p.get("l", 0), p.get("radius", 0.5))
        if kind == "sum":
            return Sum([from_dict(t) for t in _get(p, "terms")])
        if kind == "scale":
            return Scale(_complex_from_json(_get(p, "factor"), "factor"), from_dict(_get(p, "f")))
        if kind == "product":
            return Product([from_dict(t) for t in _get(p, "terms")])
        if kind == "periodized":
            return Periodized(from_dict(_get(p, "f")), _get(p, "shift_radius"))
    except DescriptorError:
        raise
    except (TypeError, ValueError, np.linalg.LinAlgError) as exc:
        raise DescriptorError(str(exc), kind) from None
    raise DescriptorError(f"unknown kind {kind!r}", "kind")


def from_json(text: str) -> FunctionDescriptor:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DescriptorError(f"invalid JSON: {exc.msg} at column {exc.colno}", "json") from None
    return from_dict(d)


def grad_sup_estimate(f: FunctionDescriptor, grid) -> float:
    """Max over the grid of the Euclidean norm of the (x, y, theta) gradient.

    Uses the analytic gradient when the descriptor codes one, otherwise
    central differences with step ``FD_STEP``.
    """
    from .grid import as_grid

    X, Y, T = as_grid(grid).mesh()
    g = f.gradient(X, Y, T)
    if g is None:
        h = FD_STEP
        g = (
            (f(X + h, Y, T) - f(X - h, Y, T)) / (2 * h),
            (f(X, Y + h, T) - f(X, Y - h, T)) / (2 * h),
            (f(X, Y, T + h) - f(X, Y, T - h)) / (2 * h),
        )
    norm2 = sum(np.abs(np.asarray(gi)) ** 2 for gi in g)
    return float(np.sqrt(np.max(norm2)))


# parameter sets used in the worked examples and the acceptance suite


def paper_deformed_gaussian() -> DeformedGaussian:
    """H = diag(0.04, 0.1)^-1, s = 0.4, nu = pi."""
    return DeformedGaussian(np.diag([25.0, 10.0]), 0.4, math.pi)


def paper_se2_gaussian() -> SE2Gaussian:
    """beta = (0, R_pi), Sigma = 0.05 I."""
    return SE2Gaussian(se2.SE2Element(0.0, 0.0, math.pi), 0.05 * np.eye(3))


def conv_example_pair() -> tuple[DeformedGaussian, DeformedGaussian]:
    """f with H = diag(0.03, 0.01)^-1 and rho with U = 50 I; s = 0.01, nu = pi/2."""
    f = DeformedGaussian(np.diag([1 / 0.03, 1 / 0.01]), 0.01, math.pi / 2)
    rho = DeformedGaussian(np.eye(2) / 0.02, 0.01, math.pi / 2)
    return f, rho
