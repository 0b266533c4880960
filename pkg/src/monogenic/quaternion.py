"""Quaternion and reduced-quaternion arithmetic, Cauchy-Riemann operators.

Components are always ordered ``(1, e1, e2, e3)``. Array routines operate on
the last axis so whole point clouds can be processed at once; the
:class:`Quaternion` and :class:`ReducedQuaternion` classes are thin immutable
wrappers for single values.

Finite-difference operators take a *field*: a callable mapping an array of
points with shape ``(..., 3)`` to values of shape ``(..., 3)`` (reduced
quaternions) or ``(..., 4)`` (quaternions).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError

Field = Callable[[np.ndarray], np.ndarray]

DEFAULT_STEP = 1e-5


# ---------------------------------------------------------------------------
# array arithmetic


def as_quaternion_array(a) -> np.ndarray:
    """Promote ``(..., 3)`` reduced-quaternion arrays to ``(..., 4)``."""
    a = np.asarray(a, dtype=float)
    if a.shape[-1] == 4:
        return a
    if a.shape[-1] == 3:
        return np.concatenate([a, np.zeros(a.shape[:-1] + (1,))], axis=-1)
    raise ValueError(f"expected trailing axis of length 3 or 4, got {a.shape}")


def qmul(a, b) -> np.ndarray:
    """Hamilton product of quaternion arrays (broadcasting over leading axes)."""
    a = as_quaternion_array(a)
    b = as_quaternion_array(b)
    a0, a1, a2, a3 = np.moveaxis(a, -1, 0)
    b0, b1, b2, b3 = np.moveaxis(b, -1, 0)
    return np.stack(
        [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ],
        axis=-1,
    )


def qconj(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a[..., 1:] *= -1.0
    return a


def qnorm(a) -> np.ndarray:
    return np.linalg.norm(np.asarray(a, dtype=float), axis=-1)


# units in (1, e1, e2, e3) order
ONE = np.array([1.0, 0.0, 0.0, 0.0])
E1 = np.array([0.0, 1.0, 0.0, 0.0])
E2 = np.array([0.0, 0.0, 1.0, 0.0])
E3 = np.array([0.0, 0.0, 0.0, 1.0])


# ---------------------------------------------------------------------------
# value types


@dataclass(frozen=True)
class Quaternion:
    a0: float = 0.0
    a1: float = 0.0
    a2: float = 0.0
    a3: float = 0.0

    @classmethod
    def from_array(cls, a) -> "Quaternion":
        return cls(*(float(v) for v in as_quaternion_array(a)))

    def as_array(self) -> np.ndarray:
        return np.array([self.a0, self.a1, self.a2, self.a3])

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = Quaternion(float(other))
        other = _promote(other)
        return Quaternion.from_array(self.as_array() + other.as_array())

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_promote(other))

    def __neg__(self):
        return Quaternion.from_array(-self.as_array())

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion.from_array(self.as_array() * other)
        return Quaternion.from_array(qmul(self.as_array(), _promote(other).as_array()))

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion.from_array(self.as_array() * other)
        return NotImplemented

    def conj(self) -> "Quaternion":
        return Quaternion(self.a0, -self.a1, -self.a2, -self.a3)

    def sc(self) -> float:
        return self.a0

    def vec(self) -> tuple[float, float, float]:
        return (self.a1, self.a2, self.a3)

    def norm(self) -> float:
        return math.sqrt(self.a0**2 + self.a1**2 + self.a2**2 + self.a3**2)

    def __abs__(self) -> float:
        return self.norm()


@dataclass(frozen=True)
class ReducedQuaternion:
    """Element ``x0 + x1 e1 + x2 e2`` of A, identified with a point of R^3.

    Sums and real multiples stay in A; products with anything else leave it
    and are returned as :class:`Quaternion`.
    """

    x0: float = 0.0
    x1: float = 0.0
    x2: float = 0.0

    @classmethod
    def from_array(cls, a) -> "ReducedQuaternion":
        a = np.asarray(a, dtype=float)
        if a.shape[-1] == 4 and a[3] != 0.0:
            raise ValueError("e3 component is nonzero; value is not in A")
        return cls(float(a[0]), float(a[1]), float(a[2]))

    def as_array(self) -> np.ndarray:
        return np.array([self.x0, self.x1, self.x2])

    def to_quaternion(self) -> Quaternion:
        return Quaternion(self.x0, self.x1, self.x2, 0.0)

    def __add__(self, other):
        if isinstance(other, ReducedQuaternion):
            return ReducedQuaternion(self.x0 + other.x0, self.x1 + other.x1, self.x2 + other.x2)
        if isinstance(other, (int, float)):
            return ReducedQuaternion(self.x0 + other, self.x1, self.x2)
        return self.to_quaternion() + other

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return ReducedQuaternion(-self.x0, -self.x1, -self.x2)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return ReducedQuaternion(self.x0 * other, self.x1 * other, self.x2 * other)
        return self.to_quaternion() * other

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self * other
        return NotImplemented

    def conj(self) -> "ReducedQuaternion":
        return ReducedQuaternion(self.x0, -self.x1, -self.x2)

    def sc(self) -> float:
        return self.x0

    def vec(self) -> tuple[float, float]:
        return (self.x1, self.x2)

    def norm(self) -> float:
        return math.sqrt(self.x0**2 + self.x1**2 + self.x2**2)

    def __abs__(self) -> float:
        return self.norm()


def _promote(x) -> Quaternion:
    if isinstance(x, Quaternion):
        return x
    if isinstance(x, ReducedQuaternion):
        return x.to_quaternion()
    if isinstance(x, (int, float)):
        return Quaternion(float(x))
    return Quaternion.from_array(x)


def quat_mul(a, b) -> Quaternion:
    return _promote(a) * _promote(b)


def sc(x) -> float:
    return _promote(x).a0


def vec(x):
    return x.vec()


def conj(x):
    return x.conj()


def norm(x) -> float:
    return _promote(x).norm()


# ---------------------------------------------------------------------------
# finite differences


def _check_stencil(p: np.ndarray, h: float) -> None:
    if h <= 0:
        raise DomainError(f"step must be positive, got {h}")
    reach = np.linalg.norm(p, axis=-1) + h
    if np.any(reach >= 1.0):
        raise DomainError("finite-difference stencil leaves the unit ball (|p| + h >= 1)")


def partials_fd(f: Field, p, h: float = DEFAULT_STEP) -> np.ndarray:
    """Central differences of ``f`` along x0, x1, x2.

    Returns an array of shape ``(3, ..., 4)``: entry ``i`` approximates
    ``d f / d x_i`` as a quaternion.
    """
    p = np.asarray(p, dtype=float)
    _check_stencil(p, h)
    steps = np.eye(3) * h
    shifted = np.stack([p + s for s in steps] + [p - s for s in steps])
    values = as_quaternion_array(f(shifted))
    return (values[:3] - values[3:]) / (2.0 * h)


def apply_D_fd(f: Field, p, h: float = DEFAULT_STEP) -> np.ndarray:
    """``D f = d0 f + e1 d1 f + e2 d2 f`` by central differences, shape ``(..., 4)``."""
    d = partials_fd(f, p, h)
    return d[0] + qmul(E1, d[1]) + qmul(E2, d[2])


def apply_Dbar_fd(f: Field, p, h: float = DEFAULT_STEP) -> np.ndarray:
    d = partials_fd(f, p, h)
    return d[0] - qmul(E1, d[1]) - qmul(E2, d[2])


def apply_hyperderivative_fd(f: Field, p, h: float = DEFAULT_STEP) -> np.ndarray:
    """Hypercomplex derivative ``(1/2) Dbar f`` by central differences."""
    return 0.5 * apply_Dbar_fd(f, p, h)


def riesz_residual(f: Field, p, h: float = DEFAULT_STEP) -> tuple[np.ndarray, np.ndarray]:
    """Divergence and curl of the conjugate field ``(f0, -f1, -f2)``.

    Both vanish exactly for solutions of the Riesz system. Returns
    ``(div, curl)`` with shapes ``(...)`` and ``(..., 3)``.
    """
    d = partials_fd(f, p, h)
    # v_j = conj(f)_j ; dv[i][..., j] = d v_j / d x_i
    dv = d[..., :3] * np.array([1.0, -1.0, -1.0])
    div = dv[0][..., 0] + dv[1][..., 1] + dv[2][..., 2]
    curl = np.stack(
        [
            dv[1][..., 2] - dv[2][..., 1],
            dv[2][..., 0] - dv[0][..., 2],
            dv[0][..., 1] - dv[1][..., 0],
        ],
        axis=-1,
    )
    return div, curl


def laplacian_fd(f: Field, p, h: float = DEFAULT_STEP) -> np.ndarray:
    """Componentwise 7-point Laplacian, shape ``(..., 4)``."""
    p = np.asarray(p, dtype=float)
    _check_stencil(p, h)
    center = as_quaternion_array(f(p))
    total = -6.0 * center
    for s in np.eye(3) * h:
        total = total + as_quaternion_array(f(p + s)) + as_quaternion_array(f(p - s))
    return total / h**2


def observed_order(residual_h: float, residual_half: float) -> float:
    """Convergence order from residuals at step ``h`` and ``h/2``."""
    if residual_half <= 0.0:
        return math.inf
    return math.log2(residual_h / residual_half)
