"""Homogeneous monogenic polynomials X_n^l and Y_n^m on R^3.

For each degree ``n`` the family consists of ``X_n^l`` (``l = 0..n+1``) and
``Y_n^m`` (``m = 1..n+1``), giving the ``2n + 3`` dimensional space of
A-valued homogeneous monogenic polynomials of that degree. Values returned
here are unnormalized; see :mod:`monogenic.quadrature` for the L2 norms.

Angular factors are evaluated in trigonometric form from
``phi = atan2(x2, x1)``, so points on the x0-axis need no special casing
beyond ``phi = 0``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InvalidIndexError
from .special import factorial_ratio, legendre_row, legendre_table


class Family(str, enum.Enum):
    X = "X"
    Y = "Y"


@dataclass(frozen=True, order=True)
class BasisIndex:
    family: Family
    n: int
    m: int

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if self.n < 0:
            raise InvalidIndexError(f"negative degree in {self}")
        lo = 0 if self.family is Family.X else 1
        if not lo <= self.m <= self.n + 1:
            raise InvalidIndexError(
                f"order {self.m} out of range [{lo}, {self.n + 1}] for family {self.family.value}"
            )

    @property
    def is_hyperholomorphic_constant(self) -> bool:
        return self.m == self.n + 1

    def label(self) -> str:
        return f"{self.family.value}[{self.n},{self.m}]"

    def __str__(self) -> str:
        return self.label()


def enumerate_basis(n: int) -> list[BasisIndex]:
    """Indices of degree ``n`` in canonical order: X_n^0..X_n^{n+1}, Y_n^1..Y_n^{n+1}."""
    if n < 0:
        raise InvalidIndexError(f"negative degree {n}")
    return [BasisIndex(Family.X, n, m) for m in range(n + 2)] + [
        BasisIndex(Family.Y, n, m) for m in range(1, n + 2)
    ]


def enumerate_upto(n_max: int) -> list[BasisIndex]:
    """All indices with degree ``<= n_max``, degree by degree."""
    return [idx for n in range(n_max + 1) for idx in enumerate_basis(n)]


def basis_size(n_max: int) -> int:
    return (n_max + 1) * (n_max + 3)


def degree_offset(n: int) -> int:
    """Position of the first degree-``n`` index in :func:`enumerate_upto`."""
    return n * (n + 2)


def flat_position(idx: BasisIndex) -> int:
    local = idx.m if idx.family is Family.X else idx.n + 1 + idx.m
    return degree_offset(idx.n) + local


# ---------------------------------------------------------------------------
# spherical coordinates


@dataclass(frozen=True)
class SphericalPoint:
    r: float
    theta: float
    phi: float

    @classmethod
    def from_cartesian(cls, p) -> "SphericalPoint":
        r, t, phi = _spherical(np.asarray(p, dtype=float))
        return cls(float(r), float(np.arccos(t)), float(phi))

    def to_cartesian(self) -> np.ndarray:
        rho = self.r * math.sin(self.theta)
        return np.array([self.r * math.cos(self.theta), rho * math.cos(self.phi), rho * math.sin(self.phi)])


def _spherical(p: np.ndarray):
    """``(|x|, x0/|x|, atan2(x2, x1))`` with ``t = 1`` at the origin."""
    x0, x1, x2 = p[..., 0], p[..., 1], p[..., 2]
    r = np.sqrt(x0 * x0 + x1 * x1 + x2 * x2)
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.where(r > 0, x0 / np.where(r > 0, r, 1.0), 1.0)
    t = np.clip(t, -1.0, 1.0)
    phi = np.arctan2(x2, x1)
    return r, t, phi


# ---------------------------------------------------------------------------
# evaluation


def _harmonics(k_max: int, phi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``cos(k phi)`` and ``sin(k phi)`` for ``k = 0..k_max``, stacked on a leading axis."""
    k = np.arange(k_max + 1).reshape((-1,) + (1,) * phi.ndim)
    return np.cos(k * phi), np.sin(k * phi)


def _assemble_block(n: int, indices: list[BasisIndex], Pn: np.ndarray, phi: np.ndarray, harmonics=None) -> np.ndarray:
    """Angular parts (``|x| = 1`` values) of several degree-``n`` polynomials.

    ``Pn[l]`` must hold ``P_n^l`` at the polar argument for every order used.
    ``harmonics`` may carry precomputed :func:`_harmonics` up to order
    ``n + 2``. Returns shape ``(len(indices), 3, ...)``; index-major layout
    keeps every write contiguous.
    """
    m = np.array([i.m for i in indices])
    is_x = np.array([i.family is Family.X for i in indices])
    extra = (slice(None),) + (None,) * phi.ndim
    cos_k, sin_k = harmonics if harmonics is not None else _harmonics(int(m.max()) + 1, phi)

    c = (n + m + 1).astype(float)
    up = 0.25 * Pn[m + 1]
    if n == 0:
        # at m = 0 the weight vanishes before the undefined P_0^{-1} is needed
        p_order_minus_one = np.zeros_like(Pn[0])
    else:
        p_order_minus_one = -Pn[1] / (n * (n + 1))
    p_low = Pn[np.maximum(m - 1, 0)]
    p_low[m == 0] = p_order_minus_one
    low = (0.25 * c * (n + m))[extra] * p_low

    # order m - 1 = -1 only occurs at m = 0: cos is even, sin is odd
    lo = np.abs(m - 1)
    sign_lo = np.where(m >= 1, 1.0, -1.0)[extra]
    out = np.empty((len(indices), 3) + phi.shape)
    scal = 0.5 * c[extra] * Pn[m]
    for mask, is_family_x in ((is_x, True), (~is_x, False)):
        if not mask.any():
            continue
        mm, ll = m[mask], lo[mask]
        u, w, sl = up[mask], low[mask], sign_lo[mask]
        cu, su = cos_k[mm + 1], sin_k[mm + 1]
        cl, sn = cos_k[ll], sl * sin_k[ll]
        if is_family_x:
            parts = (scal[mask] * cos_k[mm], u * cu - w * cl, u * su + w * sn)
        else:
            parts = (scal[mask] * sin_k[mm], u * su - w * sn, -u * cu - w * cl)
        for j, part in enumerate(parts):
            out[mask, j] = part
    return out


def eval_basis(idx: BasisIndex, p, *, cs_phase: bool = False) -> np.ndarray:
    """Value of the unnormalized polynomial ``idx`` at points ``p`` (shape ``(..., 3)``)."""
    p = np.asarray(p, dtype=float)
    r, t, phi = _spherical(p)
    Pn = legendre_row(idx.n, t, orders=(1, idx.m - 1, idx.m, idx.m + 1), cs_phase=cs_phase)
    return np.moveaxis(_assemble_block(idx.n, [idx], Pn, phi)[0] * r**idx.n, 0, -1)


def eval_scalar(idx: BasisIndex, p) -> np.ndarray:
    """Scalar part of ``idx`` at ``p``; needs only the order-``m`` Legendre function."""
    p = np.asarray(p, dtype=float)
    r, t, phi = _spherical(p)
    Pnm = legendre_row(idx.n, t, orders=(idx.m,))[idx.m]
    angular = np.cos(idx.m * phi) if idx.family is Family.X else np.sin(idx.m * phi)
    return 0.5 * (idx.n + idx.m + 1) * Pnm * angular * r**idx.n


def eval_all(n_max: int, p, *, cs_phase: bool = False) -> np.ndarray:
    """All polynomials of degree ``<= n_max`` at ``p``.

    Returns shape ``(..., basis_size(n_max), 3)`` in :func:`enumerate_upto` order.
    """
    p = np.asarray(p, dtype=float)
    r, t, phi = _spherical(p)
    P = legendre_table(n_max, t, cs_phase=cs_phase)
    harmonics = _harmonics(n_max + 2, phi)
    out = np.empty((basis_size(n_max), 3) + phi.shape)
    rn = np.ones_like(r)
    for n in range(n_max + 1):
        lo = degree_offset(n)
        out[lo : lo + 2 * n + 3] = _assemble_block(n, enumerate_basis(n), P[n], phi, harmonics) * rn
        rn = rn * r
    return np.moveaxis(out, (0, 1), (-2, -1))


def eval_degree(n: int, p, *, cs_phase: bool = False) -> np.ndarray:
    """All ``2n + 3`` polynomials of degree ``n`` at ``p``, shape ``(..., 2n+3, 3)``."""
    p = np.asarray(p, dtype=float)
    r, t, phi = _spherical(p)
    Pn = legendre_row(n, t, cs_phase=cs_phase)
    return np.moveaxis(_assemble_block(n, enumerate_basis(n), Pn, phi) * r**n, (0, 1), (-2, -1))


def pointwise_bound(idx: BasisIndex, r: float) -> float:
    """Upper bound ``(n+1)/2 sqrt((n+1+m)!/(n+1-m)!) r^n`` on ``|idx(x)|`` for ``|x| = r``."""
    return 0.5 * (idx.n + 1) * math.sqrt(factorial_ratio(idx.n, idx.m)) * r**idx.n


class HyperDerivative(NamedTuple):
    factor: float
    lower: BasisIndex


def exact_hyperderivative(idx: BasisIndex) -> HyperDerivative | None:
    """``(1/2) Dbar`` of a basis polynomial, or ``None`` when it vanishes.

    Degree-lowering maps ``X_n^m -> (n+m+1) X_{n-1}^m`` (same for Y) when
    ``m <= n``; hyperholomorphic constants (``m = n + 1``) and degree 0 map to zero.
    """
    if idx.n == 0 or idx.is_hyperholomorphic_constant:
        return None
    return HyperDerivative(float(idx.n + idx.m + 1), BasisIndex(idx.family, idx.n - 1, idx.m))
