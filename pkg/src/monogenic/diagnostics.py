"""Finite-difference and pointwise checks of the basis polynomials.

These routines back the ``monogenicity`` command and the test-suite. All
residuals are measured on the *normalized* basis so that tolerances mean the
same thing at every degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import BasisIndex, enumerate_upto, eval_basis, exact_hyperderivative, pointwise_bound
from .quadrature import NormTable
from .quaternion import apply_D_fd, apply_hyperderivative_fd, as_quaternion_array, observed_order, riesz_residual

DEFAULT_FD_STEP = 1e-4
ORDER_STEP = 1e-2  # coarse step where truncation error dominates roundoff
RESIDUAL_TOLERANCE = 1e-6
MIN_ORDER = 1.9
EXACT_FD_DEGREE = 2  # central differences are exact on quadratics
ROUNDOFF_FLOOR = 1e-10  # coarse residuals below this carry no truncation signal


def random_ball_points(n: int, seed: int, radius: float = 0.9) -> np.ndarray:
    """``n`` seeded points uniformly distributed in the ball ``|x| < radius``."""
    rng = np.random.default_rng(seed)
    d = rng.normal(size=(n, 3))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    return d * radius * rng.uniform(size=(n, 1)) ** (1.0 / 3.0)


def _normalized(idx: BasisIndex, nt: NormTable, cs_phase: bool):
    scale = 1.0 / nt[idx].l2_norm
    return lambda q: eval_basis(idx, q, cs_phase=cs_phase) * scale


def _residual(f, p, h) -> float:
    """Largest of ``|D f|``, ``|div conj f|`` and ``|curl conj f|`` over the points."""
    d = np.linalg.norm(apply_D_fd(f, p, h), axis=-1).max()
    div, curl = riesz_residual(f, p, h)
    return float(max(d, np.abs(div).max(), np.linalg.norm(curl, axis=-1).max()))


@dataclass(frozen=True)
class MonogenicityRow:
    index: BasisIndex
    residual: float
    residual_coarse: float
    residual_coarse_half: float
    order: float | None
    derivative_error: float

    @property
    def holds(self) -> bool:
        ok = self.residual <= RESIDUAL_TOLERANCE and self.derivative_error <= RESIDUAL_TOLERANCE
        if self.order is not None:
            ok = ok and self.order >= MIN_ORDER
        return ok

    def as_dict(self) -> dict:
        return {
            "index": self.index.label(),
            "residual": self.residual,
            "residual_coarse": self.residual_coarse,
            "residual_coarse_half": self.residual_coarse_half,
            "observed_order": self.order,
            "derivative_error": self.derivative_error,
            "holds": self.holds,
        }


def monogenicity_check(
    idx: BasisIndex,
    points: np.ndarray,
    nt: NormTable,
    h: float = DEFAULT_FD_STEP,
    coarse_h: float = ORDER_STEP,
    cs_phase: bool = False,
) -> MonogenicityRow:
    """FD residuals of the Cauchy-Riemann operator and the Riesz system for one element.

    The observed order comes from step halving at ``coarse_h``, where the
    truncation error is far above roundoff. For degrees ``<= 2`` the stencil is
    exact, and for a few elements the leading truncation term cancels; in both
    cases the coarse residual is at roundoff, no order is reported and only the
    residual bound applies.
    ``derivative_error`` compares the FD hypercomplex derivative with the
    closed-form multiple of the next-lower element (zero for constants).
    """
    f = _normalized(idx, nt, cs_phase)
    res = _residual(f, points, h)
    coarse = _residual(f, points, coarse_h)
    coarse_half = _residual(f, points, coarse_h / 2)
    exact_stencil = idx.n <= EXACT_FD_DEGREE or coarse < ROUNDOFF_FLOOR
    order = None if exact_stencil else observed_order(coarse, coarse_half)

    fd = apply_hyperderivative_fd(f, points, h)
    hd = exact_hyperderivative(idx)
    if hd is None:
        exact = np.zeros_like(fd)
    else:
        exact = as_quaternion_array(eval_basis(hd.lower, points, cs_phase=cs_phase))
        exact = exact * hd.factor / nt[idx].l2_norm
    err = float(np.linalg.norm(fd - exact, axis=-1).max())
    return MonogenicityRow(idx, res, coarse, coarse_half, order, err)


def monogenicity_sweep(n_max: int, points: np.ndarray, nt: NormTable, **kw) -> list[MonogenicityRow]:
    return [monogenicity_check(idx, points, nt, **kw) for idx in enumerate_upto(n_max)]


@dataclass(frozen=True)
class PointwiseBoundReport:
    pairs: int
    violations: int
    max_ratio: float


def pointwise_bound_sweep(n_pairs: int, n_max: int, seed: int) -> PointwiseBoundReport:
    """Draw ``(index, point)`` pairs and compare ``|X(p)|`` with its a-priori bound.

    Points are uniform in the closed unit ball; the bound carries a relative
    allowance of a few ulps for rounding in the evaluation.
    """
    rng = np.random.default_rng(seed)
    indices = enumerate_upto(n_max)
    which = rng.integers(len(indices), size=n_pairs)
    d = rng.normal(size=(n_pairs, 3))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    pts = d * rng.uniform(size=(n_pairs, 1)) ** (1.0 / 3.0)
    violations, worst = 0, 0.0
    for k in np.unique(which):
        idx = indices[k]
        p = pts[which == k]
        r = np.linalg.norm(p, axis=-1)
        val = np.linalg.norm(eval_basis(idx, p), axis=-1)
        bound = np.array([pointwise_bound(idx, x) for x in r])
        violations += int(np.sum(val > bound * (1 + 1e-12) + 1e-300))
        pos = bound > 0
        if pos.any():
            worst = max(worst, float(np.max(val[pos] / bound[pos])))
    return PointwiseBoundReport(n_pairs, violations, worst)


def order_summary(rows: list[MonogenicityRow]) -> float:
    """Smallest observed order over rows that report one."""
    orders = [row.order for row in rows if row.order is not None]
    return min(orders) if orders else math.nan
