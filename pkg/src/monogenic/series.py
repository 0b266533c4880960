"""Finite Fourier expansions in the normalized monogenic basis.

A :class:`MonogenicSeries` stores real coefficients ``c_idx`` for every basis
index of degree ``<= n_max`` and represents ``sum_idx c_idx X_idx / ||X_idx||``.
Evaluating one therefore needs the L2 norms from a
:class:`~monogenic.quadrature.NormTable`.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .basis import BasisIndex, Family, basis_size, enumerate_upto, eval_all, flat_position
from .quadrature import BallRule, NormTable
from .quaternion import ReducedQuaternion
from .sphere import sphere_max

SQRT_PI_3 = math.sqrt(math.pi / 3.0)
# value of the normalized constant X_0^0 / ||X_0^0||
ORIGIN_FACTOR = 0.5 * math.sqrt(3.0 / math.pi)
SUP_MARGIN = 1e-3
DEFAULT_SPHERE_SAMPLES = 20000


class Constraint(str, enum.Enum):
    NONE = "none"
    ZERO_AT_ORIGIN = "zero_at_origin"
    ORTHOGONAL_TO_HHOLO = "orthogonal_to_hholo"


@dataclass(frozen=True)
class MonogenicSeries:
    n_max: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.shape != (basis_size(self.n_max),):
            raise ValueError(f"expected {basis_size(self.n_max)} coefficients for n_max={self.n_max}, got {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zeros(cls, n_max: int) -> "MonogenicSeries":
        return cls(n_max, np.zeros(basis_size(n_max)))

    @classmethod
    def from_terms(cls, n_max: int, terms: dict) -> "MonogenicSeries":
        c = np.zeros(basis_size(n_max))
        for idx, value in terms.items():
            if idx.n > n_max:
                raise ValueError(f"{idx} exceeds n_max={n_max}")
            c[flat_position(idx)] = value
        return cls(n_max, c)

    def __getitem__(self, idx: BasisIndex) -> float:
        if idx.n > self.n_max:
            return 0.0
        return float(self.coeffs[flat_position(idx)])

    def terms(self):
        """Iterate over ``(index, coefficient)`` pairs in canonical order."""
        return zip(enumerate_upto(self.n_max), self.coeffs)

    def masked(self, keep: np.ndarray) -> "MonogenicSeries":
        return MonogenicSeries(self.n_max, np.where(keep, self.coeffs, 0.0))

    def __add__(self, other: "MonogenicSeries") -> "MonogenicSeries":
        n = max(self.n_max, other.n_max)
        return MonogenicSeries(n, _pad(self.coeffs, n) + _pad(other.coeffs, n))

    def __mul__(self, k: float) -> "MonogenicSeries":
        return MonogenicSeries(self.n_max, self.coeffs * k)

    __rmul__ = __mul__

    def as_dict(self) -> dict:
        return {
            "n_max": self.n_max,
            "entries": [
                {"family": idx.family.value, "n": idx.n, "m": idx.m, "value": float(f"{v:.17g}")}
                for idx, v in self.terms()
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "MonogenicSeries":
        terms = {BasisIndex(Family(e["family"]), int(e["n"]), int(e["m"])): float(e["value"]) for e in data["entries"]}
        return cls.from_terms(int(data["n_max"]), terms)

    @classmethod
    def from_json(cls, text: str) -> "MonogenicSeries":
        return cls.from_dict(json.loads(text))


def _pad(c: np.ndarray, n_max: int) -> np.ndarray:
    out = np.zeros(basis_size(n_max))
    out[: len(c)] = c
    return out


def index_mask(n_max: int, predicate: Callable[[BasisIndex], bool]) -> np.ndarray:
    return np.array([predicate(idx) for idx in enumerate_upto(n_max)], dtype=bool)


# ---------------------------------------------------------------------------
# evaluation


def series_field(s: MonogenicSeries, nt: NormTable) -> Callable[[np.ndarray], np.ndarray]:
    """Return a vectorized evaluator ``p -> f(p)`` for the series."""
    weights = s.coeffs / nt.l2_upto(s.n_max)

    def f(p):
        # eval_all is a view of an index-major array; contract on that layout
        raw = np.moveaxis(eval_all(s.n_max, p), (-2, -1), (0, 1))
        return np.moveaxis(np.tensordot(weights, raw, axes=(0, 0)), 0, -1)

    return f


def evaluate(s: MonogenicSeries, p, nt: NormTable) -> np.ndarray:
    """Series value at points ``p`` (shape ``(..., 3)``), returned as ``(..., 3)``."""
    return series_field(s, nt)(np.asarray(p, dtype=float))


def value_at_origin(s: MonogenicSeries, nt: NormTable) -> ReducedQuaternion:
    return ReducedQuaternion.from_array(evaluate(s, np.zeros(3), nt))


def project(f: Callable[[np.ndarray], np.ndarray], n_max: int, rule: BallRule, nt: NormTable) -> MonogenicSeries:
    """Orthogonal projection of ``f`` onto the span of degrees ``<= n_max``."""
    rule.check_exactness(2 * n_max, what=f"projection onto degree {n_max}")
    fv = np.asarray(f(rule.nodes), dtype=float)[..., :3]
    basis = eval_all(n_max, rule.nodes) / nt.l2_upto(n_max)[None, :, None]
    return MonogenicSeries(n_max, np.einsum("i,ikc,ic->k", rule.weights, basis, fv))


def decompose(s: MonogenicSeries, nt: NormTable) -> tuple[ReducedQuaternion, MonogenicSeries, MonogenicSeries]:
    """Split into the value at 0, the main part ``g`` and a hyperholomorphic constant ``h``.

    Degree-0 terms (including the constants ``X_0^1``, ``Y_0^1``) make up the
    value at the origin; ``h`` collects the ``m = n + 1`` terms with ``n >= 1``.
    """
    c = value_at_origin(s, nt)
    g = s.masked(index_mask(s.n_max, lambda i: i.n >= 1 and i.m <= i.n))
    h = s.masked(index_mask(s.n_max, lambda i: i.n >= 1 and i.m == i.n + 1))
    return c, g, h


@dataclass(frozen=True)
class SupNormEstimate:
    value: float
    n_sphere_samples: int
    radius: float


def max_modulus(s: MonogenicSeries, r: float, n_samples: int, nt: NormTable) -> SupNormEstimate:
    """Sampled ``max_{|x| = r} |f(x)|``; a lower estimate of the true maximum."""
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"radius must lie in [0, 1], got {r}")
    f = series_field(s, nt)
    res = sphere_max(lambda p: np.linalg.norm(f(p), axis=-1), r, n_samples)
    return SupNormEstimate(res.value, n_samples, r)


# ---------------------------------------------------------------------------
# random test functions


def constraint_mask(n_max: int, constraint: Constraint | str) -> np.ndarray:
    """Boolean mask of the coefficients that may be nonzero under ``constraint``.

    ``orthogonal_to_hholo`` removes every ``m = n + 1`` term, including the
    degree-0 constants ``e1`` and ``e2``, so the value at 0 is real.
    """
    constraint = Constraint(constraint)
    if constraint is Constraint.NONE:
        return np.ones(basis_size(n_max), dtype=bool)
    if constraint is Constraint.ZERO_AT_ORIGIN:
        return index_mask(n_max, lambda i: i.n >= 1)
    return index_mask(n_max, lambda i: i.m <= i.n)


def sample_random(
    seed: int,
    n_max: int,
    constraint: Constraint | str,
    target_sup: float,
    nt: NormTable,
    n_samples: int = DEFAULT_SPHERE_SAMPLES,
) -> MonogenicSeries:
    """Seeded series with uniform ``[-1, 1]`` coefficients rescaled to ``sup |f| < target_sup``.

    The sampled boundary maximum times ``1 + SUP_MARGIN`` is scaled to
    ``target_sup``.
    """
    if target_sup <= 0:
        raise ValueError("target_sup must be positive")
    rng = np.random.default_rng(seed)
    mask = constraint_mask(n_max, constraint)
    while True:
        coeffs = np.where(mask, rng.uniform(-1.0, 1.0, basis_size(n_max)), 0.0)
        if np.any(coeffs != 0.0):
            break
    s = MonogenicSeries(n_max, coeffs)
    sup = max_modulus(s, 1.0, n_samples, nt).value
    return s * (target_sup / (sup * (1.0 + SUP_MARGIN)))


# ---------------------------------------------------------------------------
# coefficient bounds


@dataclass(frozen=True)
class CoefficientBound:
    index: BasisIndex
    coefficient: float
    bound: float

    @property
    def slack(self) -> float:
        return self.bound - abs(self.coefficient)

    @property
    def holds(self) -> bool:
        return abs(self.coefficient) <= self.bound


@dataclass(frozen=True)
class CoefficientBoundReport:
    rows: tuple[CoefficientBound, ...]
    a00: float
    orthogonality_verified: bool
    sup_verified: bool
    sup_estimate: float

    @property
    def holds(self) -> bool:
        return all(row.holds for row in self.rows)

    @property
    def violations(self) -> int:
        return sum(not row.holds for row in self.rows)

    @property
    def min_slack(self) -> float:
        return min((row.slack for row in self.rows), default=math.inf)

    def as_dict(self) -> dict:
        return {
            "a00": self.a00,
            "orthogonality_verified": self.orthogonality_verified,
            "sup_verified": self.sup_verified,
            "sup_estimate": self.sup_estimate,
            "holds": self.holds,
            "violations": self.violations,
            "min_slack": self.min_slack,
            "rows": [
                {"index": r.index.label(), "coefficient": r.coefficient, "bound": r.bound, "slack": r.slack}
                for r in self.rows
            ],
        }


def coefficient_bound_factor(idx: BasisIndex, nt: NormTable) -> float:
    """``max|Sc X| ||X|| / ||Sc X||^2`` for the unnormalized polynomial ``idx``."""
    e = nt[idx]
    return e.sc_max * e.l2_norm / e.sc_l2_norm**2


def coefficient_bound_check(
    s: MonogenicSeries, nt: NormTable, n_samples: int = DEFAULT_SPHERE_SAMPLES
) -> CoefficientBoundReport:
    """Compare every coefficient with order ``<= n`` (``n >= 1``) against its a-priori bound.

    The bound is ``factor(idx) * 2 sqrt(pi/3) (2 sqrt(pi/3) - a_0^0)``. The
    report records whether the hypotheses were verified: all ``m = n + 1``
    coefficients with ``n >= 1`` vanish, and the sampled sup is below 1.
    """
    a00 = s[BasisIndex(Family.X, 0, 0)]
    scale = 2.0 * SQRT_PI_3 * (2.0 * SQRT_PI_3 - a00)
    rows = []
    for idx, c in s.terms():
        if idx.n == 0 or idx.is_hyperholomorphic_constant:
            continue
        rows.append(CoefficientBound(idx, float(c), coefficient_bound_factor(idx, nt) * scale))
    ortho = all(c == 0.0 for idx, c in s.terms() if idx.n >= 1 and idx.is_hyperholomorphic_constant)
    sup = max_modulus(s, 1.0, n_samples, nt).value
    return CoefficientBoundReport(tuple(rows), a00, ortho, sup < 1.0, sup)


# ---------------------------------------------------------------------------
# hypercomplex derivative


def hyperderivative_series(s: MonogenicSeries, nt: NormTable) -> MonogenicSeries:
    """Exact ``(1/2) Dbar`` of a series, as a series of degree ``n_max - 1``.

    A normalized term ``c X_n^m / ||X_n^m||`` with ``m <= n`` maps to
    ``c (n+m+1) ||X_{n-1}^m|| / ||X_n^m||`` times the normalized ``X_{n-1}^m``.
    """
    n_out = max(s.n_max - 1, 0)
    out = np.zeros(basis_size(n_out))
    for idx, c in s.terms():
        if idx.n == 0 or idx.is_hyperholomorphic_constant or c == 0.0:
            continue
        lower = BasisIndex(idx.family, idx.n - 1, idx.m)
        out[flat_position(lower)] += c * (idx.n + idx.m + 1) * nt[lower].l2_norm / nt[idx].l2_norm
    return MonogenicSeries(n_out, out)

