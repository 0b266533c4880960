"""Bohr-type sums, majorant radii and hypercomplex-derivative estimates.

Two Bohr sums are supported. ``GROUPED_BY_DEGREE`` adds the moduli of the
homogeneous parts ``|sum_{idx of degree n} c_idx X*_idx(x)|``;
``TERMWISE`` adds ``|c_idx| |X*_idx(x)|`` over single terms. The latter
always dominates the former.

Radii are obtained by bisection on a majorant ``M(r) = sum_n C_n r^n`` built
from the pointwise bounds of the basis polynomials, their computed norms and
a-priori coefficient bounds.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .basis import enumerate_basis, eval_all, pointwise_bound
from .errors import ConfigurationError, DomainError
from .quadrature import BALL_VOLUME, NormTable, norm_table
from .series import (
    DEFAULT_SPHERE_SAMPLES,
    MonogenicSeries,
    coefficient_bound_factor,
    decompose,
    hyperderivative_series,
    max_modulus,
    value_at_origin,
)
from .sphere import sphere_max

REFERENCE_RADIUS = {"grouped_by_degree": 0.125, "termwise": 0.026}


class BohrVariant(str, enum.Enum):
    GROUPED_BY_DEGREE = "grouped_by_degree"
    TERMWISE = "termwise"


# ---------------------------------------------------------------------------
# Bohr sums


def bohr_sum(s: MonogenicSeries, p, variant: BohrVariant | str, nt: NormTable) -> np.ndarray:
    """Bohr sum at points ``p`` (shape ``(..., 3)``); returns shape ``(...)``."""
    variant = BohrVariant(variant)
    p = np.asarray(p, dtype=float)
    terms = eval_all(s.n_max, p) * (s.coeffs / nt.l2_upto(s.n_max))[:, None]  # (..., K, 3)
    if variant is BohrVariant.TERMWISE:
        return np.linalg.norm(terms, axis=-1).sum(axis=-1)
    total = np.zeros(p.shape[:-1])
    for n in range(s.n_max + 1):
        lo = n * (n + 2)
        total += np.linalg.norm(terms[..., lo : lo + 2 * n + 3, :].sum(axis=-2), axis=-1)
    return total


def bohr_sup(
    s: MonogenicSeries,
    r: float,
    variant: BohrVariant | str,
    nt: NormTable,
    n_samples: int = DEFAULT_SPHERE_SAMPLES,
) -> float:
    """Sampled maximum of :func:`bohr_sum` over the sphere of radius ``r``."""
    if not 0.0 <= r <= 1.0:
        raise DomainError(f"radius must lie in [0, 1], got {r}")
    return sphere_max(lambda q: bohr_sum(s, q, variant, nt), r, n_samples).value


# ---------------------------------------------------------------------------
# majorant and radius


def majorant_coefficients(variant: BohrVariant | str, nt: NormTable, degree: int) -> np.ndarray:
    """``C_n`` for ``n = 0..degree`` (``C_0 = 0``) so that ``M(r) = sum C_n r^n``.

    Grouped: Cauchy-Schwarz over the degree-``n`` block with coefficient
    vector norm at most ``sqrt(4 pi / 3)``. Termwise: coefficient bounds
    ``factor(idx) * 4 pi / 3`` over orders ``m <= n``.
    """
    variant = BohrVariant(variant)
    nt.require(degree)
    C = np.zeros(degree + 1)
    for n in range(1, degree + 1):
        block = enumerate_basis(n)
        if variant is BohrVariant.GROUPED_BY_DEGREE:
            b = np.array([pointwise_bound(i, 1.0) / nt[i].l2_norm for i in block])
            C[n] = math.sqrt(BALL_VOLUME) * math.sqrt(float(np.sum(b * b)))
        else:
            C[n] = sum(
                pointwise_bound(i, 1.0) / nt[i].l2_norm * coefficient_bound_factor(i, nt) * BALL_VOLUME
                for i in block
                if not i.is_hyperholomorphic_constant
            )
    return C


def majorant(r: float, C: np.ndarray) -> float:
    return float(np.polynomial.polynomial.polyval(r, C))


def tail_bound(r: float, C: np.ndarray, window: int = 3) -> float:
    """Geometric bound on ``sum_{n > N} C_n r^n`` from the last ``window`` ratios."""
    N = len(C) - 1
    ratios = [C[n] / C[n - 1] for n in range(max(2, N - window + 1), N + 1)]
    q = r * max(ratios)
    if q >= 1.0:
        return math.inf
    return float(C[N] * r**N * q / (1.0 - q))


@dataclass(frozen=True)
class MajorantConfig:
    degree: int = 20
    max_degree: int = 60
    tail_tolerance: float = 1e-6
    bracket_tolerance: float = 1e-12
    initial_hi: float = 0.5


@dataclass(frozen=True)
class RadiusReport:
    variant: BohrVariant
    computed_radius: float
    truncation_degree: int
    tail_bound: float
    bracket: tuple[float, float]
    reference_value: float
    majorant_at_radius: float
    norm_table_checksum: str
    coefficients: tuple[float, ...] = field(repr=False)

    @property
    def ratio_to_reference(self) -> float:
        return self.computed_radius / self.reference_value

    def as_dict(self) -> dict:
        return {
            "variant": self.variant.value,
            "computed_radius": self.computed_radius,
            "truncation_degree": self.truncation_degree,
            "tail_bound": self.tail_bound,
            "bracket": list(self.bracket),
            "reference_value": self.reference_value,
            "ratio_to_reference": self.ratio_to_reference,
            "majorant_at_radius": self.majorant_at_radius,
            "norm_table_checksum": self.norm_table_checksum,
            "majorant_coefficients": list(self.coefficients),
        }


class BracketError(ConfigurationError):
    pass


def majorant_radius(
    variant: BohrVariant | str, nt: NormTable | None = None, config: MajorantConfig = MajorantConfig()
) -> RadiusReport:
    """Solve ``M(r) = 1`` by bisection with a certified truncation.

    The truncation degree starts at ``config.degree`` and is raised until the
    tail bound at the upper bracket end is below ``config.tail_tolerance``.
    A norm table that does not reach the truncation degree is extended.
    """
    variant = BohrVariant(variant)
    degree = config.degree
    hi = config.initial_hi

    def coefficients(deg):
        nonlocal nt
        if nt is None or nt.n_max < deg:
            nt = norm_table(deg)
        return majorant_coefficients(variant, nt, deg)

    C = coefficients(degree)
    while majorant(hi, C) <= 1.0:
        if hi >= 0.999:
            raise BracketError(f"majorant stays below 1 on [0, {hi}]")
        hi = 0.5 * (1.0 + hi)
    # shrink hi toward the root so the tail estimate is meaningful
    lo = 0.0
    while True:
        mid = 0.5 * (lo + hi)
        if majorant(mid, C) > 1.0:
            hi = mid
        else:
            break
    tail = tail_bound(hi, C)
    while tail >= config.tail_tolerance:
        if degree >= config.max_degree:
            raise ConfigurationError(f"tail bound {tail:.3g} not below tolerance at degree {degree}")
        degree = min(config.max_degree, degree + 10)
        C = coefficients(degree)
        tail = tail_bound(hi, C)

    if not majorant(lo, C) < 1.0 < majorant(hi, C):
        raise BracketError(f"M({lo}) = {majorant(lo, C)}, M({hi}) = {majorant(hi, C)} do not bracket 1")
    while hi - lo > config.bracket_tolerance:
        mid = 0.5 * (lo + hi)
        if majorant(mid, C) < 1.0:
            lo = mid
        else:
            hi = mid
    root = 0.5 * (lo + hi)
    return RadiusReport(
        variant=variant,
        computed_radius=root,
        truncation_degree=degree,
        tail_bound=tail,
        bracket=(lo, hi),
        reference_value=REFERENCE_RADIUS[variant.value],
        majorant_at_radius=majorant(root, C),
        norm_table_checksum=nt.checksum(),
        coefficients=tuple(float(c) for c in C),
    )


# ---------------------------------------------------------------------------
# derivative estimates


def derivative_bound_rhs(r: float, M1: float, sc0: float) -> float:
    """``8 (3r + 1) / (1 - r)^5 (M1 - |sc0|)``."""
    if not 0.0 <= r < 1.0:
        raise DomainError(f"radius must lie in [0, 1), got {r}")
    return 8.0 * (3.0 * r + 1.0) / (1.0 - r) ** 5 * (M1 - abs(sc0))


@dataclass(frozen=True)
class SeriesSum:
    value: float
    remainder: float


def derivative_series_sum(r: float, N: int) -> SeriesSum:
    """``(4/3) sum_{n=1}^{N} n^2 (n+1)(n+2) r^(n-1)`` and a bound on the omitted tail.

    Consecutive term ratios ``(n+1)(n+3) r / n^2`` decrease in ``n``, so the
    tail is bounded by a geometric series once that ratio drops below 1.
    """
    if not 0.0 <= r < 1.0:
        raise DomainError(f"radius must lie in [0, 1), got {r}")
    n = np.arange(1, N + 1, dtype=float)
    value = 4.0 / 3.0 * float(np.sum(n**2 * (n + 1) * (n + 2) * r ** (n - 1)))
    if r == 0.0:
        return SeriesSum(value, 0.0)
    k = N + 1
    first = 4.0 / 3.0 * k**2 * (k + 1) * (k + 2) * r ** (k - 1)
    q = (k + 1) * (k + 3) * r / k**2
    remainder = first / (1.0 - q) if q < 1.0 else math.inf
    return SeriesSum(value, remainder)


def derivative_closed_form(r: float) -> float:
    return 8.0 * (3.0 * r + 1.0) / (1.0 - r) ** 5


@dataclass(frozen=True)
class BoundRow:
    r: float
    lhs: float
    rhs: float

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs


@dataclass(frozen=True)
class BoundReport:
    form: str
    M1: float
    origin_term: float
    rows: tuple[BoundRow, ...]
    n_samples: int

    @property
    def holds(self) -> bool:
        return all(row.holds for row in self.rows)

    @property
    def violations(self) -> int:
        return sum(not row.holds for row in self.rows)

    def as_dict(self) -> dict:
        return {
            "form": self.form,
            "M1": self.M1,
            "origin_term": self.origin_term,
            "n_samples": self.n_samples,
            "holds": self.holds,
            "rows": [{"r": x.r, "lhs": x.lhs, "rhs": x.rhs, "slack": x.slack, "holds": x.holds} for x in self.rows],
        }


def verify_derivative_bound(
    s: MonogenicSeries,
    r_grid,
    nt: NormTable,
    form: str = "scalar",
    n_samples: int = DEFAULT_SPHERE_SAMPLES,
) -> BoundReport:
    """Check ``M((1/2) Dbar f, r) <= 8(3r+1)/(1-r)^5 (M_f(1) - origin_term)`` on ``r_grid``.

    ``form="scalar"`` uses ``|Sc f(0)|``; ``form="modulus"`` uses ``|f(0)|``
    and is meant for series orthogonal to the hyperholomorphic constants.
    """
    if form not in ("scalar", "modulus"):
        raise ValueError(f"unknown form {form!r}")
    f0 = value_at_origin(s, nt)
    origin_term = abs(f0.sc()) if form == "scalar" else f0.norm()
    M1 = max_modulus(s, 1.0, n_samples, nt).value
    ds = hyperderivative_series(s, nt)
    rows = []
    for r in r_grid:
        lhs = max_modulus(ds, float(r), n_samples, nt).value
        rows.append(BoundRow(float(r), lhs, derivative_bound_rhs(float(r), M1, origin_term)))
    return BoundReport(form, M1, origin_term, tuple(rows), n_samples)


def derivative_coefficient_majorant(s: MonogenicSeries, r: float) -> float:
    """Coefficient majorant for ``|(1/2) Dbar g|`` on ``|x| = r``, ``g`` the main part of ``s``.

    ``(1/sqrt(2 pi)) sum_n sqrt(2n+3) n r^(n-1) [sqrt(n+1)|a_n^0|
    + sum_{m=1}^{n} sqrt(((n+1)^2 - m^2)/(n+1)) (|a_n^m| + |b_n^m|)]``.
    """
    total = 0.0
    for idx, c in s.terms():
        n, m = idx.n, idx.m
        if n == 0 or idx.is_hyperholomorphic_constant:
            continue
        w = math.sqrt(n + 1) if m == 0 else math.sqrt(((n + 1) ** 2 - m * m) / (n + 1))
        total += math.sqrt(2 * n + 3) * n * r ** (n - 1) * w * abs(c)
    return total / math.sqrt(2.0 * math.pi)


def main_part_derivative_max(s: MonogenicSeries, r: float, nt: NormTable, n_samples: int = DEFAULT_SPHERE_SAMPLES):
    _, g, _ = decompose(s, nt)
    return max_modulus(hyperderivative_series(g, nt), r, n_samples, nt).value

