"""Associated Legendre functions and Chebyshev angular factors.

Legendre functions are the unnormalized Ferrers functions *without* the
Condon-Shortley phase, so ``P_1^1(t) = +sqrt(1 - t^2)``. Order ``-1`` is the
special case ``P_n^{-1} = -P_n^1 / (n (n + 1))`` and orders above the degree
vanish identically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidIndexError

EXACT_FACTORIAL_LIMIT = 20


@dataclass(frozen=True)
class LegendreConvention:
    condon_shortley_phase: bool = False

    def as_dict(self) -> dict:
        return {"family": "Ferrers (unnormalized)", "condon_shortley_phase": self.condon_shortley_phase}


CONVENTION = LegendreConvention()


def _check_t(t: np.ndarray) -> None:
    if np.any(np.abs(t) > 1.0):
        raise DomainError("Legendre argument outside [-1, 1]")


def legendre_table(n_max: int, t, *, orders=None, cs_phase: bool = False) -> np.ndarray:
    """``P_n^l(t)`` for ``0 <= n <= n_max`` and ``0 <= l <= n_max + 2``.

    Returns an array of shape ``(n_max + 1, n_max + 3) + t.shape``; entries with
    ``l > n`` are zero. Built by the standard upward recurrence in degree
    for each fixed order, seeded with ``P_l^l = (2l - 1)!! (1 - t^2)^{l/2}``.
    ``orders`` restricts the work to the listed orders (other columns stay 0).
    """
    t = np.asarray(t, dtype=float)
    _check_t(t)
    out = np.zeros((n_max + 1, n_max + 3) + t.shape)
    wanted = range(n_max + 1) if orders is None else sorted(l for l in set(orders) if 0 <= l <= n_max)
    s = np.sqrt(np.clip(1.0 - t * t, 0.0, None))
    sign = -1.0 if cs_phase else 1.0
    for l in wanted:
        diag = np.full_like(t, _double_factorial(2 * l - 1) * sign**l) * s**l
        out[l, l] = diag
        if l + 1 <= n_max:
            out[l + 1, l] = (2 * l + 1) * t * diag
        for n in range(l + 2, n_max + 1):
            out[n, l] = ((2 * n - 1) * t * out[n - 1, l] - (n + l - 1) * out[n - 2, l]) / (n - l)
    return out


def legendre_row(n: int, t, *, orders=None, cs_phase: bool = False) -> np.ndarray:
    """``P_n^l(t)`` for one degree and ``0 <= l <= n + 2``, shape ``(n + 3,) + t.shape``.

    Same recurrence as :func:`legendre_table` but only two previous degrees are
    kept, so memory is ``O(n)`` per point.
    """
    t = np.asarray(t, dtype=float)
    _check_t(t)
    out = np.zeros((n + 3,) + t.shape)
    wanted = range(n + 1) if orders is None else sorted(l for l in set(orders) if 0 <= l <= n)
    s = np.sqrt(np.clip(1.0 - t * t, 0.0, None))
    sign = -1.0 if cs_phase else 1.0
    for l in wanted:
        prev = np.zeros_like(t)
        cur = np.full_like(t, _double_factorial(2 * l - 1) * sign**l) * s**l
        for k in range(l + 1, n + 1):
            prev, cur = cur, ((2 * k - 1) * t * cur - (k + l - 1) * prev) / (k - l)
        out[l] = cur
    return out


def _double_factorial(k: int) -> float:
    prod = 1.0
    while k > 1:
        prod *= k
        k -= 2
    return prod


def legendre_p(n: int, l: int, t, *, cs_phase: bool = False):
    """Associated Legendre function ``P_n^l(t)`` for ``l >= -1``."""
    if n < 0 or l < -1:
        raise InvalidIndexError(f"invalid Legendre index (n={n}, l={l})")
    if l == -1 and n == 0:
        raise InvalidIndexError("P_0^{-1} is undefined (n(n+1) = 0)")
    t_arr = np.asarray(t, dtype=float)
    _check_t(t_arr)
    if l > n:
        value = np.zeros_like(t_arr)
    elif l == -1:
        value = -legendre_table(n, t_arr, cs_phase=cs_phase)[n, 1] / (n * (n + 1))
    else:
        value = legendre_table(n, t_arr, cs_phase=cs_phase)[n, l]
    return float(value) if np.ndim(value) == 0 else value


def cheb_cos(k: int, phi):
    """``cos(k phi) = T_k(cos phi)``; any integer ``k``."""
    return np.cos(k * np.asarray(phi, dtype=float))


def cheb_sin(k: int, phi):
    """``sin(k phi) = sin(phi) U_{k-1}(cos phi)``; any integer ``k``."""
    return np.sin(k * np.asarray(phi, dtype=float))


def factorial_ratio(n: int, l: int) -> float:
    """``(n + 1 + l)! / (n + 1 - l)!`` for ``0 <= l <= n + 1``."""
    if n < 0 or not 0 <= l <= n + 1:
        raise InvalidIndexError(f"factorial_ratio index out of range (n={n}, l={l})")
    if n <= EXACT_FACTORIAL_LIMIT:
        prod = 1
        for k in range(n + 2 - l, n + 2 + l):
            prod *= k
        return float(prod)
    return math.exp(math.lgamma(n + 2 + l) - math.lgamma(n + 2 - l))
