"""Quadrature on the unit ball, the real L2 inner product and basis norms.

The inner product of A-valued (or H-valued) functions is
``<f, g> = int_B Sc(conj(f) g) dV``, which for component arrays is the
Euclidean dot product of the component vectors integrated over the ball.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from .basis import (
    BasisIndex,
    Family,
    basis_size,
    enumerate_basis,
    enumerate_upto,
    eval_all,
    eval_scalar,
    eval_degree,
    flat_position,
)
from .errors import ConfigurationError
from .sphere import sphere_max

DEFAULT_RULE = (24, 24, 48)
SC_MAX_SAMPLES = 20000
BALL_VOLUME = 4.0 * math.pi / 3.0


@dataclass(frozen=True)
class BallRule:
    """Tensor-product rule on the unit ball.

    Radial nodes are Gauss-Jacobi for the weight ``r^2`` on ``[0, 1]``, polar
    nodes Gauss-Legendre in ``cos(theta)`` and azimuthal nodes equispaced.
    """

    nodes: np.ndarray
    weights: np.ndarray
    exact_degree: int
    sizes: tuple[int, int, int]

    def integrate(self, values) -> float:
        """Weighted sum of ``values`` (shape ``(N,)`` or ``(N, ...)``) over the nodes."""
        return np.tensordot(self.weights, np.asarray(values, dtype=float), axes=(0, 0))

    def check_exactness(self, degree: int, what: str = "integrand") -> None:
        if self.exact_degree < degree:
            raise ConfigurationError(
                f"ball rule {format_rule(self.sizes)} is exact to degree {self.exact_degree}, "
                f"but the {what} has degree {degree}"
            )


def format_rule(sizes) -> str:
    return "x".join(str(s) for s in sizes)


def make_ball_rule(n_r: int = DEFAULT_RULE[0], n_t: int = DEFAULT_RULE[1], n_p: int = DEFAULT_RULE[2]) -> BallRule:
    if min(n_r, n_t, n_p) < 1:
        raise ConfigurationError("rule sizes must be positive")
    # Jacobi(0, 2) on [-1, 1] has weight (1 + x)^2; map x -> r = (1 + x) / 2
    xr, wr = roots_jacobi(n_r, 0.0, 2.0)
    r = 0.5 * (1.0 + xr)
    wr = wr / 8.0
    t, wt = roots_legendre(n_t)
    phi = 2.0 * math.pi * np.arange(n_p) / n_p
    wp = np.full(n_p, 2.0 * math.pi / n_p)

    R, T, PHI = np.meshgrid(r, t, phi, indexing="ij")
    S = np.sqrt(1.0 - T * T)
    nodes = np.stack([R * T, R * S * np.cos(PHI), R * S * np.sin(PHI)], axis=-1).reshape(-1, 3)
    weights = (wr[:, None, None] * wt[None, :, None] * wp[None, None, :]).ravel()
    # monomials of total degree d: r^d in r (weight r^2), degree <= d in cos(theta),
    # trigonometric degree <= d in phi
    exact = min(2 * n_r - 1, 2 * n_t - 1, n_p - 1)
    return BallRule(nodes, weights, exact, (n_r, n_t, n_p))


def inner_product(f: Callable, g: Callable, rule: BallRule) -> float:
    """``int_B Sc(conj(f) g) dV`` for fields evaluated on the rule nodes."""
    fv = np.asarray(f(rule.nodes), dtype=float)
    gv = np.asarray(g(rule.nodes), dtype=float)
    k = min(fv.shape[-1], gv.shape[-1])
    # Sc(conj(a) b) is the component dot product; missing components are zero
    return float(rule.integrate(np.sum(fv[..., :k] * gv[..., :k], axis=-1)))


# ---------------------------------------------------------------------------
# norms


@dataclass(frozen=True)
class NormEntry:
    l2_norm: float
    sc_l2_norm: float
    sc_max: float


@dataclass(frozen=True)
class NormTable:
    """L2 norm, scalar-part L2 norm and scalar-part maximum of every basis polynomial.

    Arrays are stored in :func:`monogenic.basis.enumerate_upto` order.
    """

    n_max: int
    l2: np.ndarray
    sc_l2: np.ndarray
    sc_max: np.ndarray
    rule_sizes: tuple[int, int, int]
    sc_max_samples: int
    _json: str = field(default="", repr=False, compare=False)

    def __getitem__(self, idx: BasisIndex) -> NormEntry:
        self.require(idx.n)
        k = flat_position(idx)
        return NormEntry(float(self.l2[k]), float(self.sc_l2[k]), float(self.sc_max[k]))

    def require(self, n: int) -> None:
        if n > self.n_max:
            raise ConfigurationError(f"norm table covers degrees <= {self.n_max}, degree {n} requested")

    def l2_upto(self, n_max: int) -> np.ndarray:
        self.require(n_max)
        return self.l2[: basis_size(n_max)]

    def as_dict(self) -> dict:
        entries = []
        for idx in enumerate_upto(self.n_max):
            e = self[idx]
            entries.append(
                {
                    "family": idx.family.value,
                    "n": idx.n,
                    "m": idx.m,
                    "l2_norm": _sig17(e.l2_norm),
                    "sc_l2_norm": _sig17(e.sc_l2_norm),
                    "sc_max": _sig17(e.sc_max),
                }
            )
        return {
            "schema": 1,
            "n_max": self.n_max,
            "rule": list(self.rule_sizes),
            "sc_max_samples": self.sc_max_samples,
            "entries": entries,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)

    def checksum(self) -> str:
        return hashlib.sha256(self.to_json().encode()).hexdigest()

    @classmethod
    def from_dict(cls, data: dict) -> "NormTable":
        n_max = int(data["n_max"])
        size = basis_size(n_max)
        l2, sc_l2, sc_mx = np.zeros(size), np.zeros(size), np.zeros(size)
        for e in data["entries"]:
            k = flat_position(BasisIndex(Family(e["family"]), int(e["n"]), int(e["m"])))
            l2[k], sc_l2[k], sc_mx[k] = e["l2_norm"], e["sc_l2_norm"], e["sc_max"]
        return cls(n_max, l2, sc_l2, sc_mx, tuple(data["rule"]), int(data["sc_max_samples"]))

    @classmethod
    def from_json(cls, text: str) -> "NormTable":
        return cls.from_dict(json.loads(text))


def _sig17(x: float) -> float:
    return float(f"{x:.17g}")


def norm_table(n_max: int, rule: BallRule | None = None, sc_max_samples: int = SC_MAX_SAMPLES) -> NormTable:
    """Compute norms of all basis polynomials of degree ``<= n_max`` by quadrature.

    ``sc_max`` is the maximum of ``|Sc X|`` over the closed ball; scalar parts
    are homogeneous, so it is searched for on the unit sphere.
    """
    if rule is None:
        rule = make_ball_rule(*_rule_for_degree(n_max))
    rule.check_exactness(2 * n_max + 2, what=f"norm integrand for degree {n_max}")
    size = basis_size(n_max)
    l2, sc_l2, sc_mx = np.zeros(size), np.zeros(size), np.zeros(size)
    for n in range(n_max + 1):
        values = eval_degree(n, rule.nodes)  # (N, 2n+3, 3)
        sq = rule.integrate(values**2)  # (2n+3, 3)
        start = n * (n + 2)
        l2[start : start + 2 * n + 3] = np.sqrt(sq.sum(axis=-1))
        sc_l2[start : start + 2 * n + 3] = np.sqrt(sq[:, 0])
        for j, idx in enumerate(enumerate_basis(n)):
            sc_mx[start + j] = scalar_max(idx, sc_max_samples)
    return NormTable(n_max, l2, sc_l2, sc_mx, rule.sizes, sc_max_samples)


def scalar_max(idx: BasisIndex, n_samples: int = SC_MAX_SAMPLES) -> float:
    """``max |Sc idx(x)|`` over the closed unit ball."""
    if idx.is_hyperholomorphic_constant:
        # scalar part carries P_n^{n+1} = 0
        return 0.0
    return sphere_max(lambda p: np.abs(eval_scalar(idx, p)), 1.0, n_samples).value


def _rule_for_degree(n_max: int) -> tuple[int, int, int]:
    """Smallest default-shaped rule exact for degree ``2 n_max + 2``."""
    need = 2 * n_max + 2
    k = max(DEFAULT_RULE[0], need // 2 + 1)
    return (k, k, max(DEFAULT_RULE[2], need + 1))


# ---------------------------------------------------------------------------
# Gram matrices

PARTS = ("full", "scalar", "e1", "e2")


def gram_matrix(n_max: int, rule: BallRule, part: str = "full", nt: NormTable | None = None) -> np.ndarray:
    """Pairwise inner products of the normalized basis up to degree ``n_max``.

    ``part="full"`` uses the A-valued inner product; ``"scalar"``, ``"e1"`` and
    ``"e2"`` restrict both factors to that real component (plain L2(B)).
    """
    if part not in PARTS:
        raise ValueError(f"unknown part {part!r}; expected one of {PARTS}")
    rule.check_exactness(2 * n_max, what=f"Gram integrand for degree {n_max}")
    values = eval_all(n_max, rule.nodes)  # (N, K, 3)
    l2 = nt.l2_upto(n_max) if nt is not None else np.sqrt(np.einsum("i,ikc,ikc->k", rule.weights, values, values))
    values = values / l2[None, :, None]
    if part == "full":
        return np.einsum("i,iac,ibc->ab", rule.weights, values, values)
    c = PARTS.index(part) - 1
    return np.einsum("i,ia,ib->ab", rule.weights, values[..., c], values[..., c])


def coordinate_cross_products(n_max: int, rule: BallRule, nt: NormTable | None = None) -> np.ndarray:
    """``int_B [f]_i [f]_j dV`` for ``i < j`` and every normalized basis element ``f``.

    Returns shape ``(K, 3)`` for the pairs (0,1), (0,2), (1,2); all vanish when
    the coordinates of each basis polynomial are mutually orthogonal.
    """
    rule.check_exactness(2 * n_max, what=f"coordinate integrand for degree {n_max}")
    values = eval_all(n_max, rule.nodes)
    l2 = nt.l2_upto(n_max) if nt is not None else np.sqrt(np.einsum("i,ikc,ikc->k", rule.weights, values, values))
    values = values / l2[None, :, None]
    pairs = [(0, 1), (0, 2), (1, 2)]
    return np.stack([rule.integrate(values[..., i] * values[..., j]) for i, j in pairs], axis=-1)


def gradient_gram(n_max: int, rule: BallRule, component: int = 0, h: float = 1e-5) -> np.ndarray:
    """Gram matrix of the gradients of one real component of the normalized basis.

    Gradients come from central differences; nodes within ``h`` of the sphere
    are evaluated with the stencil reaching slightly outside, which is harmless
    for polynomials.
    """
    rule.check_exactness(2 * n_max, what="gradient integrand")
    base = eval_all(n_max, rule.nodes)
    l2 = np.sqrt(np.einsum("i,ikc,ikc->k", rule.weights, base, base))
    grads = []
    for step in np.eye(3) * h:
        d = (eval_all(n_max, rule.nodes + step) - eval_all(n_max, rule.nodes - step))[..., component] / (2 * h)
        grads.append(d / l2[None, :])
    g = np.stack(grads, axis=-1)  # (N, K, 3)
    return np.einsum("i,iac,ibc->ab", rule.weights, g, g)


def gradient_cross_products(n_max: int, rule: BallRule, h: float = 1e-5) -> np.ndarray:
    """``int_B grad [f]_i . grad [f]_j dV`` for ``i < j`` and every normalized element ``f``.

    Same layout as :func:`coordinate_cross_products`; gradients by central
    differences.
    """
    rule.check_exactness(2 * n_max, what="gradient integrand")
    base = eval_all(n_max, rule.nodes)
    l2 = np.sqrt(np.einsum("i,ikc,ikc->k", rule.weights, base, base))
    g = np.stack(
        [(eval_all(n_max, rule.nodes + s) - eval_all(n_max, rule.nodes - s)) / (2 * h) for s in np.eye(3) * h],
        axis=-1,
    ) / l2[None, :, None, None]  # (N, K, component, direction)
    pairs = [(0, 1), (0, 2), (1, 2)]
    return np.stack(
        [np.einsum("i,ikd,ikd->k", rule.weights, g[:, :, a], g[:, :, b]) for a, b in pairs], axis=-1
    )
