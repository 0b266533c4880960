import json
import math

import numpy as np
import pytest
from numpy.polynomial import Legendre
from numpy.testing import assert_allclose
from scipy.optimize import minimize_scalar

from monogenic.basis import BasisIndex, Family, enumerate_basis, enumerate_upto, eval_basis
from monogenic.errors import ConfigurationError
from monogenic.quadrature import (
    NormTable,
    coordinate_cross_products,
    gradient_cross_products,
    gradient_gram,
    gram_matrix,
    inner_product,
    make_ball_rule,
    norm_table,
)


def field(idx):
    return lambda q: eval_basis(idx, q)


def test_moments(rule):
    x = rule.nodes
    assert rule.integrate(np.ones(len(x))) == pytest.approx(4 * math.pi / 3, abs=1e-13)
    assert rule.integrate(x[:, 0] ** 2) == pytest.approx(4 * math.pi / 15, abs=1e-12)
    assert abs(rule.integrate(x[:, 0])) < 1e-13
    assert rule.integrate(x[:, 1] ** 2 * x[:, 2] ** 2) == pytest.approx(4 * math.pi / 105, abs=1e-13)


def test_inner_products(rule):
    e1 = lambda q: np.broadcast_to([0.0, 1.0, 0.0], q.shape)
    e2 = lambda q: np.broadcast_to([0.0, 0.0, 1.0], q.shape)
    assert inner_product(e1, e2, rule) == 0.0
    x00 = field(BasisIndex(Family.X, 0, 0))
    assert inner_product(x00, x00, rule) == pytest.approx(math.pi / 3, abs=1e-12)
    a, b = field(BasisIndex(Family.X, 2, 1)), field(BasisIndex(Family.Y, 3, 1))
    assert abs(inner_product(a, b, rule)) < 1e-10


def test_norm_values(nt6):
    assert nt6[BasisIndex(Family.X, 0, 0)].l2_norm == pytest.approx(math.sqrt(math.pi / 3), abs=1e-13)
    # X_1^0 = x0 + x1 e1 / 2 + x2 e2 / 2
    assert nt6[BasisIndex(Family.X, 1, 0)].l2_norm == pytest.approx(math.sqrt(2 * math.pi / 5), abs=1e-13)
    assert 0.5 / nt6[BasisIndex(Family.X, 0, 0)].l2_norm == pytest.approx(0.5 * math.sqrt(3 / math.pi), abs=1e-13)


def test_same_order_norms_coincide(nt6):
    for n in range(7):
        for m in range(1, n + 2):
            x, y = nt6[BasisIndex(Family.X, n, m)], nt6[BasisIndex(Family.Y, n, m)]
            assert x.l2_norm == pytest.approx(y.l2_norm, rel=1e-12)


def test_sc_max(nt6):
    for n in range(7):
        assert nt6[BasisIndex(Family.X, n, n + 1)].sc_max == 0.0
        assert nt6[BasisIndex(Family.Y, n, n + 1)].sc_max == 0.0
    # closed form (n+m+1)/2 max|P_n^m| found by a 1-D optimizer on the Rodrigues form
    for idx in enumerate_upto(6):
        if idx.is_hyperholomorphic_constant:
            continue
        p = Legendre.basis(idx.n).deriv(idx.m)
        g = lambda t: -abs((1 - t * t) ** (idx.m / 2) * p(t))
        grid = np.linspace(-1, 1, 2001)
        t0 = grid[np.argmin([g(t) for t in grid])]
        res = minimize_scalar(g, bounds=(max(-1, t0 - 1e-3), min(1, t0 + 1e-3)), method="bounded", options={"xatol": 1e-12})
        expected = 0.5 * (idx.n + idx.m + 1) * max(-res.fun, -g(t0))
        assert nt6[idx].sc_max == pytest.approx(expected, rel=1e-9)


def test_rule_refinement():
    coarse = norm_table(5, make_ball_rule(24, 24, 48), sc_max_samples=500)
    fine = norm_table(5, make_ball_rule(48, 48, 96), sc_max_samples=500)
    assert_allclose(coarse.l2, fine.l2, rtol=1e-12)
    assert_allclose(coarse.sc_l2, fine.sc_l2, rtol=1e-12)


def test_exactness_guard():
    with pytest.raises(ConfigurationError, match="exact to degree"):
        norm_table(8, make_ball_rule(2, 24, 48))
    with pytest.raises(ConfigurationError):
        gram_matrix(6, make_ball_rule(2, 24, 48))
    assert make_ball_rule(2, 24, 48).exact_degree == 3


def test_table_lookup_range(nt6):
    with pytest.raises(ConfigurationError):
        nt6[BasisIndex(Family.X, 7, 0)]


def test_gram_n4(rule, nt6):
    G = gram_matrix(4, rule, "full", nt6)
    assert G.shape == (35, 35)
    assert np.abs(G - np.eye(35)).max() < 1e-10
    assert G[0, 0] == pytest.approx(1.0, abs=1e-12)
    S = gram_matrix(4, rule, "scalar", nt6)
    assert np.abs(S - np.diag(np.diag(S))).max() < 1e-10


def test_degree_blocks(rule):
    G = gram_matrix(3, rule)
    for n in range(4):
        lo = n * (n + 2)
        block = G[lo : lo + 2 * n + 3, lo : lo + 2 * n + 3]
        assert block.shape == (2 * n + 3, 2 * n + 3)


def test_coordinates_orthogonal_within_each_element(rule, nt6):
    cross = coordinate_cross_products(6, rule, nt6)
    assert np.abs(cross).max() < 1e-12


def test_vector_parts_not_orthogonal_across_elements(rule, nt6):
    # e1 components of X_n^l and X_n^{l+2} overlap; only within-element orthogonality holds
    E = gram_matrix(2, rule, "e1", nt6)
    assert np.abs(E - np.diag(np.diag(E))).max() > 0.1


def test_json_roundtrip(nt6):
    text = nt6.to_json()
    back = NormTable.from_json(text)
    assert_allclose(back.l2, nt6.l2, rtol=0, atol=0)
    assert_allclose(back.sc_max, nt6.sc_max, rtol=0, atol=0)
    assert back.checksum() == nt6.checksum()
    data = json.loads(text)
    assert data["schema"] == 1 and len(data["entries"]) == 63


def test_table_deterministic(nt6):
    assert norm_table(6).checksum() == nt6.checksum()


@pytest.mark.slow
def test_scalar_gradients_orthogonal(rule):
    G = gradient_gram(4, rule, component=0)
    d = np.sqrt(np.outer(np.diag(G), np.diag(G)))
    off = ~np.eye(len(G), dtype=bool)
    scaled = np.divide(G, d, out=np.zeros_like(G), where=d > 0)
    assert np.abs(scaled[off]).max() < 1e-8


@pytest.mark.slow
def test_component_gradients_orthogonal_within_each_element(rule):
    cross = gradient_cross_products(4, rule)
    assert np.abs(cross).max() < 1e-8
