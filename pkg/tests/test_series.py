import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from monogenic.basis import BasisIndex, Family, basis_size, eval_all, eval_basis
from monogenic.quadrature import inner_product
from monogenic.quaternion import apply_hyperderivative_fd
from monogenic.series import (
    ORIGIN_FACTOR,
    Constraint,
    MonogenicSeries,
    coefficient_bound_check,
    decompose,
    evaluate,
    hyperderivative_series,
    max_modulus,
    project,
    sample_random,
    series_field,
    value_at_origin,
)

X00 = BasisIndex(Family.X, 0, 0)
X10 = BasisIndex(Family.X, 1, 0)
PTS = np.array([[0.1, 0.2, -0.3], [0.0, 0.0, 0.0], [-0.5, 0.4, 0.1], [0.0, -0.7, 0.2]])


def rand_series(seed, n_max=5):
    return MonogenicSeries(n_max, np.random.default_rng(seed).uniform(-1, 1, basis_size(n_max)))


def test_constant_series(nt6):
    s = MonogenicSeries.from_terms(3, {X00: 1.0})
    assert_allclose(evaluate(s, PTS, nt6), np.tile([ORIGIN_FACTOR, 0, 0], (4, 1)), atol=1e-15)
    assert ORIGIN_FACTOR == pytest.approx(0.48860251190292, abs=1e-12)
    assert_allclose(evaluate(MonogenicSeries.zeros(3), PTS, nt6), 0.0)


def test_single_term(nt6):
    s = MonogenicSeries.from_terms(2, {X10: 1.0})
    ref = eval_basis(X10, PTS) / nt6[X10].l2_norm
    assert_allclose(evaluate(s, PTS, nt6), ref, atol=1e-13)


@pytest.mark.parametrize("seed", range(5))
def test_project_roundtrip(seed, rule, nt6):
    s = rand_series(seed)
    back = project(series_field(s, nt6), 5, rule, nt6)
    assert_allclose(back.coeffs, s.coeffs, atol=1e-10)


def test_project_constant_one(rule, nt6):
    s = project(lambda q: np.broadcast_to([1.0, 0.0, 0.0], q.shape), 4, rule, nt6)
    assert s[X00] == pytest.approx(2 * math.sqrt(math.pi / 3), abs=1e-12)
    assert_allclose(np.delete(s.coeffs, 0), 0.0, atol=1e-12)


def test_projection_residual_orthogonal(rule, nt6):
    f = lambda q: np.stack([0 * q[..., 0], q[..., 0], 0 * q[..., 0]], axis=-1)  # x0 e1, not monogenic
    s = project(f, 4, rule, nt6)
    resid = lambda q: f(q) - evaluate(s, q, nt6)
    basis = eval_all(4, rule.nodes) / nt6.l2_upto(4)[None, :, None]
    dots = np.einsum("i,ikc,ic->k", rule.weights, basis, resid(rule.nodes))
    assert np.abs(dots).max() < 1e-9
    assert inner_product(resid, resid, rule) > 1e-3


def test_parseval(rule, nt6):
    for seed in range(3):
        s = rand_series(seed, 6)
        f = series_field(s, nt6)
        assert inner_product(f, f, rule) == pytest.approx(float(s.coeffs @ s.coeffs), abs=1e-9)


def test_decompose(rule, nt6):
    only_h = MonogenicSeries.from_terms(3, {BasisIndex(Family.X, 2, 3): 1.0})
    c, g, h = decompose(only_h, nt6)
    assert not g.coeffs.any() and (h.coeffs == only_h.coeffs).all()
    only_g = MonogenicSeries.from_terms(3, {BasisIndex(Family.Y, 2, 1): 1.0})
    c, g, h = decompose(only_g, nt6)
    assert not h.coeffs.any() and (g.coeffs == only_g.coeffs).all()

    s = rand_series(7)
    c, g, h = decompose(s, nt6)
    fg, fh = series_field(g, nt6), series_field(h, nt6)
    assert abs(inner_product(fg, fh, rule)) < 1e-10
    assert_allclose(c.as_array(), evaluate(s, np.zeros(3), nt6), atol=1e-15)
    pts = np.random.default_rng(0).uniform(-0.5, 0.5, (30, 3))
    assert np.abs(apply_hyperderivative_fd(fh, pts, 1e-4)).max() < 1e-6


def test_origin_value(nt6):
    for seed in range(5):
        s = rand_series(seed)
        assert value_at_origin(s, nt6).sc() == pytest.approx(ORIGIN_FACTOR * s[X00], abs=1e-13)


def test_max_modulus(nt6):
    const = MonogenicSeries.from_terms(2, {X00: -2.0})
    assert max_modulus(const, 0.7, 500, nt6).value == pytest.approx(2 * ORIGIN_FACTOR, rel=1e-15)
    lin = MonogenicSeries.from_terms(2, {X10: 1.0})
    full = max_modulus(lin, 1.0, 5000, nt6).value
    assert max_modulus(lin, 0.5, 5000, nt6).value == pytest.approx(0.5 * full, rel=1e-8)
    s = rand_series(3)
    values = [max_modulus(s, r, 5000, nt6).value for r in np.arange(0.1, 1.0, 0.1)]
    assert all(b >= a * (1 - 1e-9) for a, b in zip(values, values[1:]))


def test_sampler(nt6):
    a = sample_random(11, 5, "zero_at_origin", 1.0, nt6, 2000)
    b = sample_random(11, 5, "zero_at_origin", 1.0, nt6, 2000)
    assert a.coeffs.tobytes() == b.coeffs.tobytes()
    assert_allclose(evaluate(a, np.zeros(3), nt6), 0.0, atol=0)
    assert max_modulus(a, 1.0, 20000, nt6).value < 1.0

    o = sample_random(12, 5, Constraint.ORTHOGONAL_TO_HHOLO, 1.0, nt6, 2000)
    for n in range(6):
        for fam in Family:
            assert o[BasisIndex(fam, n, n + 1)] == 0.0
    f0 = evaluate(o, np.zeros(3), nt6)
    assert_allclose(f0[1:], 0.0, atol=0)


def test_coefficient_bound_equality_case(nt6):
    one = MonogenicSeries.from_terms(4, {X00: 2 * math.sqrt(math.pi / 3)})
    rep = coefficient_bound_check(one, nt6, 2000)
    assert rep.holds and rep.orthogonality_verified
    assert all(row.bound == pytest.approx(0.0, abs=1e-12) for row in rep.rows)


def test_hyperderivative_series(nt6):
    assert not hyperderivative_series(MonogenicSeries.from_terms(3, {X00: 1.0}), nt6).coeffs.any()
    s = MonogenicSeries.from_terms(2, {X10: nt6[X10].l2_norm})  # the unnormalized X_1^0
    ds = hyperderivative_series(s, nt6)
    assert_allclose(evaluate(ds, PTS, nt6), np.tile([1.0, 0, 0], (4, 1)), atol=1e-13)


@pytest.mark.parametrize("seed", range(3))
def test_hyperderivative_series_against_fd(seed, nt6):
    s = rand_series(seed, 6)
    pts = np.random.default_rng(seed).uniform(-0.5, 0.5, (30, 3))
    fd = apply_hyperderivative_fd(series_field(s, nt6), pts, 1e-4)
    exact = evaluate(hyperderivative_series(s, nt6), pts, nt6)
    assert_allclose(fd[..., :3], exact, atol=1e-6)
    assert np.abs(fd[..., 3]).max() < 1e-6


@given(st.integers(0, 10_000))
@settings(max_examples=10, deadline=None)
def test_json_roundtrip(seed):
    s = rand_series(seed, 3)
    assert MonogenicSeries.from_json(s.to_json()).coeffs.tobytes() == s.coeffs.tobytes()


def test_series_arithmetic():
    a = MonogenicSeries.from_terms(1, {X00: 1.0})
    b = MonogenicSeries.from_terms(2, {X10: 2.0})
    c = a + 3 * b
    assert c.n_max == 2 and c[X00] == 1.0 and c[X10] == 6.0
    with pytest.raises(ValueError):
        MonogenicSeries(2, np.zeros(4))
    assert not c.coeffs.flags.writeable
