import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from monogenic.basis import BasisIndex, Family, eval_basis
from monogenic.errors import DomainError
from monogenic.quaternion import (
    E1,
    E2,
    E3,
    ONE,
    Quaternion,
    ReducedQuaternion,
    apply_D_fd,
    apply_Dbar_fd,
    apply_hyperderivative_fd,
    conj,
    laplacian_fd,
    norm,
    observed_order,
    qmul,
    quat_mul,
    riesz_residual,
    sc,
)

finite = st.floats(min_value=-10, max_value=10, allow_nan=False)
quats = st.tuples(finite, finite, finite, finite)

P = np.array([0.2, -0.1, 0.3])


def test_unit_products():
    assert_allclose(qmul(E1, E2), E3)
    assert_allclose(qmul(E2, E3), E1)
    assert_allclose(qmul(E3, E1), E2)
    assert_allclose(qmul(E2, E1), -E3)
    for e in (E1, E2, E3):
        assert_allclose(qmul(e, e), -ONE)


def test_spec_products():
    a = Quaternion(1.5, -2.0, 0.25, 3.0)
    assert quat_mul(Quaternion(1.0), a) == a
    lhs = quat_mul(ReducedQuaternion(0, 1, 1), ReducedQuaternion(0, 1, -1))
    assert_allclose(lhs.as_array(), [0, 0, 0, -2])


def test_scalar_vector_conj_norm():
    assert conj(ReducedQuaternion(1, 1, 0)) == ReducedQuaternion(1, -1, 0)
    assert norm(ReducedQuaternion(0, 1, 1)) == pytest.approx(math.sqrt(2))
    assert sc(ReducedQuaternion(0.3, 4, 5)) == 0.3
    assert ReducedQuaternion(0.3, 4, 5).vec() == (4, 5)
    assert Quaternion(1, 2, 3, 4).vec() == (2, 3, 4)


def test_reduced_arithmetic_stays_in_A():
    x = ReducedQuaternion(1, 2, 3) + ReducedQuaternion(1, 1, 1) * 2.0
    assert isinstance(x, ReducedQuaternion)
    assert x == ReducedQuaternion(3, 4, 5)
    y = ReducedQuaternion(0, 1, 0) * ReducedQuaternion(0, 0, 1)
    assert isinstance(y, Quaternion) and y.a3 == 1.0
    with pytest.raises(ValueError):
        ReducedQuaternion.from_array([0, 0, 0, 1.0])


@given(quats, quats)
def test_norm_multiplicative(a, b):
    a, b = np.array(a), np.array(b)
    lhs = np.linalg.norm(qmul(a, b))
    rhs = np.linalg.norm(a) * np.linalg.norm(b)
    assert abs(lhs - rhs) <= 8 * np.finfo(float).eps * max(rhs, 1e-300)


@given(quats, quats, quats)
@settings(max_examples=50)
def test_associative(a, b, c):
    a, b, c = map(np.array, (a, b, c))
    scale = np.linalg.norm(a) * np.linalg.norm(b) * np.linalg.norm(c) + 1.0
    assert_allclose(qmul(qmul(a, b), c), qmul(a, qmul(b, c)), atol=1e-13 * scale)


@given(quats, quats)
def test_conjugate_reverses_products(a, b):
    a, b = np.array(a), np.array(b)
    lhs = Quaternion.from_array(qmul(a, b)).conj().as_array()
    rhs = qmul(Quaternion.from_array(b).conj().as_array(), Quaternion.from_array(a).conj().as_array())
    assert_allclose(lhs, rhs, atol=1e-12 * (1 + np.linalg.norm(a) * np.linalg.norm(b)))


def test_D_of_coordinate_fields():
    x0 = lambda q: np.stack([q[..., 0], 0 * q[..., 0], 0 * q[..., 0]], axis=-1)
    x1 = lambda q: np.stack([q[..., 1], 0 * q[..., 0], 0 * q[..., 0]], axis=-1)
    assert_allclose(apply_D_fd(x0, P), ONE, atol=1e-9)
    assert_allclose(apply_D_fd(x1, P), E1, atol=1e-9)


def test_D_annihilates_basis_polynomial():
    f = lambda q: eval_basis(BasisIndex(Family.X, 1, 0), q)
    assert np.linalg.norm(apply_D_fd(f, P)) < 1e-9


def test_hyperderivative_of_constant_and_X10():
    const = lambda q: np.broadcast_to([0.7, -0.2, 0.4], q.shape)
    assert_allclose(apply_hyperderivative_fd(const, P), 0.0, atol=1e-12)
    f = lambda q: eval_basis(BasisIndex(Family.X, 1, 0), q)
    assert_allclose(apply_hyperderivative_fd(f, P), ONE, atol=1e-9)
    hh = lambda q: eval_basis(BasisIndex(Family.X, 3, 4), q)
    # a cubic: the residual is pure O(h^2) truncation and quarters under halving
    res = [np.linalg.norm(apply_hyperderivative_fd(hh, P, h)) for h in (1e-3, 5e-4)]
    assert observed_order(*res) == pytest.approx(2.0, abs=0.01)
    assert res[1] < 1e-2


def test_riesz_residual_examples():
    e1 = lambda q: np.broadcast_to([0.0, 1.0, 0.0], q.shape)
    div, curl = riesz_residual(e1, P)
    assert abs(div) < 1e-12 and np.linalg.norm(curl) < 1e-12

    f = lambda q: eval_basis(BasisIndex(Family.X, 2, 1), q)
    div, curl = riesz_residual(f, P)
    assert abs(div) < 1e-8 and np.linalg.norm(curl) < 1e-8

    x1 = lambda q: np.stack([q[..., 1], 0 * q[..., 0], 0 * q[..., 0]], axis=-1)
    div, curl = riesz_residual(x1, P)
    assert abs(div) < 1e-9
    assert np.linalg.norm(curl) == pytest.approx(1.0, abs=1e-9)


def test_laplacian_factorization():
    # D(Dbar f) equals the componentwise Laplacian
    def f(q):
        x0, x1, x2 = q[..., 0], q[..., 1], q[..., 2]
        return np.stack([x0**3 * x1, x1 * x2**2, np.sin(x0) * x2], axis=-1)

    h = 1e-3
    lap = laplacian_fd(f, P, h)
    ddbar = apply_D_fd(lambda q: apply_Dbar_fd(f, q, h), P, h)
    assert_allclose(ddbar, lap, atol=1e-5)


def test_stencil_must_stay_inside():
    f = lambda q: q
    with pytest.raises(DomainError):
        apply_D_fd(f, np.array([0.99999, 0.0, 0.0]), 1e-4)
    with pytest.raises(DomainError):
        apply_D_fd(f, P, 0.0)


def test_observed_order_of_cubic():
    f = lambda q: np.stack([q[..., 0] ** 3, 0 * q[..., 0], 0 * q[..., 0]], axis=-1)
    exact = 3 * P[0] ** 2
    err = [abs(apply_D_fd(f, P, h)[0] - exact) for h in (1e-2, 5e-3)]
    assert observed_order(*err) == pytest.approx(2.0, abs=0.05)
