import numpy as np
import pytest

from qfi_bures.errors import NotPositiveDefinite, ShapeMismatch
from qfi_bures.linalg import matrix_sqrt
from qfi_bures.sqrt_calculus import (SqrtDerivativeContext, frechet_sqrt,
                                     frechet_sqrt_order_n, taylor_sqrt)


def spd_matrix(seed, dim):
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return m @ m.conj().T / dim + np.eye(dim)


def hermitian(seed, dim, scale=1.0):
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * (m + m.conj().T) / 2.0


def test_context_rejects_singular():
    with pytest.raises(NotPositiveDefinite):
        SqrtDerivativeContext(np.diag([1.0, 0.0]))
    with pytest.raises(NotPositiveDefinite):
        SqrtDerivativeContext(np.diag([1.0, -0.3]))


def test_frechet_rejects_shape():
    ctx = SqrtDerivativeContext(np.eye(2))
    with pytest.raises(ShapeMismatch):
        frechet_sqrt(ctx, np.eye(3))


def test_frechet_solves_sylvester_equation():
    # the derivative X is defined by X sqrt(A) + sqrt(A) X = H
    a = spd_matrix(0, 4)
    h = hermitian(1, 4)
    ctx = SqrtDerivativeContext(a)
    x = frechet_sqrt(ctx, h)
    s = ctx.sqrt_matrix()
    np.testing.assert_allclose(x @ s + s @ x, h, atol=1e-12)


def test_frechet_matches_central_difference():
    a = spd_matrix(2, 3)
    h = hermitian(3, 3)
    ctx = SqrtDerivativeContext(a)
    step = 1e-6
    oracle = (matrix_sqrt(a + step * h) - matrix_sqrt(a - step * h)) / (2 * step)
    got = frechet_sqrt(ctx, h)
    np.testing.assert_allclose(got, oracle, atol=1e-9 * np.linalg.norm(oracle))


def test_identity_base_closed_forms():
    # sqrt(I + tI) has scalar derivatives 1/2, -1/4, 3/8 at t = 0
    ctx = SqrtDerivativeContext(np.eye(3))
    direction = np.eye(3)
    np.testing.assert_allclose(frechet_sqrt(ctx, direction),
                               np.eye(3) / 2.0, atol=1e-14)
    np.testing.assert_allclose(frechet_sqrt_order_n(ctx, direction, 2),
                               -np.eye(3) / 4.0, atol=1e-14)
    np.testing.assert_allclose(frechet_sqrt_order_n(ctx, direction, 3),
                               3.0 * np.eye(3) / 8.0, atol=1e-14)


def test_order_n_matches_finite_difference():
    a = spd_matrix(4, 3)
    h = hermitian(5, 3, scale=0.5)
    ctx = SqrtDerivativeContext(a)

    step = 1e-4
    second = (matrix_sqrt(a + step * h) - 2.0 * matrix_sqrt(a)
              + matrix_sqrt(a - step * h)) / step ** 2
    got2 = frechet_sqrt_order_n(ctx, h, 2)
    assert np.abs(got2 - second).max() <= 1e-4 * max(1.0, np.abs(second).max())

    step = 1e-3
    third = (matrix_sqrt(a + 2 * step * h) - 2.0 * matrix_sqrt(a + step * h)
             + 2.0 * matrix_sqrt(a - step * h)
             - matrix_sqrt(a - 2 * step * h)) / (2.0 * step ** 3)
    got3 = frechet_sqrt_order_n(ctx, h, 3)
    assert np.abs(got3 - third).max() <= 1e-3 * max(1.0, np.abs(third).max())


def test_taylor_remainder_order():
    """Remainder of the order-n expansion shrinks like t^(n+1)."""
    a = spd_matrix(6, 3)
    h = hermitian(7, 3, scale=0.4)
    for order in (1, 2, 3):
        ts = [0.4, 0.2, 0.1, 0.05]
        gaps = []
        for t in ts:
            ctx = SqrtDerivativeContext(a)
            approx = taylor_sqrt(ctx, t * h, order)
            gaps.append(np.abs(matrix_sqrt(a + t * h) - approx).max())
        fit = np.polyfit(np.log(ts), np.log(gaps), 1)[0]
        assert fit >= order + 0.7


def test_taylor_rejects_nonpd_endpoint():
    ctx = SqrtDerivativeContext(np.eye(2))
    with pytest.raises(NotPositiveDefinite):
        taylor_sqrt(ctx, np.diag([-2.0, 0.0]), 2)
