import math

import pytest
from hypothesis import given, strategies as st

from mml.dualnum import DualScalar, dual_inv, dual_mul
from mml.errors import ZeroDivisor

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)
nonzero = finite.filter(lambda v: abs(v) > 1e-3)


def duals(re=finite):
    return st.builds(DualScalar, re, finite)


def test_product_ring_law():
    assert dual_mul(DualScalar(1, 2), DualScalar(3, 4)) == DualScalar(3, 10)


def test_product_identity():
    x = DualScalar(1.5, -2.5)
    assert dual_mul(x, DualScalar(1, 0)) == x


def test_eps_squared_is_zero():
    eps = DualScalar(0, 1)
    assert dual_mul(eps, eps) == DualScalar(0, 0)


def test_inverse_example():
    assert dual_inv(DualScalar(2, 3)) == DualScalar(0.5, -0.75)
    assert dual_inv(DualScalar(1, 0)) == DualScalar(1, 0)


def test_inverse_of_zero_divisor():
    with pytest.raises(ZeroDivisor):
        dual_inv(DualScalar(0, 5))


def test_division_operator():
    x = DualScalar(3, 1) / DualScalar(2, 3)
    y = dual_mul(DualScalar(3, 1), dual_inv(DualScalar(2, 3)))
    assert x == y


@given(duals(nonzero))
def test_inverse_roundtrip(x):
    one = dual_mul(x, dual_inv(x))
    assert math.isclose(one.re, 1.0, rel_tol=1e-14)
    assert abs(one.inf) <= 1e-14 * max(1.0, abs(x.inf / x.re))


@given(duals(), duals())
def test_commutative(x, y):
    a, b = dual_mul(x, y), dual_mul(y, x)
    assert math.isclose(a.re, b.re, rel_tol=1e-14, abs_tol=1e-300)
    assert math.isclose(a.inf, b.inf, rel_tol=1e-14, abs_tol=1e-300)


@given(duals(), duals(), duals())
def test_associative(x, y, z):
    a = dual_mul(dual_mul(x, y), z)
    b = dual_mul(x, dual_mul(y, z))
    scale = max(abs(a.re), abs(a.inf), 1.0)
    assert abs(a.re - b.re) <= 1e-14 * scale
    assert abs(a.inf - b.inf) <= 1e-14 * scale


@given(duals(), duals())
def test_leibniz_rule(x, y):
    p = dual_mul(x, y)
    assert p.inf == x.re * y.inf + x.inf * y.re
