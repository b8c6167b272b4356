"""Arithmetic of the quadratic field and the half-power coefficient ring."""
import math
from fractions import Fraction

import pytest

from kmtheta.exact import Q2, SQRT2, INV_SQRT2, mat_mul, inverse, solve
from kmtheta.halfpower import HalfPowerPoly


def test_sqrt2_arithmetic():
    assert SQRT2 * SQRT2 == Q2.of(2)
    assert SQRT2 * INV_SQRT2 == Q2.of(1)
    x = Q2(Fraction(3, 4), Fraction(-1, 2))
    assert x * x.inverse() == Q2.of(1)
    assert float(x) == pytest.approx(0.75 - 0.5 * math.sqrt(2), abs=1e-15)


def test_q2_power():
    x = Q2(Fraction(1), Fraction(1))
    assert x ** 0 == Q2.of(1)
    assert x ** 3 == x * x * x


def test_exact_linear_algebra_roundtrip():
    A = [[Q2.of(2), SQRT2, Q2.of(0)],
         [SQRT2, Q2.of(1), Q2.of(1)],
         [Q2.of(0), Q2.of(1), Q2.of(-3)]]
    Ainv = inverse(A)
    prod = mat_mul(A, Ainv)
    for i in range(3):
        for j in range(3):
            assert prod[i][j] == Q2.of(1 if i == j else 0)
    b = [Q2.of(1), Q2.of(0), SQRT2]
    x = solve(A, b)
    for i in range(3):
        acc = Q2.of(0)
        for j in range(3):
            acc = acc + A[i][j] * x[j]
        assert acc == b[i]


def test_halfpower_ring_laws():
    x = HalfPowerPoly.variable(2, 0)
    y = HalfPowerPoly.variable(2, 1)
    a = x * x + y.scaled(Fraction(1, 3), 1, 0, 0)
    b = x * y - HalfPowerPoly.const(2, 2)
    assert (a + b) - b == a
    assert a * b == b * a
    assert (a * b) * a == a * (b * a)
    assert (a - a).is_zero()


def test_halfpower_eval_tracks_constants():
    # 5/2 * 2^(1/2) * pi^(3/2) * y^(-1/2) * x^2 at x=2, y=4
    p = HalfPowerPoly(1, {((2,), 1, 3, -1): Fraction(5, 2)})
    expect = 2.5 * math.sqrt(2) * math.pi ** 1.5 / 2.0 * 4.0
    assert p.eval([2.0], 4.0).real == pytest.approx(expect, rel=1e-14)


def test_halfpower_y_split():
    p = HalfPowerPoly(1, {((0,), 0, 0, 2): Fraction(3),
                          ((0,), 0, 0, -2): Fraction(7)})
    parts = p.eval_y_split([0.0])
    assert parts[2] == pytest.approx(3.0)
    assert parts[-2] == pytest.approx(7.0)
