"""Weight polynomials: Hermite arithmetic, the Gaussian conjugation
identity, and the u-direction decomposition."""
import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.special import eval_hermite

from kmtheta.halfpower import HalfPowerPoly
from kmtheta.km_polys import (hermite, hermite_rodrigues, km_poly,
                              exp_laplacian, scaling_identity_check,
                              gaussian_op_check, u_decompose,
                              reconstruction_residual, DegreeMismatch)
from kmtheta.lattice import build_lattice, split_data
from kmtheta.grassmannian import split_frame, grass_point, isometry_to_base
from kmtheta.theta import all_counts


def test_hermite_against_scipy():
    for n in range(9):
        h = hermite(n)
        for x in (-1.7, 0.0, 0.3, 2.5):
            assert h.eval([x]).real == pytest.approx(
                float(eval_hermite(n, x)), rel=1e-12, abs=1e-12)


def test_hermite_two_constructions_agree():
    for n in range(13):
        assert hermite(n) == hermite_rodrigues(n)


def test_monomial_mode_prefactor():
    p = km_poly((2, 1), "P")
    # 2^{3/2} x1^2 x2, stored as 2 * 2^{1/2}
    assert p.terms == {((2, 1), 1, 0, 0): Fraction(2)}


def test_exp_laplacian_examples():
    x1 = HalfPowerPoly.variable(2, 0)
    x2 = HalfPowerPoly.variable(2, 1)
    got = exp_laplacian(x1 * x1)
    expect = x1 * x1 + HalfPowerPoly.const(2, Fraction(-1, 4), 0, -2, -2)
    assert got == expect
    assert exp_laplacian(x1 * x2) == x1 * x2


def test_scaling_identity_small_counts():
    for count in ((1,), (2,), (1, 1), (2, 1), (0, 3), (2, 2)):
        assert scaling_identity_check(count)


def test_gaussian_operator_identity():
    for n in range(6):
        assert gaussian_op_check(n) < 1e-11


def test_u_decompose_rejects_wrong_length():
    L = build_lattice([[2, 0, 0], [0, 0, 1], [0, 1, 0]])
    sd = split_data(L, (0, 1, 0), (0, 0, 1))
    frame = split_frame(sd)
    with pytest.raises(DegreeMismatch):
        u_decompose((1, 0, 0), frame)


def test_u_decompose_reconstructs_ambient_polynomial():
    L = build_lattice([[2, 0, 0], [0, 0, 1], [0, 1, 0]])
    sd = split_data(L, (0, 1, 0), (0, 0, 1))
    rng = np.random.default_rng(4)
    for g in (None, isometry_to_base(L, grass_point(L, [[0.4, 1.0, -0.9]]))):
        frame = split_frame(sd, g=g)
        for count in all_counts(2, 2):
            assert reconstruction_residual(count, frame, rng) < 1e-10


def test_decomposed_degrees():
    L = build_lattice([[2, 0, 0], [0, 0, 1], [0, 1, 0]])
    sd = split_data(L, (0, 1, 0), (0, 0, 1))
    frame = split_frame(sd)
    parts = u_decompose((2, 0), frame)
    for h, poly in parts.items():
        if not poly.is_zero():
            assert poly.degree() == 2 - h
