"""Theta sums: oracle agreement, transformation defects, the sublattice
splitting, and coefficient-table plumbing."""
from fractions import Fraction

import numpy as np
import pytest

from kmtheta.lattice import build_lattice, split_data, ortho_basis
from kmtheta.grassmannian import split_frame, grass_point, isometry_to_base
from kmtheta.theta import (ThetaRequest, siegel_theta, siegel_theta_brute,
                           ambient_km_poly, radius_for_tail,
                           modularity_defect, split_theta_sides,
                           theta_sub, embed_sub_components,
                           CuspFormData, synthetic_cusp_form, f_to_FK,
                           fiber_pairing_residual, ThetaError,
                           IndexMismatch, NonconvergentRequest, all_counts)
from kmtheta.km_polys import u_decompose

A1_U = [[2, 0, 0], [0, 0, 1], [0, 1, 0]]
U_U = [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]


def test_request_validation():
    L = build_lattice(A1_U)
    poly = ambient_km_poly(L, (1, 0), "P")
    with pytest.raises(ThetaError):
        ThetaRequest(L, 0.3 - 1j, poly, 5.0)
    with pytest.raises(ThetaError):
        ThetaRequest(L, 1j, poly, -2.0)


def test_fast_equals_brute():
    for gram in (A1_U, U_U):
        L = build_lattice(gram)
        B = ortho_basis(L)
        poly = ambient_km_poly(L, (2,) + (0,) * (L.p - 1), "P")
        for tau in (1.3j, 0.4 + 0.9j):
            R = radius_for_tail(L, tau.imag, 1e-12, 2)
            req = ThetaRequest(L, tau, poly, R)
            fast = siegel_theta(req, B=B)
            brute = siegel_theta_brute(req, B=B)
            assert fast.sup_diff(brute) < 1e-12


def test_tail_bound_is_honest():
    L = build_lattice(A1_U)
    B = ortho_basis(L)
    poly = ambient_km_poly(L, (2, 0), "P")
    tau = 1.1j
    small = siegel_theta(ThetaRequest(L, tau, poly, 2.5), B=B)
    big = siegel_theta(ThetaRequest(L, tau, poly, 9.0), B=B)
    assert small.sup_diff(big) <= small.tail_bound + 1e-14


def test_radius_search_raises_when_hopeless():
    L = build_lattice(A1_U)
    with pytest.raises(NonconvergentRequest):
        radius_for_tail(L, 1e-6, 1e-300)


def test_modularity_defects():
    L = build_lattice(A1_U)
    B = ortho_basis(L)
    poly = ambient_km_poly(L, (2, 0), "P")
    for tau in (0.3 + 1.1j, -0.2 + 0.8j):
        assert modularity_defect(L, poly, "T", tau, B=B) < 1e-10
        assert modularity_defect(L, poly, "S", tau, B=B) < 1e-8


def test_splitting_identity_generic_frame():
    L = build_lattice(A1_U)
    sd = split_data(L, (0, 1, 0), (0, 0, 1))
    g = isometry_to_base(L, grass_point(L, [[0.3, 1.0, -0.8]]))
    frame = split_frame(sd, g=g)
    for alpha in ((1, 0), (0, 1)):
        lhs, rhs = split_theta_sides(sd, frame, 0.2 + 2.5j, alpha, C=5)
        assert lhs.sup_diff(rhs) < 1e-6


def test_splitting_identity_rescaled_plane():
    L = build_lattice([[2, 0, 0], [0, 0, 2], [0, 2, 0]])
    sd = split_data(L, (0, 1, 0), (0, 0, Fraction(1, 2)))
    frame = split_frame(sd)
    lhs, rhs = split_theta_sides(sd, frame, 3j, (1, 0), C=5)
    assert lhs.sup_diff(rhs) < 1e-6


def test_sub_theta_embedding_zeroes_off_splitting_cosets():
    L = build_lattice([[2, 0, 0], [0, 0, 2], [0, 2, 0]])
    sd = split_data(L, (0, 1, 0), (0, 0, Fraction(1, 2)))
    frame = split_frame(sd)
    polys = u_decompose((1, 0), frame)
    kv = theta_sub(frame, 1.5j, polys[0], None, 6.0)
    emb = embed_sub_components(sd, kv, 1)
    assert set(emb) == set(sd.disc_L.keys)
    for key in sd.disc_L.keys:
        if key not in sd.L0_keys:
            assert emb[key] == 0


def test_cusp_form_table():
    L = build_lattice(A1_U)
    sd = split_data(L, (0, 1, 0), (0, 0, 1))
    f = synthetic_cusp_form(sd.disc_L, Fraction(3, 2), 3, seed=1)
    assert f.validate_grid
    for (key, n) in f.coeffs:
        assert n > 0
        assert (n - sd.disc_L.q_mod1(key)).denominator == 1
    assert f.scaled(2.0).coefficient(*next(iter(f.coeffs))) == \
        2.0 * f.coefficient(*next(iter(f.coeffs)))


def test_fiber_sum_pairing_identity():
    rng = np.random.default_rng(3)
    for gram, u, up in ((A1_U, (0, 1, 0), (0, 0, 1)),
                        ([[2, 0, 0], [0, 0, 2], [0, 2, 0]],
                         (0, 1, 0), (0, 0, Fraction(1, 2)))):
        sd = split_data(build_lattice(gram), u, up)
        f = synthetic_cusp_form(sd.disc_L, Fraction(3, 2), 3, seed=2)
        for r in range(4):
            g = (rng.normal(size=sd.disc_K.order)
                 + 1j * rng.normal(size=sd.disc_K.order))
            assert fiber_pairing_residual(f, sd, r, g, 0.1 + 1.2j) < 1e-14


def test_fk_requires_matching_index():
    L = build_lattice(A1_U)
    sd = split_data(L, (0, 1, 0), (0, 0, 1))
    other = synthetic_cusp_form(
        split_data(build_lattice(U_U), (0, 0, 1, 0),
                   (0, 0, 0, 1)).disc_L, Fraction(3, 2), 3)
    with pytest.raises(IndexMismatch):
        f_to_FK(other, sd, 1, 0)
