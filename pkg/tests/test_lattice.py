"""Lattices, discriminant groups, hyperbolic splittings, enumeration."""
from fractions import Fraction

import numpy as np
import pytest

from kmtheta.lattice import (build_lattice, discriminant_group, split_data,
                             enumerate_coset, box_enumerate, ortho_basis,
                             exact_ortho_basis, LatticeError, NotIsotropic,
                             NotPrimitive, BadPairing)

U = [[0, 1], [1, 0]]
A1_U = [[2, 0, 0], [0, 0, 1], [0, 1, 0]]


def test_signatures():
    assert build_lattice(U).signature == (1, 1)
    assert build_lattice(A1_U).signature == (2, 1)
    assert build_lattice([[-2]]).signature == (0, 1)


def test_discriminant_orders():
    for gram, order in ((U, 1), ([[2]], 2), ([[4]], 4),
                        ([[2, 1], [1, 2]], 3), ([[0, 2], [2, 0]], 4)):
        assert discriminant_group(build_lattice(gram)).order == order


def test_discriminant_q_consistency():
    L = build_lattice([[2, 1], [1, 2]])
    disc = discriminant_group(L)
    for key in disc.keys:
        rep = disc._rep[key]
        q = L.qform(rep)
        assert (q - disc.q_mod1(key)).denominator == 1


def test_split_data_validation():
    L = build_lattice(A1_U)
    with pytest.raises(NotIsotropic):
        split_data(L, (1, 0, 0), (0, 0, 1))
    with pytest.raises(BadPairing):
        split_data(L, (0, 1, 0), (0, 1, 0))
    with pytest.raises(NotPrimitive):
        split_data(L, (0, 2, 0), (0, 0, Fraction(1, 2)))


def test_split_data_a1():
    sd = split_data(build_lattice(A1_U), (0, 1, 0), (0, 0, 1))
    assert sd.N == 1
    assert sd.K.gram == ((2,),)
    assert sd.disc_K.order == 2
    for key in sd.L0_keys:
        assert sd.project_key(key) in sd.disc_K.keys
    # fibers partition L0'/L
    total = sum(len(sd.fiber_keys(k)) for k in sd.disc_K.keys)
    assert total == len(sd.L0_keys)


def test_split_data_rescaled_plane():
    L = build_lattice([[0, 2], [2, 0]])
    sd = split_data(L, (1, 0), (0, Fraction(1, 2)))
    assert sd.N == 2
    assert sd.disc_L.order == 4
    assert sd.disc_K.order == 1
    assert len(sd.L0_keys) == 2


def test_enumeration_matches_box_scan():
    from kmtheta.grassmannian import base_point, majorant_matrix
    for gram in (U, A1_U, [[2, 1], [1, 2]]):
        L = build_lattice(gram)
        if L.q == 0:
            M = L.gram_np
        else:
            M = majorant_matrix(L, base_point(L))
        disc = discriminant_group(L)
        for key in disc.keys:
            coset = disc._rep[key]
            a = enumerate_coset(L, coset, M, 3.0)
            b = box_enumerate(L, coset, M, 3.0)
            assert sorted(a) == sorted(b)


def test_exact_ortho_basis_is_orthonormal():
    for gram in ([[2]], A1_U, [[2, 0, 0], [0, 0, 2], [0, 2, 0]]):
        L = build_lattice(gram)
        rows = exact_ortho_basis(L)
        assert rows is not None
        G = L.gram_np
        Bn = np.array([[float(x) for x in r] for r in rows])
        got = Bn @ G @ Bn.T
        expect = np.diag([1.0] * L.p + [-1.0] * L.q)
        assert np.abs(got - expect).max() < 1e-14
