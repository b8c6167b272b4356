"""Metaplectic representation matrices, word decomposition, cosets."""
import cmath
from math import gcd

import numpy as np
import pytest

from kmtheta.lattice import build_lattice
from kmtheta.weil import (WeilRep, weil_generators, weil_apply,
                          GeneratorWord, sl2_word, gamma_infinity_cosets,
                          DimensionMismatch, WeilError)

LATTICES = ([[0, 1], [1, 0]], [[2]], [[4]], [[8]], [[12]],
            [[2, 1], [1, 2]], [[-2]])


@pytest.mark.parametrize("gram", LATTICES)
def test_generators_unitary(gram):
    rep = weil_generators(build_lattice(gram))
    eye = np.eye(rep.dim)
    for M in (rep.rho_T, rep.rho_S):
        assert np.abs(M @ M.conj().T - eye).max() < 1e-12


@pytest.mark.parametrize("gram", LATTICES)
def test_braid_relation(gram):
    rep = weil_generators(build_lattice(gram))
    ST = rep.rho_S @ rep.rho_T
    assert np.abs(ST @ ST @ ST - rep.rho_S @ rep.rho_S).max() < 1e-12


def test_s_squared_acts_by_negation_and_signature_phase():
    L = build_lattice([[2]])
    rep = weil_generators(L)
    S2 = rep.rho_S @ rep.rho_S
    p, q = L.signature
    phase = cmath.exp(2j * cmath.pi * (q - p) / 4)
    # S^2 e_gamma = phase * e_{-gamma}
    for j, key in enumerate(rep.keys):
        neg = rep.disc.neg(key)
        i = rep.index[neg]
        for r in range(rep.dim):
            expect = phase if r == i else 0.0
            assert abs(S2[r, j] - expect) < 1e-12


def test_word_parse_and_matrix():
    w = GeneratorWord.parse("STS-T-")
    assert w.letters == ("S", "T", "S-", "T-")
    M = w.sl2_matrix()
    S = np.array([[0, -1], [1, 0]])
    T = np.array([[1, 1], [0, 1]])
    expect = S @ T @ np.linalg.inv(S) @ np.linalg.inv(T)
    assert np.abs(M - expect).max() == 0


def test_sl2_word_roundtrip():
    rng = np.random.default_rng(0)
    mats = [[[1, 0], [0, 1]], [[0, -1], [1, 0]], [[1, 5], [0, 1]],
            [[2, 1], [1, 1]], [[-1, 0], [0, -1]], [[3, -2], [-4, 3]],
            [[7, 3], [2, 1]], [[-2, -1], [5, 2]]]
    for M in mats:
        w = sl2_word(M)
        assert np.array_equal(w.sl2_matrix(), np.array(M))


def test_phi_cocycle_squares_to_automorphy():
    tau = 0.3 + 1.7j
    for M in ([[0, -1], [1, 0]], [[2, 1], [1, 1]], [[1, -3], [2, -5]]):
        w = sl2_word(M)
        c, d = M[1][0], M[1][1]
        assert abs(w.phi(tau) ** 2 - (c * tau + d)) < 1e-12


def test_representation_respects_word_products():
    rep = weil_generators(build_lattice([[2]]))
    w1 = GeneratorWord.parse("ST")
    w2 = GeneratorWord.parse("TS")
    combined = GeneratorWord(w1.letters + w2.letters)
    got = rep.matrix(w1) @ rep.matrix(w2)
    assert np.abs(got - rep.matrix(combined)).max() < 1e-12


def test_apply_dimension_check():
    rep = weil_generators(build_lattice([[2]]))
    with pytest.raises(DimensionMismatch):
        weil_apply(rep, GeneratorWord.parse("S"), np.ones(3))


def test_bad_letters_rejected():
    with pytest.raises(WeilError):
        GeneratorWord.parse("SX")


def test_coset_enumeration():
    seen = set()
    for c, d, word in gamma_infinity_cosets(3, d_bound=8):
        assert gcd(c, d) == 1
        M = word.sl2_matrix()
        assert (M[1, 0], M[1, 1]) == (c, d)
        assert (c, d) not in seen
        seen.add((c, d))
    # both signs of the bottom row appear as distinct cosets
    assert (0, 1) in seen and (0, -1) in seen
    assert (1, 0) in seen and (-1, 0) in seen
