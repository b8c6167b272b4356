"""Grassmannian frames: base-point isometries, hyperbolic splitting
geometry, exact frame data, unipotent translations."""
from fractions import Fraction

import numpy as np
import pytest

from kmtheta.lattice import build_lattice, split_data
from kmtheta.grassmannian import (grass_point, base_point, majorant_matrix,
                                  isometry_to_base, split_frame,
                                  eichler, eichler_matrix, Isometry,
                                  NotNegativeDefinite, NotOrthogonalToU)
from kmtheta.lift import gauge_frame

A1_U = [[2, 0, 0], [0, 0, 1], [0, 1, 0]]


def test_grass_point_requires_negative_definite():
    L = build_lattice(A1_U)
    with pytest.raises(NotNegativeDefinite):
        grass_point(L, [[1.0, 0.0, 0.0]])


def test_majorant_positive_definite():
    L = build_lattice(A1_U)
    z = grass_point(L, [[0.3, 1.0, -0.8]])
    M = majorant_matrix(L, z)
    w = np.linalg.eigvalsh(M)
    assert w.min() > 0


def test_isometry_to_base_maps_z_to_base_negatives():
    L = build_lattice(A1_U)
    G = L.gram_np
    zvec = np.array([0.3, 1.0, -0.8])
    g = isometry_to_base(L, grass_point(L, [zvec]))
    assert np.abs(g.matrix.T @ G @ g.matrix - G).max() < 1e-12
    # image of the z-vector is purely negative in the base orthonormal frame
    frame = split_frame(split_data(L, (0, 1, 0), (0, 0, 1)), g=g)
    img = frame.B @ G @ (g.matrix @ zvec)
    assert np.abs(img[:L.p]).max() < 1e-12


def test_split_frame_geometry():
    L = build_lattice(A1_U)
    sd = split_data(L, (0, 1, 0), (0, 0, 1))
    for g in (None,
              isometry_to_base(L, grass_point(L, [[0.2, 1.0, -0.7]]))):
        frame = split_frame(sd, g=g)
        assert frame.u_perp_sq > 0
        assert frame.u_z_sq < 0
        G = L.gram_np
        u = np.array([0.0, 1.0, 0.0])
        # u = u_perp + u_z with the two parts in z-perp / z
        assert frame.u_perp_sq == pytest.approx(
            float(frame.u_perp @ G @ frame.u_perp), rel=1e-12)
        assert np.abs((frame.u_perp + frame.u_z) - u).max() < 1e-12
        # sub basis is orthogonal to both u-parts
        for f in frame.sub_basis:
            assert abs(f @ G @ frame.u_perp) < 1e-10
            assert abs(f @ G @ frame.u_z) < 1e-10


def test_exact_frame_matches_numeric():
    L = build_lattice(A1_U)
    sd, frame = gauge_frame(L, 1)
    ex = frame.exact
    assert float(ex.u_perp_sq) == pytest.approx(frame.u_perp_sq, rel=1e-13)
    A_num = np.array([[float(x) for x in row] for row in ex.A])
    assert np.abs(A_num - frame.A).max() < 1e-12


def test_eichler_requires_orthogonal_parameter():
    L = build_lattice(A1_U)
    with pytest.raises(NotOrthogonalToU):
        eichler_matrix(L, (0, 1, 0), (0, 0, 1))


def test_eichler_preserves_lattice():
    L = build_lattice(A1_U)
    sd = split_data(L, (0, 1, 0), (0, 0, 1))
    E = eichler_matrix(L, sd.u, sd.embed_k((Fraction(2),)))
    for row in E:
        for x in row:
            assert Fraction(x).denominator == 1


def test_isometry_composition():
    L = build_lattice(A1_U)
    g = isometry_to_base(L, grass_point(L, [[0.1, 1.0, -0.6]]))
    gi = g.inverse()
    assert np.abs((g @ gi).matrix - np.eye(3)).max() < 1e-12
