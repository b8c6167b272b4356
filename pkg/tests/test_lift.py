"""Fourier expansion of the lift: y-integrals, strip identity, gauge
collapse, elimination, and error paths."""
from fractions import Fraction

import numpy as np
import pytest
from scipy.special import kv

from kmtheta.lattice import build_lattice, split_data
from kmtheta.grassmannian import split_frame, grass_point, isometry_to_base
from kmtheta.theta import synthetic_cusp_form, CuspFormData
from kmtheta.lift import (LiftRequest, LiftError, ModeMismatch,
                          DivergentIntegral, BadSignature,
                          InconsistentTables, UNRESOLVED,
                          y_integral, fourier_coefficient,
                          strip_integral_check, h_kernel,
                          integrand_split_check, gauge_frame,
                          gauge_isometry, forward_gauge_tables,
                          eliminate_coefficients, GaugeTables,
                          direct_lift_integral)

A1_U = [[2, 0, 0], [0, 0, 1], [0, 1, 0]]


def _setup(seed=11, generic=True):
    L = build_lattice(A1_U)
    sd = split_data(L, (0, 1, 0), (0, 0, 1))
    f = synthetic_cusp_form(sd.disc_L, Fraction(3, 2), 4, seed=seed)
    if generic:
        g = isometry_to_base(L, grass_point(L, [[0.3, 1.0, -0.8]]))
        frame = split_frame(sd, g=g)
    else:
        frame = split_frame(sd)
    return L, sd, f, frame


def test_y_integral_scalar_identity():
    got = y_integral(-1, 1.0, 1.0, "quadrature")
    assert got == pytest.approx(2.0 * float(kv(0, 2.0)), abs=1e-12)


def test_y_integral_methods_agree():
    rng = np.random.default_rng(7)
    for _ in range(25):
        s = rng.uniform(-3, 4)
        A = 10.0 ** rng.uniform(-1.5, 1.5)
        B = 10.0 ** rng.uniform(-1.5, 1.5)
        b = y_integral(s, A, B, "bessel")
        q = y_integral(s, A, B, "quadrature")
        assert abs(b - q) / abs(b) < 1e-10


def test_y_integral_divergence_guard():
    with pytest.raises(DivergentIntegral):
        y_integral(0.0, -1.0, 1.0)
    with pytest.raises(DivergentIntegral):
        y_integral(0.0, 1.0, 0.0)


def test_request_weight_consistency():
    L, sd, f, frame = _setup()
    with pytest.raises(LiftError):
        LiftRequest(f, (1, 0), frame, ell=1)  # weight must be 5/2
    with pytest.raises(LiftError):
        LiftRequest(f, (1, 1), frame)  # degree must equal q


def test_strip_identity():
    L, sd, f, frame = _setup()
    for alpha in ((1, 0), (0, 1)):
        req = LiftRequest(f, alpha, frame)
        for k in (1, 3):
            series, quad, resid = strip_integral_check(
                req, (Fraction(k, 2),))
            assert resid < 1e-8
            assert abs(series) > 0


def test_fourier_methods_agree():
    L, sd, f, frame = _setup()
    req = LiftRequest(f, (1, 0), frame)
    lam = (Fraction(1, 2),)
    a = fourier_coefficient(req, lam, "bessel")
    b = fourier_coefficient(req, lam, "quadrature")
    assert abs(a.value - b.value) < 1e-12
    assert a.value == pytest.approx(sum(a.pieces.values()), abs=1e-16)


def test_fourier_negative_norm_flag():
    L, sd, f, frame = _setup()
    req = LiftRequest(f, (1, 0), frame)
    res = fourier_coefficient(req, (Fraction(0),))
    assert res.negative_norm and res.value == 0


def test_fourier_rejects_non_dual_vector():
    L, sd, f, frame = _setup()
    req = LiftRequest(f, (1, 0), frame)
    with pytest.raises(LiftError):
        fourier_coefficient(req, (Fraction(1, 3),))


def test_kernel_term_decay():
    L, sd, f, frame = _setup()
    req = LiftRequest(f, (1, 0), frame)
    # the kernel at high Im tau is dominated by the r=1 Gaussian
    hi = abs(h_kernel(req, 40j))
    lo = abs(h_kernel(req, 2j))
    assert hi < lo


def test_split_check_formal_mode():
    L, sd, f, frame = _setup()
    req = LiftRequest(f, (1, 0), frame)
    res = integrand_split_check(req, 0.2 + 1.3j, C=3)
    assert res["pairing_identity"] < 1e-12
    assert res["theta_splitting"] < 1e-6
    with pytest.raises(ModeMismatch):
        integrand_split_check(req, 2j, assume_modular=True)


def test_gauge_collapse():
    for m_gram, sig in (([[2]], (2, 1)),
                        ([[2, 0], [0, 2]], (3, 1)),
                        ([[2, 0, 0], [0, 2, 0], [0, 0, -2]], (3, 2))):
        n = len(m_gram) + 2
        gram = [[0] * n for _ in range(n)]
        for i, row in enumerate(m_gram):
            for j, x in enumerate(row):
                gram[i][j] = x
        gram[n - 2][n - 1] = gram[n - 1][n - 2] = 1
        L = build_lattice(gram)
        assert L.signature == sig
        for a1 in range(1, L.p):
            _, report = gauge_isometry(L, a1)
            assert report["ok"]


def test_gauge_needs_positive_rank():
    L = build_lattice([[-2, 0, 0], [0, 0, 1], [0, 1, 0]])
    with pytest.raises(BadSignature):
        gauge_frame(L, 1)


def test_roundtrip_recovers_coefficients():
    L, sd, f, _ = _setup(seed=7)
    tables = forward_gauge_tables(f, L, 3)
    rec = eliminate_coefficients(tables)
    resolved = 0
    for (kkey, n), c in rec.items():
        if c is UNRESOLVED:
            continue
        truth = f.coefficient(sd.fiber_keys(kkey)[0], n)
        assert abs(c - truth) < 1e-12
        resolved += 1
    assert resolved >= 3
    # non-primitive norms beyond the reachable grid stay marked
    assert rec[((0,), Fraction(2))] is UNRESOLVED


def test_elimination_rejects_corrupt_tables():
    L, sd, f, _ = _setup(seed=7)
    tables = forward_gauge_tables(f, L, 3)
    # push one non-primitive entry off by a visible amount: the two
    # lam = +-3/2 rows then disagree about c(1/4) vs c(9/4)
    key = next(k for k in tables.entries
               if k[1] == (Fraction(3, 2),))
    bad = dict(tables.entries)
    bad[key] = bad[key] + 0.3
    corrupt = GaugeTables(tables.sd, tables.frames, bad,
                          tables.norm_cutoff, tables.lams)
    with pytest.raises(InconsistentTables):
        eliminate_coefficients(corrupt)


def test_direct_integral_zero_form():
    L, sd, f, frame = _setup()
    zero = CuspFormData(Fraction(3, 2), {k: 0j for k in f.coeffs},
                        f.keys, f.n_max)
    req = LiftRequest(zero, (1, 0), frame)
    assert direct_lift_integral(req, y_max=4.0, x_nodes=4,
                                y_step=0.4) == 0


def test_definite_complement_vanishing():
    L = build_lattice([[-2, 0, 0], [0, 0, 1], [0, 1, 0]])
    sd = split_data(L, (0, 1, 0), (0, 0, 1))
    f = synthetic_cusp_form(sd.disc_L, Fraction(3, 2), 4, seed=5)
    frame = split_frame(sd)
    from kmtheta.km_polys import u_decompose
    assert u_decompose((2,), frame)[0].is_zero()
    req = LiftRequest(f, (2,), frame)
    for c in (-3, -1, 1, 2):
        res = fourier_coefficient(req, (Fraction(c, 2),))
        assert res.value == 0 and res.term == 0
