"""Grassmannian points, majorants, isometries to the base point, split
frames along an isotropic direction, and Eichler transformations.

A split frame packages everything the sublattice reduction needs: the
projections u_z, u_{z^perp}, the complements w, w^perp, the shift vector mu
and the degenerate isometry g# (g applied to the w^perp + w part).  Frames
come in two flavours: numeric (float, used by theta evaluation) and exact
(entries in Q(sqrt 2), used by the polynomial identity checks).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import exact
from .exact import Q2
from .lattice import GramLattice, SplitData, ortho_basis, frac_vec


class GrassError(Exception):
    pass


class NotNegativeDefinite(GrassError):
    pass


class DegenerateFrame(GrassError):
    pass


class NotOrthogonalToU(GrassError):
    pass


class BadIsometry(GrassError):
    pass


class GrassPoint:
    """A q-dimensional negative definite subspace z, spanned by the rows of
    neg_basis (lattice coordinates)."""

    def __init__(self, L: GramLattice, neg_basis):
        self.lattice = L
        Z = np.atleast_2d(np.asarray(neg_basis, dtype=float))
        if Z.shape != (L.q, L.rank):
            raise GrassError(f"need {L.q} basis vectors of length {L.rank}")
        G = L.gram_np
        zg = Z @ G @ Z.T
        eig = np.linalg.eigvalsh(zg)
        if eig[-1] >= 0:
            raise NotNegativeDefinite("z-basis Gram matrix is not negative "
                                      "definite")
        if eig[0] / eig[-1] > 1e8:
            raise DegenerateFrame("z-basis condition number exceeds 1e8")
        self.basis = Z  # rows


def grass_point(L: GramLattice, neg_basis) -> GrassPoint:
    return GrassPoint(L, neg_basis)


def majorant_matrix(L: GramLattice, z: GrassPoint) -> np.ndarray:
    """Matrix of (.,.)_z = (v_{z-perp},v_{z-perp}) - (v_z,v_z) in lattice
    coordinates."""
    G = L.gram_np
    Z = z.basis.T  # columns
    P = G @ Z @ np.linalg.inv(Z.T @ G @ Z) @ Z.T @ G
    return G - 2 * P


def majorant(L: GramLattice, z: GrassPoint, v) -> float:
    fv = np.array([float(x) for x in v])
    return float(fv @ majorant_matrix(L, z) @ fv)


class Isometry:
    def __init__(self, L: GramLattice, matrix, tol: float = 1e-10):
        self.lattice = L
        M = np.asarray(matrix, dtype=float)
        G = L.gram_np
        scale = max(1.0, np.abs(G).max())
        if np.abs(M.T @ G @ M - G).max() > tol * scale * 10:
            raise BadIsometry("matrix does not preserve the form")
        if np.linalg.det(M) < 0:
            raise BadIsometry("determinant must be +1 (SO, not O)")
        self.matrix = M

    def __matmul__(self, other: "Isometry") -> "Isometry":
        return Isometry(self.lattice, self.matrix @ other.matrix)

    def inverse(self) -> "Isometry":
        return Isometry(self.lattice, np.linalg.inv(self.matrix))


def base_point(L: GramLattice, B: np.ndarray | None = None) -> GrassPoint:
    """z0, spanned by the negative vectors of the stored orthogonal frame."""
    if B is None:
        B = ortho_basis(L)
    return GrassPoint(L, B[L.p:])


def isometry_to_base(L: GramLattice, z: GrassPoint,
                     B: np.ndarray | None = None) -> Isometry:
    """One isometry g with g(z) = z0; built by Gram-Schmidt, det-corrected
    to +1 by flipping the first positive frame vector if needed."""
    if B is None:
        B = ortho_basis(L)
    G = L.gram_np
    n = L.rank

    def gram_schmidt(vectors, sign):
        # orthonormalize under sign*G (positive definite on the span)
        out = []
        for v in vectors:
            w = v.astype(float).copy()
            for o in out:
                w -= (sign * (w @ G @ o)) * o
            nrm = sign * (w @ G @ w)
            if nrm <= 1e-14:
                raise DegenerateFrame("Gram-Schmidt breakdown")
            out.append(w / np.sqrt(nrm))
        return out

    neg = gram_schmidt(list(z.basis), -1.0)
    # z-perp: kernel of (z-basis) G, then positive orthonormalization
    A = z.basis @ G
    _, _, Vt = np.linalg.svd(A)
    perp = list(Vt[L.q:])
    pos = gram_schmidt(perp, +1.0)
    F = np.array(pos + neg).T  # columns: frame mapped to b_1..b_n
    Bc = B.T
    M = Bc @ np.linalg.inv(F)
    if np.linalg.det(M) < 0:
        F[:, 0] = -F[:, 0]
        M = Bc @ np.linalg.inv(F)
    return Isometry(L, M)


@dataclass
class ExactFrameData:
    """Q(sqrt 2) counterparts used by the exact polynomial decomposition."""

    g: list            # matrix, rows of Q2
    g_inv: list
    B: list            # orthogonal basis rows, Q2
    u_perp: list
    u_z: list
    u_perp_sq: Q2
    u_z_sq: Q2
    sub_basis: list    # basis of w-perp + w (not orthonormal), rows of Q2
    s: list            # s_j = (g(u), b_j)/u_perp^2, j = 1..p
    gu_pair: list      # (g(u), b_j), j = 1..p
    A: list            # A[j][m] = (g(f_m), b_j), j = 1..p
    fm_vprime: list    # oracle pairings (f_m, v'_j), j = 1..p
    s_oracle: list     # s'_j from the projection decomposition of g^{-1}b_j


class SplitFrame:
    """Geometry attached to (z, u, u'): projections, complements, mu, g#."""

    def __init__(self, sd: SplitData, g: Isometry,
                 B: np.ndarray | None = None,
                 exact_data: ExactFrameData | None = None):
        L = sd.lattice
        if B is None:
            B = ortho_basis(L)
        self.sd = sd
        self.lattice = L
        self.g = g
        self.B = B
        G = L.gram_np
        n, p, q = L.rank, L.p, L.q
        ginv = np.linalg.inv(g.matrix)
        Zc = ginv @ B[p:].T  # columns spanning z
        self.z = GrassPoint(L, Zc.T)
        u = np.array([float(x) for x in sd.u])
        c = np.linalg.solve(Zc.T @ G @ Zc, Zc.T @ G @ u)
        self.u_z = Zc @ c
        self.u_perp = u - self.u_z
        self.u_perp_sq = float(self.u_perp @ G @ self.u_perp)
        self.u_z_sq = float(self.u_z @ G @ self.u_z)
        if self.u_perp_sq <= 1e-12:
            raise DegenerateFrame("u has no positive component at this z")
        up = np.array([float(x) for x in sd.u_prime])
        self.mu = (-up + self.u_perp / (2 * self.u_perp_sq)
                   + self.u_z / (2 * self.u_z_sq))

        # orthonormal bases of w-perp (inside z-perp, positive) and of w
        # (inside z, negative), each the complement of the u-projection
        def complement(cols, u_part, sign):
            out = []
            for v in cols:
                w = v.astype(float).copy()
                w -= (sign * (w @ G @ u_part)) / (sign * (u_part @ G @ u_part)) * u_part
                for o in out:
                    w -= (sign * (w @ G @ o)) * o
                nrm = sign * (w @ G @ w)
                if nrm > 1e-10:
                    out.append(w / np.sqrt(nrm))
            return out

        zperp_cols = [ginv @ B[j] for j in range(p)]
        w_perp = complement(zperp_cols, self.u_perp, +1.0)
        w = complement([Zc[:, j] for j in range(q)], self.u_z, -1.0)
        if len(w_perp) != p - 1 or len(w) != q - 1:
            raise DegenerateFrame("complement dimensions wrong")
        self.sub_basis = w_perp + w  # rows, lattice coords
        self.n_sub = len(self.sub_basis)
        self._sub_signs = [1.0] * (p - 1) + [-1.0] * (q - 1)

        # pairing data for the polynomial decomposition
        gu = g.matrix @ u
        self.gu_pair = np.array([gu @ G @ B[j] for j in range(p)])
        self.s = self.gu_pair / self.u_perp_sq
        self.A = np.array([[ (g.matrix @ f) @ G @ B[j]
                             for f in self.sub_basis] for j in range(p)])
        # g maps w into the base negative subspace, which is orthogonal to
        # every positive frame vector; enforce that structural zero so the
        # decomposed polynomials stay free of the negative sub-variables.
        self.A[:, p - 1:] = 0.0
        self.exact = exact_data

    def t_coords(self, v) -> np.ndarray:
        """Coordinates of the w-perp + w part of v in sub_basis."""
        G = self.lattice.gram_np
        fv = np.array([float(x) for x in v])
        return np.array([s * (fv @ G @ f)
                         for s, f in zip(self._sub_signs, self.sub_basis)])

    def t_coords_many(self, vs: np.ndarray) -> np.ndarray:
        G = self.lattice.gram_np
        F = np.array(self.sub_basis)  # (n_sub, n)
        signs = np.array(self._sub_signs)
        return (vs @ G @ F.T) * signs[None, :]

    def g_sharp(self, v) -> np.ndarray:
        """Ambient orthogonal-frame coordinates of g#(v)."""
        G = self.lattice.gram_np
        t = self.t_coords(v)
        vw = sum(ti * f for ti, f in zip(t, self.sub_basis))
        gv = self.g.matrix @ vw
        signs = np.array([1.0] * self.lattice.p + [-1.0] * self.lattice.q)
        return signs * (self.B @ G @ gv)

    def w_perp_norm_sq(self, v) -> float:
        G = self.lattice.gram_np
        t = self.t_coords(v)
        p = self.lattice.p
        vwp = sum(ti * f for ti, f
                  in zip(t[:p - 1], self.sub_basis[:p - 1]))
        if isinstance(vwp, int):
            return 0.0
        return float(vwp @ G @ vwp)


def split_frame(sd: SplitData, g: Isometry | None = None,
                z: GrassPoint | None = None,
                B: np.ndarray | None = None) -> SplitFrame:
    if g is None:
        if z is None:
            z = base_point(sd.lattice, B)
        g = isometry_to_base(sd.lattice, z, B)
    return SplitFrame(sd, g, B)


# --- exact frames -----------------------------------------------------

def exact_split_frame(sd: SplitData, g_exact: list,
                      B_exact: list) -> SplitFrame:
    """Build a SplitFrame whose geometry is exact over Q(sqrt 2).

    g_exact: isometry matrix (rows of Q2) with g(z) = z0 for the z it
    induces; B_exact: exact orthogonal basis rows (positives first)."""
    L = sd.lattice
    n, p, q = L.rank, L.p, L.q
    Gq = [[Q2.of(L.gram[i][j]) for j in range(n)] for i in range(n)]

    def pair(v, w):
        return sum((v[i] * Gq[i][j] * w[j] for i in range(n)
                    for j in range(n)), Q2.of(0))

    g_inv = exact.inverse(g_exact)
    u = [Q2.of(x) for x in sd.u]
    # z basis: g^{-1}(b_j), j > p
    zb = [[sum(g_inv[i][k] * B_exact[j][k] for k in range(n))
           for i in range(n)] for j in range(p, n)]
    # wait: B_exact rows are vectors; g^{-1} applied to column vector:
    # (g_inv @ vec)_i = sum_k g_inv[i][k] vec[k]
    # project u onto z
    zg = [[pair(a, b) for b in zb] for a in zb]
    rhs = [pair(a, u) for a in zb]
    c = exact.solve(zg, rhs)
    u_z = [sum((c[j] * zb[j][i] for j in range(q)), Q2.of(0)) for i in range(n)]
    u_perp = [u[i] - u_z[i] for i in range(n)]
    u_perp_sq = pair(u_perp, u_perp)
    u_z_sq = pair(u_z, u_z)
    if u_perp_sq.is_zero():
        raise DegenerateFrame("u has no positive component at this z")

    zperp = [[sum(g_inv[i][k] * B_exact[j][k] for k in range(n))
              for i in range(n)] for j in range(p)]

    def complement_basis(cols, u_part):
        # exact basis of the orthogonal complement of u_part inside span(cols)
        row = [[pair(col, u_part) for col in cols]]
        ker = exact.kernel(row)
        out = []
        for kv in ker:
            out.append([sum((kv[j] * cols[j][i] for j in range(len(cols))),
                            Q2.of(0)) for i in range(n)])
        return out

    w_perp = complement_basis(zperp, u_perp)
    w = complement_basis(zb, u_z)
    if len(w_perp) != p - 1 or len(w) != q - 1:
        raise DegenerateFrame("complement dimensions wrong (exact)")
    sub = w_perp + w

    gu = [sum(g_exact[i][k] * u[k] for k in range(n)) for i in range(n)]
    gu_pair = [pair(gu, list(B_exact[j])) for j in range(p)]
    s = [x / u_perp_sq for x in gu_pair]
    gf = [[sum(g_exact[i][k] * f[k] for k in range(n)) for i in range(n)]
          for f in sub]
    A = [[pair(gf[m], list(B_exact[j])) for m in range(len(sub))]
         for j in range(p)]

    # oracle data: decompose g^{-1}(b_j) = s'_j u_perp + v'_j, v'_j in w-perp
    s_oracle = []
    fm_vprime = []
    for j in range(p):
        gb = zperp[j]
        sj = pair(gb, u_perp) / u_perp_sq
        vpr = [gb[i] - sj * u_perp[i] for i in range(n)]
        s_oracle.append(sj)
        fm_vprime.append([pair(f, vpr) for f in sub])

    data = ExactFrameData(g=g_exact, g_inv=g_inv, B=B_exact,
                          u_perp=u_perp, u_z=u_z,
                          u_perp_sq=u_perp_sq, u_z_sq=u_z_sq,
                          sub_basis=sub, s=s, gu_pair=gu_pair, A=A,
                          fm_vprime=fm_vprime, s_oracle=s_oracle)
    g_num = Isometry(L, [[float(x) for x in row] for row in g_exact])
    B_num = np.array([[float(x) for x in row] for row in B_exact])
    return SplitFrame(sd, g_num, B=B_num, exact_data=data)


# --- Eichler transformations -----------------------------------------

def eichler_matrix(L: GramLattice, u, lam):
    """Exact matrix of E(u, lam): v -> v - (v,u) lam + (v,lam) u
    - q(lam) (v,u) u, for lam orthogonal to u."""
    u = frac_vec(u)
    lam = frac_vec(lam)
    if L.pair(u, lam) != 0:
        raise NotOrthogonalToU("Eichler parameter must be orthogonal to u")
    n = L.rank
    Gu = [sum(Fraction(L.gram[i][j]) * u[j] for j in range(n))
          for i in range(n)]
    Gl = [sum(Fraction(L.gram[i][j]) * lam[j] for j in range(n))
          for i in range(n)]
    qlam = L.qform(lam)
    E = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            E[i][j] += -lam[i] * Gu[j] + u[i] * Gl[j] - qlam * u[i] * Gu[j]
    return E


def eichler(sd: SplitData, lam_kcoords) -> Isometry:
    """Eichler transformation for a K-vector given in k_basis coordinates."""
    lam = sd.embed_k(lam_kcoords)
    E = eichler_matrix(sd.lattice, sd.u, lam)
    return Isometry(sd.lattice, [[float(x) for x in row] for row in E])
