"""Even lattices: Gram matrices, discriminant groups, splitting data along a
primitive isotropic vector, and lattice-point enumeration under a majorant."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from . import exact
from .exact import Q2, INV_SQRT2


class LatticeError(Exception):
    pass


class NotSymmetric(LatticeError):
    pass


class NotEven(LatticeError):
    pass


class Degenerate(LatticeError):
    pass


class NotIsotropic(LatticeError):
    pass


class NotPrimitive(LatticeError):
    pass


class BadPairing(LatticeError):
    pass


class NotPositiveDefinite(LatticeError):
    pass


def frac_vec(v) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in v)


@dataclass(frozen=True)
class GramLattice:
    gram: tuple[tuple[int, ...], ...]
    rank: int
    signature: tuple[int, int]

    @property
    def p(self) -> int:
        return self.signature[0]

    @property
    def q(self) -> int:
        return self.signature[1]

    @property
    def gram_np(self) -> np.ndarray:
        return np.array(self.gram, dtype=float)

    def pair(self, v, w) -> Fraction:
        v, w = frac_vec(v), frac_vec(w)
        return sum(v[i] * self.gram[i][j] * w[j]
                   for i in range(self.rank) for j in range(self.rank))

    def qform(self, v) -> Fraction:
        return self.pair(v, v) / 2

    def det(self) -> int:
        return _int_det([list(r) for r in self.gram])


def _int_det(M) -> int:
    """Determinant of an integer matrix by fraction-free elimination."""
    n = len(M)
    A = [[Fraction(x) for x in row] for row in M]
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        inv = 1 / A[c][c]
        for i in range(c + 1, n):
            f = A[i][c] * inv
            if f != 0:
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    assert det.denominator == 1
    return int(det)


def build_lattice(gram) -> GramLattice:
    g = [list(map(int, row)) for row in gram]
    n = len(g)
    for row in g:
        if len(row) != n:
            raise NotSymmetric("gram matrix is not square")
    for i in range(n):
        for j in range(n):
            if g[i][j] != g[j][i]:
                raise NotSymmetric(f"gram[{i}][{j}] != gram[{j}][{i}]")
        if g[i][i] % 2 != 0:
            raise NotEven(f"odd diagonal entry at index {i}")
    if _int_det(g) == 0:
        raise Degenerate("gram matrix is singular")
    eig = np.linalg.eigvalsh(np.array(g, dtype=float))
    p = int(np.sum(eig > 0))
    q = int(np.sum(eig < 0))
    assert p + q == n
    return GramLattice(tuple(tuple(r) for r in g), n, (p, q))


# --- Smith normal form ------------------------------------------------

def smith_normal_form(M):
    """Return (D, U, V) with U*M*V = D diagonal, d_i | d_{i+1}, U,V
    unimodular integer matrices."""
    A = [list(map(int, row)) for row in M]
    n, m = len(A), len(A[0])
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    V = [[int(i == j) for j in range(m)] for i in range(m)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(i, j, k):  # row i += k * row j
        A[i] = [a + k * b for a, b in zip(A[i], A[j])]
        U[i] = [a + k * b for a, b in zip(U[i], U[j])]

    def add_col(i, j, k):  # col i += k * col j
        for r in A:
            r[i] += k * r[j]
        for r in V:
            r[i] += k * r[j]

    t = 0
    while t < min(n, m):
        # find pivot: smallest nonzero |entry| in remaining block
        best = None
        for i in range(t, n):
            for j in range(t, m):
                if A[i][j] != 0 and (best is None
                                     or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        dirty = False
        for i in range(t + 1, n):
            if A[i][t] != 0:
                k = A[i][t] // A[t][t]
                add_row(i, t, -k)
                if A[i][t] != 0:
                    dirty = True
        for j in range(t + 1, m):
            if A[t][j] != 0:
                k = A[t][j] // A[t][t]
                add_col(j, t, -k)
                if A[t][j] != 0:
                    dirty = True
        if dirty:
            continue
        # enforce divisibility d_t | everything below-right
        viol = None
        for i in range(t + 1, n):
            for j in range(t + 1, m):
                if A[i][j] % A[t][t] != 0:
                    viol = i
                    break
            if viol:
                break
        if viol is not None:
            add_row(t, viol, 1)
            continue
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return A, U, V


class DiscriminantGroup:
    """The finite quadratic module L'/L.

    Elements are keyed by tuples (a_1,...,a_k) with 0 <= a_i < d_i over the
    nontrivial elementary divisors; the representative vector is
    sum a_i * gen_i with coordinates reduced into [0,1)."""

    def __init__(self, L: GramLattice):
        self.lattice = L
        n = L.rank
        D, U, V = smith_normal_form([list(r) for r in L.gram])
        G_inv = exact.inverse([[Fraction(x) for x in row] for row in L.gram])
        U_inv = exact.inverse([[Fraction(x) for x in row] for row in U])
        GU = exact.mat_mul(G_inv, U_inv)
        divisors = [D[i][i] for i in range(n)]
        self.elementary_divisors = [d for d in divisors if d > 1]
        self.generators = [tuple(GU[r][i] for r in range(n))
                           for i in range(n) if divisors[i] > 1]
        self.order = 1
        for d in self.elementary_divisors:
            self.order *= d
        assert self.order == abs(L.det())
        self.keys = self._all_keys()
        self._rep = {k: self.rep_vector(k) for k in self.keys}

    def _all_keys(self):
        keys = [()]
        for d in self.elementary_divisors:
            keys = [k + (a,) for k in keys for a in range(d)]
        return keys

    def rep_vector(self, key) -> tuple[Fraction, ...]:
        n = self.lattice.rank
        v = [Fraction(0)] * n
        for a, gen in zip(key, self.generators):
            for i in range(n):
                v[i] += a * gen[i]
        return tuple(x - x.__floor__() for x in v)

    def key_of_vector(self, vec) -> tuple[int, ...]:
        """Coset key of a dual vector (raises if vec is not in L')."""
        vec = frac_vec(vec)
        for i in range(self.lattice.rank):
            pair = sum(Fraction(self.lattice.gram[i][j]) * vec[j]
                       for j in range(self.lattice.rank))
            if pair.denominator != 1:
                raise LatticeError("vector is not in the dual lattice")
        for key, rep in self._rep.items():
            if all((a - b).denominator == 1 for a, b in zip(vec, rep)):
                return key
        raise LatticeError("no coset matched (inconsistent dual vector)")

    def add(self, k1, k2):
        return tuple((a + b) % d for a, b, d
                     in zip(k1, k2, self.elementary_divisors))

    def neg(self, k):
        return tuple((-a) % d for a, d in zip(k, self.elementary_divisors))

    def zero_key(self):
        return tuple(0 for _ in self.elementary_divisors)

    def q_mod1(self, key) -> Fraction:
        v = self._rep[key]
        q = self.lattice.qform(v)
        return q - q.__floor__()

    def b_mod1(self, k1, k2) -> Fraction:
        b = self.lattice.pair(self._rep[k1], self._rep[k2])
        return b - b.__floor__()


def discriminant_group(L: GramLattice) -> DiscriminantGroup:
    return DiscriminantGroup(L)


# --- splitting data ---------------------------------------------------

def _integral(v) -> bool:
    return all(Fraction(x).denominator == 1 for x in v)


def _solve_integer_combination(targets, value):
    """Find integer x with sum x_i * targets_i = value (targets integers,
    value divisible by their gcd)."""
    # iterative extended gcd over the list
    n = len(targets)
    g = 0
    coeffs = [0] * n
    for i, t in enumerate(targets):
        if t == 0:
            continue
        if g == 0:
            g = abs(t)
            coeffs = [0] * n
            coeffs[i] = 1 if t > 0 else -1
        else:
            a, b = g, t
            # extended gcd of (a, b)
            old_r, r = a, b
            old_s, s = 1, 0
            old_t2, t2 = 0, 1
            while r != 0:
                qq = old_r // r
                old_r, r = r, old_r - qq * r
                old_s, s = s, old_s - qq * s
                old_t2, t2 = t2, old_t2 - qq * t2
            coeffs = [c * old_s for c in coeffs]
            coeffs[i] = old_t2
            g = old_r
    if g == 0 or value % g != 0:
        raise LatticeError("no integer solution")
    m = value // g
    return [c * m for c in coeffs]


def _integer_kernel_basis(row):
    """Basis of {x in Z^n : row . x = 0} for an integer row vector."""
    n = len(row)
    D, U, V = smith_normal_form([list(row)])
    # row * V = (g, 0, ..., 0) with g = gcd; kernel spanned by V columns 1..n-1
    basis = []
    for j in range(1, n):
        col = [V[i][j] for i in range(n)]
        basis.append(col)
    if D[0][0] == 0:  # zero row: all of Z^n
        basis = [[int(i == j) for i in range(n)] for j in range(n)]
    return basis


def _complete_unimodular(col):
    """Unimodular integer matrix whose first column is the primitive col."""
    n = len(col)
    D, U, V = smith_normal_form([[c] for c in col])
    # U * col * (+-1) = e_1 since col is primitive
    assert D[0][0] == 1
    U_inv = _int_matrix_inverse(U)
    first = [U_inv[i][0] for i in range(n)]
    if first == [-c for c in col]:
        for i in range(n):
            U_inv[i][0] = -U_inv[i][0]
    elif first != list(col):
        raise LatticeError("failed to complete vector to a basis")
    return U_inv


def _int_matrix_inverse(M):
    inv = exact.inverse([[Fraction(x) for x in row] for row in M])
    out = []
    for row in inv:
        assert all(x.denominator == 1 for x in row)
        out.append([int(x) for x in row])
    return out


class SplitData:
    def __init__(self, L: GramLattice, u, u_prime):
        u = frac_vec(u)
        u_prime = frac_vec(u_prime)
        if not _integral(u):
            raise NotPrimitive("u must be an element of L")
        if L.qform(u) != 0:
            raise NotIsotropic("u must have q(u) = 0")
        ints = [int(x) for x in u]
        if gcd(*[abs(x) for x in ints]) not in (1,):
            raise NotPrimitive("u must be primitive")
        # u' in L': pairs integrally with the basis
        pairs_up = [sum(Fraction(L.gram[i][j]) * u_prime[j]
                        for j in range(L.rank)) for i in range(L.rank)]
        if not all(x.denominator == 1 for x in pairs_up):
            raise BadPairing("u_prime must lie in the dual lattice")
        if L.pair(u, u_prime) != 1:
            raise BadPairing("(u, u_prime) must equal 1")

        self.lattice = L
        self.u = u
        self.u_prime = u_prime

        gu = [int(sum(Fraction(L.gram[i][j]) * u[j] for j in range(L.rank)))
              for i in range(L.rank)]
        self.N = gcd(*[abs(x) for x in gu if x != 0]) if any(gu) else 0
        if self.N == 0:
            raise Degenerate("u pairs trivially with L")
        # zeta in L with (zeta, u) = N
        self.zeta = tuple(Fraction(x) for x in
                          _solve_integer_combination(gu, self.N))

        # Lambda = L cap u-perp, then K = Lambda / Zu
        lam_basis = _integer_kernel_basis(gu)  # rank n-1
        # coordinates of u in lam_basis (integer, primitive)
        B = [[Fraction(lam_basis[j][i]) for j in range(len(lam_basis))]
             for i in range(L.rank)]
        cu = exact.solve(B, [Fraction(x) for x in u])
        cu = [int(x) for x in cu]
        W = _complete_unimodular(cu)
        # new basis of Lambda: first vector u, rest project to K basis
        k_basis = []
        for j in range(1, len(lam_basis)):
            vec = [sum(W[i][j] * lam_basis[i][r] for i in range(len(lam_basis)))
                   for r in range(L.rank)]
            k_basis.append(vec)
        self.k_basis = [tuple(int(x) for x in v) for v in k_basis]
        kg = [[int(L.pair(a, b)) for b in self.k_basis] for a in self.k_basis]
        if kg:
            self.K = build_lattice(kg)
        else:
            self.K = GramLattice((), 0, (0, 0))

        self.disc_L = discriminant_group(L)
        self.disc_K = (discriminant_group(self.K) if self.K.rank
                       else _TrivialDisc(self.K))

        # cosets of L0'/L: (lambda, u) = 0 mod N
        self.L0_keys = []
        for key in self.disc_L.keys:
            rep = self.disc_L._rep[key]
            val = L.pair(rep, u)
            if val.denominator == 1 and int(val) % self.N == 0:
                self.L0_keys.append(key)

        # postconditions
        if self.disc_L.order != self.N ** 2 * self.disc_K.order:
            raise LatticeError("|L'/L| != N^2 |K'/K| — invalid split data")
        image = {self.project_key(k) for k in self.L0_keys}
        if len(image) != self.disc_K.order:
            raise LatticeError("projection L0'/L -> K'/K is not surjective")

    # projection p: L0' -> K' -----------------------------------------
    def project_vector(self, lam) -> tuple[Fraction, ...]:
        """K'-coordinates (in k_basis) of p(lam) for lam in L0'."""
        L = self.lattice
        lam = frac_vec(lam)
        a = L.pair(lam, self.u_prime)
        b = L.pair(lam, self.u)
        if (b / self.N).denominator != 1:
            raise LatticeError("vector is not in L0'")
        x = [lam[i] - a * self.u[i] - (b / self.N) * self.zeta[i]
             for i in range(L.rank)]
        # express x in span(u, k_basis): x = c0 u + sum c_i k_i
        cols = [list(self.u)] + [list(map(Fraction, k)) for k in self.k_basis]
        A = [[cols[j][i] for j in range(len(cols))] for i in range(L.rank)]
        c = exact.solve(A, x)
        return tuple(c[1:])

    def project_key(self, key):
        rep = self.disc_L._rep[key]
        kc = self.project_vector(rep)
        if not self.K.rank:
            return ()
        return self.disc_K.key_of_vector_kcoords(kc)

    def embed_k(self, kcoords) -> tuple[Fraction, ...]:
        """Representative in L tensor Q of a K'-vector given in k_basis
        coordinates."""
        kcoords = frac_vec(kcoords)
        n = self.lattice.rank
        v = [Fraction(0)] * n
        for c, kb in zip(kcoords, self.k_basis):
            for i in range(n):
                v[i] += c * kb[i]
        return tuple(v)

    def fiber_keys(self, k_key):
        """All L-cosets in L0'/L projecting to the given K-coset."""
        return [k for k in self.L0_keys if self.project_key(k) == k_key]


class _TrivialDisc:
    """Discriminant data of the rank-0 lattice."""

    def __init__(self, K):
        self.lattice = K
        self.elementary_divisors = []
        self.generators = []
        self.order = 1
        self.keys = [()]
        self._rep = {(): ()}

    def q_mod1(self, key):
        return Fraction(0)

    def zero_key(self):
        return ()

    def add(self, k1, k2):
        return ()

    def neg(self, k):
        return ()

    def key_of_vector(self, vec):
        return ()

    def key_of_vector_kcoords(self, kc):
        return ()


def _disc_key_of_kcoords(disc: DiscriminantGroup, kc):
    # kc are coordinates in the K basis; the disc group stores reps in the
    # same basis, so reuse key_of_vector directly.
    return disc.key_of_vector(kc)


DiscriminantGroup.key_of_vector_kcoords = _disc_key_of_kcoords


def split_data(L: GramLattice, u, u_prime) -> SplitData:
    return SplitData(L, u, u_prime)


# --- enumeration ------------------------------------------------------

def enumerate_coset(L: GramLattice, coset, majorant: np.ndarray, R: float):
    """All lambda in L + coset with majorant-norm(lambda) <= R^2, sorted
    lexicographically by coordinates.  Fincke-Pohst style recursive
    coordinate bounding on the Cholesky factorization of the majorant."""
    M = np.asarray(majorant, dtype=float)
    n = L.rank
    try:
        C = np.linalg.cholesky(M)
    except np.linalg.LinAlgError:
        raise NotPositiveDefinite("majorant matrix is not positive definite")
    coset = frac_vec(coset)
    shift = np.array([float(x) for x in coset])
    # lambda = x + shift with x integral; norm = ||C^T (x+shift)||^2 with
    # C^T upper triangular, so coordinates can be bounded from the last one
    # down (Fincke-Pohst).
    Ct = C.T
    pad = 1e-9 * max(1.0, R * R)
    out = []

    def search(idx, fixed, rem):
        # fixed: list of chosen integer coords for indices idx+1..n-1
        # rem: remaining squared budget after those triangular coords
        if idx < 0:
            out.append(list(reversed(fixed)))
            return
        # y_idx = Ct[idx, idx]*(x_idx + s_idx) + sum_{j>idx} Ct[idx,j]*(x_j+s_j)
        off = sum(Ct[idx, j] * (fixed[n - 1 - j] + shift[j])
                  for j in range(idx + 1, n))
        c = Ct[idx, idx]
        half = np.sqrt(max(rem, 0.0))
        lo = int(np.ceil((-half - off) / c - shift[idx] - 1e-12))
        hi = int(np.floor((half - off) / c - shift[idx] + 1e-12))
        for x in range(lo, hi + 1):
            yv = c * (x + shift[idx]) + off
            nrem = rem - yv * yv
            if nrem >= -pad:
                search(idx - 1, fixed + [x], max(nrem, 0.0))

    search(n - 1, [], R * R + pad)
    vecs = [tuple(Fraction(x) + c for x, c in zip(xs, coset)) for xs in out]
    # exact-ish final filter against fuzz on the padded boundary
    def norm_of(v):
        fv = np.array([float(x) for x in v])
        return float(fv @ M @ fv)
    vecs = [v for v in vecs if norm_of(v) <= R * R + 1e-7 * max(1.0, R * R)]
    return sorted(vecs)


def box_enumerate(L: GramLattice, coset, majorant: np.ndarray, R: float):
    """Naive oracle: scan the coordinate box given by the majorant's
    smallest eigenvalue."""
    M = np.asarray(majorant, dtype=float)
    n = L.rank
    eig = np.linalg.eigvalsh(M)
    if eig[0] <= 0:
        raise NotPositiveDefinite("majorant matrix is not positive definite")
    coset = frac_vec(coset)
    bound = R / np.sqrt(eig[0])
    ranges = []
    for i in range(n):
        c = float(coset[i])
        lo = int(np.ceil(-bound - c - 1))
        hi = int(np.floor(bound - c + 1))
        ranges.append(range(lo, hi + 1))
    vecs = []
    import itertools
    for xs in itertools.product(*ranges):
        v = tuple(Fraction(x) + c for x, c in zip(xs, coset))
        fv = np.array([float(y) for y in v])
        if fv @ M @ fv <= R * R + 1e-7 * max(1.0, R * R):
            vecs.append(v)
    return sorted(vecs)


# --- orthogonal bases -------------------------------------------------

def ortho_basis(L: GramLattice) -> np.ndarray:
    """Rows are vectors b_1..b_n in lattice coordinates with (b_i,b_j) =
    +-delta_ij, positives first (numeric)."""
    G = L.gram_np
    w, E = np.linalg.eigh(G)
    order = np.argsort(-w)  # positives first
    w = w[order]
    E = E[:, order]
    rows = []
    for i in range(L.rank):
        rows.append(E[:, i] / np.sqrt(abs(w[i])))
    return np.array(rows)


def exact_ortho_basis(L: GramLattice):
    """Exact Q(sqrt2) orthogonal basis for block lattices built from
    diagonal entries +-1, +-2 and 2x2 blocks [[0,N],[N,0]] with N in {1,2}.
    Returns list of rows (Q2 entries), positives first, or None if the
    Gram matrix is not of this block shape."""
    n = L.rank
    g = L.gram
    pos, neg = [], []
    i = 0
    while i < n:
        offdiag = [j for j in range(n) if j != i and g[i][j] != 0]
        if not offdiag:
            d = g[i][i]
            row = [Q2.of(0)] * n
            if d in (1, -1):
                row[i] = Q2.of(1)
            elif d in (2, -2):
                row[i] = INV_SQRT2
            else:
                return None
            (pos if d > 0 else neg).append(row)
            i += 1
            continue
        if len(offdiag) == 1:
            j = offdiag[0]
            if j != i + 1 or g[i][i] != 0 or g[j][j] != 0:
                return None
            N = g[i][j]
            if N == 1:
                s = INV_SQRT2
            elif N == 2:
                s = Q2.of(Fraction(1, 2))
            else:
                return None
            rp = [Q2.of(0)] * n
            rm = [Q2.of(0)] * n
            rp[i] = s
            rp[j] = s
            rm[i] = s
            rm[j] = -s
            pos.append(rp)
            neg.append(rm)
            i += 2
            continue
        return None
    return pos + neg
