"""The Weil representation on the group algebra of L'/L: generator
matrices, word evaluation, and metaplectic bookkeeping for coset sums.

General group elements are handled as explicit S/T words; the Euclidean
decomposition of an SL2(Z) matrix into such a word is provided for the
coset enumerations.  The phi-component of a word's metaplectic element is
evaluated recursively from the closed forms phi_T = 1, phi_S = sqrt(tau)
(principal branch), so a word always carries a consistent (rho, phi) pair.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from math import gcd

import numpy as np

from .lattice import GramLattice, DiscriminantGroup, discriminant_group


class WeilError(Exception):
    pass


class DimensionMismatch(WeilError):
    pass


class WordDecompositionFailure(WeilError):
    pass


def _e(x: float) -> complex:
    return cmath.exp(2j * cmath.pi * x)


@dataclass(frozen=True)
class GeneratorWord:
    """Sequence over the alphabet {T, T-, S, S-}, evaluated left to right
    as a matrix product."""

    letters: tuple[str, ...]

    def __post_init__(self):
        for l in self.letters:
            if l not in ("T", "T-", "S", "S-"):
                raise WeilError(f"bad letter {l!r}")

    @staticmethod
    def parse(s: str) -> "GeneratorWord":
        out = []
        i = 0
        while i < len(s):
            c = s[i]
            if c not in "ST":
                raise WeilError(f"bad letter {c!r}")
            if i + 1 < len(s) and s[i + 1] == "-":
                out.append(c + "-")
                i += 2
            else:
                out.append(c)
                i += 1
        return GeneratorWord(tuple(out))

    def sl2_matrix(self) -> np.ndarray:
        M = np.eye(2, dtype=np.int64)
        gens = {"T": np.array([[1, 1], [0, 1]], dtype=np.int64),
                "T-": np.array([[1, -1], [0, 1]], dtype=np.int64),
                "S": np.array([[0, -1], [1, 0]], dtype=np.int64),
                "S-": np.array([[0, 1], [-1, 0]], dtype=np.int64)}
        for l in self.letters:
            M = M @ gens[l]
        return M

    def phi(self, tau: complex) -> complex:
        """phi-component of the word's metaplectic element at tau, via the
        cocycle phi_{g1 g2}(tau) = phi_{g1}(g2 tau) phi_{g2}(tau)."""
        if not self.letters:
            return 1.0 + 0j
        head = self.letters[0]
        rest = GeneratorWord(self.letters[1:])
        M = rest.sl2_matrix()
        rtau = (M[0, 0] * tau + M[0, 1]) / (M[1, 0] * tau + M[1, 1])
        if head == "T" or head == "T-":
            ph = 1.0 + 0j
        elif head == "S":
            ph = cmath.sqrt(rtau)
        else:  # S-: inverse of (S, sqrt) evaluated at rtau
            ph = 1.0 / cmath.sqrt(-1.0 / rtau)
        return ph * rest.phi(tau)


class WeilRep:
    def __init__(self, L: GramLattice, disc: DiscriminantGroup | None = None):
        self.lattice = L
        self.disc = disc if disc is not None else discriminant_group(L)
        self.keys = list(self.disc.keys)
        self.index = {k: i for i, k in enumerate(self.keys)}
        n = len(self.keys)
        p, q = L.signature
        self.rho_T = np.diag([_e(float(self.disc.q_mod1(k)))
                              for k in self.keys])
        # i^{(q-p)/2}: the sign of the exponent is pinned by the metaplectic
        # relation (ST)^3 = S^2 and by the theta transformation law; with
        # (p-q)/2 the relation fails by a phase on odd-signature lattices.
        pref = cmath.exp(2j * cmath.pi * (q - p) / 8) / np.sqrt(n)
        S = np.empty((n, n), dtype=complex)
        for i, delta in enumerate(self.keys):
            for j, gamma in enumerate(self.keys):
                S[i, j] = pref * _e(-float(self.disc.b_mod1(gamma, delta)))
        self.rho_S = S

    @property
    def dim(self) -> int:
        return len(self.keys)

    def matrix(self, word: GeneratorWord) -> np.ndarray:
        M = np.eye(self.dim, dtype=complex)
        for l in word.letters:
            if l == "T":
                M = M @ self.rho_T
            elif l == "T-":
                M = M @ self.rho_T.conj().T
            elif l == "S":
                M = M @ self.rho_S
            else:
                M = M @ self.rho_S.conj().T
        return M


def weil_generators(L: GramLattice,
                    disc: DiscriminantGroup | None = None) -> WeilRep:
    return WeilRep(L, disc)


def weil_apply(rep: WeilRep, word: GeneratorWord, v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    if v.shape != (rep.dim,):
        raise DimensionMismatch(f"vector has shape {v.shape}, "
                                f"need ({rep.dim},)")
    return rep.matrix(word) @ v


def sl2_word(M) -> GeneratorWord:
    """Euclidean decomposition of an SL2(Z) matrix into an S/T word."""
    a, b, c, d = int(M[0][0]), int(M[0][1]), int(M[1][0]), int(M[1][1])
    if a * d - b * c != 1:
        raise WordDecompositionFailure("matrix is not in SL2(Z)")
    letters: list[str] = []

    def push_T(k):
        letters.extend(["T"] * k if k > 0 else ["T-"] * (-k))

    guard = 0
    while c != 0:
        guard += 1
        if guard > 10000:
            raise WordDecompositionFailure("decomposition did not terminate")
        k = a // c
        push_T(k)
        letters.append("S")
        # M := S^{-1} T^{-k} M = (c, d; -(a-kc), -(b-kd))
        a, b, c, d = c, d, -(a - k * c), -(b - k * d)
    if a == 1:
        push_T(b)
    else:  # a == d == -1: M = S^2 T^{-b'} with b' = -b
        letters.extend(["S", "S"])
        push_T(-b)
    word = GeneratorWord(tuple(letters))
    return word


def gamma_infinity_cosets(C: int, d_bound: int = 30):
    """Representatives of the cosets T^Z \\ SL2(Z) as all coprime pairs
    (c, d) with |c| <= C and, for c = 0, d = +-1; (c, d) and (-c, -d) give
    distinct cosets.  Yields (c, d, word) with word evaluating to a matrix
    with bottom row (c, d); |d| <= d_bound for c != 0."""
    yield 0, 1, GeneratorWord(())
    yield 0, -1, GeneratorWord(("S", "S"))
    for c in range(-C, C + 1):
        if c == 0:
            continue
        for d in range(-d_bound, d_bound + 1):
            if gcd(c, d) != 1:
                continue
            # a d - b c = 1
            a, b = _bezout(c, d)
            word = sl2_word([[a, b], [c, d]])
            yield c, d, word


def _bezout(c: int, d: int):
    """(a, b) with a*d - b*c = 1."""
    # extended gcd: x*c + y*d = 1
    old_r, r = c, d
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        qq = old_r // r
        old_r, r = r, old_r - qq * r
        old_s, s = s, old_s - qq * s
        old_t, t = t, old_t - qq * t
    assert old_r in (1, -1)
    x, y = old_s, old_t
    if old_r == -1:
        x, y = -x, -y
    # x c + y d = 1  =>  a = y, b = -x
    return y, -x
