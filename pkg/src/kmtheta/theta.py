"""Truncated evaluation of polynomial-weighted Siegel theta functions with
certified tail bounds, modularity defects, the sublattice splitting identity,
and the F_K coefficient-table construction."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .halfpower import HalfPowerPoly
from .km_polys import exp_laplacian, km_poly, u_decompose
from .lattice import (GramLattice, SplitData, DiscriminantGroup,
                      discriminant_group, enumerate_coset, box_enumerate,
                      ortho_basis, frac_vec)
from .grassmannian import (GrassPoint, Isometry, SplitFrame, majorant_matrix,
                           base_point, isometry_to_base, split_frame)
from .weil import WeilRep, GeneratorWord, weil_generators, \
    gamma_infinity_cosets


class ThetaError(Exception):
    pass


class NonconvergentRequest(ThetaError):
    pass


class IndexMismatch(ThetaError):
    pass


def _e(x) -> complex:
    return cmath.exp(2j * cmath.pi * x)


@dataclass
class ThetaValue:
    components: dict
    tail_bound: float

    def vector(self, keys) -> np.ndarray:
        return np.array([self.components[k] for k in keys])

    def sup_diff(self, other: "ThetaValue") -> float:
        return max(abs(self.components[k] - other.components[k])
                   for k in self.components)


@dataclass
class ThetaRequest:
    lattice: GramLattice
    tau: complex
    poly: HalfPowerPoly          # ambient, p+q variables
    radius: float
    frame: object = None         # Isometry or SplitFrame; default base frame
    delta: np.ndarray | None = None
    nu: np.ndarray | None = None

    def __post_init__(self):
        if self.tau.imag <= 0:
            raise ThetaError("tau must lie in the upper half plane")
        if self.radius <= 0:
            raise ThetaError("radius must be positive")


def ambient_km_poly(L: GramLattice, count, mode: str = "P",
                    form_degree=None) -> HalfPowerPoly:
    """km_poly over the first p variables, embedded in p+q ambient
    variables."""
    p = km_poly(count, mode, form_degree)
    out = HalfPowerPoly.zero(L.rank)
    pad = L.rank - p.nvars
    for (mono, a, b, d), r in p.terms.items():
        out._accum((mono + (0,) * pad, a, b, d), r)
    return out


def _frame_isometry(L, frame, B):
    if frame is None:
        z = base_point(L, B)
        return isometry_to_base(L, z, B), z
    if isinstance(frame, SplitFrame):
        return frame.g, frame.z
    if isinstance(frame, Isometry):
        ginv = np.linalg.inv(frame.matrix)
        Z = (ginv @ B[L.p:].T).T
        return frame, GrassPoint(L, Z)
    raise ThetaError("frame must be an Isometry or SplitFrame")


def _tail_bound(nrank: int, covol: float, cell_half_diag: float,
                abs_by_deg: dict[int, float], y: float, R: float,
                y_pref: float) -> float:
    """Upper bound for the discarded sum over majorant-norm > R.

    Counts lattice points in unit shells by a covering-volume argument and
    bounds each term by the polynomial envelope times the Gaussian."""
    def ball_vol(r):
        if r <= 0:
            return 0.0
        return math.pi ** (nrank / 2) * r ** nrank / math.gamma(nrank / 2 + 1)

    h = cell_half_diag
    tot = 0.0
    j = 0
    while True:
        lo, hi = R + j, R + j + 1
        cnt = (ball_vol(hi + h) - ball_vol(max(lo - h, 0.0))) / covol
        env = sum(c * hi ** deg for deg, c in abs_by_deg.items())
        term = cnt * env * math.exp(-math.pi * y * lo * lo)
        tot += term
        if term < 1e-6 * max(tot, 1e-300) or term == 0.0:
            break
        j += 1
        if j > 10000:
            break
    return y_pref * tot


def siegel_theta(req: ThetaRequest, enumerator=enumerate_coset,
                 disc: DiscriminantGroup | None = None,
                 B: np.ndarray | None = None) -> ThetaValue:
    """Coset-indexed theta sum: y^{q/2+m-} sum over L+coset of
    exp-laplacian(poly)(g(lam+nu)) e(tau q((lam+nu)_zperp) +
    taubar q((lam+nu)_z) - (lam+nu/2, delta))."""
    L = req.lattice
    if B is None:
        B = ortho_basis(L)
    g, z = _frame_isometry(L, req.frame, B)
    if disc is None:
        disc = discriminant_group(L)
    G = L.gram_np
    n, p, q = L.rank, L.p, L.q
    tau = complex(req.tau)
    x, y = tau.real, tau.imag
    delta = np.zeros(n) if req.delta is None else np.asarray(req.delta, float)
    nu = np.zeros(n) if req.nu is None else np.asarray(req.nu, float)
    Mz = majorant_matrix(L, z)
    mplus, mminus = req.poly.degree_split(p)
    pp = exp_laplacian(req.poly)
    y_pref = y ** (q / 2 + mminus)
    signs = np.array([1.0] * p + [-1.0] * q)
    coord_map = (signs[:, None] * (B @ G)) @ g.matrix  # x(g v) = this @ v

    nu_norm = math.sqrt(max(float(nu @ Mz @ nu), 0.0))
    R_enum = req.radius + nu_norm

    covol = math.sqrt(np.linalg.det(Mz))
    cell = 0.5 * sum(math.sqrt(Mz[i, i]) for i in range(n))
    abs_deg = pp.abs_coeff_by_degree(y)

    comps = {}
    for key in disc.keys:
        rep_vec = disc._rep[key]
        vecs = enumerator(L, rep_vec, Mz, R_enum)
        if vecs:
            lam = np.array([[float(c) for c in v] for v in vecs])
            v = lam + nu[None, :]
            norm_z = np.einsum('ij,jk,ik->i', v, Mz, v)
            keep = norm_z <= req.radius ** 2 + 1e-9
            v = v[keep]
            lam = lam[keep]
            norm_z = norm_z[keep]
            qv = 0.5 * np.einsum('ij,jk,ik->i', v, G, v)
            dphase = np.einsum('ij,jk,k->i', lam + 0.5 * nu[None, :], G, delta)
            coords = v @ coord_map.T
            vals = pp.eval_many(coords, y)
            terms = vals * np.exp(2j * math.pi * (x * qv - dphase)
                                  - math.pi * y * norm_z)
            comps[key] = y_pref * complex(math.fsum(terms.real),
                                          math.fsum(terms.imag))
        else:
            comps[key] = 0j
    tail = _tail_bound(n, covol, cell, abs_deg, y, req.radius, y_pref)
    return ThetaValue(comps, tail)


def siegel_theta_brute(req: ThetaRequest,
                       disc: DiscriminantGroup | None = None,
                       B: np.ndarray | None = None) -> ThetaValue:
    """Independent oracle: naive box enumeration and direct per-point
    polynomial evaluation, plain left-to-right accumulation."""
    L = req.lattice
    if B is None:
        B = ortho_basis(L)
    g, z = _frame_isometry(L, req.frame, B)
    if disc is None:
        disc = discriminant_group(L)
    G = L.gram_np
    p, q = L.p, L.q
    tau = complex(req.tau)
    x, y = tau.real, tau.imag
    n = L.rank
    delta = np.zeros(n) if req.delta is None else np.asarray(req.delta, float)
    nu = np.zeros(n) if req.nu is None else np.asarray(req.nu, float)
    Mz = majorant_matrix(L, z)
    mplus, mminus = req.poly.degree_split(p)
    pp = exp_laplacian(req.poly)
    signs = np.array([1.0] * p + [-1.0] * q)
    nu_norm = math.sqrt(max(float(nu @ Mz @ nu), 0.0))
    comps = {}
    for key in disc.keys:
        rep_vec = disc._rep[key]
        total = 0j
        for lam in box_enumerate(L, rep_vec, Mz, req.radius + nu_norm):
            v = np.array([float(c) for c in lam]) + nu
            norm_z = float(v @ Mz @ v)
            if norm_z > req.radius ** 2 + 1e-9:
                continue
            qv = 0.5 * float(v @ G @ v)
            dph = float((np.array([float(c) for c in lam]) + 0.5 * nu)
                        @ G @ delta)
            gx = signs * (B @ (G @ (g.matrix @ v)))
            val = pp.eval(list(gx), y)
            total += val * cmath.exp(2j * math.pi * (x * qv - dph)
                                     - math.pi * y * norm_z)
        comps[key] = y ** (q / 2 + mminus) * total
    covol = math.sqrt(np.linalg.det(Mz))
    cell = 0.5 * sum(math.sqrt(Mz[i, i]) for i in range(n))
    tail = _tail_bound(n, covol, cell, pp.abs_coeff_by_degree(y), y,
                       req.radius, y ** (q / 2 + mminus))
    return ThetaValue(comps, tail)


def radius_for_tail(L: GramLattice, y: float, target: float,
                    deg: int = 4, max_radius: float = 80.0) -> float:
    """Radius with Gaussian envelope e^{-pi y R^2} R^{deg+rank} below
    target; doubling search with a hard cap."""
    R = 2.0
    while R <= max_radius:
        est = math.exp(-math.pi * y * R * R) * (1 + R) ** (deg + L.rank + 2)
        if est < target:
            return R
        R *= 1.3
    raise NonconvergentRequest(f"no radius below {max_radius} reaches "
                               f"tail target {target} at y={y}")


def all_counts(p: int, total: int):
    """All count vectors over p indices with given total, lex order."""
    if p == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in all_counts(p - 1, total - first):
            yield (first,) + rest


def km_theta_components(L: GramLattice, tau: complex, z: GrassPoint,
                        radius: float,
                        B: np.ndarray | None = None) -> dict:
    """Map count vector (degree q) -> ThetaValue with poly P_count; the
    differential-form labels are the count keys themselves."""
    if B is None:
        B = ortho_basis(L)
    g = isometry_to_base(L, z, B)
    disc = discriminant_group(L)
    out = {}
    for count in all_counts(L.p, L.q):
        poly = ambient_km_poly(L, count, "P")
        req = ThetaRequest(L, tau, poly, radius, frame=g)
        out[count] = siegel_theta(req, disc=disc, B=B)
    return out


def modularity_defect(L: GramLattice, poly: HalfPowerPoly, generator: str,
                      tau: complex, frame=None, target: float = 1e-8,
                      B: np.ndarray | None = None,
                      rep: WeilRep | None = None) -> float:
    """sup-norm of Theta(gamma tau, ...) - (c tau + d)^{(p-q)/2 + m+ - m-}
    rho(gamma) Theta(tau, ...), with radii adapted to the tail target."""
    if B is None:
        B = ortho_basis(L)
    if rep is None:
        rep = weil_generators(L)
    p, q = L.p, L.q
    mplus, mminus = poly.degree_split(p)
    deg = poly.degree()
    if generator == "T":
        gtau = tau + 1
        autf = 1.0 + 0j
        rho = rep.rho_T
    elif generator == "S":
        gtau = -1.0 / tau
        autf = tau ** ((p - q) / 2 + mplus - mminus)
        rho = rep.rho_S
    else:
        raise ThetaError("generator must be 'S' or 'T'")
    R1 = radius_for_tail(L, gtau.imag, target / 8, deg)
    R2 = radius_for_tail(L, tau.imag, target / 8, deg)
    lhs = siegel_theta(ThetaRequest(L, gtau, poly, R1, frame=frame),
                       disc=rep.disc, B=B)
    rhs = siegel_theta(ThetaRequest(L, tau, poly, R2, frame=frame),
                       disc=rep.disc, B=B)
    keys = rep.keys
    rvec = autf * (rho @ rhs.vector(keys))
    return float(np.abs(lhs.vector(keys) - rvec).max())


# --- K-side theta -----------------------------------------------------

def theta_sub(frame: SplitFrame, tau: complex, poly_t: HalfPowerPoly,
              delta_vec: np.ndarray | None, radius: float) -> dict:
    """Theta function of the sublattice K at the frame's w-point, with the
    polynomial given in the frame's sub-basis coordinates and an optional
    delta shift (a vector of V orthogonal to u).  Returns K-coset -> value.

    The y-prefactor is y^{(q-1)/2 + m-} with (q-1) the negative rank of K.
    """
    sd = frame.sd
    K = sd.K
    tau = complex(tau)
    x, y = tau.real, tau.imag
    pK, qK = frame.lattice.p - 1, frame.lattice.q - 1
    if poly_t.nvars:
        mplus, mminus = poly_t.degree_split(pK)
    else:
        mminus = 0
    pp = exp_laplacian(poly_t)
    y_pref = y ** (qK / 2 + mminus)
    if K.rank == 0:
        val = pp.eval([], y) if not pp.is_zero() else 0j
        return {(): y_pref * val}

    G = frame.lattice.gram_np
    # t-coordinates of the K basis vectors
    T = frame.t_coords_many(np.array([[float(c) for c in kb]
                                      for kb in sd.k_basis]))
    MK = T @ T.T  # majorant of K in k-coordinates
    mu_pair = None
    if delta_vec is not None:
        emb = np.array([[float(c) for c in kb] for kb in sd.k_basis])
        mu_pair = emb @ G @ np.asarray(delta_vec, float)
    GK = K.gram_np
    nsub = poly_t.nvars
    p_w = pK  # number of positive sub coordinates
    out = {}
    for key in sd.disc_K.keys:
        rep_vec = sd.disc_K._rep[key]
        vecs = enumerate_coset(K, rep_vec, MK, radius)
        if not vecs:
            out[key] = 0j
            continue
        lam = np.array([[float(c) for c in v] for v in vecs])
        t = lam @ T
        q_wperp = 0.5 * np.sum(t[:, :p_w] ** 2, axis=1)
        q_w = -0.5 * np.sum(t[:, p_w:] ** 2, axis=1)
        vals = pp.eval_many(t, y)
        expo = (2j * math.pi * (tau * q_wperp + np.conj(tau) * q_w))
        if mu_pair is not None:
            expo = expo - 2j * math.pi * (lam @ mu_pair)
        terms = vals * np.exp(expo)
        out[key] = y_pref * complex(math.fsum(terms.real),
                                    math.fsum(terms.imag))
    return out


def embed_sub_components(sd: SplitData, kvals: dict, r: int) -> dict:
    """Lift a K-coset-indexed vector to an L'/L-indexed one: the component
    at beta in L0'/L is e(-r (beta, u')) * value at p(beta); zero off L0'."""
    out = {key: 0j for key in sd.disc_L.keys}
    for key in sd.L0_keys:
        rep = sd.disc_L._rep[key]
        phase = _e(-r * float(sd.lattice.pair(rep, sd.u_prime)))
        out[key] = phase * kvals[sd.project_key(key)]
    return out


def split_theta_sides(sd: SplitData, frame: SplitFrame, tau: complex,
                      alpha, radius: float | None = None, C: int = 5,
                      d_bound: int = 12, term_eps: float = 1e-16,
                      target: float = 1e-6,
                      rep: WeilRep | None = None):
    """Both sides of the splitting identity for Theta_L(tau, g, P_alpha).

    lhs: direct theta sum.  rhs: the K-theta of p^{0,0} lifted to L'/L plus
    the coset sum over Gamma_infinity \\ Mp2(Z) (coprime pairs (c,d),
    |c| <= C) of the r-sum with the u-perp Gaussian, the inverse Weil
    action and the metaplectic automorphy factor phi(tau)^{-(p+q)}.
    """
    L = sd.lattice
    p, q = L.p, L.q
    tau = complex(tau)
    if rep is None:
        rep = weil_generators(L, sd.disc_L)
    B = frame.B
    if radius is None:
        radius = radius_for_tail(L, tau.imag, target / 8, q)
    lhs = siegel_theta(
        ThetaRequest(L, tau, ambient_km_poly(L, alpha, "P"), radius,
                     frame=frame.g), disc=sd.disc_L, B=B)

    polys = u_decompose(alpha, frame, "closed_form", exact=False)
    pref = 1.0 / (math.sqrt(2.0) * math.sqrt(frame.u_perp_sq))
    keys = rep.keys
    acc = np.zeros(len(keys), dtype=complex)

    # first term: r = 0, h = 0
    deg = sum(alpha)
    rK = _sub_radius(sd, tau.imag, target, deg)
    k0 = theta_sub(frame, tau, polys[0], None, rK)
    emb0 = embed_sub_components(sd, k0, 0)
    acc += pref * np.array([emb0[k] for k in keys])

    for c, d, word in gamma_infinity_cosets(C, d_bound):
        M = word.sl2_matrix()
        den = M[1, 0] * tau + M[1, 1]
        gtau = (M[0, 0] * tau + M[0, 1]) / den
        yg = gtau.imag
        # cheapest prefactor estimate: the r = 1 Gaussian
        if math.exp(-math.pi / (2 * yg * frame.u_perp_sq)) < term_eps:
            continue
        phi = word.phi(tau)
        phi_pow = phi ** (-(p + q))
        rho_inv = rep.matrix(word).conj().T
        rKg = _sub_radius(sd, yg, target, deg)
        for h, poly_h in polys.items():
            if poly_h.is_zero():
                continue
            r = 1
            while True:
                gauss = math.exp(-math.pi * r * r
                                 / (2 * yg * frame.u_perp_sq))
                scale = gauss * r ** h * yg ** (-h)
                if scale < term_eps:
                    break
                kv = theta_sub(frame, gtau, poly_h,
                               r * frame.mu, rKg)
                emb = embed_sub_components(sd, kv, r)
                vec = np.array([emb[k] for k in keys])
                coef = (pref * (-2j) ** (-h) * r ** h * phi_pow
                        * yg ** (-h) * gauss)
                acc += coef * (rho_inv @ vec)
                r += 1
    rhs = ThetaValue({k: acc[i] for i, k in enumerate(keys)}, lhs.tail_bound)
    return lhs, rhs


def _sub_radius(sd: SplitData, y: float, target: float, deg: int) -> float:
    if sd.K.rank == 0:
        return 1.0
    return radius_for_tail(sd.K, y, target / 8, deg)


# --- cusp form tables -------------------------------------------------

@dataclass
class CuspFormData:
    """Table of Fourier coefficients c(f_gamma, n), n in Z + q(gamma),
    n > 0, for a (possibly synthetic) vector-valued cusp form."""

    weight: Fraction
    coeffs: dict                     # (coset key, Fraction n) -> complex
    keys: list                       # coset keys of the underlying group
    n_max: Fraction
    validate_grid: bool = True

    def component_value(self, key, tau: complex) -> complex:
        tot = 0j
        for (k, n), c in self.coeffs.items():
            if k == key:
                tot += c * cmath.exp(2j * cmath.pi * float(n) * tau)
        return tot

    def vector(self, tau: complex) -> np.ndarray:
        return np.array([self.component_value(k, tau) for k in self.keys])

    def coefficient(self, key, n: Fraction) -> complex:
        return self.coeffs.get((key, Fraction(n)), 0j)

    def scaled(self, factor: complex) -> "CuspFormData":
        return CuspFormData(self.weight,
                            {k: factor * v for k, v in self.coeffs.items()},
                            list(self.keys), self.n_max, self.validate_grid)


def synthetic_cusp_form(disc, weight: Fraction, n_max: Fraction,
                        seed: int = 0) -> CuspFormData:
    """Deterministic decaying coefficient table on all cosets: at each
    admissible n a coefficient of modulus e^{-2n} with a seeded phase."""
    rng = np.random.default_rng(seed)
    coeffs = {}
    for key in disc.keys:
        base = disc.q_mod1(key)
        n = base if base > 0 else base + 1
        while n <= n_max:
            ph = rng.uniform(0, 2 * math.pi)
            amp = math.exp(-2 * float(n)) * (0.5 + rng.uniform(0, 1))
            coeffs[(key, Fraction(n))] = amp * cmath.exp(1j * ph)
            n += 1
    return CuspFormData(Fraction(weight), coeffs, list(disc.keys),
                        Fraction(n_max))


def f_to_FK(f: CuspFormData, sd: SplitData, r: int, t: int) -> CuspFormData:
    """The K-indexed table F_K(tau; r, t): component at gamma in K'/K is
    sum over lambda in L0'/L with p(lambda) = gamma of
    e(-r (lambda, u') - r t q(u')) f_{L + lambda + t u'}."""
    if set(f.keys) != set(sd.disc_L.keys):
        raise IndexMismatch("cusp form table is not indexed by L'/L")
    L = sd.lattice
    out = {}
    qup = float(L.qform(sd.u_prime))
    for lam_key in sd.L0_keys:
        lam = sd.disc_L._rep[lam_key]
        kkey = sd.project_key(lam_key)
        pair = float(L.pair(lam, sd.u_prime))
        phase = _e(-r * pair - r * t * qup)
        shifted = tuple(Fraction(a) + t * b for a, b in zip(lam, sd.u_prime))
        src_key = sd.disc_L.key_of_vector(shifted)
        for (k2, n), c in f.coeffs.items():
            if k2 == src_key:
                key = (kkey, n)
                out[key] = out.get(key, 0j) + phase * c
    out = {k: v for k, v in out.items() if abs(v) > 0}
    return CuspFormData(f.weight, out, list(sd.disc_K.keys), f.n_max,
                        validate_grid=(t == 0))


def fiber_pairing_residual(f: CuspFormData, sd: SplitData, r: int,
                     gvec: np.ndarray, tau: complex) -> float:
    """|<f, g sum_l e_{lu/N}(-lr/N)> - <F_K(tau,-r,0), g>| for a K-indexed
    complex vector g; both sides are finite sums."""
    FK = f_to_FK(f, sd, -r, 0)
    rhs = 0j
    for i, k in enumerate(sd.disc_K.keys):
        rhs += FK.component_value(k, tau) * np.conj(gvec[i])
    kindex = {k: i for i, k in enumerate(sd.disc_K.keys)}
    lhs = 0j
    L = sd.lattice
    for key in sd.L0_keys:
        rep = sd.disc_L._rep[key]
        pair = float(L.pair(rep, sd.u_prime))
        # component of g sum_l e_{lu/N} e(-lr/N) at this coset
        val = gvec[kindex[sd.project_key(key)]] * _e(-r * pair)
        lhs += f.component_value(key, tau) * np.conj(val)
    return abs(lhs - rhs)
