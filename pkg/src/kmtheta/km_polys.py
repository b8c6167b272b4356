"""Hermite polynomials, the degree-(q,0) weight polynomials Q/P, the heat
operator exp(-Delta/8 pi y), the u-direction decomposition of the weight
polynomial along a split frame, and the twisted variants."""
from __future__ import annotations

import math
from fractions import Fraction

from .exact import Q2
from .halfpower import HalfPowerPoly
from .grassmannian import SplitFrame


class PolyError(Exception):
    pass


class NotHomogeneous(PolyError):
    pass


class DegreeMismatch(PolyError):
    pass


def hermite(n: int) -> HalfPowerPoly:
    """Physicists' Hermite polynomial H_n in one variable, exact, via the
    explicit sum n! sum_l (-1)^l / (l! (n-2l)!) (2x)^{n-2l}."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    p = HalfPowerPoly.zero(1)
    for l in range(n // 2 + 1):
        c = (Fraction(math.factorial(n), math.factorial(l)
                      * math.factorial(n - 2 * l)) * (-1) ** l
             * Fraction(2) ** (n - 2 * l))
        p = p + HalfPowerPoly(1, {((n - 2 * l,), 0, 0, 0): c})
    return p


def hermite_rodrigues(n: int) -> HalfPowerPoly:
    """Same polynomial via the recursion H_{n+1} = 2x H_n - H_n'."""
    x = HalfPowerPoly.variable(1, 0)
    h = HalfPowerPoly.const(1, 1)
    for _ in range(n):
        dh = HalfPowerPoly.zero(1)
        for (mono, a, b, d), r in h.terms.items():
            if mono[0] >= 1:
                dh = dh + HalfPowerPoly(1, {((mono[0] - 1,), a, b, d):
                                            r * mono[0]})
        h = x * h + x * h - dh
    return h


def km_poly(count, mode: str, form_degree: int | None = None) -> HalfPowerPoly:
    """The weight polynomial for a count vector (q_1,...,q_p) over p
    positive variables, embedded in p variables.

    mode "P": 2^{q*/2} prod x_j^{q_j};
    mode "Q": (4 pi)^{-q*/2} prod H_{q_j}(sqrt(2 pi) x_j).

    q* defaults to the total degree ||count||_1; the twisted polynomials
    keep the prefactor exponent at the untwisted degree, which is what
    form_degree overrides.
    """
    count = tuple(int(c) for c in count)
    p = len(count)
    total = sum(count)
    qstar = total if form_degree is None else int(form_degree)
    if mode == "P":
        mono = tuple(count)
        return HalfPowerPoly(p, {(mono, qstar, 0, 0): Fraction(1)})
    if mode != "Q":
        raise ValueError("mode must be 'P' or 'Q'")
    # (4 pi)^{-q*/2} = 2^{-q*} pi^{-q*/2}
    out = HalfPowerPoly.const(p, Fraction(1, 2 ** qstar), 0, -qstar, 0)
    for j, qj in enumerate(count):
        h = hermite(qj)
        # substitute x -> sqrt(2 pi) x_j
        img = HalfPowerPoly(p, {(tuple(int(i == j) for i in range(p)),
                                 1, 1, 0): Fraction(1)})
        out = out * h.substitute([img])
    return out


def exp_laplacian(poly: HalfPowerPoly) -> HalfPowerPoly:
    """exp(-Delta / 8 pi y) applied to poly; exact, introduces y^{-m}."""
    out = HalfPowerPoly.zero(poly.nvars)
    term = poly
    m = 0
    sign = 1
    while not term.is_zero():
        # term currently holds Delta^m poly / (m! 8^m); add with
        # (-1)^m pi^{-m} y^{-m}
        out = out + term.scaled(Fraction(sign), 0, -2 * m, -2 * m)
        nxt = term.laplacian().scaled(Fraction(1, 8 * (m + 1)))
        term = nxt
        m += 1
        sign = -sign
    return out


def scaling_identity_check(count) -> bool:
    """Exact identity: y^{-q/2} Q(sqrt(y) x) = exp(-Delta/8 pi y)(P) in the
    half-power ring with formal y, for ||count||_1 = q."""
    q = sum(count)
    Q = km_poly(count, "Q")
    lhs = Q.scale_vars(d=1).scaled(Fraction(1), 0, 0, -q)
    rhs = exp_laplacian(km_poly(count, "P"))
    return lhs == rhs


def gaussian_op_check(n: int, xs=(-2.0, -1.0, 0.0, 0.5, 3.0),
                      tol: float = 1e-12) -> float:
    """Numeric check of the one-variable Gaussian identity
    (x - d/(2 pi) dx)^n e^{-pi x^2} = e^{-pi x^2} (2 pi)^{-n/2}
    H_n(sqrt(2 pi) x) at sample points; returns the max residual."""
    # apply the operator on polynomial prefactors: (x - D/2pi)(p e^{-pi x^2})
    # = (2 x p - p'/(2 pi)) e^{-pi x^2}
    coeffs = [1.0]  # polynomial prefactor, ascending powers

    def step(c):
        out = [0.0] * (len(c) + 1)
        for k, v in enumerate(c):
            out[k + 1] += 2 * v
            if k >= 1:
                out[k - 1] -= k * v / (2 * math.pi)
        return out

    for _ in range(n):
        coeffs = step(coeffs)
    H = hermite(n)
    worst = 0.0
    for x in xs:
        lhs = sum(v * x ** k for k, v in enumerate(coeffs))
        rhs = (2 * math.pi) ** (-n / 2) * H.eval([math.sqrt(2 * math.pi) * x]).real
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
    return worst


# --- u-direction decomposition ---------------------------------------

def _binom(a: int, b: int) -> int:
    return math.comb(a, b)


def _q2_to_poly(nvars, x: Q2) -> HalfPowerPoly:
    return HalfPowerPoly.from_q2(nvars, x)


def _float_to_poly(nvars, x: float) -> HalfPowerPoly:
    return HalfPowerPoly.const(nvars, Fraction(x))


def _compositions(total, bounds):
    """All integer vectors 0 <= k_j <= bounds[j] with sum k_j = total."""
    if not bounds:
        if total == 0:
            yield ()
        return
    for k0 in range(min(total, bounds[0]) + 1):
        for rest in _compositions(total - k0, bounds[1:]):
            yield (k0,) + rest


def u_decompose(count, frame: SplitFrame, method: str = "closed_form",
                form_degree: int | None = None,
                exact: bool | None = None) -> dict[int, HalfPowerPoly]:
    """Decompose P (the monomial weight polynomial for `count`) along the
    u-direction of the frame: P(g(v)) = sum_h (v, u_perp)^h p_h(g#(v)).

    Returns {h: p_h} as polynomials in the frame's sub-basis coordinates.
    method "closed_form" uses the binomial formula; "oracle" symbolically
    expands P(g(v)) in the variables (v, u_perp) and the sub-basis
    coordinates and collects powers.  With exact frames both agree exactly.
    """
    count = tuple(int(c) for c in count)
    p = frame.lattice.p
    if len(count) != p:
        raise DegreeMismatch(f"count has {len(count)} entries, p = {p}")
    total = sum(count)
    qstar = total if form_degree is None else int(form_degree)
    if exact is None:
        exact = frame.exact is not None
    if exact and frame.exact is None:
        raise PolyError("frame carries no exact data")
    nsub = len(frame.exact.sub_basis) if exact else frame.n_sub

    if method == "closed_form":
        if exact:
            s_pair = frame.exact.gu_pair
            upsq = frame.exact.u_perp_sq
            A = frame.exact.A
            Y = [sum((HalfPowerPoly.from_q2(nsub, A[j][m])
                      * HalfPowerPoly.variable(nsub, m)
                      for m in range(nsub)), HalfPowerPoly.zero(nsub))
                 for j in range(p)]
            gu = [HalfPowerPoly.from_q2(nsub, s_pair[j]) for j in range(p)]
            inv_upsq = upsq.inverse()
        else:
            A = frame.A
            Y = [sum((HalfPowerPoly.const(nsub, Fraction(float(A[j][m])))
                      * HalfPowerPoly.variable(nsub, m)
                      for m in range(nsub)), HalfPowerPoly.zero(nsub))
                 for j in range(p)]
            gu = [HalfPowerPoly.const(nsub, Fraction(float(frame.gu_pair[j])))
                  for j in range(p)]
            inv_upsq = Fraction(1.0 / frame.u_perp_sq)
        out = {}
        for h in range(total + 1):
            acc = HalfPowerPoly.zero(nsub)
            for kvec in _compositions(h, list(count)):
                term = HalfPowerPoly.const(nsub, 1)
                coef = 1
                for j in range(p):
                    coef *= _binom(count[j], kvec[j])
                    term = term * (gu[j] ** kvec[j]) * (Y[j] ** (count[j] - kvec[j]))
                acc = acc + term.scaled(Fraction(coef))
            # prefactor 2^{q*/2} / u_perp^{2h}
            if exact:
                pref = HalfPowerPoly.from_q2(nsub, inv_upsq ** h
                                             if h else Q2.of(1))
                acc = (acc * pref).scaled(Fraction(1), qstar, 0, 0)
            else:
                acc = acc.scaled(Fraction(inv_upsq) ** h, qstar, 0, 0)
            out[h] = acc
        return out

    if method != "oracle":
        raise ValueError("method must be 'closed_form' or 'oracle'")

    # oracle: expand P(g(v)) with v = X (u_perp/u_perp^2) + sum t_m f_m,
    # using the projection decomposition g^{-1}(b_j) = s'_j u_perp + v'_j;
    # then x_j(g(v)) = (v, g^{-1} b_j) = s'_j X + sum_m (f_m, v'_j) t_m.
    # Variables: index 0 is X = (v, u_perp), 1.. are the sub coords.
    nv = nsub + 1
    if exact:
        sor = frame.exact.s_oracle
        fmv = frame.exact.fm_vprime
        images = []
        for j in range(p):
            img = HalfPowerPoly.from_q2(nv, sor[j]) * HalfPowerPoly.variable(nv, 0)
            for m in range(nsub):
                img = img + (HalfPowerPoly.from_q2(nv, fmv[j][m])
                             * HalfPowerPoly.variable(nv, m + 1))
            images.append(img)
    else:
        import numpy as np
        G = frame.lattice.gram_np
        ginv = np.linalg.inv(frame.g.matrix)
        images = []
        for j in range(p):
            gb = ginv @ frame.B[j]
            sj = float(gb @ G @ frame.u_perp) / frame.u_perp_sq
            vpr = gb - sj * frame.u_perp
            img = (HalfPowerPoly.const(nv, Fraction(sj))
                   * HalfPowerPoly.variable(nv, 0))
            for m in range(nsub):
                val = float(np.asarray(frame.sub_basis[m]) @ G @ vpr)
                img = img + (HalfPowerPoly.const(nv, Fraction(val))
                             * HalfPowerPoly.variable(nv, m + 1))
            images.append(img)

    P = km_poly(count, "P", qstar)
    mplus, mminus = P.degree_split(p)
    if mminus != 0:
        raise NotHomogeneous("oracle decomposition implemented for degree "
                             "(m+, 0) polynomials")
    expanded = P.substitute(images)
    out = {h: HalfPowerPoly.zero(nsub) for h in range(total + 1)}
    for (mono, a, b, d), r in expanded.terms.items():
        h = mono[0]
        out[h]._accum((tuple(mono[1:]), a, b, d), r)
    return out


def reconstruction_residual(count, frame: SplitFrame, rng) -> float:
    """Numeric check of sum_h (v,u_perp)^h p_h(g#(v)) = P(g(v)) at random v."""
    import numpy as np
    L = frame.lattice
    G = L.gram_np
    P = km_poly(count, "P")
    parts = u_decompose(count, frame, "closed_form", exact=False)
    worst = 0.0
    for _ in range(5):
        v = rng.uniform(-1, 1, L.rank)
        X = float(v @ G @ frame.u_perp)
        t = frame.t_coords(v)
        lhs = sum(X ** h * ph.eval(t).real for h, ph in parts.items())
        gx = frame.B @ G @ (frame.g.matrix @ v)
        signs = np.array([1.0] * L.p + [-1.0] * L.q)
        rhs = P.eval(list((signs * gx)[:L.p])).real
        worst = max(worst, abs(lhs - rhs))
    return worst


def twist_poly(alpha_count, beta_count):
    """Combine an untwisted count (degree q) with a twist count (degree l):
    returns (gamma count, Q polynomial with the untwisted prefactor
    exponent, opaque basis label)."""
    alpha = tuple(int(c) for c in alpha_count)
    beta = tuple(int(c) for c in beta_count)
    if len(alpha) != len(beta):
        raise DegreeMismatch("count vectors must share p")
    gamma = tuple(a + b for a, b in zip(alpha, beta))
    Q = km_poly(gamma, "Q", form_degree=sum(alpha))
    label = "b^" + ",".join(str(c) for c in gamma)
    return gamma, Q, label
