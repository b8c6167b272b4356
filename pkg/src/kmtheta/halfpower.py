"""Multivariate polynomials over the exact ring Q * 2^(a/2) * pi^(b/2) * y^(d/2).

Every polynomial identity in the pipeline lives in this ring: the 2^{q/2} and
(4pi)^{-q/2} prefactors, the sqrt(2 pi) Hermite substitution and the y^{-m}
terms produced by the heat operator all stay exact.  Floats enter only when a
polynomial is finally evaluated at a numeric point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exact import Q2


@dataclass(frozen=True)
class HalfPowerCoeff:
    """rat * 2^(a/2) * pi^(b/2) * y^(d/2), canonical with a in {0,1}."""

    rat: Fraction
    a: int = 0
    b: int = 0
    d: int = 0

    @staticmethod
    def make(rat, a=0, b=0, d=0) -> "HalfPowerCoeff":
        rat = Fraction(rat)
        # fold whole powers of 2 into the rational part
        if a >= 2 or a < 0:
            rat *= Fraction(2) ** (a // 2)
            a = a % 2
        return HalfPowerCoeff(rat, a, b, d)

    def __float__(self):
        return float(self.rat) * 2.0 ** (self.a / 2) * math.pi ** (self.b / 2)

    def value(self, y: float) -> float:
        return float(self) * y ** (self.d / 2)

    def __str__(self):
        return f"{self.rat} * 2^({self.a}/2) * pi^({self.b}/2) * y^({self.d}/2)"


class HalfPowerPoly:
    """Polynomial in nvars variables with HalfPowerCoeff coefficients.

    terms: dict keyed by (monomial exponent tuple, a, b, d) -> Fraction,
    with a normalized to {0,1} (whole powers of 2 folded into the rational).
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        self.terms = {}
        if terms:
            for key, rat in terms.items():
                self._accum(key, rat)

    def _accum(self, key, rat):
        mono, a, b, d = key
        rat = Fraction(rat)
        if a >= 2 or a < 0:
            rat *= Fraction(2) ** (a // 2)
            a = a % 2
        key = (tuple(mono), a, b, d)
        cur = self.terms.get(key)
        new = rat if cur is None else cur + rat
        if new == 0:
            self.terms.pop(key, None)
        else:
            self.terms[key] = new

    # constructors -----------------------------------------------------
    @staticmethod
    def zero(nvars: int) -> "HalfPowerPoly":
        return HalfPowerPoly(nvars)

    @staticmethod
    def const(nvars: int, rat, a=0, b=0, d=0) -> "HalfPowerPoly":
        p = HalfPowerPoly(nvars)
        if Fraction(rat) != 0:
            p._accum(((0,) * nvars, a, b, d), rat)
        return p

    @staticmethod
    def variable(nvars: int, i: int) -> "HalfPowerPoly":
        mono = [0] * nvars
        mono[i] = 1
        p = HalfPowerPoly(nvars)
        p._accum((tuple(mono), 0, 0, 0), 1)
        return p

    @staticmethod
    def from_q2(nvars: int, x: Q2) -> "HalfPowerPoly":
        p = HalfPowerPoly(nvars)
        if x.a != 0:
            p._accum(((0,) * nvars, 0, 0, 0), x.a)
        if x.b != 0:
            p._accum(((0,) * nvars, 1, 0, 0), x.b)
        return p

    # ring ops ---------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, HalfPowerPoly):
            return NotImplemented
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")
        p = HalfPowerPoly(self.nvars, dict(self.terms))
        for key, rat in other.terms.items():
            p._accum(key, rat)
        return p

    def __neg__(self):
        return HalfPowerPoly(self.nvars,
                             {k: -r for k, r in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, HalfPowerPoly):
            return NotImplemented
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")
        p = HalfPowerPoly(self.nvars)
        for (m1, a1, b1, d1), r1 in self.terms.items():
            for (m2, a2, b2, d2), r2 in other.terms.items():
                mono = tuple(x + y for x, y in zip(m1, m2))
                p._accum((mono, a1 + a2, b1 + b2, d1 + d2), r1 * r2)
        return p

    def scaled(self, rat, a=0, b=0, d=0) -> "HalfPowerPoly":
        p = HalfPowerPoly(self.nvars)
        for (mono, ta, tb, td), r in self.terms.items():
            p._accum((mono, ta + a, tb + b, td + d), r * Fraction(rat))
        return p

    def scaled_q2(self, x: Q2) -> "HalfPowerPoly":
        p = HalfPowerPoly(self.nvars)
        for (mono, ta, tb, td), r in self.terms.items():
            if x.a != 0:
                p._accum((mono, ta, tb, td), r * x.a)
            if x.b != 0:
                p._accum((mono, ta + 1, tb, td), r * x.b)
        return p

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = HalfPowerPoly.const(self.nvars, 1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        return (isinstance(other, HalfPowerPoly)
                and self.nvars == other.nvars
                and self.terms == other.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # structure --------------------------------------------------------
    def degree(self) -> int:
        return max((sum(m) for (m, _, _, _) in self.terms), default=0)

    def degree_split(self, p: int):
        """(m+, m-) degrees in the first p and the remaining variables.

        Raises ValueError if the polynomial is not bi-homogeneous.
        """
        degs = {(sum(m[:p]), sum(m[p:])) for (m, _, _, _) in self.terms}
        if len(degs) > 1:
            raise ValueError("polynomial is not homogeneous of a single "
                             f"bidegree: {sorted(degs)}")
        return degs.pop() if degs else (0, 0)

    def laplacian(self) -> "HalfPowerPoly":
        p = HalfPowerPoly(self.nvars)
        for (mono, a, b, d), r in self.terms.items():
            for i, e in enumerate(mono):
                if e >= 2:
                    m = list(mono)
                    m[i] -= 2
                    p._accum((tuple(m), a, b, d), r * e * (e - 1))
        return p

    def substitute(self, images: list["HalfPowerPoly"]) -> "HalfPowerPoly":
        """Compose: replace variable i by images[i] (all over the same
        new variable set)."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        nv = images[0].nvars if images else 0
        out = HalfPowerPoly.zero(nv)
        # cache powers of each image
        pow_cache = [{0: HalfPowerPoly.const(nv, 1)} for _ in images]
        for (mono, a, b, d), r in self.terms.items():
            term = HalfPowerPoly.const(nv, r, a, b, d)
            for i, e in enumerate(mono):
                cache = pow_cache[i]
                if e not in cache:
                    acc = cache[max(cache)]
                    for k in range(max(cache), e):
                        acc = acc * images[i]
                        cache[k + 1] = acc
                term = term * cache[e]
            out = out + term
        return out

    def scale_vars(self, a=0, b=0, d=0) -> "HalfPowerPoly":
        """Substitute x_i -> 2^(a/2) pi^(b/2) y^(d/2) x_i for every i."""
        p = HalfPowerPoly(self.nvars)
        for (mono, ta, tb, td), r in self.terms.items():
            deg = sum(mono)
            p._accum((mono, ta + a * deg, tb + b * deg, td + d * deg), r)
        return p

    # evaluation -------------------------------------------------------
    def eval(self, point, y: float = 1.0) -> complex:
        tot = 0j
        for (mono, a, b, d), r in self.terms.items():
            v = float(r) * 2.0 ** (a / 2) * math.pi ** (b / 2) * y ** (d / 2)
            acc = complex(v)
            for xi, e in zip(point, mono):
                if e:
                    acc *= xi ** e
            tot += acc
        return tot

    def eval_y_split(self, point) -> dict[int, complex]:
        """Evaluate at a point leaving y formal: map d -> coefficient of
        y^(d/2)."""
        out: dict[int, complex] = {}
        for (mono, a, b, d), r in self.terms.items():
            v = complex(float(r) * 2.0 ** (a / 2) * math.pi ** (b / 2))
            for xi, e in zip(point, mono):
                if e:
                    v *= xi ** e
            out[d] = out.get(d, 0j) + v
        return {d: v for d, v in out.items()}

    def eval_many(self, pts: np.ndarray, y: float = 1.0) -> np.ndarray:
        """Vectorized evaluation at rows of pts (shape (N, nvars))."""
        n = pts.shape[0]
        tot = np.zeros(n, dtype=complex)
        for (mono, a, b, d), r in self.terms.items():
            v = float(r) * 2.0 ** (a / 2) * math.pi ** (b / 2) * y ** (d / 2)
            acc = np.full(n, v, dtype=float)
            for i, e in enumerate(mono):
                if e:
                    acc = acc * pts[:, i] ** e
            tot += acc
        return tot

    def abs_coeff_by_degree(self, y: float) -> dict[int, float]:
        """Map total degree -> sum of |numeric coefficient| at this y.

        Used for the Gaussian tail bound: |poly(x)| <= sum_deg c_deg r^deg
        for any x with Euclidean norm <= r (each monomial satisfies
        |prod x_i^{e_i}| <= r^deg)."""
        out: dict[int, float] = {}
        for (mono, a, b, d), r in self.terms.items():
            deg = sum(mono)
            v = abs(float(r)) * 2.0 ** (a / 2) * math.pi ** (b / 2) * y ** (d / 2)
            out[deg] = out.get(deg, 0.0) + v
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (mono, a, b, d), r in sorted(self.terms.items()):
            factors = [str(HalfPowerCoeff.make(r, a, b, d))]
            for i, e in enumerate(mono):
                if e == 1:
                    factors.append(f"x{i + 1}")
                elif e > 1:
                    factors.append(f"x{i + 1}^{e}")
            parts.append(" * ".join(factors))
        return " + ".join(parts)

    __repr__ = __str__
