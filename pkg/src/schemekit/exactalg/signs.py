"""Exact sign determination for polynomial expressions over several real algebraic numbers.

Values from different number fields (e.g. conjugate eigenvalues) cannot be combined
into a single AlgebraicReal without a compositum, which this library deliberately
does not build.  An XVal instead keeps the expression as a multivariate polynomial
over the generators involved.  Its sign is decided exactly:

  * interval arithmetic over the generators' isolating intervals semi-decides
    any nonzero sign;
  * exact zero is certified via a norm polynomial: the value is a root of the
    rational polynomial obtained by eliminating every generator with resultants,
    so once the enclosing interval shrinks below that polynomial's smallest
    positive root bound, the value must be exactly zero.
"""

from gmpy2 import mpq

import sympy

from .field import AlgebraicReal, _coerce, _interval_eval
from .poly import Poly

_INTERVAL_ROUNDS = 64


class XVal:
    """A rational-coefficient polynomial in several field generators."""

    __slots__ = ("gens", "terms")

    def __init__(self, gens, terms):
        self.gens = tuple(gens)  # RealNumberField instances, identity-distinct
        self.terms = {e: c for e, c in terms.items() if c != 0}

    @classmethod
    def from_algebraic(cls, v):
        v = _coerce(v)
        if v.field is None:
            return cls((), {(): v.coords[0]} if v.coords[0] else {})
        terms = {(i,): c for i, c in enumerate(v.coords) if c}
        return cls((v.field,), terms)

    def _aligned(self, other):
        gens = list(self.gens)
        for g in other.gens:
            if not any(g is h for h in gens):
                gens.append(g)
        idx_self = [gens.index(g) for g in self.gens]
        idx_other = [next(i for i, h in enumerate(gens) if h is g) for g in other.gens]

        def remap(terms, idx):
            out = {}
            for e, c in terms.items():
                ne = [0] * len(gens)
                for pos, exp in zip(idx, e):
                    ne[pos] = exp
                key = tuple(ne)
                out[key] = out.get(key, 0) + c
            return out

        return gens, remap(self.terms, idx_self), remap(other.terms, idx_other)

    def __add__(self, other):
        other = _as_xval(other)
        gens, a, b = self._aligned(other)
        for e, c in b.items():
            a[e] = a.get(e, mpq(0)) + c
        return XVal(gens, a)

    __radd__ = __add__

    def __neg__(self):
        return XVal(self.gens, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_as_xval(other))

    def __rsub__(self, other):
        return _as_xval(other) + (-self)

    def __mul__(self, other):
        other = _as_xval(other)
        gens, a, b = self._aligned(other)
        out = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, mpq(0)) + c1 * c2
        return XVal(gens, out)._reduced(gens)

    __rmul__ = __mul__

    def _reduced(self, gens):
        """Reduce each generator's exponents modulo its minimal polynomial."""
        terms = self.terms
        for gi, g in enumerate(gens):
            d = g.degree
            if all(e[gi] < d for e in terms):
                continue
            out = {}
            for e, c in terms.items():
                if e[gi] < d:
                    out[e] = out.get(e, mpq(0)) + c
                    continue
                # coords of t^e[gi] mod min_poly
                red = g.reduce([mpq(0)] * e[gi] + [mpq(1)])
                for i, rc in enumerate(red):
                    if rc:
                        ne = list(e)
                        ne[gi] = i
                        key = tuple(ne)
                        out[key] = out.get(key, mpq(0)) + c * rc
            terms = out
        return XVal(gens, terms)

    def is_structural_zero(self):
        return not self.terms

    def interval(self):
        lo, hi = mpq(0), mpq(0)
        for e, c in self.terms.items():
            tlo, thi = mpq(c), mpq(c)
            for gi, exp in enumerate(e):
                if exp == 0:
                    continue
                glo, ghi = self.gens[gi].interval
                plo, phi = _interval_eval(Poly([0] * exp + [1]), glo, ghi)
                cands = (tlo * plo, tlo * phi, thi * plo, thi * phi)
                tlo, thi = min(cands), max(cands)
            lo, hi = lo + tlo, hi + thi
        return lo, hi

    def _norm_poly(self):
        """A nonzero rational polynomial H with H(value) = 0, eliminating all generators."""
        z = sympy.Symbol("z")
        xs = [sympy.Symbol(f"x{i}") for i in range(len(self.gens))]
        expr = sympy.Integer(0)
        for e, c in self.terms.items():
            term = sympy.Rational(int(c.numerator), int(c.denominator))
            for gi, exp in enumerate(e):
                if exp:
                    term *= xs[gi] ** exp
            expr += term
        h = sympy.Poly(z - expr, z, *xs, domain="QQ")
        for gi, g in enumerate(self.gens):
            f = sympy.Poly(
                [sympy.Rational(int(c.numerator), int(c.denominator))
                 for c in reversed(g.min_poly.coeffs)],
                xs[gi],
            )
            h = sympy.Poly(
                sympy.resultant(h.as_expr(), f.as_expr(), xs[gi]), z,
                *[x for x in xs[gi + 1:]],
                domain="QQ",
            )
        hp = sympy.Poly(h.as_expr(), z, domain="QQ")
        return Poly([mpq(int(c.p), int(c.q)) for c in reversed(hp.all_coeffs())])

    def sign(self):
        if self.is_structural_zero():
            return 0
        for _ in range(_INTERVAL_ROUNDS):
            lo, hi = self.interval()
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            for g in self.gens:
                g.refine()
        # interval refinement did not separate from zero: certify
        H = self._norm_poly()
        coeffs = list(H.coeffs)
        k = 0
        while coeffs and coeffs[0] == 0:
            coeffs.pop(0)
            k += 1
        if not coeffs:  # H identically zero cannot happen (leading z-degree term survives)
            raise ArithmeticError("degenerate norm polynomial")
        # every nonzero root r of H satisfies |r| >= bound (Cauchy bound on reversed poly)
        bound = abs(coeffs[0]) / (abs(coeffs[0]) + max(abs(c) for c in coeffs))
        while True:
            lo, hi = self.interval()
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            if k > 0 and -bound < lo and hi < bound:
                return 0
            if k == 0 and max(abs(lo), abs(hi)) < bound:
                raise ArithmeticError("norm-certificate contradiction (defect)")
            for g in self.gens:
                g.refine()


def _as_xval(v):
    if isinstance(v, XVal):
        return v
    return XVal.from_algebraic(v)


def xval(v):
    """Wrap a rational/AlgebraicReal as an XVal for cross-field arithmetic."""
    return _as_xval(v)


def xsign(v):
    """Exact sign of an XVal or AlgebraicReal."""
    if isinstance(v, AlgebraicReal):
        return v.sign()
    return _as_xval(v).sign()


def xis_zero(v):
    return xsign(v) == 0
