"""Univariate polynomials over Q: arithmetic, factorization, Sturm sequences, root isolation.

Coefficients are gmpy2.mpq, stored in ascending degree order with no trailing zeros.
"""

import gmpy2
from gmpy2 import mpq, mpz

import sympy

MAX_FACTOR_DEGREE = 6


class UnsupportedDegreeError(ValueError):
    """An irreducible factor exceeds the supported degree bound."""


def _strip(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


class Poly:
    """A rational polynomial.  Immutable; coefficients ascending."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = tuple(mpq(c) for c in _strip(coeffs))

    @property
    def degree(self):
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, x):
        r = mpq(0)
        for c in reversed(self.coeffs):
            r = r * x + c
        return r

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, Poly):
            if not self.coeffs or not other.coeffs:
                return Poly([])
            out = [mpq(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if a:
                    for j, b in enumerate(other.coeffs):
                        out[i + j] += a * b
            return Poly(out)
        return Poly([c * mpq(other) for c in self.coeffs])

    __rmul__ = __mul__

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        quo = [mpq(0)] * max(0, len(rem) - len(other.coeffs) + 1)
        dlead = other.coeffs[-1]
        dd = other.degree
        while len(rem) - 1 >= dd and any(rem):
            if rem[-1] == 0:
                rem.pop()
                continue
            shift = len(rem) - 1 - dd
            q = rem[-1] / dlead
            quo[shift] = q
            for i, c in enumerate(other.coeffs):
                rem[shift + i] -= q * c
            rem.pop()
        return Poly(quo), Poly(rem)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def derivative(self):
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def monic(self):
        if self.is_zero():
            return self
        lead = self.coeffs[-1]
        if lead == 1:
            return self
        return Poly([c / lead for c in self.coeffs])

    def gcd(self, other):
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def squarefree_part(self):
        if self.degree <= 1:
            return self.monic()
        return (self // self.gcd(self.derivative())).monic()

    def shift_scale(self):
        """Content-normalized integer coefficients (primitive part), ascending."""
        if self.is_zero():
            return []
        den = 1
        for c in self.coeffs:
            den = gmpy2.lcm(den, c.denominator)
        ints = [mpz(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = gmpy2.gcd(g, v)
        return [v // g for v in ints]

    def __repr__(self):
        if self.is_zero():
            return "Poly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}*t" if c != 1 else "t")
            else:
                terms.append(f"{c}*t^{i}" if c != 1 else f"t^{i}")
        return "Poly(" + " + ".join(terms) + ")"


_T = sympy.Symbol("t")


def _to_sympy(p):
    return sympy.Poly(
        [sympy.Rational(int(c.numerator), int(c.denominator)) for c in reversed(p.coeffs)],
        _T,
    )


def _from_sympy(sp):
    return Poly([mpq(int(c.p), int(c.q)) for c in reversed(sp.all_coeffs())])


def factor(p, max_degree=MAX_FACTOR_DEGREE):
    """Factor p over Q into monic irreducibles.

    Returns a list of (Poly, multiplicity); the product of factors^mult equals p
    up to a rational constant.  Raises UnsupportedDegreeError if an irreducible
    factor exceeds max_degree.
    """
    if p.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    if p.degree == 0:
        return []
    _, factors = _to_sympy(p).factor_list()
    out = []
    for f, mult in factors:
        q = _from_sympy(f).monic()
        if q.degree > max_degree:
            raise UnsupportedDegreeError(
                f"irreducible factor of degree {q.degree} exceeds bound {max_degree}"
            )
        out.append((q, int(mult)))
    out.sort(key=lambda fm: (fm[0].degree, fm[0].coeffs))
    return out


def sturm_sequence(p):
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        seq.append(-(seq[-2] % seq[-1]))
    seq.pop()
    return seq


def _variations(seq, x):
    signs = []
    for q in seq:
        v = q(x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _variations_inf(seq, sign):
    signs = []
    for q in seq:
        if q.is_zero():
            continue
        lead = q.coeffs[-1]
        s = 1 if lead > 0 else -1
        if sign < 0 and q.degree % 2 == 1:
            s = -s
        signs.append(s)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(p, lo=None, hi=None):
    """Number of distinct real roots of squarefree p in (lo, hi] (whole line by default)."""
    seq = sturm_sequence(p)
    va = _variations_inf(seq, -1) if lo is None else _variations(seq, lo)
    vb = _variations_inf(seq, +1) if hi is None else _variations(seq, hi)
    return va - vb

def root_bound(p):
    """A rational B with all real roots of p in (-B, B)."""
    lead = abs(p.coeffs[-1])
    return 1 + max(abs(c) for c in p.coeffs) / lead


def isolate_real_roots(p):
    """Isolating intervals for all real roots of squarefree p.

    Returns a sorted list of (lo, hi) rational pairs, each open interval containing
    exactly one root with p(lo), p(hi) != 0, pairwise disjoint.
    """
    if p.degree <= 0:
        return []
    seq = sturm_sequence(p)
    B = root_bound(p)
    total = _variations(seq, -B) - _variations(seq, B)
    out = []

    def split(lo, hi, count):
        if count == 0:
            return
        if count == 1:
            out.append((lo, hi))
            return
        mid = (lo + hi) / 2
        while p(mid) == 0:
            # rational root hit; nudge the cut point
            mid = (lo + mid) / 2
        left = _variations(seq, lo) - _variations(seq, mid)
        split(lo, mid, left)
        split(mid, hi, count - left)

    split(-B, B, total)
    out.sort()
    return out


def refine_interval(p, lo, hi):
    """Halve an isolating interval of p with a sign change at its endpoints."""
    mid = (lo + hi) / 2
    vm = p(mid)
    if vm == 0:
        # only used for irreducible p of degree >= 2, which has no rational roots
        raise ArithmeticError("rational root encountered while refining")
    if (p(lo) > 0) != (vm > 0):
        return lo, mid
    return mid, hi
