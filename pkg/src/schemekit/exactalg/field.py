"""Real number fields Q[t]/(f) with a chosen real embedding, and their elements.

A RealNumberField is an irreducible monic rational polynomial together with an
isolating interval selecting one real root.  AlgebraicReal values are polynomials
in the generator; plain rationals are AlgebraicReal with field = None.

Comparison is exact: a zero coordinate vector is zero, anything else is resolved
by refining the generator's isolating interval until the sign is certain.
"""

from gmpy2 import mpq

from .poly import Poly, count_real_roots, factor, refine_interval

REFINE_CAP = 4000


class FieldMismatchError(ValueError):
    """Operands live in different number fields with no supported common lift."""


class RealNumberField:
    """Q[t]/(min_poly) embedded at the real root inside isolating_interval."""

    def __init__(self, min_poly, isolating_interval):
        min_poly = min_poly.monic()
        lo, hi = mpq(isolating_interval[0]), mpq(isolating_interval[1])
        if min_poly.degree < 2:
            raise ValueError("degree-1 fields are represented by plain rationals")
        if count_real_roots(min_poly, lo, hi) != 1:
            raise ValueError("interval does not isolate exactly one root")
        if len(factor(min_poly)) != 1 or factor(min_poly)[0][1] != 1:
            raise ValueError("minimal polynomial is not irreducible")
        self.min_poly = min_poly
        self.degree = min_poly.degree
        self._interval = (lo, hi)
        self._snap()
        # reduction table: t^k mod min_poly for k = deg .. 2*deg-2, as coefficient tuples
        self._red = []
        d = self.degree
        cur = [mpq(0)] * d
        # t^d = -(lower coefficients)
        top = [-c for c in min_poly.coeffs[:-1]]
        cur = list(top)
        self._red.append(tuple(cur))
        for _ in range(d - 2):
            nxt = [mpq(0)] + cur[:-1]
            lead = cur[-1]
            if lead:
                for i in range(d):
                    nxt[i] += lead * top[i]
            cur = nxt
            self._red.append(tuple(cur))

    @property
    def interval(self):
        return self._interval

    def refine(self):
        self._interval = refine_interval(self.min_poly, *self._interval)
        return self._interval

    def refine_below(self, width):
        lo, hi = self._interval
        steps = 0
        while hi - lo > width:
            lo, hi = refine_interval(self.min_poly, lo, hi)
            steps += 1
            if steps > REFINE_CAP:
                raise ArithmeticError("refinement cap exceeded (defect)")
        self._interval = (lo, hi)
        self._snap()
        return self._interval

    def _snap(self):
        """Replace the isolating interval's endpoints by dyadic rationals of
        bit size matching the interval width; bisection then keeps endpoint
        representations small, which keeps sign evaluations cheap."""
        lo, hi = self._interval
        w = hi - lo
        if w <= 0:
            return
        bits = max(8, w.denominator.bit_length()
                   - abs(w.numerator).bit_length() + 4)
        scale = 1 << bits
        if (lo.denominator.bit_length() <= bits + 2
                and hi.denominator.bit_length() <= bits + 2):
            return
        nlo = mpq((lo.numerator * scale) // lo.denominator, scale)
        nhi = mpq(-((-hi.numerator * scale) // hi.denominator), scale)
        if count_real_roots(self.min_poly, nlo, nhi) == 1:
            self._interval = (nlo, nhi)

    def reduce(self, coeffs):
        """Reduce a coefficient list (degree < 2d-1) modulo min_poly."""
        d = self.degree
        if len(coeffs) <= d:
            out = list(coeffs) + [mpq(0)] * (d - len(coeffs))
            return out
        out = list(coeffs[:d])
        for k, c in enumerate(coeffs[d:]):
            if c:
                row = self._red[k]
                for i in range(d):
                    out[i] += c * row[i]
        return out

    def __reduce__(self):
        # unpickle through the registry so field identity survives process
        # boundaries (cross-field arithmetic dispatches on object identity)
        return (get_field, (self.min_poly, self._interval))

    def __repr__(self):
        lo, hi = self._interval
        return f"RealNumberField({self.min_poly!r}, t in [{lo}, {hi}])"


_registry = {}


def get_field(min_poly, interval):
    """Shared field instances: one object per (min_poly, root)."""
    key = min_poly.monic().coeffs
    lo, hi = mpq(interval[0]), mpq(interval[1])
    for (flo, fhi), fld in _registry.get(key, []):
        # same root iff the intervals overlap on a root; test via Sturm counts
        a, b = max(flo, lo), min(fhi, hi)
        if a < b and count_real_roots(fld.min_poly, a, b) == 1:
            return fld
    fld = RealNumberField(Poly(list(key)), (lo, hi))
    _registry.setdefault(key, []).append(((lo, hi), fld))
    return fld


def _as_coords(value, field):
    if field is None:
        return (mpq(value),)
    c = [mpq(0)] * field.degree
    c[0] = mpq(value)
    return tuple(c)


class AlgebraicReal:
    """An element of a real number field (or a plain rational when field is None)."""

    __slots__ = ("field", "coords")

    def __init__(self, field, coords):
        if field is None:
            self.field = None
            self.coords = (mpq(coords[0]),)
        else:
            c = [mpq(x) for x in coords]
            if len(c) > field.degree:
                c = field.reduce(c)
            else:
                c += [mpq(0)] * (field.degree - len(c))
            if not any(c[1:]):
                self.field = None
                self.coords = (c[0],)
            else:
                self.field = field
                self.coords = tuple(c)

    @classmethod
    def rational(cls, value):
        return cls(None, (mpq(value),))

    @classmethod
    def generator(cls, field):
        c = [mpq(0)] * field.degree
        c[1] = mpq(1)
        return cls(field, c)

    def is_rational(self):
        return self.field is None

    def as_rational(self):
        if self.field is not None:
            raise ValueError("not a rational value")
        return self.coords[0]

    def is_zero(self):
        return self.field is None and self.coords[0] == 0

    def _lift_pair(self, other):
        """Common-field coordinate lists for self and another AlgebraicReal."""
        a, b = self, other
        if a.field is b.field:
            fld = a.field
        elif a.field is None:
            fld = b.field
        elif b.field is None:
            fld = a.field
        elif a.field.min_poly == b.field.min_poly and a.field.degree == 2:
            # conjugate quadratic embeddings: other root = -a1 - t
            fld = a.field
            a1 = fld.min_poly.coeffs[1]
            c0, c1 = b.coords
            b = AlgebraicReal(fld, (c0 - c1 * a1, -c1))
            return fld, list(a.coords), list(b.coords)
        else:
            raise FieldMismatchError(
                "operands in different fields; no common lift supported"
            )
        return fld, list(_pad(a, fld)), list(_pad(b, fld))

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        fld, a, b = self._lift_pair(other)
        return AlgebraicReal(fld, [x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicReal(self.field, [-c for c in self.coords])

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        fld, a, b = self._lift_pair(other)
        if fld is None:
            return AlgebraicReal(None, (a[0] * b[0],))
        out = [mpq(0)] * (2 * fld.degree - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] += x * y
        return AlgebraicReal(fld, fld.reduce(out))

    __rmul__ = __mul__

    def inverse(self):
        if self.field is None:
            if self.coords[0] == 0:
                raise ZeroDivisionError("inverse of zero")
            return AlgebraicReal(None, (1 / self.coords[0],))
        # extended Euclid: find u with u * self = 1 mod min_poly
        f = self.field.min_poly
        a = Poly(self.coords)
        r0, r1 = f, a
        s0, s1 = Poly([]), Poly([1])
        while not r1.is_zero():
            q, r = r0.divmod(r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
        # r0 = gcd = nonzero constant (min_poly irreducible)
        c = r0.coeffs[0]
        inv = Poly([x / c for x in s0.coeffs])
        return AlgebraicReal(self.field, list((inv % f).coeffs))

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _coerce(other) * self.inverse()

    def sign(self):
        if self.field is None:
            v = self.coords[0]
            return 0 if v == 0 else (1 if v > 0 else -1)
        # nonzero by construction (nonrational values are never zero)
        p = Poly(self.coords)
        steps = 0
        while True:
            lo, hi = self.field.interval
            vals = _interval_eval(p, lo, hi)
            if vals[0] > 0:
                return 1
            if vals[1] < 0:
                return -1
            self.field.refine()
            steps += 1
            if steps > REFINE_CAP:
                raise ArithmeticError("comparison refinement cap exceeded (defect)")

    def compare(self, other):
        diff = self - _coerce(other)
        return diff.sign()

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        try:
            return (self - other).is_zero()
        except FieldMismatchError:
            return False

    def __hash__(self):
        if self.field is None:
            return hash(self.coords[0])
        return hash((self.field.min_poly.coeffs, self.coords))

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def interval(self, width=None):
        """A rational interval containing the value; refined below width if given."""
        if self.field is None:
            v = self.coords[0]
            return (v, v)
        if width is not None:
            p = Poly(self.coords)
            steps = 0
            while True:
                lo, hi = _interval_eval(p, *self.field.interval)
                if hi - lo <= width:
                    return (lo, hi)
                self.field.refine()
                steps += 1
                if steps > REFINE_CAP:
                    raise ArithmeticError("refinement cap exceeded (defect)")
        return _interval_eval(Poly(self.coords), *self.field.interval)

    def to_float(self):
        lo, hi = self.interval(width=mpq(1, 1 << 48))
        return float((lo + hi) / 2)

    def __float__(self):
        return self.to_float()

    def __repr__(self):
        if self.field is None:
            return f"AlgebraicReal({self.coords[0]})"
        poly = " + ".join(
            f"{c}*t^{i}" if i > 1 else (f"{c}*t" if i == 1 else str(c))
            for i, c in enumerate(self.coords)
            if c != 0
        )
        f = self.field
        lo, hi = f.interval
        return f"AlgebraicReal({poly} where {f.min_poly!r} = 0, t in [{lo}, {hi}])"

    def render(self):
        """Report rendering per the external-interface convention: the field
        coordinates plus the minimal polynomial, with the root identified by a
        short decimal approximation rather than the exact interval."""
        if self.field is None:
            return str(self.coords[0])
        poly = " + ".join(
            f"{c}*t^{i}" if i > 1 else (f"{c}*t" if i == 1 else str(c))
            for i, c in enumerate(self.coords)
            if c != 0
        )
        root = AlgebraicReal.generator(self.field).to_float()
        return f"{poly} where {self.field.min_poly!r} = 0, t ~ {root:.12g}"


def _pad(v, fld):
    if fld is None or v.field is fld:
        return v.coords
    assert v.field is None
    return (v.coords[0],) + (mpq(0),) * (fld.degree - 1)


def _coerce(value):
    if isinstance(value, AlgebraicReal):
        return value
    if isinstance(value, (int, type(mpq(0)))):
        return AlgebraicReal.rational(value)
    return NotImplemented


def _interval_eval(p, lo, hi):
    """Interval Horner evaluation of p over [lo, hi]."""
    rlo, rhi = mpq(0), mpq(0)
    for c in reversed(p.coeffs):
        cands = (rlo * lo, rlo * hi, rhi * lo, rhi * hi)
        rlo, rhi = min(cands) + c, max(cands) + c
    return rlo, rhi


def algebraic_compare(a, b):
    """Exact sign of a - b in {-1, 0, 1}."""
    return _coerce(a).compare(b)


def compare_by_interval(a, b):
    """Compare two AlgebraicReals that may live in unrelated fields.

    Correct only when a != b is guaranteed or both are rational (used to order
    distinct eigenvalues); refines both intervals until they separate.
    """
    a, b = _coerce(a), _coerce(b)
    try:
        return a.compare(b)
    except FieldMismatchError:
        pass
    steps = 0
    while True:
        alo, ahi = a.interval()
        blo, bhi = b.interval()
        if ahi < blo:
            return -1
        if bhi < alo:
            return 1
        a.field.refine()
        b.field.refine()
        steps += 1
        if steps > REFINE_CAP:
            raise ArithmeticError("interval comparison did not separate (equal values?)")
