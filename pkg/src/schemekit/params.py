"""Parameter core: intersection tensors, recovery from parameter arrays,
eigenmatrices P/Q, multiplicities, Krein parameters, QPG recognition,
formal self-duality.

Eigenvalues live in the number fields cut out by the irreducible factors of the
characteristic polynomial of B1; each row of P (equivalently column of Q) stays
inside a single field.  Sums over all eigenspaces of per-row expressions are
evaluated exactly through field traces, so the recovered intersection numbers
are plain rationals with no compositum.
"""

from dataclasses import dataclass, field as dfield

from gmpy2 import mpq

import sympy

from .exactalg import (
    AlgebraicReal,
    FieldMismatchError,
    Poly,
    compare_by_interval,
    factor,
    get_field,
    isolate_real_roots,
    xval,
    xsign,
)


class InfeasibleArrayError(ValueError):
    """Recovered parameters are negative or non-integral."""


class NotQuotientPolynomialError(ValueError):
    """B1 does not have d+1 distinct eigenvalues."""


@dataclass(frozen=True)
class ParameterArray:
    """[[k_1..k_d], [p^2_11..p^d_11; p^3_12..p^d_12; ...; p^d_1,d-1]]."""

    valencies: tuple
    blocks: tuple

    def __post_init__(self):
        d = len(self.valencies)
        if len(self.blocks) != max(0, d - 1):
            raise ValueError("block count must be d-1")
        for j, block in enumerate(self.blocks, start=1):
            if len(block) != d - j:
                raise ValueError(f"block {j} must have length {d - j}")
        if any(v < 0 for v in self.valencies) or any(
            v < 0 for b in self.blocks for v in b
        ):
            raise ValueError("parameter array entries must be nonnegative")

    @property
    def d(self):
        return len(self.valencies)

    @property
    def order(self):
        return 1 + sum(self.valencies)

    def render(self):
        ks = ", ".join(str(v) for v in self.valencies)
        bs = "; ".join(", ".join(str(v) for v in b) for b in self.blocks)
        return f"[[{ks}], [{bs}]]"


@dataclass
class IntersectionTensor:
    d: int
    n: int
    k: list
    p: list  # p[h][i][j]

    def B(self, i):
        """Intersection matrix B_i with (B_i)_{hj} = p^h_{ij}."""
        return [[self.p[h][i][j] for j in range(self.d + 1)] for h in range(self.d + 1)]

    def fused_B(self, fused):
        out = [[0] * (self.d + 1) for _ in range(self.d + 1)]
        for i in fused:
            for h in range(self.d + 1):
                for j in range(self.d + 1):
                    out[h][j] += self.p[h][i][j]
        return out

    def parameter_array(self):
        valencies = tuple(self.k[1:])
        blocks = tuple(
            tuple(self.p[h][1][j] for h in range(j + 1, self.d + 1))
            for j in range(1, self.d)
        )
        return ParameterArray(valencies, blocks)

    def validate(self):
        """List of violated identities (empty iff the tensor is consistent)."""
        issues = []
        d, k, p = self.d, self.k, self.p
        if self.n != sum(k):
            issues.append(f"n = {self.n} != 1 + sum of valencies")
        if k[0] != 1:
            issues.append("k_0 != 1")
        for i in range(d + 1):
            for j in range(d + 1):
                if p[0][i][j] != (k[i] if i == j else 0):
                    issues.append(f"p^0_{{{i}{j}}} != k_i*delta_ij")
        for h in range(d + 1):
            for i in range(d + 1):
                if sum(p[h][i][j] for j in range(d + 1)) != k[i]:
                    issues.append(f"row sum p^{h}_{{{i}.}} != k_{i}")
                for j in range(i + 1, d + 1):
                    if p[h][i][j] != p[h][j][i]:
                        issues.append(f"p^{h}_{{{i}{j}}} asymmetric")
                    if k[h] * p[h][i][j] != k[i] * p[i][h][j]:
                        issues.append(f"triple-count symmetry fails at ({h},{i},{j})")
        for h in range(d + 1):
            for i in range(d + 1):
                for j in range(d + 1):
                    if p[h][i][j] < 0:
                        issues.append(f"p^{h}_{{{i}{j}}} < 0")
        return issues


def validate_intersection_tensor(t):
    return t.validate()


def _build_b1(a):
    """B1 entries (p^h_{1j}) as exact rationals from a parameter array."""
    d = a.d
    k = [1] + list(a.valencies)
    B1 = [[mpq(0)] * (d + 1) for _ in range(d + 1)]
    B1[0][1] = mpq(k[1])
    if d >= 1:
        B1[1][0] = mpq(1)
    for j in range(1, d):
        for h in range(j + 1, d + 1):
            B1[h][j] = mpq(a.blocks[j - 1][h - j - 1])
    # triple-count symmetry fills the strict upper part: p^h_1j = k_j p^j_1h / k_h
    for h in range(1, d + 1):
        for j in range(h + 1, d + 1):
            if k[h] == 0:
                raise InfeasibleArrayError("zero valency")
            B1[h][j] = mpq(k[j]) * B1[j][h] / k[h]
    # row sums give the diagonal: sum_j p^h_1j = k_1
    for h in range(1, d + 1):
        B1[h][h] = mpq(k[1]) - sum(B1[h][j] for j in range(d + 1) if j != h)
    for h in range(d + 1):
        for j in range(d + 1):
            v = B1[h][j]
            if v.denominator != 1 or v < 0:
                raise InfeasibleArrayError(f"recovered p^{h}_{{1{j}}} = {v}")
    return B1, k


def _charpoly(M):
    sm = sympy.Matrix([[sympy.Rational(int(v.numerator), int(v.denominator))
                        if isinstance(v, type(mpq(0))) else sympy.Integer(v)
                        for v in row] for row in M])
    cp = sm.charpoly()
    return Poly([mpq(int(c.p), int(c.q)) for c in reversed(cp.all_coeffs())])


def _power_sums(f, upto):
    """Power sums of the roots of monic f, via Newton's identities."""
    m = f.degree
    e = [mpq(1)] + [mpq(0)] * m
    for i in range(1, m + 1):
        e[i] = (-1) ** i * f.coeffs[m - i]
    s = [mpq(m)]
    for kk in range(1, upto + 1):
        acc = mpq(0)
        for i in range(1, min(kk - 1, m) + 1):
            acc += (-1) ** (i - 1) * e[i] * s[kk - i]
        if kk <= m:
            acc += (-1) ** (kk - 1) * kk * e[kk]
        s.append(acc)
    return s


def field_trace(v, powersums):
    """Trace of an AlgebraicReal over Q, given the power sums of its field."""
    if v.field is None:
        return v.coords[0] * powersums[0]
    return sum(c * powersums[a] for a, c in enumerate(v.coords))


def _left_kernel_vector(M):
    """One nonzero v with v*M = 0, for a singular matrix of AlgebraicReals."""
    n = len(M)
    # row-reduce M^T (right kernel of M^T equals left kernel of M)
    A = [[M[j][i] for j in range(n)] for i in range(n)]
    pivots = []
    row = 0
    pivot_cols = []
    for col in range(n):
        sel = None
        for r in range(row, n):
            if not (A[r][col].is_zero() if isinstance(A[r][col], AlgebraicReal)
                    else A[r][col] == 0):
                sel = r
                break
        if sel is None:
            continue
        A[row], A[sel] = A[sel], A[row]
        inv = A[row][col].inverse() if isinstance(A[row][col], AlgebraicReal) else 1 / A[row][col]
        A[row] = [x * inv for x in A[row]]
        for r in range(n):
            if r != row:
                c = A[r][col]
                if not (c.is_zero() if isinstance(c, AlgebraicReal) else c == 0):
                    A[r] = [x - c * y for x, y in zip(A[r], A[row])]
        pivot_cols.append(col)
        row += 1
        if row == n:
            break
    free = [c for c in range(n) if c not in pivot_cols]
    if not free:
        raise ArithmeticError("matrix is nonsingular; no kernel vector")
    fc = free[0]
    v = [AlgebraicReal.rational(0)] * n
    v[fc] = AlgebraicReal.rational(1)
    for r, pc in enumerate(pivot_cols):
        v[pc] = -A[r][fc]
    return v


class EigenData:
    """Eigenmatrix P, dual eigenmatrix Q, multiplicities; rows sorted by
    descending eigenvalue of A_1."""

    def __init__(self, tensor, P, m, row_polys=None):
        self.tensor = tensor
        d = tensor.d
        self.P = P  # P[j][i]
        self.m = m  # AlgebraicReal list
        self.n = tensor.n
        self.m_int = []
        for v in m:
            if v.is_rational() and v.as_rational().denominator == 1 and v.as_rational() > 0:
                self.m_int.append(int(v.as_rational()))
            else:
                self.m_int.append(None)
        self.Q = [[None] * (d + 1) for _ in range(d + 1)]
        for i in range(d + 1):
            for j in range(d + 1):
                self.Q[i][j] = m[j] * P[j][i] / tensor.k[i]
        self.row_polys = row_polys

    @property
    def multiplicities_integral(self):
        return all(v is not None for v in self.m_int)

    def verify_diagonal(self):
        for j in range(self.tensor.d + 1):
            s = sum(
                (self.P[j][i] * self.Q[i][j] for i in range(self.tensor.d + 1)),
                AlgebraicReal.rational(0),
            )
            if s != self.n:
                raise ArithmeticError(f"(PQ)_{j}{j} != n")
        return True

    def verify_orthogonality(self):
        """Full exact P*Q = n*I; cross-field entries via the sign engine."""
        d = self.tensor.d
        self.verify_diagonal()
        for j1 in range(d + 1):
            for j2 in range(d + 1):
                if j1 == j2:
                    continue
                acc = xval(0)
                for i in range(d + 1):
                    acc = acc + xval(self.P[j1][i]) * xval(self.Q[i][j2])
                if xsign(acc) != 0:
                    raise ArithmeticError(f"(PQ)_{j1}{j2} != 0")
        return True


def recover_from_parameter_array(a):
    """Full intersection tensor from a parameter array (QPG recovery)."""
    B1, k = _build_b1(a)
    d = a.d
    n = 1 + sum(a.valencies)
    eig = _eigen_from_b1(B1, k, n, d)
    # p^h_ij = (1/(n k_h)) * sum_l m_l P_li P_lj P_lh  -- evaluated by field traces
    p = [[[None] * (d + 1) for _ in range(d + 1)] for _ in range(d + 1)]
    groups = _conjugate_groups(eig)
    for i in range(d + 1):
        for j in range(i, d + 1):
            for h in range(d + 1):
                total = mpq(0)
                for rows, psums in groups:
                    rep = rows[0]
                    val = eig.m[rep] * eig.P[rep][i] * eig.P[rep][j] * eig.P[rep][h]
                    tr = field_trace(val, psums)
                    if not isinstance(tr, type(mpq(0))):
                        tr = tr.as_rational()
                    total += tr
                v = total / (n * k[h]) if k[h] else mpq(0)
                if v.denominator != 1 or v < 0:
                    raise InfeasibleArrayError(
                        f"recovered p^{h}_{{{i}{j}}} = {v} is not a nonnegative integer"
                    )
                p[h][i][j] = p[h][j][i] = int(v)
    t = IntersectionTensor(d=d, n=n, k=list(k), p=p)
    issues = t.validate()
    if issues:
        raise InfeasibleArrayError("recovered tensor inconsistent: " + issues[0])
    return t


def _conjugate_groups(eig):
    """Group eigenspace rows by minimal polynomial; per group, conjugate-count
    power sums scaled so that summing traces over groups equals the sum over rows."""
    groups = {}
    for j, rp in enumerate(eig.row_polys):
        groups.setdefault(rp, []).append(j)
    out = []
    for rp, rows in groups.items():
        f = Poly(list(rp))
        psums = _power_sums(f, f.degree)
        assert len(rows) == f.degree, "conjugate group size mismatch"
        out.append((rows, psums))
    return out


def _eigen_from_b1(B1, k, n, d, tensor=None):
    cp = _charpoly(B1)
    sf = cp.squarefree_part()
    if sf.degree != d + 1:
        raise NotQuotientPolynomialError(
            f"B1 has {sf.degree} distinct eigenvalues, need {d + 1}"
        )
    factors = factor(sf)
    eigen = []  # (theta, field_or_None, min_poly_coeffs)
    for f, _ in factors:
        if f.degree == 1:
            theta = AlgebraicReal.rational(-f.coeffs[0])
            eigen.append((theta, f.coeffs))
        else:
            for iv in isolate_real_roots(f):
                fld = get_field(f, iv)
                eigen.append((AlgebraicReal.generator(fld), f.coeffs))
    if len(eigen) != d + 1:
        raise NotQuotientPolynomialError("B1 has non-real eigenvalues")
    P = []
    row_polys = []
    m = []
    thetas = []
    for theta, fcoeffs in eigen:
        M = [[AlgebraicReal.rational(B1[h][j]) - (theta if h == j else 0)
              for j in range(d + 1)] for h in range(d + 1)]
        v = _left_kernel_vector(M)
        if v[0].is_zero():
            raise ArithmeticError("left eigenvector has zero first coordinate")
        inv0 = v[0].inverse()
        v = [x * inv0 for x in v]
        P.append(v)
        row_polys.append(tuple(fcoeffs))
        thetas.append(theta)
        denom = sum(
            (v[i] * v[i] / k[i] for i in range(d + 1) if k[i]),
            AlgebraicReal.rational(0),
        )
        m.append(AlgebraicReal.rational(n) / denom)
    # row order convention: descending eigenvalue of A_1 (= P_{j1}), ties broken
    # by the fused eigenvalue used for the decomposition
    import functools

    def cmp(a, b):
        s = compare_by_interval(P[a][1], P[b][1]) if not _alg_eq(P[a][1], P[b][1]) else 0
        if s == 0:
            s = compare_by_interval(thetas[a], thetas[b])
        return s

    order = sorted(range(d + 1), key=functools.cmp_to_key(cmp), reverse=True)
    P = [P[j] for j in order]
    row_polys = [row_polys[j] for j in order]
    m = [m[j] for j in order]
    t = tensor or IntersectionTensor(d=d, n=n, k=list(k),
                                     p=[[[0] * (d + 1)] * (d + 1)] * (d + 1))
    return EigenData(t, P, m, row_polys)


def _alg_eq(a, b):
    try:
        return (a - b).is_zero()
    except FieldMismatchError:
        return xsign(xval(a) - xval(b)) == 0


def compute_eigendata(t, fused=(1,)):
    """EigenData of a tensor, via the fused intersection matrix's eigenvectors."""
    BS = [[mpq(v) for v in row] for row in t.fused_B(fused)]
    # left eigenvectors of the fused matrix (simple spectrum) are the rows of P
    eig = _eigen_from_b1(BS, t.k, t.n, t.d, tensor=t)
    eig.verify_diagonal()
    return eig


def compute_krein(e):
    """Krein tensor q^h_ij, exact.  Requires all eigenvalues to lie in Q or in a
    single quadratic field; otherwise FieldMismatchError (use krein_xval for
    sign queries in deeper fields)."""
    d = e.tensor.d
    n = e.n
    k = e.tensor.k
    q = [[[None] * (d + 1) for _ in range(d + 1)] for _ in range(d + 1)]
    for i in range(d + 1):
        for j in range(i, d + 1):
            for h in range(d + 1):
                acc = AlgebraicReal.rational(0)
                for r in range(d + 1):
                    acc = acc + e.P[i][r] * e.P[j][r] * e.P[h][r] / (k[r] * k[r])
                val = acc * e.m[i] * e.m[j] / n
                q[h][i][j] = q[h][j][i] = val
    return KreinTensor(q=q, eigendata=e)


def krein_xval(e, h, i, j):
    """q^h_ij as a cross-field XVal (for exact sign/zero queries)."""
    d = e.tensor.d
    k = e.tensor.k
    acc = xval(0)
    for r in range(d + 1):
        acc = acc + (
            xval(e.P[i][r]) * xval(e.P[j][r]) * xval(e.P[h][r]) * mpq(1, k[r] * k[r])
        )
    # m_i m_j / n: multiplicities may be irrational; fold them in as xvals
    acc = acc * xval(e.m[i]) * xval(e.m[j]) * mpq(1, e.n)
    return acc


@dataclass
class KreinTensor:
    q: list  # q[h][i][j] AlgebraicReal
    eigendata: object = None

    def validate(self):
        e = self.eigendata
        d = e.tensor.d
        issues = []
        for h in range(d + 1):
            for i in range(d + 1):
                s = sum((self.q[h][i][j] for j in range(d + 1)),
                        AlgebraicReal.rational(0))
                if s != e.m[i]:
                    issues.append(f"sum_j q^{h}_{{{i}j}} != m_{i}")
        for j in range(d + 1):
            if self.q[0][j][j] != e.m[j]:
                issues.append(f"q^0_{{{j}{j}}} != m_{j}")
        return issues


def check_quotient_polynomial(t, fused):
    """True iff the fused intersection matrix has d+1 distinct eigenvalues."""
    if not fused or not set(fused) <= set(range(1, t.d + 1)):
        raise ValueError("fused must be a nonempty subset of {1..d}")
    BS = t.fused_B(fused)
    cp = _charpoly(BS)
    return cp.squarefree_part().degree == t.d + 1


def check_formal_self_duality(e):
    """A bijection iota with P_{iota(i), j} = Q_{i, iota(j)} for all i, j, or None."""
    import itertools

    d = e.tensor.d
    idx = list(range(d + 1))
    Pf = [[float(v) for v in row] for row in e.P]
    Qf = [[float(v) for v in row] for row in e.Q]

    def close(a, b):
        return abs(a - b) < 1e-6

    for sigma in itertools.permutations(idx):
        ok = True
        for i in idx:
            for j in idx:
                if not close(Pf[sigma[i]][j], Qf[i][sigma[j]]):
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        # exact confirmation
        exact = True
        for i in idx:
            for j in idx:
                diff = xval(e.P[sigma[i]][j]) - xval(e.Q[i][sigma[j]])
                if xsign(diff) != 0:
                    exact = False
                    break
            if not exact:
                break
        if exact:
            return {i: sigma[i] for i in idx}
    return None
