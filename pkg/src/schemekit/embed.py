"""Eigenspace embeddings: Gram specifications from candidate relation schemes,
the exact staircase completion algorithm over F-sqrt-F, vertex extension
against a fixed embedding, pair classification, and eigenspace selection.

Column representation: the h-th column of the coefficient matrix U lies in
F-sqrt-beta_h, so a column stores one canonical radicand and plain field
coefficients per row; products a_xk * a_yk = alpha_xk * alpha_yk * beta_k then
stay inside the field F and the completion loop never leaves F.  A float mirror
with an uncertainty band backs the large searches; every float accept (and
every borderline verdict) is re-run exactly by the callers.
"""

from dataclasses import dataclass, field as dfield
from fractions import Fraction

import numpy as np
from gmpy2 import mpq

from .exactalg import AlgebraicReal, canonical_radicand
from .imprim import sub_multiplicity
from .schemes import RelationMatrix


def _as_alg(v):
    if isinstance(v, AlgebraicReal):
        return v
    return AlgebraicReal.rational(mpq(v))


_ONE = AlgebraicReal.rational(1)
_ZERO = AlgebraicReal.rational(0)


@dataclass
class GramSpec:
    n: int
    C: list  # C[x][y], AlgebraicReal, symmetric with unit diagonal
    m: int
    ip_table: dict = dfield(default_factory=dict)  # relation index -> value

    def check_well_formed(self):
        if len(self.C) != self.n or any(len(r) != self.n for r in self.C):
            raise ValueError("C must be n x n")
        for x in range(self.n):
            if self.C[x][x] != _ONE:
                raise ValueError("diagonal of C must be 1")
            for y in range(x):
                if self.C[x][y] != self.C[y][x]:
                    raise ValueError("C must be symmetric")
        return True

    def float_C(self):
        return np.array(
            [[_as_alg(v).to_float() for v in row] for row in self.C]
        )


def ip_table_for(e, j):
    """Map relation index -> Q_ij / m_j."""
    d = e.tensor.d
    return {i: e.Q[i][j] / e.m[j] for i in range(d + 1)}


def gram_from_candidate(r, e, j):
    """GramSpec of a candidate relation scheme: C_xy = Q_ij/m_j for (x,y) in R_i."""
    table = ip_table_for(e, j)
    C = [[table[int(r.M[x][y])] for y in range(r.n)] for x in range(r.n)]
    m = e.m_int[j]
    if m is None:
        raise ValueError("eigenspace has non-integral multiplicity")
    return GramSpec(n=r.n, C=C, m=m, ip_table=table)


class EmbeddingMatrix:
    """Rows of unit vectors; column h holds field coefficients alpha_xh and a
    canonical radicand beta_h, the actual entry being alpha_xh * sqrt(beta_h)."""

    def __init__(self, m):
        self.m = m
        self.betas = []       # AlgebraicReal, canonical radicand per column
        self.alphas = []      # per row: list of field coefficients per column
        self.pivot_rows = []  # creator row of each column

    @property
    def n(self):
        return len(self.alphas)

    @property
    def rank(self):
        # staircase structure: every column has a pivot, so rank = #columns
        return len(self.betas)

    @property
    def full_column_rank(self):
        return self.rank == self.m

    def row_products(self, x, y):
        """<u_x, u_y> exactly."""
        acc = _ZERO
        ax, ay = self.alphas[x], self.alphas[y]
        for k in range(len(self.betas)):
            acc = acc + ax[k] * ay[k] * self.betas[k]
        return acc

    def entry(self, x, h):
        """(coefficient, radicand) pair of a_xh; the value is coeff*sqrt(rad)."""
        if h < len(self.betas):
            return self.alphas[x][h], self.betas[h]
        return _ZERO, _ONE

    def float_matrix(self):
        out = np.zeros((self.n, self.m))
        for h, beta in enumerate(self.betas):
            root = beta.to_float() ** 0.5
            for x in range(self.n):
                out[x, h] = self.alphas[x][h].to_float() * root
        return out

    def dump_lines(self):
        out = []
        for x in range(self.n):
            toks = []
            for h in range(self.m):
                a, b = self.entry(x, h)
                toks.append(format_entry(a, b))
            out.append("\t".join(toks))
        return out


def format_entry(alpha, beta):
    """Render alpha*sqrt(beta) as an 'a' or 'a*sqrt(b)' token."""
    if alpha.sign() == 0:
        return "0"
    if beta == _ONE:
        return _render_field_value(alpha)
    return f"{_render_field_value(alpha)}*sqrt({_render_field_value(beta)})"


def _render_field_value(v):
    if v.is_rational():
        return str(Fraction(int(v.as_rational().numerator),
                            int(v.as_rational().denominator)))
    coords = ",".join(str(mpq(c)) for c in v.coords)
    return f"[{coords}]"


@dataclass
class EmbedFailure:
    reason: str  # "inconsistent" | "norm>1" | "norm<1"
    row: int
    against: object = None  # the row y (inconsistent) or the value s (norms)

    def __bool__(self):
        return False


def compute_embedding(g, verify=True):
    """Staircase Gram completion: returns an EmbeddingMatrix realizing
    U U^T = C in dimension m, or an EmbedFailure.

    Per row x, earlier rows y are scanned in order; when the current column h
    has a pivot a_yh != 0 the residual inner product fixes a_xh = d/a_yh,
    otherwise d must vanish.  A residual norm deficit opens a new column with
    a_xh = sqrt(1-s); a deficit with all m columns used, or a norm excess,
    is a failure."""
    u = EmbeddingMatrix(g.m)
    for x in range(g.n):
        row = []
        h = 0  # 0-based count of determined columns for this row
        for y in range(x):
            d = _as_alg(g.C[x][y])
            ay = u.alphas[y]
            for k in range(h):
                d = d - row[k] * ay[k] * u.betas[k]
            if h < g.m and h < len(u.betas) and ay[h].sign() != 0:
                # a_xh = d / (a_yh) with a_yh = alpha_yh sqrt(beta_h):
                # alpha_xh = d / (alpha_yh * beta_h)
                row.append(d / (ay[h] * u.betas[h]))
                h += 1
            elif d.sign() != 0:
                return EmbedFailure("inconsistent", x, y)
        s = _ZERO
        for k in range(h):
            s = s + row[k] * row[k] * u.betas[k]
        cmp = (s - _ONE).sign()
        if cmp > 0:
            return EmbedFailure("norm>1", x, s)
        if cmp < 0:
            if h >= g.m:
                return EmbedFailure("norm<1", x, s)
            scale, radicand = canonical_radicand(_ONE - s)
            u.betas.append(radicand)
            u.pivot_rows.append(x)
            for prev in u.alphas:
                prev.append(_ZERO)
            row.append(scale)
            h += 1
        while len(row) < len(u.betas):
            row.append(_ZERO)
        u.alphas.append(row)
    if verify:
        verify_embedding(u, g)
    return u


def verify_embedding(u, g):
    for x in range(g.n):
        for y in range(x + 1):
            if u.row_products(x, y) != _as_alg(g.C[x][y]):
                raise ArithmeticError(
                    f"U U^T != C at ({x}, {y}) after completion"
                )
    return True


class RankDeficientError(ValueError):
    """extend_vertex requires an embedding of full column rank."""


def append_row(u, c):
    """One row step of the Gram completion on top of an existing matrix.

    c[y] is the prescribed inner product against row y.  Returns a new
    EmbeddingMatrix (u is not mutated; unchanged rows are shared) or an
    EmbedFailure.  Unlike extend_vertex this does not require full column
    rank: a norm deficit opens a new column when dimension permits.
    Running this over every row of a GramSpec reproduces compute_embedding."""
    row = []
    h = 0
    for y in range(u.n):
        d = _as_alg(c[y])
        ay = u.alphas[y]
        for k in range(h):
            d = d - row[k] * ay[k] * u.betas[k]
        if h < u.m and h < len(u.betas) and ay[h].sign() != 0:
            row.append(d / (ay[h] * u.betas[h]))
            h += 1
        elif d.sign() != 0:
            return EmbedFailure("inconsistent", u.n, y)
    s = _ZERO
    for k in range(h):
        s = s + row[k] * row[k] * u.betas[k]
    cmp = (s - _ONE).sign()
    if cmp > 0:
        return EmbedFailure("norm>1", u.n, s)
    out = EmbeddingMatrix(u.m)
    out.betas = list(u.betas)
    out.pivot_rows = list(u.pivot_rows)
    if cmp < 0:
        if h >= u.m:
            return EmbedFailure("norm<1", u.n, s)
        scale, radicand = canonical_radicand(_ONE - s)
        out.betas.append(radicand)
        out.pivot_rows.append(u.n)
        out.alphas = [list(prev) + [_ZERO] for prev in u.alphas]
        row.append(scale)
    else:
        out.alphas = list(u.alphas)
    out.alphas = out.alphas + [row]
    return out


def extend_vertex(u, c):
    """Coordinates of a unit vector with prescribed inner products c[y] against
    every row of u, or None.

    Requires full column rank, which makes the candidate unique: scanning the
    rows in order meets a pivot for every column, so all m coefficients are
    forced; the vector is accepted iff the remaining inner products match and
    the squared norm is exactly 1."""
    if not u.full_column_rank:
        raise RankDeficientError(
            "cannot extend a rank-deficient embedding"
        )
    row = []
    h = 0
    for y in range(u.n):
        d = _as_alg(c[y])
        ay = u.alphas[y]
        for k in range(h):
            d = d - row[k] * ay[k] * u.betas[k]
        if h < u.m and ay[h].sign() != 0:
            row.append(d / (ay[h] * u.betas[h]))
            h += 1
        elif d.sign() != 0:
            return None
    if h < u.m:
        return None
    s = _ZERO
    for k in range(h):
        s = s + row[k] * row[k] * u.betas[k]
    if s != _ONE:
        return None
    return row


def append_vertex(u, coords):
    """New EmbeddingMatrix with an extend_vertex result appended as a row."""
    out = EmbeddingMatrix(u.m)
    out.betas = list(u.betas)
    out.pivot_rows = list(u.pivot_rows)
    out.alphas = [list(r) for r in u.alphas] + [list(coords)]
    return out


def classify_pair(ip, table):
    """Relation indices whose table value equals ip exactly; empty list means
    the inner product belongs to no relation (candidate rejection signal)."""
    ip = _as_alg(ip)
    return [i for i, v in table.items() if _as_alg(v) == ip]


def inner_product_of(u, xa, xb):
    return u.row_products(xa, xb)


def disambiguate_by_common_neighbors(g, t):
    """Relation matrix recovered from the relation-1 graph when the common
    neighbor counts p^i_11 are pairwise distinct."""
    counts = {t.p[i][1][1]: i for i in range(t.d + 1)}
    if len(counts) != t.d + 1:
        raise ValueError("common-neighbor counts p^i_11 not pairwise distinct")
    A = np.asarray(g.A, dtype=np.int64)
    common = A @ A
    entries = np.zeros((g.n, g.n), dtype=np.int64)
    for x in range(g.n):
        for y in range(g.n):
            if x == y:
                continue
            c = int(common[x, y])
            if c not in counts:
                raise ValueError(
                    f"common-neighbor count {c} at ({x}, {y}) matches no p^i_11"
                )
            i = counts[c]
            if (i == 1) != bool(A[x, y]):
                raise ValueError(
                    f"adjacency at ({x}, {y}) contradicts its neighbor count"
                )
            entries[x, y] = i
    return RelationMatrix(entries)


def select_eigenspace(t, s, ratio_bound, eigendata):
    """Eigenspace indices j outside overline0 with subscheme multiplicity > 1
    and m_j over the subscheme multiplicity at most ratio_bound, ascending by
    that ratio."""
    e = eigendata
    out = []
    for j in range(t.d + 1):
        if j in s.overline0:
            continue
        mbar = sub_multiplicity(e, s, j)
        if mbar <= 1:
            continue
        ratio = mpq(e.m_int[j], mbar)
        if ratio <= mpq(ratio_bound):
            out.append((ratio, j))
    out.sort()
    return [j for _, j in out]


@dataclass
class SphericalRepresentation:
    eigenspace: int
    embedding: EmbeddingMatrix
    ip_table: dict
    faithful: bool


def spherical_representation(r, e, j, structures=None):
    """The representation x -> u_x of a full scheme in eigenspace j, realized
    by embedding the full Gram matrix; faithful iff j != 0 and j lies in no
    nontrivial dual imprimitivity set."""
    g = gram_from_candidate(r, e, j)
    u = compute_embedding(g)
    if isinstance(u, EmbedFailure):
        raise ArithmeticError(f"full-scheme embedding failed: {u.reason}")
    faithful = j != 0
    if structures is not None:
        for s in structures:
            if s.nontrivial and s.overline0 is not None and j in s.overline0:
                faithful = False
    return SphericalRepresentation(
        eigenspace=j, embedding=u, ip_table=g.ip_table, faithful=faithful
    )


# --- float mirror -----------------------------------------------------------

FLOAT_TOL = 1e-7
FLOAT_BAND = 1e-4


def float_embedding(C, m, tol=FLOAT_TOL, band=FLOAT_BAND):
    """Float mirror of compute_embedding.

    Returns (status, U) with status in {"success", "fail", "uncertain"}: any
    zero/comparison decision landing between tol and band makes the whole run
    uncertain, signalling the caller to re-run exactly."""
    n = C.shape[0]
    U = np.zeros((n, m))
    uncertain = False

    def near(v):
        return tol < abs(v) < band

    for x in range(n):
        h = 0
        for y in range(x):
            d = C[x, y] - U[x, :h] @ U[y, :h]
            piv = U[y, h] if h < m else 0.0
            if h < m and abs(piv) > tol:
                if near(piv):
                    uncertain = True
                U[x, h] = d / piv
                h += 1
            else:
                if near(piv) or near(d):
                    uncertain = True
                if abs(d) > tol:
                    return ("uncertain" if uncertain else "fail"), None
        s = float(U[x, :h] @ U[x, :h])
        if near(s - 1.0):
            uncertain = True
        if s > 1.0 + tol:
            return ("uncertain" if uncertain else "fail"), None
        if s < 1.0 - tol:
            if h >= m:
                return ("uncertain" if uncertain else "fail"), None
            U[x, h] = (1.0 - s) ** 0.5
            h += 1
    return ("uncertain" if uncertain else "success"), U


def float_extend_batch(U, cands, tol=FLOAT_TOL, band=FLOAT_BAND):
    """Vectorized float extension test: cands is (N, n) of prescribed inner
    products; returns (accept, uncertain) boolean arrays.

    Solves U a = c in the least-squares sense (U has full column rank), then
    checks residual and unit norm within tol; margins inside the band mark the
    candidate uncertain rather than rejected."""
    P = np.linalg.pinv(U)          # (m, n)
    A = cands @ P.T                # (N, m) candidate coordinates
    resid = np.abs(A @ U.T - cands).max(axis=1)
    norm = np.abs((A * A).sum(axis=1) - 1.0)
    accept = (resid <= tol) & (norm <= tol)
    uncertain = (~accept) & (resid <= band) & (norm <= band)
    return accept, uncertain
