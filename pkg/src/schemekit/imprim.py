"""Imprimitivity machinery: imprimitivity sets, dual imprimitivity sets, the
index equivalences on relations (~) and eigenspaces, quotient and subscheme
parameters.

The primal side (closure of intersection numbers) is pure rational arithmetic.
The dual side tests Q-column combinations and Krein zero patterns, which may mix
number fields; those queries go through the exact sign engine.
"""

import itertools

from gmpy2 import mpq

from .exactalg import xsign, xval
from .params import (
    EigenData,
    IntersectionTensor,
    compute_eigendata,
    compute_krein,
    krein_xval,
)


class ImprimitivityError(ValueError):
    """Primal and dual imprimitivity criteria disagree (treated as a defect)."""


class ImprimitivityStructure:
    def __init__(self, tensor, tilde0, classes_of_tilde, overline0=None,
                 classes_of_simeq=None):
        self.tensor = tensor
        self.tilde0 = frozenset(tilde0)
        self.classes_of_tilde = tuple(tuple(sorted(c)) for c in classes_of_tilde)
        self.overline0 = frozenset(overline0) if overline0 is not None else None
        self.classes_of_simeq = (
            tuple(tuple(sorted(c)) for c in classes_of_simeq)
            if classes_of_simeq is not None
            else None
        )
        self.n_bar = sum(tensor.k[i] for i in self.tilde0)
        if tensor.n % self.n_bar:
            raise ImprimitivityError("block size does not divide the order")
        self.n_tilde = tensor.n // self.n_bar

    @property
    def nontrivial(self):
        return 1 < len(self.tilde0) < self.tensor.d + 1

    def tilde_class_of(self, i):
        for c in self.classes_of_tilde:
            if i in c:
                return c
        raise KeyError(i)

    def simeq_class_of(self, j):
        for c in self.classes_of_simeq:
            if j in c:
                return c
        raise KeyError(j)

    def __repr__(self):
        return (f"ImprimitivityStructure(tilde0={sorted(self.tilde0)}, "
                f"overline0={sorted(self.overline0) if self.overline0 else None})")


def closed_subsets(t):
    """All subsets of relation indices containing 0 closed under composition."""
    d = t.d
    out = []
    for r in range(0, d + 1):
        for extra in itertools.combinations(range(1, d + 1), r):
            s = {0, *extra}
            if _is_closed(t, s):
                out.append(frozenset(s))
    return out


def _is_closed(t, s):
    for i in s:
        for j in s:
            for h in range(t.d + 1):
                if t.p[h][i][j] and h not in s:
                    return False
    return True


def tilde_classes(t, tilde0):
    """Partition of relation indices under h ~ j iff p^h_ij != 0 for some i in tilde0."""
    d = t.d
    parent = list(range(d + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        parent[find(x)] = find(y)

    for i in tilde0:
        for h in range(d + 1):
            for j in range(d + 1):
                if t.p[h][i][j]:
                    union(h, j)
    classes = {}
    for x in range(d + 1):
        classes.setdefault(find(x), []).append(x)
    return sorted((sorted(c) for c in classes.values()), key=lambda c: c[0])


def _find_dual_set(t, e, tilde0, n_tilde):
    """The eigenspace subset overline0 whose idempotent sum is the R_tilde0
    indicator (scaled); tested exactly on the columns of Q."""
    d = t.d
    cands = []
    for r in range(0, d + 1):
        for extra in itertools.combinations(range(1, d + 1), r):
            s = (0, *extra)
            tot = mpq(0)
            ok = True
            for j in s:
                if e.m_int[j] is None:
                    ok = False
                    break
                tot += e.m_int[j]
            if ok and tot == n_tilde:
                cands.append(s)
    for s in cands:
        if _dual_set_matches(t, e, tilde0, s, n_tilde):
            return frozenset(s)
    return None


def _dual_set_matches(t, e, tilde0, s, n_tilde):
    # (1/n_tilde) * sum_{j in s} Q_ij must be 1 for i in tilde0, 0 otherwise
    for i in range(t.d + 1):
        target = n_tilde if i in tilde0 else 0
        acc = xval(-mpq(target))
        for j in s:
            acc = acc + xval(e.Q[i][j])
        if xsign(acc) != 0:
            return False
    return True


def simeq_classes(e, overline0):
    """Partition of eigenspace indices under h ~= i iff q^h_ij != 0 for some j in
    overline0 (closed transitively)."""
    d = e.tensor.d
    parent = list(range(d + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    nonzero = {}

    def q_nonzero(h, i, j):
        key = tuple(sorted((h, i)) + [j])
        if key not in nonzero:
            nonzero[key] = xsign(krein_xval(e, h, i, j)) != 0
        return nonzero[key]

    for j in overline0:
        for h in range(d + 1):
            for i in range(h, d + 1):
                if find(h) != find(i) and q_nonzero(h, i, j):
                    parent[find(h)] = find(i)
    classes = {}
    for x in range(d + 1):
        classes.setdefault(find(x), []).append(x)
    return sorted((sorted(c) for c in classes.values()), key=lambda c: c[0])


def find_imprimitivity_sets(t, eigendata=None, include_dual=True):
    """All imprimitivity structures of a tensor (trivial ones included)."""
    e = eigendata
    if include_dual and e is None:
        e = compute_eigendata(t)
    out = []
    for s in closed_subsets(t):
        classes = tilde_classes(t, s)
        if include_dual:
            n_bar = sum(t.k[i] for i in s)
            if t.n % n_bar:
                raise ImprimitivityError(
                    f"closed set {sorted(s)} has non-dividing block size"
                )
            dual = _find_dual_set(t, e, s, t.n // n_bar)
            if dual is None:
                raise ImprimitivityError(
                    f"no dual set matches tilde0 = {sorted(s)}"
                )
            simeq = simeq_classes(e, dual)
            st = ImprimitivityStructure(t, s, classes, dual, simeq)
            if len(st.tilde0) != len(st.classes_of_simeq):
                raise ImprimitivityError("|tilde0| != number of simeq classes")
            if len(st.overline0) != len(st.classes_of_tilde):
                raise ImprimitivityError("|overline0| != number of ~ classes")
        else:
            st = ImprimitivityStructure(t, s, classes)
        out.append(st)
    out.sort(key=lambda s: (len(s.tilde0), sorted(s.tilde0)))
    return out


class QuotientInfeasibleError(ValueError):
    def __init__(self, message, detail=None):
        super().__init__(message)
        self.detail = detail


def quotient_parameters(t, s, strict=True):
    """Intersection tensor of the quotient scheme over the ~ classes."""
    classes = s.classes_of_tilde
    dt = len(classes) - 1
    # class 0 is the one containing relation 0 (= tilde0 itself)
    order = sorted(classes, key=lambda c: (0 not in c, c))
    n_bar = s.n_bar
    k_t = []
    for ci, c in enumerate(order):
        kk = sum(t.k[i] for i in c)
        if kk % n_bar:
            raise QuotientInfeasibleError(
                f"k~_{ci} not integral", detail=("k", ci)
            )
        k_t.append(kk // n_bar)
    p_t = [[[None] * (dt + 1) for _ in range(dt + 1)] for _ in range(dt + 1)]
    for hi, hc in enumerate(order):
        for ii, ic in enumerate(order):
            for ji, jc in enumerate(order):
                vals = set()
                for h in hc:
                    v = mpq(sum(t.p[h][i][j] for i in ic for j in jc), n_bar)
                    vals.add(v)
                if strict and len(vals) > 1:
                    raise QuotientInfeasibleError(
                        f"p~ not constant over class {hc}", detail=("p", hc, ic, jc)
                    )
                v = vals.pop()
                if v.denominator != 1:
                    raise QuotientInfeasibleError(
                        f"p~^{hi}_{{{ii}{ji}}} = {v} not integral",
                        detail=("p", hi, ii, ji),
                    )
                p_t[hi][ii][ji] = int(v)
    return IntersectionTensor(d=dt, n=s.n_tilde, k=k_t, p=p_t)


def subscheme_parameters(t, s):
    """(tensor, eigendata, krein-or-None) of the subscheme on a block of R_tilde0."""
    idx = sorted(s.tilde0)
    remap = {i: a for a, i in enumerate(idx)}
    db = len(idx) - 1
    p_b = [[[t.p[idx[h]][idx[i]][idx[j]] for j in range(db + 1)]
            for i in range(db + 1)] for h in range(db + 1)]
    k_b = [t.k[i] for i in idx]
    tb = IntersectionTensor(d=db, n=s.n_bar, k=k_b, p=p_b)
    issues = tb.validate()
    if issues:
        raise ValueError("subscheme tensor inconsistent: " + issues[0])
    eb = None
    kb = None
    try:
        eb = compute_eigendata(tb, fused=(1,)) if db >= 1 else None
    except Exception:
        eb = None
    if eb is not None:
        try:
            kb = compute_krein(eb)
        except Exception:
            kb = None
    return tb, kb, eb


def quotient_eigenmatrix(e, s):
    """P-tilde of the quotient scheme, rows indexed by overline0 in the parent's
    row order, columns by the ~ classes: (1/n_bar) * sum_{i in class} P_ji."""
    if s.overline0 is None:
        raise ValueError("structure lacks dual data")
    order = sorted(s.classes_of_tilde, key=lambda c: (0 not in c, c))
    rows = []
    for j in sorted(s.overline0):
        row = []
        for c in order:
            v = sum((e.P[j][i] for i in c), start=e.P[j][0] * 0)
            row.append(v / s.n_bar)
        rows.append(row)
    return rows


def sub_multiplicity(e, s, j):
    """m-bar of the simeq class of eigenspace j: (1/n_tilde) * sum of its members."""
    cls = s.simeq_class_of(j)
    tot = sum(e.m_int[x] for x in cls)
    if tot % s.n_tilde:
        raise ValueError("subscheme multiplicity not integral")
    return tot // s.n_tilde
