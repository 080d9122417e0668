"""Concrete relation schemes: relation matrices, parameter extraction, axioms,
induced subschemes, isomorphism and automorphism counting."""

import itertools

import numpy as np

from . import isomorph
from .params import IntersectionTensor

AUTOMORPHISM_VERTEX_BOUND = 64


class NotAssociationSchemeError(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class RelationMatrix:
    """n x n matrix of relation indices; diagonal is the identity relation 0."""

    def __init__(self, entries):
        M = np.asarray(entries, dtype=np.int64)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValueError("relation matrix must be square")
        self.M = M
        self.n = M.shape[0]

    @property
    def indices(self):
        return sorted(set(np.unique(self.M).tolist()))

    @property
    def d(self):
        return max(self.indices)

    def check_well_formed(self):
        if not np.array_equal(self.M, self.M.T):
            raise ValueError("relation matrix is not symmetric")
        diag = np.diag(self.M)
        if np.any(diag != diag[0]):
            raise ValueError("diagonal is not constant")
        if diag[0] != 0:
            raise ValueError("identity relation must be index 0")
        off = self.M[~np.eye(self.n, dtype=bool)]
        if self.n > 1 and np.any(off == 0):
            raise ValueError("identity index appears off the diagonal")

    def indicator(self, i):
        return (self.M == i).astype(np.int64)

    def relabel(self):
        """Compact the relation indices to 0..d (identity stays 0)."""
        idx = self.indices
        remap = {v: k for k, v in enumerate(idx)}
        out = np.vectorize(remap.get)(self.M)
        return RelationMatrix(out)

    def __eq__(self, other):
        return isinstance(other, RelationMatrix) and np.array_equal(self.M, other.M)

    def __repr__(self):
        return f"RelationMatrix(n={self.n}, d={self.d})"


def tensor_from_relation_matrix(r):
    """Count the intersection numbers and verify their constancy."""
    r.check_well_formed()
    idx = r.indices
    if idx != list(range(len(idx))):
        raise ValueError("relation indices must be contiguous 0..d")
    d = len(idx) - 1
    n = r.n
    A = [r.indicator(i) for i in range(d + 1)]
    k = []
    for i in range(d + 1):
        rows = A[i].sum(axis=1)
        if i == 0:
            k.append(1)
            continue
        if np.any(rows != rows[0]):
            x = int(np.argmax(rows != rows[0]))
            raise NotAssociationSchemeError(
                f"relation {i} is not regular", witness=(0, x)
            )
        k.append(int(rows[0]))
    p = [[[0] * (d + 1) for _ in range(d + 1)] for _ in range(d + 1)]
    for i in range(d + 1):
        for j in range(i, d + 1):
            counts = A[i] @ A[j]
            for h in range(d + 1):
                mask = r.M == h
                vals = counts[mask]
                if len(vals) == 0:
                    continue
                if np.any(vals != vals[0]):
                    pos = np.argwhere(mask)
                    bad = None
                    first = int(vals[0])
                    for (x, y) in pos:
                        if counts[x, y] != first:
                            bad = (int(pos[0][0]), int(pos[0][1]), int(x), int(y))
                            break
                    raise NotAssociationSchemeError(
                        f"p^{h}_{{{i}{j}}} is not constant", witness=bad
                    )
                p[h][i][j] = p[h][j][i] = int(vals[0])
    return IntersectionTensor(d=d, n=n, k=k, p=p)


def verify_scheme_axioms(r):
    """(True, None) when r is an association scheme, else (False, witness)."""
    try:
        r.check_well_formed()
        tensor_from_relation_matrix(r)
        return True, None
    except NotAssociationSchemeError as e:
        return False, e.witness
    except ValueError:
        return False, None


def induced_subscheme(r, subset):
    """Restriction of r to a vertex subset, with empty relations dropped."""
    subset = sorted(subset)
    if not subset:
        raise ValueError("subset must be nonempty")
    sub = r.M[np.ix_(subset, subset)]
    return RelationMatrix(sub).relabel()


def are_isomorphic(r1, r2, allow_relation_permutation=False):
    """An isomorphism (phi, psi) between relation schemes, or None.

    phi is a vertex permutation (array, image per vertex of r1), psi a map on
    relation indices.  psi is the identity unless allow_relation_permutation.
    """
    if r1.n != r2.n or len(r1.indices) != len(r2.indices):
        return None
    phi = isomorph.find_isomorphism(r1.M, r2.M)
    if phi is not None:
        return phi, {i: i for i in r1.indices}
    if not allow_relation_permutation:
        return None
    nonid = [i for i in r1.indices if i != 0]
    for perm in itertools.permutations(nonid):
        psi = {0: 0, **dict(zip(nonid, perm))}
        if all(psi[i] == i for i in nonid):
            continue
        mapped = np.vectorize(psi.get)(r1.M)
        phi = isomorph.find_isomorphism(mapped, r2.M)
        if phi is not None:
            return phi, psi
    return None


def automorphism_count(r, bound=AUTOMORPHISM_VERTEX_BOUND):
    """Order of the group of vertex permutations preserving every relation setwise."""
    if r.n > bound:
        raise ValueError(f"automorphism counting refused beyond n = {bound}")
    return isomorph.automorphism_order(r.M)


def write_relation_matrix(r, path):
    with open(path, "w") as fh:
        fh.write(f"{r.n} {r.d}\n")
        for row in r.M:
            fh.write(" ".join(str(int(v)) for v in row) + "\n")


def read_relation_matrix(path):
    with open(path) as fh:
        tokens = fh.read().split()
    n, d = int(tokens[0]), int(tokens[1])
    vals = [int(t) for t in tokens[2:]]
    if len(vals) != n * n:
        raise ValueError("relation matrix file has wrong entry count")
    M = np.array(vals, dtype=np.int64).reshape(n, n)
    r = RelationMatrix(M)
    if r.d != d:
        raise ValueError("relation matrix header disagrees with entries")
    return r
