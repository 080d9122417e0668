"""Isomorphism machinery for small edge-colored (relation) structures.

Works on n x n integer matrices of edge colors (relation indices); directed
structures are supported since signatures use ordered pair codes.  The toolbox is
iterated color refinement plus backtracking individualization: enough for the
n <= 64 structures this library meets.
"""

import numpy as np


def _pair_codes(M):
    M = np.asarray(M, dtype=np.int64)
    d = int(M.max()) + 1
    return M * d + M.T, d * d


def joint_refine(pairs, ncodes, colors):
    """Refine vertex colors of several structures simultaneously.

    pairs: list of pair-code matrices; colors: list of integer arrays.
    Returns (new_colors, ok); ok is False when the structures' color signatures
    diverge (no isomorphism can exist).
    """
    counts = [len(c) for c in colors]
    while True:
        sigs = []
        ncolors = int(max(c.max() for c in colors)) + 1
        for P, col in zip(pairs, colors):
            code = col[None, :] * ncodes + P
            n = len(col)
            # per-row histogram of codes, plus own color
            sig = np.zeros((n, ncolors * ncodes + 1), dtype=np.int32)
            rows = np.repeat(np.arange(n), n)
            np.add.at(sig, (rows, 1 + code.ravel()), 1)
            sig[np.arange(n), 1 + code[np.arange(n), np.arange(n)]] -= 1  # drop diagonal
            sig[:, 0] = col
            sigs.append(sig)
        allsig = np.concatenate(sigs, axis=0)
        uniq, inv = np.unique(allsig, axis=0, return_inverse=True)
        newcols = []
        pos = 0
        for n in counts:
            newcols.append(inv[pos : pos + n].astype(np.int64))
            pos += n
        if len(pairs) > 1:
            base = np.bincount(newcols[0], minlength=len(uniq))
            for c in newcols[1:]:
                if not np.array_equal(base, np.bincount(c, minlength=len(uniq))):
                    return newcols, False
        stable = all(len(np.unique(c)) == len(np.unique(o))
                     for c, o in zip(newcols, colors))
        colors = newcols
        if stable:
            return colors, True


def _discrete(col):
    return len(np.unique(col)) == len(col)


def _perm_from_colors(c1, c2):
    order1 = np.argsort(c1, kind="stable")
    order2 = np.argsort(c2, kind="stable")
    perm = np.empty(len(c1), dtype=np.int64)
    perm[order1] = order2
    return perm


def _verify(M1, M2, perm):
    return np.array_equal(M2[np.ix_(perm, perm)], M1)


def find_isomorphism(M1, M2, colors1=None, colors2=None):
    """A vertex bijection carrying M1 onto M2 respecting edge colors, or None."""
    M1 = np.asarray(M1, dtype=np.int64)
    M2 = np.asarray(M2, dtype=np.int64)
    if M1.shape != M2.shape:
        return None
    n = M1.shape[0]
    if colors1 is None:
        colors1 = np.zeros(n, dtype=np.int64)
    if colors2 is None:
        colors2 = np.zeros(n, dtype=np.int64)
    d = int(max(M1.max(), M2.max())) + 1
    P1, P2 = M1 * d + M1.T, M2 * d + M2.T
    ncodes = d * d

    def search(c1, c2):
        (c1, c2), ok = joint_refine([P1, P2], ncodes, [c1, c2])
        if not ok:
            return None
        if _discrete(c1):
            if not _discrete(c2):
                return None
            perm = _perm_from_colors(c1, c2)
            return perm if _verify(M1, M2, perm) else None
        # smallest non-singleton cell
        vals, cnts = np.unique(c1, return_counts=True)
        k = vals[cnts > 1][np.argmin(cnts[cnts > 1])]
        v = int(np.flatnonzero(c1 == k)[0])
        newc = int(max(c1.max(), c2.max())) + 1
        for u in np.flatnonzero(c2 == k):
            c1b, c2b = c1.copy(), c2.copy()
            c1b[v] = newc
            c2b[int(u)] = newc
            r = search(c1b, c2b)
            if r is not None:
                return r
        return None

    return search(np.asarray(colors1, dtype=np.int64), np.asarray(colors2, dtype=np.int64))


def automorphism_order(M, colors=None):
    """Order of the color-preserving automorphism group (edge colors fixed setwise)."""
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[0]
    if colors is None:
        colors = np.zeros(n, dtype=np.int64)
    P, ncodes = _pair_codes(M)

    def order(cols):
        (cols,), _ = joint_refine([P], ncodes, [cols])
        if _discrete(cols):
            return 1
        vals, cnts = np.unique(cols, return_counts=True)
        k = vals[cnts > 1][np.argmin(cnts[cnts > 1])]
        cell = np.flatnonzero(cols == k)
        v = int(cell[0])
        newc = int(cols.max()) + 1
        orbit = 1
        for u in cell[1:]:
            c1b, c2b = cols.copy(), cols.copy()
            c1b[v] = newc
            c2b[int(u)] = newc
            if _iso_same(M, P, ncodes, c1b, c2b) is not None:
                orbit += 1
        stab = cols.copy()
        stab[v] = newc
        return orbit * order(stab)

    return order(np.asarray(colors, dtype=np.int64))


def _iso_same(M, P, ncodes, c1, c2):
    def search(c1, c2):
        (c1, c2), ok = joint_refine([P, P], ncodes, [c1, c2])
        if not ok:
            return None
        if _discrete(c1):
            perm = _perm_from_colors(c1, c2)
            return perm if _verify(M, M, perm) else None
        vals, cnts = np.unique(c1, return_counts=True)
        k = vals[cnts > 1][np.argmin(cnts[cnts > 1])]
        v = int(np.flatnonzero(c1 == k)[0])
        newc = int(max(c1.max(), c2.max())) + 1
        for u in np.flatnonzero(c2 == k):
            c1b, c2b = c1.copy(), c2.copy()
            c1b[v] = newc
            c2b[int(u)] = newc
            r = search(c1b, c2b)
            if r is not None:
                return r
        return None

    return search(c1, c2)


def all_automorphisms(M, colors=None, limit=100000):
    """Every color-preserving automorphism, enumerated by plain backtracking.

    Intended for small fixed-context groups (orders up to a few thousand).
    """
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[0]
    if colors is None:
        colors = np.zeros(n, dtype=np.int64)
    else:
        colors = np.asarray(colors, dtype=np.int64)
    P, ncodes = _pair_codes(M)
    out = []

    def search(c1, c2):
        (c1, c2), ok = joint_refine([P, P], ncodes, [c1, c2])
        if not ok:
            return
        if _discrete(c1):
            perm = _perm_from_colors(c1, c2)
            if _verify(M, M, perm):
                out.append(perm)
                if len(out) > limit:
                    raise RuntimeError("automorphism enumeration limit exceeded")
            return
        vals, cnts = np.unique(c1, return_counts=True)
        k = vals[cnts > 1][np.argmin(cnts[cnts > 1])]
        v = int(np.flatnonzero(c1 == k)[0])
        newc = int(max(c1.max(), c2.max())) + 1
        for u in np.flatnonzero(c2 == k):
            c1b, c2b = c1.copy(), c2.copy()
            c1b[v] = newc
            c2b[int(u)] = newc
            search(c1b, c2b)

    search(colors, colors.copy())
    return out


def invariant_key(M, colors=None):
    """A cheap isomorphism invariant for bucketing before pairwise search."""
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[0]
    if colors is None:
        colors = np.zeros(n, dtype=np.int64)
    P, ncodes = _pair_codes(M)
    (cols,), _ = joint_refine([P], ncodes, [colors])
    hist = np.unique(cols, return_counts=True)[1]
    # stable refinement histogram + sorted per-color edge-color counts
    cell_sig = []
    for k in np.unique(cols):
        idx = np.flatnonzero(cols == k)
        counts = np.bincount(M[idx][:, :].ravel(), minlength=int(M.max()) + 1)
        cell_sig.append((len(idx), tuple(counts.tolist())))
    cell_sig.sort()
    return (n, tuple(sorted(hist.tolist())), tuple(cell_sig))
