"""Small-graph utilities: constrained bipartite generation with isomorph
rejection, exact coloring, 1-factor enumeration, spreads, distance powers,
and a line-oriented graph exchange format.

Sizes are capped at 64 vertices; everything here backs the case-study
searches rather than general-purpose graph work.
"""

import itertools

import networkx as nx
import numpy as np

from .isomorph import all_automorphisms, find_isomorphism, invariant_key

MAX_VERTICES = 64


class GraphSizeError(ValueError):
    pass


class SmallGraph:
    """Simple undirected graph on at most 64 vertices, adjacency as a dense
    0/1 matrix, with optional vertex partition labels."""

    def __init__(self, adjacency, labels=None):
        A = np.asarray(adjacency, dtype=np.int8)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError("adjacency must be square")
        if A.shape[0] > MAX_VERTICES:
            raise GraphSizeError(f"graph larger than {MAX_VERTICES} vertices")
        if np.any(A != A.T):
            raise ValueError("adjacency must be symmetric")
        if np.any(np.diag(A)):
            raise ValueError("no loops allowed")
        if not np.isin(A, (0, 1)).all():
            raise ValueError("adjacency entries must be 0/1")
        self.A = A
        self.n = A.shape[0]
        self.labels = tuple(labels) if labels is not None else None

    @classmethod
    def from_edges(cls, n, edges, labels=None):
        A = np.zeros((n, n), dtype=np.int8)
        for u, v in edges:
            A[u, v] = A[v, u] = 1
        return cls(A, labels=labels)

    def edges(self):
        return [(i, j) for i in range(self.n) for j in range(i + 1, self.n)
                if self.A[i, j]]

    def degree(self, v):
        return int(self.A[v].sum())

    def degrees(self):
        return [int(x) for x in self.A.sum(axis=1)]

    def neighbors(self, v):
        return [int(u) for u in np.flatnonzero(self.A[v])]

    def to_networkx(self):
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges())
        return g

    def to_lines(self):
        return ["".join(str(int(x)) for x in row) for row in self.A]

    @classmethod
    def from_lines(cls, lines, labels=None):
        A = np.array([[int(c) for c in line.strip()] for line in lines],
                     dtype=np.int8)
        return cls(A, labels=labels)

    def __eq__(self, other):
        return isinstance(other, SmallGraph) and np.array_equal(self.A, other.A)

    def __hash__(self):
        return hash(self.A.tobytes())

    def __repr__(self):
        return f"SmallGraph(n={self.n}, edges={int(self.A.sum()) // 2})"


def write_graphs(graphs, path):
    """Cache file: 0/1-line blocks separated by blank lines."""
    with open(path, "w") as fh:
        for gi, g in enumerate(graphs):
            if gi:
                fh.write("\n")
            fh.write("\n".join(g.to_lines()) + "\n")


def read_graphs(path):
    with open(path) as fh:
        text = fh.read()
    out = []
    for block in text.split("\n\n"):
        lines = [ln for ln in block.splitlines() if ln.strip()]
        if lines:
            out.append(SmallGraph.from_lines(lines))
    return out


def distance_power(g, r):
    """Graph with edges between vertices at distance exactly r in g."""
    dist = dict(nx.all_pairs_shortest_path_length(g.to_networkx()))
    A = np.zeros((g.n, g.n), dtype=np.int8)
    for u, row in dist.items():
        for v, d in row.items():
            if d == r and u != v:
                A[u, v] = A[v, u] = 1
    return SmallGraph(A, labels=g.labels)


def chromatic_at_most(g, k):
    """A proper k-coloring (list of colors per vertex) or None; exact
    backtracking, new colors introduced in order to kill color symmetry."""
    order = sorted(range(g.n), key=lambda v: -g.degree(v))
    colors = [-1] * g.n

    def rec(pos, used):
        if pos == g.n:
            return True
        v = order[pos]
        forbidden = {colors[u] for u in g.neighbors(v) if colors[u] >= 0}
        top = min(used + 1, k)
        for c in range(top):
            if c in forbidden:
                continue
            colors[v] = c
            if rec(pos + 1, max(used, c + 1)):
                return True
            colors[v] = -1
        return False

    if rec(0, 0):
        return list(colors)
    return None


def all_colorings(g, k, limit=None):
    """All proper colorings with colors in {0..k-1} (no symmetry reduction)."""
    order = sorted(range(g.n), key=lambda v: -g.degree(v))
    colors = [-1] * g.n
    out = []

    def rec(pos):
        if limit is not None and len(out) >= limit:
            return
        if pos == g.n:
            out.append(list(colors))
            return
        v = order[pos]
        forbidden = {colors[u] for u in g.neighbors(v) if colors[u] >= 0}
        for c in range(k):
            if c not in forbidden:
                colors[v] = c
                rec(pos + 1)
                colors[v] = -1

    rec(0)
    return out


def _dedup_by_isomorphism(graphs):
    buckets = {}
    out = []
    for g in graphs:
        key = invariant_key(g.A)
        found = False
        for h in buckets.get(key, ()):
            if find_isomorphism(h.A, g.A) is not None:
                found = True
                break
        if not found:
            buckets.setdefault(key, []).append(g)
            out.append(g)
    return out


def gen_regular_bipartite(parts, degree, predicate=None,
                          requires_three_colorable_side=False,
                          allow_slow_generation=False):
    """All degree-regular bipartite graphs on parts (a, b), up to isomorphism,
    passing the predicate.

    Two complete strategies:
      * orderly row-by-row generation (rows in nondecreasing order, column
        capacities respected), for small parts;
      * when the caller guarantees the predicate forces the second side's
        distance-2 graph to be 3-colorable (requires_three_colorable_side),
        cubic graphs on (9, 9) decompose into three B-triples partitions of A
        and are enumerated structurally.
    """
    a, b = parts
    if a * degree != b * degree and a != b:
        if a * degree % b or b * degree % a:
            raise ValueError("degree constraints unsatisfiable")
    if a + b > MAX_VERTICES:
        raise GraphSizeError("parts too large")
    if requires_three_colorable_side and (a, b) == (9, 9) and degree == 3:
        cands = _cubic_99_with_colorable_side()
    else:
        if a > 7 and not allow_slow_generation:
            raise GraphSizeError(
                "orderly generation beyond 7+7 is slow; pass "
                "allow_slow_generation=True or use a cache file"
            )
        cands = _orderly_bipartite(a, b, degree)
    if predicate is not None:
        cands = [g for g in cands if predicate(g)]
    return _dedup_by_isomorphism(cands)


def _orderly_bipartite(a, b, degree):
    """Row-by-row generation of biadjacency matrices with nondecreasing rows
    and column capacity bounds; final output deduplicated by the caller."""
    rows = [frozenset(c) for c in itertools.combinations(range(b), degree)]
    rows.sort(key=sorted)
    out = []
    colcap = [degree] * b
    chosen = []

    def rec(start):
        if len(chosen) == a:
            if all(c == 0 for c in colcap):
                out.append(_from_biadjacency(a, b, chosen))
            return
        remaining = a - len(chosen)
        # feasibility: remaining rows must exactly use up column capacities
        if sum(colcap) != remaining * degree:
            return
        for ri in range(start, len(rows)):
            r = rows[ri]
            if all(colcap[c] > 0 for c in r):
                for c in r:
                    colcap[c] -= 1
                chosen.append(r)
                rec(ri)
                chosen.pop()
                for c in r:
                    colcap[c] += 1

    rec(0)
    return out


def _from_biadjacency(a, b, rows):
    A = np.zeros((a + b, a + b), dtype=np.int8)
    for i, r in enumerate(rows):
        for c in r:
            A[i, a + c] = A[a + c, i] = 1
    labels = [0] * a + [1] * b
    return SmallGraph(A, labels=labels)


def _cubic_99_with_colorable_side():
    """Cubic bipartite graphs on 9+9 whose B-side distance-2 graph is
    3-colorable.

    In such a coloring each B color class has 3 vertices and every A vertex
    has exactly one neighbor per class, so each class induces a partition of A
    into three labeled triples.  Enumerating three such partitions (the first
    normalized to kill relabeling of A) therefore covers every graph in the
    class up to isomorphism.
    """
    p1 = (frozenset({0, 1, 2}), frozenset({3, 4, 5}), frozenset({6, 7, 8}))
    parts = triple_partitions(range(9))
    stab = _partition_stabilizer(p1)
    p2_reps = _orbit_representatives(parts, stab)
    out = []
    for p2 in p2_reps:
        for p3 in parts:
            rows = [set() for _ in range(9)]
            for bi, blocks in enumerate((p1, sorted(p2, key=sorted),
                                         sorted(p3, key=sorted))):
                for t, block in enumerate(blocks):
                    for v in block:
                        rows[v].add(3 * bi + t)
            g = _from_biadjacency(9, 9, [frozenset(r) for r in rows])
            d2b = _induced(distance_power(g, 2), range(9, 18))
            if chromatic_at_most(d2b, 3) is not None:
                out.append(g)
    return out


def triple_partitions(elems):
    elems = tuple(elems)
    first = elems[0]
    out = []
    for t1 in itertools.combinations(elems[1:], 2):
        b1 = frozenset((first,) + t1)
        rest = [x for x in elems if x not in b1]
        for t2 in itertools.combinations(rest[1:], 2):
            b2 = frozenset((rest[0],) + t2)
            b3 = frozenset(x for x in rest if x not in b2)
            out.append(frozenset((b1, b2, b3)))
    return out


def _partition_stabilizer(p1):
    """All permutations of the 9 points preserving the block structure of p1
    (permuting within blocks and permuting whole blocks)."""
    blocks = [tuple(sorted(b)) for b in sorted(p1, key=sorted)]
    group = []
    for bperm in itertools.permutations(range(3)):
        for ins in itertools.product(
            *(itertools.permutations(range(3)) for _ in range(3))
        ):
            perm = [0] * 9
            for bi, block in enumerate(blocks):
                target = blocks[bperm[bi]]
                for pos, v in enumerate(block):
                    perm[v] = target[ins[bi][pos]]
            group.append(tuple(perm))
    return group


def _orbit_representatives(parts, group):
    seen = set()
    reps = []
    for p in parts:
        if p in seen:
            continue
        reps.append(p)
        for g in group:
            seen.add(frozenset(frozenset(g[v] for v in b) for b in p))
    return reps


def _induced(g, verts):
    verts = list(verts)
    return SmallGraph(g.A[np.ix_(verts, verts)])


def enumerate_one_factors(arcs, context=None):
    """1-factors of a directed arc pool (0/1 matrix): permutations s with every
    (v, s(v)) an arc.  Deduplicated by orbits under the automorphisms of the
    context structure (an integer-colored matrix; defaults to the arc pool
    itself), so two factors count once when some context symmetry maps one
    onto the other.

    Returns (representatives, total_count); each representative is a
    permutation tuple."""
    arcs = np.asarray(arcs)
    n = arcs.shape[0]
    if context is None:
        context = arcs
    all_factors = _all_one_factors(arcs)
    group = all_automorphisms(np.asarray(context))
    seen = set()
    reps = []
    for f in all_factors:
        if f in seen:
            continue
        reps.append(f)
        for g in group:
            # image of factor {v -> f[v]} under vertex map g
            img = [0] * n
            for v in range(n):
                img[g[v]] = g[f[v]]
            seen.add(tuple(img))
    return reps, len(all_factors)


def _all_one_factors(arcs):
    n = arcs.shape[0]
    choices = [list(np.flatnonzero(arcs[v])) for v in range(n)]
    used = [False] * n
    cur = [0] * n
    out = []

    def rec(v):
        if v == n:
            out.append(tuple(cur))
            return
        for w in choices[v]:
            if not used[w]:
                used[w] = True
                cur[v] = w
                rec(v + 1)
                used[w] = False

    rec(0)
    return out


def spreads(g):
    """All partitions of the vertex set into maximal cliques of g."""
    cliques = [frozenset(c) for c in nx.find_cliques(g.to_networkx())]
    out = []
    chosen = []

    def rec(uncovered):
        if not uncovered:
            out.append([tuple(sorted(c)) for c in chosen])
            return
        v = min(uncovered)
        for c in cliques:
            if v in c and c <= uncovered:
                chosen.append(c)
                rec(uncovered - c)
                chosen.pop()

    rec(frozenset(range(g.n)))
    return out
