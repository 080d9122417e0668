"""Small-graph utilities: files, generation, partitions, one-factors."""

import itertools
import os

import numpy as np

from schemekit import graphkit as gk

DATA = os.path.join(os.path.dirname(__file__), "..", "src", "schemekit", "data")


def test_graph_file_round_trip(tmp_path):
    g1 = gk.SmallGraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    g2 = gk.SmallGraph.from_edges(3, [(0, 1), (1, 2)])
    path = tmp_path / "graphs.txt"
    gk.write_graphs([g1, g2], path)
    back = gk.read_graphs(path)
    assert back == [g1, g2]


def test_distance_power():
    c6 = gk.SmallGraph.from_edges(6, [(i, (i + 1) % 6) for i in range(6)])
    sq = gk.distance_power(c6, 2)
    assert sorted(sq.edges()) == sorted(
        (min(i, (i + 2) % 6), max(i, (i + 2) % 6)) for i in range(6))


def _brute_bipartite(a, b, degree):
    """Every a x b biadjacency with all row and column sums = degree."""
    rows = [r for r in itertools.product((0, 1), repeat=b) if sum(r) == degree]
    out = []
    for combo in itertools.product(rows, repeat=a):
        if all(sum(col) == degree for col in zip(*combo)):
            A = np.zeros((a + b, a + b), dtype=np.int8)
            for i, r in enumerate(combo):
                for j, v in enumerate(r):
                    A[i, a + j] = A[a + j, i] = v
            out.append(gk.SmallGraph(A))
    return out


def test_gen_regular_bipartite_matches_brute_force():
    for parts, degree in (((3, 3), 2), ((4, 4), 2), ((4, 4), 3)):
        gen = gk.gen_regular_bipartite(parts, degree)
        brute = _brute_bipartite(parts[0], parts[1], degree)
        classes = []
        for g in brute:
            if not any(_iso(g, h) for h in classes):
                classes.append(g)
        assert len(gen) == len(classes)


def _iso(g, h):
    from schemekit.isomorph import find_isomorphism
    return find_isomorphism(np.asarray(g.A, dtype=np.int64),
                            np.asarray(h.A, dtype=np.int64)) is not None


def test_triple_partitions_count():
    parts = gk.triple_partitions(range(9))
    assert len(parts) == 280
    assert len(set(parts)) == 280
    for p in parts[:10]:
        assert sorted(len(b) for b in p) == [3, 3, 3]


def test_triple_partitions_matches_brute_force_on_six():
    # partitions of 6 points into three unordered pairs: 15 of them
    def pair_partitions(elems):
        if not elems:
            return [frozenset()]
        first, rest = elems[0], elems[1:]
        out = []
        for other in rest:
            remaining = [x for x in rest if x != other]
            for tail in pair_partitions(remaining):
                out.append(tail | {frozenset((first, other))})
        return out

    assert len(pair_partitions(list(range(6)))) == 15


def test_enumerate_one_factors_counts_permanent():
    # complete arc pool on 4 vertices: 4! = 24 factors total
    arcs = np.ones((4, 4), dtype=np.int64) - np.eye(4, dtype=np.int64)
    np.fill_diagonal(arcs, 1)
    reps, total = gk.enumerate_one_factors(arcs)
    assert total == 24
    # the full symmetric group acts transitively outside nothing: 24 factors
    # collapse under S4 context symmetry to the cycle types of S4 (5 classes)
    assert len(reps) == 5


def test_enumerate_one_factors_restricted_pool():
    # directed 4-cycle pool admits exactly its two rotations' factors
    arcs = np.zeros((4, 4), dtype=np.int64)
    for v in range(4):
        arcs[v][(v + 1) % 4] = arcs[v][(v + 3) % 4] = 1
    reps, total = gk.enumerate_one_factors(arcs)
    factors = set()
    for s in itertools.permutations(range(4)):
        if all(arcs[v][s[v]] for v in range(4)):
            factors.add(s)
    assert total == len(factors)
    assert 1 <= len(reps) <= total


def test_cubic_census_file():
    gs = gk.read_graphs(os.path.join(DATA, "census_9_9_cubic.txt"))
    assert len(gs) == 18
    for g in gs:
        assert g.n == 18
        assert g.degrees() == [3] * 18
        # bipartite on (9, 9): no edges within either side
        assert not g.A[:9, :9].any() and not g.A[9:, 9:].any()


def test_census_matches_structural_generation():
    gs = gk.read_graphs(os.path.join(DATA, "census_9_9_cubic.txt"))
    fresh = gk._cubic_99_with_colorable_side()
    fresh = gk._dedup_by_isomorphism(fresh)
    assert len(fresh) == len(gs)


def test_chromatic_at_most():
    k4 = gk.SmallGraph.from_edges(4, list(itertools.combinations(range(4), 2)))
    assert not gk.chromatic_at_most(k4, 3)
    assert gk.chromatic_at_most(k4, 4)
    c5 = gk.SmallGraph.from_edges(5, [(i, (i + 1) % 5) for i in range(5)])
    assert not gk.chromatic_at_most(c5, 2)
    assert gk.chromatic_at_most(c5, 3)
