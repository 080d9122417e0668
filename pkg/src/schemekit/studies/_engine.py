"""Shared machinery for the case studies: eigenspace selection, candidate
embedding, inner-product classification and assembly, and an ordered
parallel map for independent candidate branches."""

import numpy as np

from ..exactalg import compare_by_interval
from ..params import (ParameterArray, recover_from_parameter_array,
                      compute_eigendata)
from ..imprim import find_imprimitivity_sets
from ..schemes import RelationMatrix, are_isomorphic
from ..embed import (gram_from_candidate, compute_embedding, extend_vertex,
                     append_vertex, classify_pair, ip_table_for)


def case_parameters(valencies, blocks):
    """Tensor, eigendata and imprimitivity structures of a parameter array."""
    arr = ParameterArray(tuple(valencies), tuple(tuple(b) for b in blocks))
    t = recover_from_parameter_array(arr)
    e = compute_eigendata(t)
    structures = find_imprimitivity_sets(t, e)
    return t, e, structures


def is_faithful(j, structures):
    return j != 0 and all(
        not (s.nontrivial and j in s.overline0) for s in structures)


def pick_eigenspace(e, structures, m_target):
    """The faithful eigenspace of multiplicity m_target whose Q_{1j} entry is
    largest; exact comparison makes the choice of a Galois conjugate
    deterministic."""
    d = e.tensor.d
    js = [j for j in range(1, d + 1)
          if e.m_int[j] == m_target and is_faithful(j, structures)]
    if not js:
        raise ValueError(f"no faithful eigenspace of multiplicity {m_target}")
    best = js[0]
    for j in js[1:]:
        if compare_by_interval(e.Q[1][j], e.Q[1][best]) > 0:
            best = j
    return best


def embed_candidate(r, e, j):
    """(GramSpec, embedding-or-failure) for a candidate relation scheme."""
    g = gram_from_candidate(r, e, j)
    u = compute_embedding(g)
    return g, u


def profile_ips(table, n, assignment):
    """Inner-product vector for a candidate vertex: assignment maps vertex
    index to relation index (default relation applies elsewhere)."""
    default, overrides = assignment
    return [table[overrides.get(y, default)] for y in range(n)]


def surviving_extensions(u, table, profiles):
    """[(index, coords)] of the candidate profiles that extend u to a unit
    vector; profiles are (default relation, {vertex: relation}) pairs."""
    out = []
    for idx, assignment in enumerate(profiles):
        coords = extend_vertex(u, profile_ips(table, u.n, assignment))
        if coords is not None:
            out.append((idx, coords))
    return out


def relations_from_inner_products(u, table):
    """RelationMatrix classifying every pair of rows of u by its exact inner
    product; requires the table values to be pairwise distinct."""
    n = u.n
    M = np.zeros((n, n), dtype=np.int64)
    for x in range(n):
        for y in range(x + 1, n):
            hits = classify_pair(u.row_products(x, y), table)
            if len(hits) != 1:
                raise ValueError(
                    f"inner product of rows {x}, {y} matches relations {hits}")
            M[x, y] = M[y, x] = hits[0]
    return RelationMatrix(M)


def dedup_relation_schemes(candidates):
    """Representatives of the isomorphism classes, in first-seen order."""
    reps = []
    for r in candidates:
        if not any(are_isomorphic(r, s) for s in reps):
            reps.append(r)
    return reps


def assemble_rows(base, rows):
    u = base
    for coords in rows:
        u = append_vertex(u, coords)
    return u


def map_ordered(fn, items, jobs=1):
    """Map preserving input order; jobs > 1 forks worker processes."""
    items = list(items)
    if jobs is None or jobs <= 1 or len(items) < 2:
        return [fn(it) for it in items]
    import multiprocessing
    ctx = multiprocessing.get_context("fork")
    with ctx.Pool(min(jobs, len(items))) as pool:
        chunk = max(1, len(items) // (4 * jobs))
        return pool.map(fn, items, chunksize=chunk)


__all__ = [
    "case_parameters", "is_faithful", "pick_eigenspace", "embed_candidate",
    "profile_ips", "surviving_extensions", "relations_from_inner_products",
    "dedup_relation_schemes", "assemble_rows", "map_ordered",
    "ip_table_for",
]
