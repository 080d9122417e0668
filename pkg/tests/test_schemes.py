"""Relation matrices: axioms, isomorphism, automorphisms, file round trip."""

import numpy as np
import pytest

from schemekit import families
from schemekit.schemes import (
    NotAssociationSchemeError,
    RelationMatrix,
    are_isomorphic,
    automorphism_count,
    induced_subscheme,
    read_relation_matrix,
    tensor_from_relation_matrix,
    verify_scheme_axioms,
    write_relation_matrix,
)


def _cube():
    return families.named_scheme("H", 3, 2).relation_matrix()


def test_axioms_pass_on_constructions():
    for sv in (families.named_scheme("H", 3, 2),
               families.named_scheme("J", 5, 2),
               families.special_scheme("smith40")):
        ok, witness = verify_scheme_axioms(sv.relation_matrix())
        assert ok and witness is None


def test_axioms_reject_non_scheme():
    # path graph P3: intersection numbers are not constant
    M = np.array([[0, 1, 2], [1, 0, 1], [2, 1, 0]])
    ok, _ = verify_scheme_axioms(RelationMatrix(M))
    assert not ok
    with pytest.raises(NotAssociationSchemeError):
        tensor_from_relation_matrix(RelationMatrix(M))


def test_non_scheme_witness_names_violation():
    M = np.array([[0, 1, 2], [1, 0, 1], [2, 1, 0]])
    try:
        tensor_from_relation_matrix(RelationMatrix(M))
    except NotAssociationSchemeError as e:
        assert e.witness is not None
    else:  # pragma: no cover
        raise AssertionError("expected NotAssociationSchemeError")


def test_tensor_from_relations_counts_paths():
    t = tensor_from_relation_matrix(_cube())
    assert t.n == 8 and t.d == 3
    assert t.k == [1, 3, 3, 1]
    assert t.p[1][1][2] == 2  # common refinements of an edge at distance (1,2)


def test_isomorphism_detects_relabeling():
    r = _cube()
    perm = np.random.RandomState(3).permutation(r.n)
    M2 = r.M[np.ix_(perm, perm)]
    iso = are_isomorphic(r, RelationMatrix(M2))
    assert iso is not None
    phi, psi = iso
    assert psi == {i: i for i in r.indices}
    # phi actually maps relations of r onto relations of M2
    for x in range(r.n):
        for y in range(r.n):
            assert M2[phi[x]][phi[y]] == r.M[x][y]


def test_isomorphism_distinguishes_different_schemes():
    j42 = families.named_scheme("J", 4, 2).relation_matrix()
    c6 = families.named_scheme("C", 6).relation_matrix()
    assert j42.n == c6.n == 6
    assert are_isomorphic(j42, c6, allow_relation_permutation=True) is None


def test_relation_permutation_isomorphism():
    # J(4,2) with its two classes swapped has the wrong valencies for an
    # identity relation map, but matches once indices may be permuted
    j42 = families.named_scheme("J", 4, 2).relation_matrix()
    swap = np.vectorize({0: 0, 1: 2, 2: 1}.get)(j42.M)
    assert are_isomorphic(j42, RelationMatrix(swap)) is None
    iso = are_isomorphic(j42, RelationMatrix(swap), allow_relation_permutation=True)
    assert iso is not None and iso[1] == {0: 0, 1: 2, 2: 1}


def test_cube_automorphism_count():
    assert automorphism_count(_cube()) == 48


def test_induced_subscheme_on_block():
    # a relation-3 clique of the 40-vertex scheme induces a 1-class scheme
    r = families.special_scheme("smith40").relation_matrix()
    block = [0] + [y for y in range(r.n) if r.M[0][y] == 3]
    sub = induced_subscheme(r, block)
    assert sub.n == 4 and sub.d == 1
    ok, _ = verify_scheme_axioms(sub)
    assert ok


def test_file_round_trip(tmp_path):
    r = _cube()
    path = tmp_path / "cube.rel"
    write_relation_matrix(r, path)
    assert read_relation_matrix(path) == r
