"""Imprimitivity sets, quotient and subscheme parameters."""

import pytest

from schemekit import families
from schemekit.imprim import (
    ImprimitivityStructure,
    closed_subsets,
    find_imprimitivity_sets,
    quotient_parameters,
    sub_multiplicity,
    subscheme_parameters,
    tilde_classes,
)
from schemekit.params import compute_eigendata, recover_from_parameter_array, ParameterArray


def _lex():
    # C5[K8]: blocks of 8 on a 5-cycle skeleton
    return families.lexicographic_product(
        families.named_scheme("C", 5), families.named_scheme("K", 8))


def test_closed_subsets_by_brute_force():
    t = _lex().tensor()
    closed = {frozenset(s) for s in closed_subsets(t)}
    # brute force: s is closed iff p^h_ij = 0 for i, j in s, h outside s
    expected = set()
    idx = range(t.d + 1)
    import itertools
    for r in range(1, t.d + 2):
        for s in itertools.combinations(idx, r):
            if 0 not in s:
                continue
            if all(t.p[h][i][j] == 0
                   for i in s for j in s for h in idx if h not in s):
                expected.add(frozenset(s))
    assert closed == expected


def test_lexicographic_product_splits_into_block_and_quotient():
    sv = _lex()
    t = sv.tensor()
    e = compute_eigendata(t, fused=(2,))
    structures = [s for s in find_imprimitivity_sets(t, e) if s.nontrivial]
    assert structures, "C5[K8] must be imprimitive"
    st = next(s for s in structures if s.n_bar == 8)
    sub, _, _ = subscheme_parameters(t, st)
    assert sub.n == 8 and sub.d == 1  # the block is a K8
    q = quotient_parameters(t, st)
    c5 = families.named_scheme("C", 5).tensor()
    assert q.p == c5.p


def test_quotient_multiplicities_sum():
    t = _lex().tensor()
    e = compute_eigendata(t, fused=(2,))
    st = next(s for s in find_imprimitivity_sets(t, e)
              if s.nontrivial and s.n_bar == 8)
    # quotient eigenspaces are the overline0 rows; their multiplicities
    # account for the quotient's order
    assert sum(e.m_int[j] for j in st.overline0) == st.n_tilde
    # every simeq-class multiplicity divides out the quotient order exactly
    for j in range(t.d + 1):
        assert sub_multiplicity(e, st, j) * st.n_tilde == sum(
            e.m_int[x] for x in st.simeq_class_of(j))


def test_primitive_scheme_has_no_nontrivial_sets():
    t = families.named_scheme("J", 7, 2).tensor()
    e = compute_eigendata(t)
    assert all(not s.nontrivial for s in find_imprimitivity_sets(t, e))


def test_quotient_integrality_failure_detected():
    # [[18, 1, 18], [18, 9; 0]] has closed set {0, 2} with a fractional
    # quotient intersection number
    t = recover_from_parameter_array(
        ParameterArray((18, 1, 18), ((18, 9), (0,))))
    s = frozenset({0, 2})
    st = ImprimitivityStructure(t, s, tilde_classes(t, s))
    with pytest.raises(Exception):
        quotient_parameters(t, st)
