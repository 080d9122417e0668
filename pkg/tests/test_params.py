"""Parameter recovery, eigenmatrices and Krein parameters."""

import numpy as np
import pytest
import sympy
from gmpy2 import mpq

from schemekit import families
from schemekit.exactalg import AlgebraicReal
from schemekit.params import (
    InfeasibleArrayError,
    ParameterArray,
    compute_eigendata,
    compute_krein,
    recover_from_parameter_array,
    validate_intersection_tensor,
)
from schemekit.schemes import tensor_from_relation_matrix

CATALOG = (
    ("K", (13,)),
    ("J", (7, 2)),
    ("H", (3, 2)),
    ("C", (9,)),
    ("Cyc", (13, 2)),
)


def _tensors():
    out = [families.named_scheme(f, *a).tensor() for f, a in CATALOG]
    out.append(families.special_scheme("smith40").tensor())
    return out


def test_recovery_round_trips_through_parameter_array():
    for t in _tensors():
        arr = t.parameter_array()
        t2 = recover_from_parameter_array(arr)
        assert t2.p == t.p
        assert t2.k == t.k


def test_recovered_tensor_is_internally_consistent():
    arr = ParameterArray((12, 4, 4, 24), ((6, 0, 3), (0, 1), (2,)))
    t = recover_from_parameter_array(arr)
    assert validate_intersection_tensor(t) == []
    assert t.n == 45


def test_inconsistent_array_rejected():
    with pytest.raises((InfeasibleArrayError, ValueError)):
        recover_from_parameter_array(ParameterArray((4, 2), ((1,),)))


def test_eigenvalues_match_sympy_oracle():
    t = families.named_scheme("J", 7, 2).tensor()
    B1 = sympy.Matrix(t.B(1))
    expected = sorted(sympy.Matrix(B1).T.eigenvals().keys(), reverse=True)
    e = compute_eigendata(t)
    got = [e.P[j][1] for j in range(t.d + 1)]
    assert len(got) == len(expected)
    for g, x in zip(got, expected):
        assert g.is_rational()
        assert sympy.Rational(
            int(g.as_rational().numerator),
            int(g.as_rational().denominator)) == x


def test_orthogonality_and_multiplicities():
    for t in _tensors():
        e = compute_eigendata(t)
        assert e.verify_orthogonality()
        assert sum(e.m_int) == t.n
        assert e.m_int[0] == 1


def test_krein_invariants():
    for t in _tensors():
        e = compute_eigendata(t)
        try:
            kt = compute_krein(e)
        except Exception:
            continue  # eigenvalues beyond one quadratic field
        d = t.d
        for h in range(d + 1):
            for i in range(d + 1):
                row = sum((kt.q[h][i][j] for j in range(d + 1)),
                          AlgebraicReal.rational(0))
                assert (row - e.m[i]).is_zero()


def test_cube_is_formally_self_dual():
    t = families.named_scheme("H", 3, 2).tensor()
    e = compute_eigendata(t)
    kt = compute_krein(e)
    for h in range(t.d + 1):
        for i in range(t.d + 1):
            for j in range(t.d + 1):
                assert (kt.q[h][i][j]
                        - AlgebraicReal.rational(t.p[h][i][j])).is_zero()


def test_direct_product_tensor_is_kronecker():
    """Oracle for product parameters: every intersection number of a direct
    product factors as the product of the factors' intersection numbers."""
    a = families.named_scheme("K", 3)
    b = families.named_scheme("K", 13)
    prod = families.direct_product(a, b)
    tp = prod.tensor()
    ta, tb = a.tensor(), b.tensor()
    # relation (i, i') of the product carries index i * (tb.d + 1) + i'
    def idx(i, i2):
        return i * (tb.d + 1) + i2
    for h in range(ta.d + 1):
        for h2 in range(tb.d + 1):
            for i in range(ta.d + 1):
                for i2 in range(tb.d + 1):
                    for j in range(ta.d + 1):
                        for j2 in range(tb.d + 1):
                            assert tp.p[idx(h, h2)][idx(i, i2)][idx(j, j2)] \
                                == ta.p[h][i][j] * tb.p[h2][i2][j2]


def test_tensor_from_relations_matches_recovery():
    sv = families.named_scheme("H", 3, 2)
    t1 = tensor_from_relation_matrix(sv.relation_matrix())
    t2 = recover_from_parameter_array(t1.parameter_array())
    assert t1.p == t2.p
