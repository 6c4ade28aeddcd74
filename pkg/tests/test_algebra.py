import json
import warnings

import numpy as np
import pytest

from stabletwist import exactla as la
from stabletwist.algebra import (algebra_from_json, analyze_subalgebra, find_symmetric_form,
                                 gram_matrix, validate_algebra)
from stabletwist.catalog import dihedral_algebra, klein_commutative_algebra
from stabletwist.errors import (FreenessFailed, NoUnit, NotAssociative, NotLocal,
                                NotNilpotentElement)


def test_dihedral_validates(d22):
    assert d22.dim == 8
    assert d22.basis[-1] == "yxyx"


def test_field_validates_with_warning():
    with pytest.warns(UserWarning):
        alg = validate_algebra(5, np.ones((1, 1, 1), dtype=np.int64))
    assert alg.dim == 1
    form = find_symmetric_form(alg)
    assert form.functional.tolist() == [1]


def test_broken_associativity_reports_witness(d22):
    table = d22.table.copy()
    x, y, yx = (d22.basis.index(w) for w in ("x", "y", "yx"))
    table[x, yx, :] = 0  # x*(yx) := 0 while (xy)*x = xyx
    with pytest.raises(NotAssociative) as err:
        validate_algebra(2, table)
    i, j, k = err.value.witness
    left = np.tensordot(np.tensordot(table[i, j], table, ([0], [0])) % 2, np.eye(8)[k], ([0], [0]))
    right = np.tensordot(table[j, k], table[i], ([0], [1])) % 2
    assert not np.array_equal(left % 2, right % 2)


def test_missing_unit():
    t = np.zeros((2, 2, 2), dtype=np.int64)
    with pytest.raises(NoUnit):
        validate_algebra(2, t)


def test_not_local():
    # k x k with basis 1, e where e*e = e
    t = np.zeros((2, 2, 2), dtype=np.int64)
    t[0, 0, 0] = t[0, 1, 1] = t[1, 0, 1] = t[1, 1, 1] = 1
    with pytest.raises(NotLocal):
        validate_algebra(3, t)


def test_symmetric_form_dihedral_is_socle_functional(d22):
    form = find_symmetric_form(d22)
    gram = gram_matrix(d22, form.functional)
    assert la.rank(gram, 2) == 8
    socle = np.eye(8, dtype=np.int64)[-1]
    assert la.rank(gram_matrix(d22, socle), 2) == 8
    assert np.array_equal(gram, gram.T)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_symmetric_form_klein(p):
    alg = klein_commutative_algebra(p)
    form = find_symmetric_form(alg)
    xy = np.eye(4, dtype=np.int64)[3]
    assert la.rank(gram_matrix(alg, xy), p) == 4
    assert la.rank(form.gram, p) == 4


def test_symmetric_form_is_symmetric_on_all_pairs(es3):
    form = find_symmetric_form(es3)
    assert np.array_equal(form.gram, form.gram.T)


def test_opposite_commutative_is_identical():
    alg = klein_commutative_algebra(3)
    assert np.array_equal(alg.opposite().table, alg.table)


def test_opposite_involution(d22):
    op = d22.opposite()
    assert op.opposite() is d22
    assert np.array_equal(op.table, d22.table.transpose(1, 0, 2))
    x, y = d22.basis.index("x"), d22.basis.index("y")
    assert np.array_equal(op.table[x, y], d22.table[y, x])
    validate_algebra(op.p, op.table)


def test_field_opposite():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        alg = validate_algebra(2, np.ones((1, 1, 1), dtype=np.int64))
    assert np.array_equal(alg.opposite().table, alg.table)


def test_analyze_dihedral_x(d22):
    sub = analyze_subalgebra(d22, "x")
    assert (sub.m, sub.r) == (2, 4)
    assert sub.left_free_basis.shape == (4, 8) and sub.right_free_basis.shape == (4, 8)


def test_analyze_extraspecial_rank_certificate(es3):
    sub = analyze_subalgebra(es3, "x3")
    assert (sub.m, sub.r) == (3, 9)
    assert sub.left_ranks == [27, 18, 9, 0]
    assert sub.right_ranks == [27, 18, 9, 0]
    # (1-h)^3 = 1 - h^3 = 0 in characteristic 3
    assert not es3.power("x3", 3).any()


def test_analyze_socle_fails(d22):
    with pytest.raises(FreenessFailed) as err:
        analyze_subalgebra(d22, "yxyx")
    assert err.value.side == "left"


def test_analyze_rejects_unit(d22):
    with pytest.raises(NotNilpotentElement):
        analyze_subalgebra(d22, d22.unit())


def test_nilpotency_index_matches_repeated_multiplication(es3):
    for name in ("x1", "x2", "x3", "x4", "y"):
        sub = analyze_subalgebra(es3, name)
        v, m = es3.element(name), 1
        while v.any():
            v = es3.mul(v, name)
            m += 1
        assert sub.m == m


@pytest.mark.parametrize("build", [lambda: dihedral_algebra(3, 3),
                                   lambda: klein_commutative_algebra(5)])
def test_right_coeff_reproduces_products(build):
    alg = build()
    sub = analyze_subalgebra(alg, "x")
    chain = sub.x_chain_basis
    for b in range(alg.dim):
        for j in range(sub.r):
            prod = alg.mul(sub.left_free_basis[j], alg.basis_vector(b))
            rebuilt = la.matmul(sub.right_coeff[b, j].reshape(1, -1), chain, alg.p)[0]
            assert np.array_equal(prod, rebuilt)


def test_loewy_length(d22):
    assert d22.loewy_length == 5
    assert len(d22.radical_powers()[1]) == 8 - 1 - 2  # rad^2 has codimension 2 in rad


def test_json_roundtrip(d22):
    doc = json.loads(json.dumps(d22.to_json()))
    again = algebra_from_json(doc)
    assert np.array_equal(again.table, d22.table)
    assert again.generators == d22.generators
