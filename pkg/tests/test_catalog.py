import itertools

import numpy as np
import pytest

from stabletwist.catalog import (check_heisenberg, dihedral_algebra, extraspecial_group_algebra,
                                 klein_commutative_algebra, parse_algebra_spec, parse_word,
                                 semidihedral_algebra, string_module, tau_word)
from stabletwist.errors import BadParameter, InvalidWord
from stabletwist.module import is_isomorphic, regular_module, simple_module, socle
from stabletwist.twist import TwistContext


def mul(alg, u, v):
    return np.einsum("i,j,ijk->k", u, v, alg.table) % alg.p


def test_dihedral_shape(d22):
    assert d22.dim == 8
    soc = socle(regular_module(d22))
    assert soc.shape[0] == 1
    assert np.array_equal(soc[0] % 2, np.eye(8, dtype=np.int64)[d22.basis.index("yxyx")])
    x, y = d22.named["x"], d22.named["y"]
    xy = mul(d22, x, y)
    assert np.array_equal(mul(d22, xy, xy), mul(d22, mul(d22, y, x), mul(d22, y, x)))


def test_dihedral_odd_prime():
    alg = dihedral_algebra(3, 3)
    assert alg.dim == 12 and alg.p == 3


def test_bad_parameters():
    with pytest.raises(BadParameter):
        dihedral_algebra(1, 2)
    with pytest.raises(BadParameter):
        extraspecial_group_algebra(2)
    with pytest.raises(Exception):
        klein_commutative_algebra(4)


def test_semidihedral_relations():
    alg = semidihedral_algebra(2, 0, 3)
    x, y = alg.named["x"], alg.named["y"]
    yy = mul(alg, y, y)
    xyx = mul(alg, mul(alg, x, y), x)
    assert np.array_equal(yy, xyx)
    assert not mul(alg, yy, yy).any()
    assert not mul(alg, x, x).any()


def test_klein_commutative():
    alg = klein_commutative_algebra(5)
    for i, j in itertools.product(range(4), repeat=2):
        assert np.array_equal(alg.table[i, j], alg.table[j, i])
    for g in ("x", "y"):
        assert not mul(alg, alg.named[g], alg.named[g]).any()


@pytest.mark.parametrize("p", [3, 5])
def test_heisenberg_exhaustive(p):
    facts = check_heisenberg(p)
    assert facts["order"] == p ** 3
    assert all(v for k, v in facts.items() if k != "order")


def test_extraspecial_named_elements(es3):
    p = 3
    y = es3.named["y"]
    for i in range(1, p + 2):
        x = es3.named["x%d" % i]
        assert np.array_equal(mul(es3, x, y), mul(es3, y, x))
        # x^p = 0 in characteristic p since (1-u)^p = 1-u^p
        acc = x
        for _ in range(p - 1):
            acc = mul(es3, acc, x)
        assert not acc.any()


@pytest.mark.parametrize("i", [1, 3, 4])
def test_extraspecial_T(es3, i):
    ctx = TwistContext(es3, "x%d" % i, y="y")
    assert ctx.T.dim == 9
    assert ctx.psi() is not None


def test_string_modules(d22):
    assert string_module(d22, "").dim == 1
    assert is_isomorphic(string_module(d22, ""), simple_module(d22)).verdict == "yes"
    with pytest.raises(InvalidWord):
        string_module(d22, "xx")
    with pytest.raises(InvalidWord):
        parse_word("xX")
    with pytest.raises(InvalidWord):
        parse_word("xz")
    assert string_module(d22, "xYXY").dim == 5
    assert tau_word(2) == "xYXY"


def test_string_module_too_long(d22):
    with pytest.raises(InvalidWord):
        string_module(d22, "xyxyx")


def test_parse_spec():
    assert parse_algebra_spec("dihedral:q=2:p=2").dim == 8
    assert parse_algebra_spec("semidihedral:q=2:p=2").dim == 8
    assert parse_algebra_spec("klein:p=3").p == 3
    for bad in ("dihedral:q=2", "klein:p=x", "nope:p=2", "klein:p=2:q=3", "klein:p"):
        with pytest.raises(BadParameter):
            parse_algebra_spec(bad)
