import numpy as np
import pytest

from stabletwist import exactla as la
from stabletwist.catalog import (dihedral_algebra, klein_commutative_algebra,
                                 semidihedral_algebra, string_module, tau_word)
from stabletwist.errors import CommutationFailed, HypothesisFailed
from stabletwist.module import (Module, ModuleHom, free_module, is_isomorphic, quotient,
                                regular_module, simple_module)
from stabletwist.stable import cosyzygy, is_stably_isomorphic, stable_hom, syzygy
from stabletwist.suite import random_module
from stabletwist.twist import (TwistContext, equivalence_evidence, expected_twist_class,
                               h_map, hypothesis_report, induce, pn_twist, relative_syzygy,
                               relative_syzygy_data, restriction_report, spherical_twist,
                               spherical_twist_map)


def tensor_induce(ctx, mod):
    """M (x)_R A as the quotient of M (x)_k A by (vx) (x) b - v (x) (xb)."""
    alg, p, n, d = ctx.algebra, mod.p, mod.dim, ctx.algebra.dim
    eye_n, eye_d = la.identity(n), la.identity(d)
    action = np.array([np.kron(eye_n, alg.right_matrix(eye_d[a])) % p for a in range(d)])
    big = Module(alg, action, check=True)
    rx = mod.act(ctx.sub.x)
    lx = alg.left_matrix(ctx.sub.x)
    rels = [(np.kron(rx[v], eye_d[k]) - np.kron(eye_n[v], lx[k])) % p
            for v in range(n) for k in range(d)]
    return quotient(big, np.array(rels))[0]


@pytest.fixture(scope="module")
def dctx(d22):
    return TwistContext(d22, "x", y="y")


@pytest.fixture(scope="module")
def kctx(klein3):
    return TwistContext(klein3, "x", y="y")


@pytest.fixture(scope="module")
def ectx(es3):
    return TwistContext(es3, "x3", y="y")


def test_induce_dimensions(dctx, kctx, ectx):
    assert induce(dctx, simple_module(dctx.algebra))[0].dim == 4
    assert induce(ectx, simple_module(ectx.algebra))[0].dim == 9
    assert induce(kctx, simple_module(kctx.algebra))[0].dim == 2


def test_induce_matches_tensor_quotient(dctx, kctx):
    rng = np.random.default_rng(5)
    for ctx in (dctx, kctx):
        alg = ctx.algebra
        for mod in (simple_module(alg), random_module(alg, rng), regular_module(alg)):
            ind, mu = induce(ctx, mod)
            assert mu.is_homomorphism()
            assert is_isomorphic(ind, tensor_induce(ctx, mod)).verdict == "yes"


def test_induce_free_is_free(dctx):
    ind = induce(dctx, regular_module(dctx.algebra))[0]
    assert is_isomorphic(ind, free_module(dctx.algebra, dctx.r)).verdict == "yes"


def test_restriction_reports(dctx, kctx, ectx):
    rep = restriction_report(dctx, dctx.T)
    assert sorted(rep.jordan.block_sizes) == [1, 1, 2]
    assert (rep.k_count, rep.free_count, rep.label()) == (2, 1, "k^2 + R^1")
    assert restriction_report(kctx, kctx.T).label() == "k^2"
    assert restriction_report(ectx, ectx.T).label() == "k^3 + R^2"
    free = restriction_report(dctx, regular_module(dctx.algebra))
    assert free.relatively_projective and free.free_count == 4


def test_relative_syzygy_dims(dctx, kctx):
    k = simple_module(dctx.algebra)
    rs = relative_syzygy_data(dctx, k)
    assert rs.module.dim == 3 and rs.certified_minimal and rs.split_on_restriction
    assert relative_syzygy(kctx, simple_module(kctx.algebra)).dim == 1
    assert relative_syzygy(dctx, regular_module(dctx.algebra)).dim == 0


def test_spherical_examples(dctx):
    alg = dctx.algebra
    assert spherical_twist(dctx, regular_module(alg)).dim == 0
    tk = spherical_twist(dctx, simple_module(alg))
    assert tk.dim == 5
    assert is_isomorphic(tk, string_module(alg, tau_word(2))).verdict == "yes"
    assert is_stably_isomorphic(spherical_twist(dctx, dctx.T), cosyzygy(dctx.T)).verdict == "yes"


def test_spherical_map_identity_and_zero(dctx):
    k = simple_module(dctx.algebra)
    tk = spherical_twist(dctx, k)
    space = stable_hom(tk, tk)
    ident = spherical_twist_map(dctx, ModuleHom(k, k, la.identity(1)))
    assert ident.is_homomorphism() and not space.is_zero(ident.mat)
    zero = spherical_twist_map(dctx, ModuleHom(k, k, la.zeros(1, 1)))
    assert space.is_zero(zero.mat)


def test_h_map_is_homomorphism(kctx):
    x_mod, h, mu = h_map(kctx, simple_module(kctx.algebra))
    assert h.is_homomorphism() and mu.is_homomorphism()
    # mu o H vanishes: y acts on k by zero
    assert not la.matmul(h.mat, mu.mat, kctx.algebra.p).any()


def test_pn_examples(kctx):
    alg = kctx.algebra
    assert pn_twist(kctx, regular_module(alg)).dim == 0
    rk = pn_twist(kctx, simple_module(alg))
    assert rk.dim == 5
    assert stable_hom(rk, rk).stable_dim == 1


def test_hypothesis_reports(dctx, ectx, kctx):
    d = hypothesis_report(dctx)
    assert d.spherical_ready and d.endo_n == 1 and d.commutes is False and not d.pn_ready
    e = hypothesis_report(ectx)
    assert e.pn_ready and e.endo_n == 2 and not e.spherical_ready and e.notes
    k = hypothesis_report(kctx)
    assert k.pn_ready and k.spherical_ready and k.endo_n == 1


def test_pn_rejects_noncommuting(dctx):
    with pytest.raises(CommutationFailed):
        pn_twist(dctx, simple_module(dctx.algebra))
    with pytest.raises(HypothesisFailed):
        pn_twist(TwistContext(dctx.algebra, "x"), simple_module(dctx.algebra))


def test_spherical_rejects_extraspecial(ectx):
    with pytest.raises(HypothesisFailed):
        spherical_twist(ectx, simple_module(ectx.algebra))


@pytest.mark.parametrize("build", [lambda: dihedral_algebra(2, 2),
                                   lambda: semidihedral_algebra(2, 1, 2),
                                   lambda: klein_commutative_algebra(2)])
def test_equivalence_evidence(build):
    ctx = TwistContext(build(), "x")
    ev = equivalence_evidence(ctx)
    assert ev.passed
    assert ev.grothendieck == expected_twist_class(ctx)


def test_expected_class_values(dctx, kctx):
    assert expected_twist_class(dctx) == 5
    assert expected_twist_class(kctx) == 3


def test_twist_omega_relation(dctx):
    """tau(Omega M) and Omega tau(M) agree stably."""
    k = simple_module(dctx.algebra)
    a = spherical_twist(dctx, syzygy(k))
    b = syzygy(spherical_twist(dctx, k))
    assert is_stably_isomorphic(a, b).verdict == "yes"
