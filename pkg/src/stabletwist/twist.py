"""Induction along R = k[x], the spherical twist and the P^n twist.

For a right A-module M the induced module ``M (x)_R A`` has underlying
space ``M^r``, block ``j`` holding ``v (x) a_j`` for the left free basis
``a_j`` of A over R.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import exactla as la
from .algebra import Algebra, SubalgebraData, analyze_subalgebra
from .errors import (CommutationFailed, EndoRingMismatch, HypothesisFailed,
                     NotTruncatedPolynomial, NotWellDefined)
from .module import (Module, ModuleHom, direct_sum, injective_envelope, is_isomorphic,
                     quotient, same_algebra, simple_module, split_free, strip, submodule)
from .stable import (StableEndoStructure, cosyzygy, grothendieck_class, is_stably_isomorphic,
                     minimize_epi, omega_power, stable_endo_structure, stable_hom, syzygy,
                     transport_map)


class TwistContext:
    """The subalgebra ``R = k[x]`` of A, an optional ``y`` and cached ``T``."""

    def __init__(self, algebra: Algebra, x, y=None, n: int | None = None, seed: int = 0):
        self.algebra = algebra
        self.x_name = x if isinstance(x, str) else None
        self.y_name = y if isinstance(y, str) else None
        self.sub: SubalgebraData = analyze_subalgebra(algebra, x)
        self.y = None if y is None else algebra.element(y)
        self.n = n
        self.seed = seed

    def __repr__(self):
        return "<TwistContext x=%s y=%s over %s>" % (self.x_name, self.y_name, self.algebra.name)

    @property
    def m(self) -> int:
        return self.sub.m

    @property
    def r(self) -> int:
        return self.sub.r

    @cached_property
    def T(self) -> Module:
        mod = induce(self, simple_module(self.algebra))[0]
        mod.name = "T"
        return mod

    @cached_property
    def endo(self) -> StableEndoStructure:
        return stable_endo_structure(self.T, seed=self.seed)

    @cached_property
    def y_coeff(self) -> np.ndarray:
        """``y * a_j = sum_{l,i} c[j, l, i] x^i a_l``."""
        if self.y is None:
            raise HypothesisFailed("no element y in this context")
        alg, sub = self.algebra, self.sub
        prods = la.matmul(sub.left_free_basis, alg.left_matrix(self.y), alg.p)
        coords = la.solve(sub.x_chain_basis, prods, alg.p)
        return coords.reshape(sub.r, sub.r, sub.m)

    def psi(self) -> ModuleHom:
        """Left multiplication by ``y`` on ``T = A/xA``."""
        return ModuleHom(self.T, self.T, self.y_coeff[:, :, 0])

    def y_commutes(self) -> bool:
        return self.y is not None and self.algebra.commutes(self.sub.x, self.y)

    def y_preserves_xA(self) -> bool:
        """``y * x^i a_l`` has no ``x^0`` component for ``i >= 1``."""
        alg, sub = self.algebra, self.sub
        if self.y is None:
            return False
        rows = sub.x_chain_basis.reshape(sub.r, sub.m, -1)[:, 1:, :].reshape(-1, alg.dim)
        if rows.shape[0] == 0:
            return True
        prods = la.matmul(rows, alg.left_matrix(self.y), alg.p)
        coords = la.solve(sub.x_chain_basis, prods, alg.p).reshape(-1, sub.r, sub.m)
        return not coords[:, :, 0].any()


# induction

def _x_powers(ctx: TwistContext, mod: Module) -> np.ndarray:
    p = mod.p
    rx = mod.act(ctx.sub.x)
    pows = [la.identity(mod.dim)]
    for _ in range(1, ctx.m):
        pows.append(la.matmul(pows[-1], rx, p))
    return np.array(pows, dtype=np.int64).reshape(ctx.m, mod.dim, mod.dim)


def induce(ctx: TwistContext, mod: Module) -> tuple[Module, ModuleHom]:
    """``M (x)_R A`` and the multiplication map ``mu: v (x) a_j -> v a_j``."""
    same_algebra(ctx.algebra, mod.algebra)
    p, d, r, n = mod.p, ctx.algebra.dim, ctx.r, mod.dim
    xp = _x_powers(ctx, mod)
    blocks = la.tensordot(ctx.sub.right_coeff, xp, ([3], [0]), p)  # b, j, l, n, n
    action = blocks.transpose(0, 1, 3, 2, 4).reshape(d, r * n, r * n)
    induced = Module(ctx.algebra, action, check=False)
    mu = la.tensordot(ctx.sub.left_free_basis, mod.action, ([1], [0]), p).reshape(r * n, n)
    return induced, ModuleHom(induced, mod, mu)


def induce_map(ctx: TwistContext, f: ModuleHom) -> np.ndarray:
    """Matrix of ``f (x) id`` between induced modules."""
    return np.kron(la.identity(ctx.r), f.mat) % f.source.p


def h_map(ctx: TwistContext, mod: Module) -> tuple[Module, ModuleHom, ModuleHom]:
    """``H: v (x) a_j -> v y (x) a_j - v (x) y a_j`` on the induced module."""
    p, r, n = mod.p, ctx.r, mod.dim
    x_mod, mu = induce(ctx, mod)
    xp = _x_powers(ctx, mod)
    second = la.tensordot(ctx.y_coeff, xp, ([2], [0]), p)  # j, l, n, n
    first = np.kron(la.identity(r), mod.act(ctx.y))
    h = (first - second.transpose(0, 2, 1, 3).reshape(r * n, r * n)) % p
    return x_mod, ModuleHom(x_mod, x_mod, h), mu


# restriction to R

@dataclass
class RestrictionReport:
    """Jordan type of the x-action: ``k^k_count (+) R^free_count (+) ...``."""

    module: Module = field(repr=False)
    jordan: la.JordanReport = field(repr=False)
    m: int
    k_count: int
    free_count: int
    intermediate_sizes: tuple

    @property
    def relatively_projective(self) -> bool:
        return self.k_count == 0 and not self.intermediate_sizes

    def label(self) -> str:
        parts = []
        if self.k_count:
            parts.append("k^%d" % self.k_count)
        parts.extend("U%d" % s for s in self.intermediate_sizes)
        if self.free_count:
            parts.append("R^%d" % self.free_count)
        return " + ".join(parts) if parts else "0"

    def to_dict(self) -> dict:
        return {"block_sizes": list(self.jordan.block_sizes), "k_count": self.k_count,
                "free_count": self.free_count, "intermediate_sizes": list(self.intermediate_sizes),
                "label": self.label()}


def restriction_report(ctx: TwistContext, mod: Module) -> RestrictionReport:
    rx = mod.act(ctx.sub.x)
    jr = la.jordan_chains(rx, mod.p, expected_index=ctx.m)
    sizes = jr.block_sizes
    inter = tuple(s for s in sizes if 1 < s < ctx.m)
    ones = sum(1 for s in sizes if s == 1) if ctx.m > 1 else 0
    full = sum(1 for s in sizes if s == ctx.m)
    return RestrictionReport(mod, jr, ctx.m, ones, full, inter)


# relative syzygy

@dataclass
class RelativeSyzygy:
    module: Module
    cover_dim: int
    certified_minimal: bool
    split_on_restriction: bool


def relative_syzygy_data(ctx: TwistContext, mod: Module) -> RelativeSyzygy:
    """Kernel of the minimal relatively R-projective cover of ``mod``."""
    x_mod, mu = induce(ctx, mod)
    me = minimize_epi(mu, seed=ctx.seed)
    ker = me.kernel()
    src = restriction_report(ctx, me.source).jordan.block_sizes
    tgt = restriction_report(ctx, mod).jordan.block_sizes
    kj = restriction_report(ctx, ker).jordan.block_sizes
    split = sorted(src) == sorted(tgt + kj)
    return RelativeSyzygy(ker, me.source.dim, me.certified, split)


def relative_syzygy(ctx: TwistContext, mod: Module) -> Module:
    return relative_syzygy_data(ctx, mod).module


# spherical twist

def _require_spherical(ctx: TwistContext):
    rep = restriction_report(ctx, ctx.T)
    if rep.k_count != 2 or rep.intermediate_sizes:
        raise HypothesisFailed("spherical hypothesis fails: T restricts to %s" % rep.label(),
                               report=rep.to_dict())


def _kernel_of_mu(ctx: TwistContext, mod: Module):
    x_mod, mu = induce(ctx, mod)
    ker, kbasis = submodule(x_mod, la.kernel_basis(mu.mat, mod.p))
    return x_mod, ker, kbasis


def spherical_twist(ctx: TwistContext, mod: Module, check: bool = True) -> Module:
    """``tau_R(M)``: the cosyzygy of ``ker(M (x)_R A -> M)``, stripped."""
    if check:
        _require_spherical(ctx)
    _, ker, _ = _kernel_of_mu(ctx, mod)
    return cosyzygy(strip(ker))


def spherical_twist_power(ctx: TwistContext, mod: Module, k: int) -> Module:
    _require_spherical(ctx)
    out = mod
    for _ in range(k):
        out = spherical_twist(ctx, out, check=False)
    return out


def spherical_twist_map(ctx: TwistContext, f: ModuleHom, check: bool = True) -> ModuleHom:
    """``tau_R(f)``: ``f (x) id`` restricted to the kernels of ``mu``, then Omega^-1."""
    if check:
        _require_spherical(ctx)
    p = f.source.p
    _, kerm, basm = _kernel_of_mu(ctx, f.source)
    _, kern, basn = _kernel_of_mu(ctx, f.target)
    img = la.matmul(basm, induce_map(ctx, f), p)
    piv = la.rref(basn, p)[1] if basn.shape[0] else []
    g = img[:, list(piv)]
    sm, sn = split_free(kerm), split_free(kern)
    core_map = la.matmul(la.matmul(sm.inclusion, g, p), sn.retraction, p)
    return transport_map(ModuleHom(sm.core, sn.core, core_map), -1)


# cones and the P^n twist

def cone(f: ModuleHom) -> tuple[Module, np.ndarray]:
    """Pushout of ``f: X -> Y`` along an injective envelope of X.

    Returns the module and the projection ``Y (+) I(X) -> cone``.
    """
    inj, iota = injective_envelope(f.source)
    total = direct_sum(f.target, inj)
    rows = np.concatenate([f.mat, iota.mat], axis=1)
    return quotient(total, rows)


def _require_pn(ctx: TwistContext):
    if ctx.y is None:
        raise HypothesisFailed("P^n twist needs an element y")
    if not ctx.y_commutes():
        raise CommutationFailed("x and y do not commute")
    if not ctx.y_preserves_xA():
        raise NotWellDefined("y * xA is not contained in xA")
    endo = stable_endo_structure(ctx.T, psi=ctx.psi())
    if not endo.certified:
        raise EndoRingMismatch("stable End(T) is not k[psi]/(psi^(n+1)) with psi = L_y",
                               report=endo.to_dict())
    if ctx.n is not None and endo.n != ctx.n:
        raise EndoRingMismatch("expected n = %d, found %d" % (ctx.n, endo.n), report=endo.to_dict())


def pn_twist(ctx: TwistContext, mod: Module, check: bool = True) -> Module:
    """``rho_{R,y}(M)`` as an iterated cone.

    ``C`` is the cone of ``H`` on the induced module and ``c: C -> M`` is
    ``mu`` on the first leg and zero on the injective leg; the result is
    the stripped cone of ``c``.
    """
    if check:
        _require_pn(ctx)
    p = mod.p
    x_mod, h, mu = h_map(ctx, mod)
    c_mod, proj = cone(h)
    # the quotient basis is the images of the standard vectors off the pivots
    keep = _quotient_basis_rows(h, c_mod, proj)
    legs = np.concatenate([mu.mat, la.zeros(proj.shape[0] - x_mod.dim, mod.dim)], axis=0)
    c_map = legs[keep]
    sc = split_free(c_mod)
    c_core = la.matmul(sc.inclusion, c_map, p)
    out, _ = cone(ModuleHom(sc.core, mod, c_core))
    return strip(out)


def _quotient_basis_rows(h: ModuleHom, c_mod: Module, proj: np.ndarray) -> list[int]:
    """Standard vectors of ``Y (+) I(X)`` whose images form the cone basis."""
    rows = np.concatenate([h.mat, injective_envelope(h.source)[1].mat], axis=1)
    piv = set(la.rref(rows, h.source.p)[1]) if rows.shape[0] else set()
    keep = [c for c in range(proj.shape[0]) if c not in piv]
    assert len(keep) == c_mod.dim
    return keep


# reports

@dataclass
class HypothesisReport:
    restriction: dict
    stable_end_dim: int
    endo_n: int | None
    endo_certified: bool
    omega_t_t_dim: int
    y_given: bool
    commutes: bool | None
    well_defined: bool | None
    psi_certified: bool | None
    spherical_ready: bool
    pn_ready: bool
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def hypothesis_report(ctx: TwistContext) -> HypothesisReport:
    """Collect the hypotheses behind both twists; failures are verdicts."""
    T = ctx.T
    rep = restriction_report(ctx, T)
    space = stable_hom(T, T)
    try:
        endo = stable_endo_structure(T, seed=ctx.seed, space=space)
        endo_n, endo_ok = endo.n, endo.certified
    except NotTruncatedPolynomial:
        endo_n, endo_ok = None, False
    omega_dim = stable_hom(syzygy(T), T).stable_dim
    t_shape_ok = endo_ok and omega_dim == endo_n + 1 and rep.k_count == endo_n + 1
    spherical = t_shape_ok and endo_n == 1 and not rep.intermediate_sizes
    commutes = well = psi_ok = None
    pn = False
    if ctx.y is not None:
        commutes = ctx.y_commutes()
        well = ctx.y_preserves_xA()
        psi_ok = False
        if well:
            psi_ok = stable_endo_structure(T, psi=ctx.psi(), space=space).certified
        pn = bool(t_shape_ok and commutes and well and psi_ok and not rep.intermediate_sizes
                  and (ctx.n is None or ctx.n == endo_n))
    notes = []
    if ctx.algebra.name.startswith("extraspecial"):
        p = ctx.algebra.p
        notes.append("mackey_note: the restriction of T is k^%d + R^%d; the double coset "
                     "count k_H^p + kH^p would give dimension 2p^2 instead of dim T = p^2"
                     % (p, p - 1))
    return HypothesisReport(rep.to_dict(), space.stable_dim, endo_n, endo_ok, omega_dim,
                            ctx.y is not None, commutes, well, psi_ok, spherical, pn, notes)


@dataclass
class EquivalenceEvidence:
    twisted_simple_dim: int
    stable_end_dim: int
    ext1_dim: int
    ext1_rank: int
    grothendieck: int
    expected_grothendieck: int

    @property
    def passed(self) -> bool:
        return (self.stable_end_dim == 1 and self.ext1_rank == self.ext1_dim
                and self.grothendieck == self.expected_grothendieck)

    def to_dict(self) -> dict:
        out = dict(self.__dict__)
        out["passed"] = self.passed
        return out


def expected_twist_class(ctx: TwistContext) -> int:
    d, m = ctx.algebra.dim, ctx.m
    return ((m - 1) * d // m + 1) % d


def stable_hom_map_rank(ctx: TwistContext, x: Module, y: Module) -> tuple[int, int]:
    """Rank of ``f -> tau_R(f)`` from stable Hom(X, Y) to stable Hom(tau X, tau Y)."""
    p = x.p
    before = stable_hom(x, y)
    if before.stable_dim == 0:
        return 0, 0
    tx, ty = spherical_twist(ctx, x, check=False), spherical_twist(ctx, y, check=False)
    after = stable_hom(tx, ty)
    images = [spherical_twist_map(ctx, f, check=False).mat for f in before.reps]
    classes = after.classify(np.array(images)) if after.stable_dim else np.zeros((len(images), 0))
    rank = la.rank(classes, p) if classes.size else 0
    return before.stable_dim, rank


def equivalence_evidence(ctx: TwistContext, kind: str = "spherical") -> EquivalenceEvidence:
    """Endo-triviality of ``tau_R(k)`` and injectivity on Ext^1(k, k)."""
    if kind != "spherical":
        raise ValueError("only spherical evidence is implemented")
    _require_spherical(ctx)
    k = simple_module(ctx.algebra)
    tk = spherical_twist(ctx, k, check=False)
    ext_dim, rank = stable_hom_map_rank(ctx, syzygy(k), k)
    return EquivalenceEvidence(tk.dim, stable_hom(tk, tk).stable_dim, ext_dim, rank,
                               grothendieck_class(tk).value, expected_twist_class(ctx))
