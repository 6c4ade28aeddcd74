"""Stable module category: syzygies, stable Hom, Ext^1 and relative covers."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import exactla as la
from .errors import LiftFailed, NoSolution, NotSurjective, NotTruncatedPolynomial
from .module import (HomSpace, IsoResult, Module, ModuleHom, _free_right_action, dual,
                     hom_space, is_isomorphic, nilpotent_span, same_algebra, split_free, strip,
                     submodule, zero_module)


# syzygies

@dataclass
class SyzygyData:
    """``Omega(M)`` as the kernel of the minimal cover of the stripped input.

    ``kernel`` is an echelon basis of the kernel inside ``A^g`` and
    ``pivots`` its pivot columns.
    """

    module: Module
    source: Module
    kernel: np.ndarray = field(repr=False)
    pivots: list = field(repr=False)


def syzygy_data(mod: Module, stripped: bool = False) -> SyzygyData:
    alg, p, d = mod.algebra, mod.p, mod.algebra.dim
    core = mod if stripped else strip(mod)
    pres = core.presentation
    if pres.g == 0 or pres.kernel.shape[0] == 0:
        return SyzygyData(zero_module(alg), core, la.zeros(0, pres.g * d), [])
    kernel, piv = pres.kernel, pres.kernel_pivots
    imgs = _free_right_action(alg, kernel, pres.g, list(range(d)))  # K, d, gd
    action = imgs[:, :, piv].transpose(1, 0, 2)
    return SyzygyData(Module(alg, action, check=False), core, kernel, piv)


def syzygy(mod: Module) -> Module:
    """``Omega(M)``: kernel of the projective cover of the stripped module."""
    return syzygy_data(mod).module


def cosyzygy(mod: Module) -> Module:
    """``Omega^-1(M)`` computed as ``D Omega D``."""
    return dual(syzygy(dual(mod)))


def omega_power(mod: Module, k: int) -> Module:
    """``Omega^k(M)`` for any integer ``k``; ``k = 0`` strips."""
    out = strip(mod)
    step = syzygy if k > 0 else cosyzygy
    for _ in range(abs(k)):
        out = step(out)
    return out


def _omega_map(f: ModuleHom) -> ModuleHom:
    p, d = f.source.p, f.source.algebra.dim
    sm, sn = syzygy_data(f.source, stripped=True), syzygy_data(f.target, stripped=True)
    pm, pn = f.source.presentation, f.target.presentation
    out = la.zeros(sm.module.dim, sn.module.dim)
    if sm.module.dim == 0 or sn.module.dim == 0:
        return ModuleHom(sm.module, sn.module, out)
    # lift the images of the top generators of M through the cover of N
    imgs = f.mat[pm.tops, :]
    try:
        w = la.solve(pn.epi, imgs, p)
    except NoSolution as exc:
        raise LiftFailed("map does not lift through the projective cover") from exc
    big = _free_right_action(f.source.algebra, w, pn.g, list(range(d)))  # gM, d, gN d
    big = big.reshape(pm.g * d, pn.g * d)
    restricted = la.matmul(sm.kernel, big, p)
    return ModuleHom(sm.module, sn.module, restricted[:, sn.pivots])


def transport_map(f: ModuleHom, direction: int = 1) -> ModuleHom:
    """Realise ``Omega(f)`` (direction 1) or ``Omega^-1(f)`` (direction -1).

    Source and target must be projective-free.  For ``Omega`` the map is
    lifted through the two covers and restricted to the kernels; the
    cosyzygy is handled through duality.
    """
    if direction == 1:
        return _omega_map(f)
    if direction == -1:
        d_f = ModuleHom(dual(f.target), dual(f.source), f.mat.T.copy())
        om = _omega_map(d_f)
        return ModuleHom(dual(om.target), dual(om.source), om.mat.T.copy())
    raise ValueError("direction must be 1 or -1")


# stable Hom

@dataclass
class StableHomSpace:
    """Hom(M, N) modulo maps factoring through a projective.

    ``proj`` is an echelon basis of the projective part in Hom coordinates
    (pivots ``proj_pivots``); the Hom basis vectors at the remaining
    coordinates ``free`` give stable representatives.
    """

    source: Module
    target: Module
    hom: HomSpace = field(repr=False)
    proj: np.ndarray = field(repr=False)
    proj_pivots: list = field(repr=False)
    free: list = field(repr=False)

    @property
    def total_dim(self) -> int:
        return self.hom.dim

    @property
    def proj_dim(self) -> int:
        return self.proj.shape[0]

    @property
    def stable_dim(self) -> int:
        return self.total_dim - self.proj_dim

    @property
    def reps(self) -> list[ModuleHom]:
        return [ModuleHom(self.source, self.target, self.hom.basis[s]) for s in self.free]

    def classify(self, mat) -> np.ndarray:
        """Stable coordinates of one map or a stack of maps."""
        p = self.source.p
        c = self.hom.coords(mat)
        if self.proj_dim:
            c = (c - la.matmul(c[..., self.proj_pivots], self.proj, p)) % p
        return c[..., self.free]

    def is_zero(self, mat) -> bool:
        return not self.classify(mat).any()

    def to_dict(self) -> dict:
        return {"total_dim": self.total_dim, "proj_dim": self.proj_dim,
                "stable_dim": self.stable_dim}


def stable_hom(m: Module, n: Module) -> StableHomSpace:
    """Stable Hom with the projective part ``Hom(M, A) o (cover of N)``."""
    same_algebra(m.algebra, n.algebra)
    p, d = m.p, m.algebra.dim
    hs = hom_space(m, n)
    h = hs.dim
    if h == 0:
        return StableHomSpace(m, n, hs, la.zeros(0, 0), [], [])
    pres = n.presentation
    to_a = m.hom_to_regular.basis
    if pres.g == 0 or to_a.shape[0] == 0:
        return StableHomSpace(m, n, hs, la.zeros(0, h), [], list(range(h)))
    blocks = pres.epi.reshape(pres.g, d, n.dim)
    comp = la.tensordot(to_a, blocks, ([2], [1]), p)  # s, mdim, g, ndim
    comp = comp.transpose(0, 2, 1, 3).reshape(-1, m.dim, n.dim)
    coords = hs.coords(comp)
    if coords.shape[0] and coords.any():
        proj, piv = la.rref(coords, p)
    else:
        proj, piv = la.zeros(0, h), []
    free = [c for c in range(h) if c not in set(piv)]
    return StableHomSpace(m, n, hs, proj, list(piv), free)


def ext1(m: Module, n: Module) -> int:
    """``dim Ext^1(M, N) = dim stable Hom(Omega M, N)``."""
    return stable_hom(syzygy(m), n).stable_dim


# stable endomorphism ring

@dataclass
class StableEndoStructure:
    """Certificate that stable End(M) is ``k[psi]/(psi^(n+1))``."""

    module: Module
    n: int
    psi: ModuleHom
    certified: bool
    stable_dim: int = 0

    def to_dict(self) -> dict:
        return {"n": self.n, "stable_dim": self.stable_dim, "certified": self.certified}


def truncated_polynomial_check(space: StableHomSpace, psi: np.ndarray) -> bool:
    """Stable classes of ``psi^0..psi^n`` independent and ``psi^(n+1)`` stably 0."""
    p = space.source.p
    n = space.stable_dim - 1
    powers = [la.identity(space.source.dim)]
    for _ in range(n + 1):
        powers.append(la.matmul(powers[-1], psi, p))
    classes = space.classify(np.array(powers[:n + 1]))
    return la.rank(classes, p) == n + 1 and space.is_zero(powers[n + 1])


def stable_endo_structure(mod: Module, psi=None, seed: int = 0, cap: int = 500,
                          space: StableHomSpace | None = None) -> StableEndoStructure:
    """Find (or check) ``psi`` with stable End(M) = ``k[psi]/(psi^(n+1))``.

    With ``psi`` given only that endomorphism is checked.  Otherwise stable
    basis representatives with nilpotent stable class are tried, then
    ``cap`` seeded combinations of them.
    """
    p = mod.p
    space = space or stable_hom(mod, mod)
    sd = space.stable_dim
    if sd < 1:
        raise NotTruncatedPolynomial("stable End is zero (projective module)")
    n = sd - 1
    if psi is not None:
        mat = psi.mat if isinstance(psi, ModuleHom) else np.asarray(psi, dtype=np.int64)
        ok = truncated_polynomial_check(space, mat)
        return StableEndoStructure(mod, n, ModuleHom(mod, mod, mat), ok, sd)
    if n == 0:
        return StableEndoStructure(mod, 0, ModuleHom(mod, mod, la.zeros(mod.dim, mod.dim)), True, sd)
    reps = np.array([r.mat for r in space.reps])

    def nilpotent_class(mat):
        return space.is_zero(la.matpow(mat, n + 1, p))

    candidates = [r for r in reps if nilpotent_class(r)]
    for c in candidates:
        if truncated_polynomial_check(space, c):
            return StableEndoStructure(mod, n, ModuleHom(mod, mod, c), True, sd)
    rng = np.random.default_rng(seed)
    for _ in range(cap):
        coeffs = rng.integers(0, p, len(reps))
        c = la.tensordot(coeffs, reps, ([0], [0]), p)
        if nilpotent_class(c) and truncated_polynomial_check(space, c):
            return StableEndoStructure(mod, n, ModuleHom(mod, mod, c), True, sd)
    raise NotTruncatedPolynomial("no endomorphism generates stable End as k[psi]/(psi^%d)" % (n + 1))


# minimal epimorphisms

@dataclass
class MinimizedEpi:
    """A direct summand ``source`` of the original source, with the
    restricted epimorphism and the inclusion matrix into the original."""

    source: Module
    epi: ModuleHom
    inclusion: np.ndarray = field(repr=False)
    certified: bool
    splits: int

    def kernel(self) -> Module:
        ker = la.kernel_basis(self.epi.mat, self.source.p)
        return submodule(self.source, ker)[0]


def _is_nilpotent(mat: np.ndarray, p: int) -> bool:
    return not la.matpow(mat, mat.shape[0], p).any()


def minimize_epi(e: ModuleHom, seed: int = 0, cap: int = 500) -> MinimizedEpi:
    """Shrink the source of an epimorphism to a minimal direct summand.

    Endomorphisms ``phi`` of the source with ``phi * e = 0`` form a space
    ``Phi``.  While ``Phi`` has a non-nilpotent member, the source splits
    by the Fitting decomposition of that member and the kernel part of
    ``phi^dim`` carries the restricted epimorphism.  The result is
    certified minimal when the span of ``Phi`` is nilpotent.
    """
    x, p = e.source, e.source.p
    if la.rank(e.mat, p) != e.target.dim:
        raise NotSurjective("map is not onto its target")
    ker, kbasis = submodule(x, la.kernel_basis(e.mat, p))
    phis = la.matmul(hom_space(x, ker).basis, kbasis[None], p)
    cur, cur_e, incl = x, e.mat, la.identity(x.dim)
    splits = 0
    rng = np.random.default_rng(seed)
    while True:
        n = cur.dim
        if phis.shape[0] == 0 or n == 0 or nilpotent_span(phis, p):
            return MinimizedEpi(cur, ModuleHom(cur, e.target, cur_e), incl, True, splits)
        found = None
        for phi in phis:
            if not _is_nilpotent(phi, p):
                found = phi
                break
        for _ in range(cap if found is None else 0):
            phi = la.tensordot(rng.integers(0, p, phis.shape[0]), phis, ([0], [0]), p)
            if not _is_nilpotent(phi, p):
                found = phi
                break
        if found is None:
            return MinimizedEpi(cur, ModuleHom(cur, e.target, cur_e), incl, False, splits)
        power = la.matpow(found, n, p)
        image = la.row_space(power, p)
        sub, sbasis = submodule(cur, la.kernel_basis(power, p))
        frame = np.concatenate([sbasis, image], axis=0)
        proj = la.inverse(frame, p)[:, :sbasis.shape[0]]
        phis = la.matmul(la.matmul(sbasis[None], phis, p), proj[None], p)
        if phis.shape[0]:
            red = la.row_space(phis.reshape(phis.shape[0], -1), p)
            phis = red.reshape(-1, sub.dim, sub.dim)
        cur_e = la.matmul(sbasis, cur_e, p)
        incl = la.matmul(sbasis, incl, p)
        cur = sub
        splits += 1


# Grothendieck classes and stable isomorphism

@dataclass(frozen=True)
class GrothendieckClass:
    value: int
    modulus: int


def grothendieck_class(mod: Module) -> GrothendieckClass:
    d = mod.algebra.dim
    return GrothendieckClass(mod.dim % d, d)


def is_stably_isomorphic(m: Module, n: Module, seed: int = 0, **kw) -> IsoResult:
    same_algebra(m.algebra, n.algebra)
    return is_isomorphic(strip(m), strip(n), seed=seed, **kw)


def strip_count(mod: Module) -> int:
    return split_free(mod).count
