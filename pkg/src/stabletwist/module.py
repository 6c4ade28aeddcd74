"""Right modules over a local algebra, homomorphisms and isomorphism tests.

A module of dimension ``n`` stores one ``n x n`` matrix per algebra basis
element; vectors are rows and ``v * b_i = v @ action[i]``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import exactla as la
from .algebra import Algebra
from .errors import AlgebraMismatch, ModuleError


class Module:
    """A finite-dimensional right module over ``algebra``."""

    def __init__(self, algebra: Algebra, action, check: bool = True, name: str | None = None):
        self.algebra = algebra
        p, d = algebra.p, algebra.dim
        action = np.asarray(action, dtype=np.int64) % p
        if action.ndim != 3 or action.shape[0] != d or action.shape[1] != action.shape[2]:
            raise ModuleError("action must have shape (d, n, n)")
        self.action = action
        self.dim = action.shape[1]
        self.name = name
        if check:
            self.validate()

    def __repr__(self):
        label = " " + self.name if self.name else ""
        return "<Module%s dim=%d over %s>" % (label, self.dim, self.algebra.name)

    @property
    def p(self) -> int:
        return self.algebra.p

    def act(self, a) -> np.ndarray:
        """Matrix of the action of an algebra element."""
        a = self.algebra.element(a)
        return la.tensordot(a, self.action, ([0], [0]), self.p)

    def validate(self):
        """Check the unit and ``rho(b_i) rho(b_j) = sum_k c_ijk rho(b_k)``."""
        p, n = self.p, self.dim
        if not np.array_equal(self.action[0], la.identity(n)):
            raise ModuleError("unit does not act as the identity")
        table = self.algebra.table
        for i in range(self.algebra.dim):
            lhs = la.matmul(self.action[i][None, :, :], self.action, p)
            rhs = la.tensordot(table[i], self.action, ([1], [0]), p)
            bad = np.flatnonzero((lhs != rhs).reshape(lhs.shape[0], -1).any(axis=1))
            if bad.size:
                raise ModuleError("action fails on the product b%d*b%d" % (i, int(bad[0])))

    @classmethod
    def from_generators(cls, algebra: Algebra, gen_action, check: bool = True, name=None):
        """Build a module from the matrices of the algebra generators.

        ``gen_action`` maps generator basis indices to matrices (or is a list
        in the order of ``algebra.generators``).  The remaining basis
        elements act through monomial products.
        """
        if not isinstance(gen_action, dict):
            gen_action = dict(zip(algebra.generators, gen_action))
        p = algebra.p
        mats = {g: np.asarray(m, dtype=np.int64) % p for g, m in gen_action.items()}
        n = next(iter(mats.values())).shape[0] if mats else 0
        words, change = algebra.monomial_basis
        word_mats = []
        cache = {(): la.identity(n)}
        for w in words:
            if w not in cache:
                cache[w] = la.matmul(cache[w[:-1]], mats[w[-1]], p)
            word_mats.append(cache[w])
        word_mats = np.array(word_mats, dtype=np.int64).reshape(len(words), n, n)
        action = la.tensordot(change, word_mats, ([1], [0]), p)
        return cls(algebra, action, check=check, name=name)

    # structure

    @cached_property
    def radical_subspace(self) -> np.ndarray:
        """Echelon basis of ``M * rad A``."""
        if self.dim == 0 or self.algebra.dim == 1:
            return la.zeros(0, self.dim)
        return la.row_space(self.action[1:].reshape(-1, self.dim), self.p)

    @property
    def top_dim(self) -> int:
        return self.dim - self.radical_subspace.shape[0]

    @cached_property
    def presentation(self) -> "Presentation":
        return _presentation(self)

    @cached_property
    def hom_to_regular(self) -> "HomSpace":
        return hom_space(self, regular_module(self.algebra))

    def radical_layers(self) -> list[int]:
        """Dimensions of ``M rad^i / M rad^(i+1)``."""
        dims = []
        cur = la.identity(self.dim)
        right = self.action[1:]
        while cur.shape[0]:
            nxt = la.row_space(la.matmul(cur[None], right, self.p).reshape(-1, self.dim), self.p)
            dims.append(cur.shape[0] - nxt.shape[0])
            cur = nxt
        return dims

    def is_uniserial(self) -> bool:
        return all(layer == 1 for layer in self.radical_layers())

    def to_json(self) -> dict:
        return {"algebra": self.algebra.name, "dim": self.dim,
                "action": [m.tolist() for m in self.action]}


def module_from_json(doc: dict, algebra: Algebra) -> Module:
    action = doc["action"]
    if len(action) == algebra.dim:
        return Module(algebra, np.array(action, dtype=np.int64).reshape(algebra.dim, doc["dim"], doc["dim"]))
    if len(action) == len(algebra.generators):
        return Module.from_generators(algebra, [np.array(m, dtype=np.int64) for m in action])
    raise ModuleError("expected %d or %d action matrices" % (algebra.dim, len(algebra.generators)))


def same_algebra(a: Algebra, b: Algebra):
    if not a.same_as(b):
        raise AlgebraMismatch("%s vs %s" % (a.name, b.name))


# constructors

def simple_module(alg: Algebra) -> Module:
    """The one-dimensional module k = A / rad A."""
    action = np.zeros((alg.dim, 1, 1), dtype=np.int64)
    action[0, 0, 0] = 1
    return Module(alg, action, check=False, name="k")


def regular_module(alg: Algebra) -> Module:
    return Module(alg, alg.table.transpose(1, 0, 2), check=False, name="A")


def free_module(alg: Algebra, g: int) -> Module:
    if g == 1:
        return regular_module(alg)
    reg = alg.table.transpose(1, 0, 2)
    action = np.array([np.kron(la.identity(g), reg[b]) for b in range(alg.dim)], dtype=np.int64)
    action = action.reshape(alg.dim, g * alg.dim, g * alg.dim)
    return Module(alg, action, check=False, name="A^%d" % g)


def zero_module(alg: Algebra) -> Module:
    return Module(alg, np.zeros((alg.dim, 0, 0), dtype=np.int64), check=False, name="0")


def direct_sum(*mods: Module) -> Module:
    alg = mods[0].algebra
    for m in mods[1:]:
        same_algebra(alg, m.algebra)
    n = sum(m.dim for m in mods)
    action = np.zeros((alg.dim, n, n), dtype=np.int64)
    off = 0
    for m in mods:
        action[:, off:off + m.dim, off:off + m.dim] = m.action
        off += m.dim
    return Module(alg, action, check=False)


def submodule(mod: Module, vectors) -> tuple[Module, np.ndarray]:
    """The submodule spanned by invariant ``vectors``.

    Returns the module and its echelon basis (the inclusion matrix); the
    caller guarantees the span is invariant.
    """
    p = mod.p
    vectors = np.asarray(vectors, dtype=np.int64).reshape(-1, mod.dim)
    basis, piv = la.rref(vectors, p) if vectors.shape[0] else (la.zeros(0, mod.dim), [])
    imgs = la.matmul(basis[None], mod.action, p)
    action = imgs[:, :, piv]
    return Module(mod.algebra, action, check=False), basis


def quotient(mod: Module, vectors) -> tuple[Module, np.ndarray]:
    """The quotient by the submodule spanned by invariant ``vectors``.

    Returns the module and the projection matrix (dim M x dim quotient).
    The quotient basis is the images of the standard vectors off the
    echelon pivots.
    """
    p, n = mod.p, mod.dim
    vectors = np.asarray(vectors, dtype=np.int64).reshape(-1, n)
    basis, piv = la.rref(vectors, p) if vectors.shape[0] else (la.zeros(0, n), [])
    keep = [c for c in range(n) if c not in set(piv)]
    reduce = la.identity(n)
    if piv:
        reduce = (reduce - la.matmul(reduce[:, piv], basis, p)) % p
    proj = reduce[:, keep]
    action = la.matmul(mod.action[:, keep, :], proj, p)
    return Module(mod.algebra, action, check=False), proj


def dual(mod: Module) -> Module:
    """Vector-space dual, a module over the opposite algebra."""
    return Module(mod.algebra.opposite(), mod.action.transpose(0, 2, 1), check=False,
                  name="D(%s)" % mod.name if mod.name else None)


def socle(mod: Module) -> np.ndarray:
    """Echelon basis of ``{v : v * rad A = 0}``."""
    if mod.dim == 0:
        return la.zeros(0, 0)
    gens = mod.algebra.generators
    if not gens:
        return la.identity(mod.dim)
    stacked = np.concatenate([mod.action[g] for g in gens], axis=1)
    return la.row_space(la.kernel_basis(stacked, mod.p), mod.p)


# homomorphisms

@dataclass
class ModuleHom:
    source: Module
    target: Module
    mat: np.ndarray

    def __post_init__(self):
        self.mat = np.asarray(self.mat, dtype=np.int64).reshape(self.source.dim, self.target.dim)

    def is_homomorphism(self) -> bool:
        p = self.source.p
        for g in self.source.algebra.generators:
            lhs = la.matmul(self.source.action[g], self.mat, p)
            rhs = la.matmul(self.mat, self.target.action[g], p)
            if not np.array_equal(lhs, rhs):
                return False
        return True

    def then(self, other: "ModuleHom") -> "ModuleHom":
        """Composite: first ``self``, then ``other``."""
        return ModuleHom(self.source, other.target, la.matmul(self.mat, other.mat, self.source.p))

    def rank(self) -> int:
        return la.rank(self.mat, self.source.p)


@dataclass
class HomSpace:
    """Basis of Hom(source, target) in reduced echelon form.

    ``basis[s]`` is a ``dim source x dim target`` matrix; flattened, the
    basis is in echelon form with pivot positions ``pivots`` so the
    coordinates of any homomorphism are read off directly.
    """

    source: Module
    target: Module
    basis: np.ndarray = field(repr=False)
    pivots: list = field(repr=False, default_factory=list)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def coords(self, mat) -> np.ndarray:
        flat = np.asarray(mat, dtype=np.int64).reshape(*np.shape(mat)[:-2], -1)
        return flat[..., self.pivots] % self.source.p

    def combine(self, coeffs) -> np.ndarray:
        coeffs = np.asarray(coeffs, dtype=np.int64)
        if self.dim == 0:
            return la.zeros(self.source.dim, self.target.dim)
        return la.tensordot(coeffs, self.basis, ([0], [0]), self.source.p)

    def maps(self) -> list[ModuleHom]:
        return [ModuleHom(self.source, self.target, b) for b in self.basis]


def _echelon_hom(source, target, mats) -> HomSpace:
    p = source.p
    h = mats.shape[0]
    flat = mats.reshape(h, -1)
    if h == 0 or flat.shape[1] == 0:
        return HomSpace(source, target, la.zeros(0, 1).reshape(0, source.dim, target.dim), [])
    red, piv = la.rref(flat, p)
    return HomSpace(source, target, red.reshape(-1, source.dim, target.dim), list(piv))


@dataclass
class Presentation:
    """Projective presentation ``A^g -> M`` with kernel generators.

    ``tops`` are the top generator indices (standard basis vectors of M),
    ``epi`` has rows ``u_i * b_k`` at position ``i*d + k``, ``section`` is a
    right inverse of ``epi`` and ``relations`` generate its kernel.
    """

    g: int
    tops: list
    epi: np.ndarray = field(repr=False)
    section: np.ndarray = field(repr=False)
    kernel: np.ndarray = field(repr=False)
    kernel_pivots: list = field(repr=False)
    relations: np.ndarray = field(repr=False)


def _free_right_action(alg: Algebra, vecs: np.ndarray, g: int, elems) -> np.ndarray:
    """``w * b`` for rows ``w`` of ``A^g`` and each basis index ``b`` in ``elems``."""
    d, p = alg.dim, alg.p
    blocks = vecs.reshape(-1, g, d)
    right = alg.table[:, elems, :]  # i, b, k
    out = la.tensordot(blocks, right, ([2], [0]), p)  # r, g, b, k
    return out.transpose(0, 2, 1, 3).reshape(vecs.shape[0], len(elems), g * d)


def _presentation(mod: Module) -> Presentation:
    alg, p, n, d = mod.algebra, mod.p, mod.dim, mod.algebra.dim
    rad = mod.radical_subspace
    piv = set(la.rref(rad, p)[1]) if rad.shape[0] else set()
    tops = [c for c in range(n) if c not in piv]
    g = len(tops)
    epi = mod.action[:, tops, :].transpose(1, 0, 2).reshape(g * d, n)
    if g == 0:
        empty = la.zeros(0, 0)
        return Presentation(0, [], epi, la.zeros(n, 0), empty, [], empty)
    section = la.solve(epi, la.identity(n), p)
    kernel = la.kernel_basis(epi, p)
    if kernel.shape[0]:
        kernel, kpiv = la.rref(kernel, p)
        krad = _free_right_action(alg, kernel, g, list(range(1, d))).reshape(-1, g * d)
        krad = la.row_space(krad, p)
        rel_idx = la.complement_rows(krad, kernel, p)
        relations = kernel[rel_idx]
    else:
        kernel, kpiv, relations = la.zeros(0, g * d), [], la.zeros(0, g * d)
    return Presentation(g, tops, epi, section, kernel, list(kpiv), relations)


def hom_space(m: Module, n: Module) -> HomSpace:
    """All module homomorphisms ``m -> n``.

    A homomorphism is fixed by the images ``n_i`` of the top generators of
    ``m``; they must kill every relation ``(w_1..w_g)``, i.e.
    ``sum_i n_i * w_i = 0`` in ``n``.
    """
    same_algebra(m.algebra, n.algebra)
    p, d = m.p, m.algebra.dim
    pres = m.presentation
    g, nn = pres.g, n.dim
    if g == 0 or nn == 0:
        return HomSpace(m, n, np.zeros((0, m.dim, nn), dtype=np.int64), [])
    rels = pres.relations.reshape(-1, g, d)
    if rels.shape[0] == 0:
        z = la.identity(g * nn)
    else:
        t = la.tensordot(rels, n.action, ([2], [0]), p)  # r, i, a, b
        system = t.transpose(1, 2, 0, 3).reshape(g * nn, rels.shape[0] * nn)
        z = la.kernel_basis(system, p)
    h = z.shape[0]
    phi = la.tensordot(z.reshape(h, g, nn), n.action, ([2], [1]), p)  # h, i, k, b
    phi = phi.reshape(h, g * d, nn)
    maps = la.matmul(pres.section[None], phi, p)
    return _echelon_hom(m, n, maps)


def hom_space_naive(m: Module, n: Module) -> HomSpace:
    """Hom by the full intertwining system on generators (test oracle)."""
    same_algebra(m.algebra, n.algebra)
    p, a, b = m.p, m.dim, n.dim
    if a == 0 or b == 0:
        return HomSpace(m, n, np.zeros((0, a, b), dtype=np.int64), [])
    blocks = []
    for g in m.algebra.generators:
        left = np.kron(m.action[g].T, la.identity(b))
        right = np.kron(la.identity(a), n.action[g])
        blocks.append((left - right) % p)
    system = np.concatenate(blocks, axis=1) if blocks else la.zeros(a * b, 0)
    z = la.kernel_basis(system, p)
    return _echelon_hom(m, n, z.reshape(-1, a, b))


def end_space(m: Module) -> HomSpace:
    return hom_space(m, m)


# covers and envelopes

def projective_cover(mod: Module) -> tuple[Module, ModuleHom]:
    """Minimal free cover ``A^g -> M`` with ``g = dim top(M)``."""
    pres = mod.presentation
    cover = free_module(mod.algebra, pres.g) if pres.g else zero_module(mod.algebra)
    return cover, ModuleHom(cover, mod, pres.epi)


def injective_envelope(mod: Module) -> tuple[Module, ModuleHom]:
    """Embedding into an injective (= projective) module, dual to the cover."""
    cover, epi = projective_cover(dual(mod))
    inj = dual(cover)
    return inj, ModuleHom(mod, inj, epi.mat.T.copy())


# projective summands

@dataclass
class StripResult:
    """``M = core (+) A^count`` with inclusion ``core -> M`` and retraction."""

    core: Module
    count: int
    inclusion: np.ndarray = field(repr=False)
    retraction: np.ndarray = field(repr=False)


def split_free(mod: Module) -> StripResult:
    """Split off free summands until the pairing ``eps(f(u))`` vanishes.

    ``f`` ranges over Hom(M, A) and ``eps`` reads the unit coefficient.  A
    pair with ``eps(f(u)) != 0`` means ``u A`` is free and ``ker f`` is a
    complement; maps out of a summand are restrictions, so Hom(M, A) is
    computed once.
    """
    alg, p, n = mod.algebra, mod.p, mod.dim
    if n == 0:
        return StripResult(mod, 0, la.zeros(0, 0), la.zeros(0, 0))
    maps = mod.hom_to_regular.basis
    core = la.identity(n)
    tops = []
    while maps.shape[0] and core.shape[0]:
        hit = np.argwhere(maps[:, :, 0] != 0)
        if hit.size == 0:
            break
        t, i = (int(v) for v in hit[0])
        tops.append(core[i].copy())
        keep = la.kernel_basis(maps[t], p)
        core = la.matmul(keep, core, p)
        maps = la.matmul(keep[None], maps, p)
    if not tops:
        return StripResult(mod, 0, la.identity(n), la.identity(n))
    sub, incl = submodule(mod, core)
    free_span = la.tensordot(np.array(tops), mod.action, ([1], [1]), p).reshape(-1, n)
    frame = np.concatenate([incl, free_span], axis=0)
    retraction = la.inverse(frame, p)[:, :incl.shape[0]]
    return StripResult(sub, len(tops), incl, retraction)


def strip_projectives(mod: Module) -> tuple[Module, int]:
    res = split_free(mod)
    return res.core, res.count


def strip(mod: Module) -> Module:
    return split_free(mod).core


def free_pairing_vanishes(mod: Module) -> bool:
    """True when ``eps(f(u)) = 0`` for all u and all f: M -> A."""
    maps = mod.hom_to_regular.basis
    return not maps[:, :, 0].any() if maps.size else True


# isomorphism

@dataclass
class IsoResult:
    verdict: str  # "yes" | "no" | "unknown"
    reason: str
    witness: ModuleHom | None = None

    def __bool__(self):
        return self.verdict == "yes"


def invariants(mod: Module) -> dict:
    """Cheap isomorphism invariants."""
    p = mod.p
    alg = mod.algebra
    inv = {"dim": mod.dim, "top": mod.top_dim, "socle": socle(mod).shape[0]}
    elems = {alg.basis[g]: alg.basis_vector(g) for g in alg.generators}
    elems.update(alg.named)
    for name, vec in sorted(elems.items()):
        if alg.in_radical(vec):
            inv["jordan:" + name] = tuple(la.rank_sequence(mod.act(vec), p))
    inv["layers"] = tuple(mod.radical_layers())
    return inv


def _top_map(m: Module, n: Module, mats: np.ndarray) -> np.ndarray:
    """Induced maps ``top(m) -> top(n)`` for a stack of homomorphisms."""
    p = m.p
    tm, tn = m.presentation.tops, n.presentation.tops
    imgs = mats[:, tm, :]
    rad = n.radical_subspace
    if rad.shape[0]:
        red, piv = la.rref(rad, p)
        imgs = (imgs - la.matmul(imgs[:, :, piv], red, p)) % p
    return imgs[:, :, tn]


def is_isomorphic(m: Module, n: Module, seed: int = 0, trials: int = 2000,
                  exhaust_limit: int = 4096) -> IsoResult:
    """Decide ``m ~ n`` with a witness or a certificate where possible.

    Invariants first; then a search for an element of Hom(m, n) whose
    induced map on tops is invertible (which forces an isomorphism when
    dimensions agree).  The search tries basis elements, then seeded
    random combinations, and enumerates Hom(m, n) completely when it has
    at most ``exhaust_limit`` elements, which makes a "no" certified.
    """
    same_algebra(m.algebra, n.algebra)
    p = m.p
    if m is n:
        return IsoResult("yes", "same object", ModuleHom(m, n, la.identity(m.dim)))
    if m.dim != n.dim:
        return IsoResult("no", "dimension %d != %d" % (m.dim, n.dim))
    if m.dim == 0:
        return IsoResult("yes", "both zero", ModuleHom(m, n, la.zeros(0, 0)))
    im, inn = invariants(m), invariants(n)
    for key in im:
        if im[key] != inn.get(key):
            return IsoResult("no", "invariant %s differs: %s vs %s" % (key, im[key], inn.get(key)))
    hs = hom_space(m, n)
    h = hs.dim
    if h == 0:
        return IsoResult("no", "Hom(M, N) = 0")
    tops = _top_map(m, n, hs.basis)
    g = tops.shape[1]

    def witness(coeffs):
        mat = hs.combine(coeffs)
        if la.rank(mat, p) == m.dim:
            return IsoResult("yes", "invertible intertwiner found", ModuleHom(m, n, mat))
        return None

    def invertible_top(coeffs):
        return la.rank(la.tensordot(coeffs, tops, ([0], [0]), p), p) == g

    for s in range(h):
        c = np.zeros(h, dtype=np.int64)
        c[s] = 1
        if invertible_top(c):
            found = witness(c)
            if found:
                return found
    rng = np.random.default_rng(seed)
    exhaustive = p ** h <= exhaust_limit
    if not exhaustive:
        for _ in range(trials):
            c = rng.integers(0, p, h)
            if invertible_top(c):
                found = witness(c)
                if found:
                    return found
    for other, label in ((hom_space(n, m), "Hom(N, M)"), (end_space(m), "End(M)"),
                         (end_space(n), "End(N)")):
        if other.dim != h:
            return IsoResult("no", "dim Hom(M, N) = %d but dim %s = %d" % (h, label, other.dim))
    back = hom_space(n, m)
    composites = la.matmul(hs.basis[:, None], back.basis[None], p).reshape(-1, m.dim, m.dim)
    if nilpotent_span(composites, p):
        return IsoResult("no", "every composite M -> N -> M is nilpotent")
    if exhaustive:
        for c in itertools.product(range(p), repeat=h):
            c = np.array(c, dtype=np.int64)
            if c.any() and invertible_top(c):
                found = witness(c)
                if found:
                    return found
        return IsoResult("no", "exhausted all %d elements of Hom(M, N)" % p ** h)
    return IsoResult("unknown", "no invertible map among %d sampled elements" % trials)


def nilpotent_span(mats: np.ndarray, p: int) -> bool:
    """True when every element of the span of ``mats`` is nilpotent.

    Iterates ``V <- span(V * mats)`` from the whole space; the span
    consists of nilpotent matrices exactly when the chain reaches zero.
    """
    dim = mats.shape[-1]
    if mats.shape[0]:
        mats = la.row_space(mats.reshape(mats.shape[0], -1), p).reshape(-1, dim, dim)
    cur = la.identity(dim)
    while cur.shape[0]:
        if mats.shape[0] == 0:
            return True
        nxt = la.row_space(la.matmul(cur[None], mats, p).reshape(-1, dim), p)
        if nxt.shape[0] == cur.shape[0]:
            return False
        cur = nxt
    return True


def conjugate(mod: Module, change: np.ndarray) -> Module:
    """The same module in the basis given by the rows of ``change``."""
    p = mod.p
    inv = la.inverse(change, p)
    action = la.matmul(la.matmul(change[None], mod.action, p), inv[None], p)
    return Module(mod.algebra, action, check=False)
