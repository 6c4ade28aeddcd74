"""Finite-dimensional local algebras given by structure constants.

Basis element 0 is the unit and basis elements ``1..d-1`` span the
radical.  Elements are coefficient vectors of length ``d``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import exactla as la
from .errors import (FreenessFailed, NoUnit, NotAssociative, NotLocal,
                     NotNilpotentElement, NotSymmetric)


class Algebra:
    """Structure-constant algebra over GF(p).

    ``table[i, j, k]`` is the coefficient of ``b_k`` in ``b_i * b_j``.
    Construct through :func:`validate_algebra` to get a certified instance.
    """

    def __init__(self, p, table, basis=None, generators=None, named=None, name=None):
        self.field = la.FieldSpec(p)
        self.p = int(p)
        self.table = np.asarray(table, dtype=np.int64) % self.p
        d = self.table.shape[0]
        if self.table.shape != (d, d, d):
            raise ValueError("structure table must have shape (d, d, d)")
        self.dim = d
        self.basis = list(basis) if basis is not None else ["b%d" % i for i in range(d)]
        self.generators = list(generators) if generators is not None else list(range(1, d))
        self.named = {k: np.asarray(v, dtype=np.int64) % self.p for k, v in (named or {}).items()}
        self.name = name or "algebra(d=%d,p=%d)" % (d, self.p)
        self._opposite = None

    def __repr__(self):
        return "<Algebra %s>" % self.name

    def same_as(self, other) -> bool:
        return self is other or (isinstance(other, Algebra) and self.p == other.p
                                 and np.array_equal(self.table, other.table))

    # elements

    def unit(self) -> np.ndarray:
        return self.basis_vector(0)

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    def element(self, spec) -> np.ndarray:
        """A named element, a basis name, or a coefficient vector."""
        if isinstance(spec, str):
            if spec in self.named:
                return self.named[spec].copy()
            if spec in self.basis:
                return self.basis_vector(self.basis.index(spec))
            raise KeyError("unknown element %r" % spec)
        return np.asarray(spec, dtype=np.int64) % self.p

    def mul(self, a, b) -> np.ndarray:
        a = self.element(a)
        b = self.element(b)
        return la.matmul(a.reshape(1, -1), self.right_matrix(b), self.p)[0]

    def power(self, a, e: int) -> np.ndarray:
        a = self.element(a)
        out = self.unit()
        for _ in range(e):
            out = self.mul(out, a)
        return out

    def right_matrix(self, a) -> np.ndarray:
        """Matrix of ``v -> v*a`` (row ``i`` is ``b_i * a``)."""
        a = self.element(a)
        return la.tensordot(self.table, a, ([1], [0]), self.p)

    def left_matrix(self, a) -> np.ndarray:
        """Matrix of ``v -> a*v`` (row ``i`` is ``a * b_i``)."""
        a = self.element(a)
        return la.tensordot(a, self.table, ([0], [0]), self.p)

    def commutes(self, a, b) -> bool:
        return np.array_equal(self.mul(a, b), self.mul(b, a))

    def in_radical(self, a) -> bool:
        return int(self.element(a)[0]) == 0

    def nilpotency_index(self, a) -> int:
        """Minimal ``m`` with ``a^m = 0``; raises if ``a`` is not nilpotent."""
        a = self.element(a)
        cur = self.unit()
        for m in range(1, self.dim + 2):
            cur = self.mul(cur, a)
            if not cur.any():
                return m
        raise NotNilpotentElement("element is not nilpotent")

    # structure

    @cached_property
    def monomial_basis(self):
        """Words in the generators whose products form a basis of A.

        Returns ``(words, change)`` with ``b_i = sum_w change[i, w] * w``.
        """
        words = [()]
        vecs = [self.unit()]
        frontier = [((), self.unit())]
        while frontier and len(words) < self.dim:
            nxt = []
            for word, vec in frontier:
                for g in self.generators:
                    cand = self.mul(vec, self.basis_vector(g))
                    trial = np.array(vecs + [cand])
                    if la.rank(trial, self.p) > len(vecs):
                        words.append(word + (g,))
                        vecs.append(cand)
                        nxt.append((word + (g,), cand))
            frontier = nxt
        vecs = np.array(vecs, dtype=np.int64)
        if len(words) < self.dim:
            raise NotLocal("generators %s do not generate the algebra" % self.generators)
        change = la.solve(vecs, la.identity(self.dim), self.p)
        return words, change

    def radical_powers(self) -> list[np.ndarray]:
        """Echelon bases of rad, rad^2, ... ending with the zero space."""
        d, p = self.dim, self.p
        rad = la.identity(d)[1:]
        layers = [rad]
        right = [self.right_matrix(self.basis_vector(j)) for j in range(1, d)]
        cur = rad
        for _ in range(d + 1):
            if cur.shape[0] == 0:
                return layers
            prods = [la.matmul(cur, r, p) for r in right]
            cur = la.row_space(np.concatenate(prods, axis=0), p) if prods else la.zeros(0, d)
            layers.append(cur)
        raise NotLocal("radical span is not nilpotent")

    @cached_property
    def loewy_length(self) -> int:
        """Minimal ``L`` with ``rad^L = 0``."""
        return len(self.radical_powers()) if self.dim > 1 else 1

    def opposite(self) -> "Algebra":
        """The opposite algebra; ``a.opposite().opposite() is a``."""
        if self._opposite is None:
            op = Algebra(self.p, self.table.transpose(1, 0, 2), self.basis, self.generators,
                         self.named, name=self.name + "^op")
            op._opposite = self
            self._opposite = op
        return self._opposite

    # serialisation

    def to_json(self) -> dict:
        triples = []
        for i in range(self.dim):
            for j in range(self.dim):
                nz = np.flatnonzero(self.table[i, j])
                if nz.size:
                    triples.append([i, j, [[int(k), int(self.table[i, j, k])] for k in nz]])
        return {"p": self.p, "dim": self.dim, "basis": self.basis, "unit": 0,
                "generators": self.generators, "table": triples,
                "named": {k: v.tolist() for k, v in self.named.items()}}


def table_from_json(doc: dict) -> np.ndarray:
    d = int(doc["dim"])
    table = np.zeros((d, d, d), dtype=np.int64)
    for i, j, terms in doc["table"]:
        for k, c in terms:
            table[i, j, k] = c
    return table


def algebra_from_json(doc: dict, check: bool = True) -> Algebra:
    if int(doc.get("unit", 0)) != 0:
        raise NoUnit("unit must be basis element 0")
    table = table_from_json(doc)
    build = validate_algebra if check else Algebra
    return build(int(doc["p"]), table, basis=doc.get("basis"), generators=doc.get("generators"),
                 named=doc.get("named"), name=doc.get("name"))


def validate_algebra(p, table, basis=None, generators=None, named=None, name=None) -> Algebra:
    """Certify the standing hypotheses and return the algebra.

    Checks that ``b_0`` is a two-sided unit, associativity on all triples,
    that ``span(b_1..b_{d-1})`` is a nilpotent two-sided ideal, and that the
    generator list generates.  Warns when the algebra is semisimple.
    """
    alg = Algebra(p, table, basis, generators, named, name)
    d, t, p = alg.dim, alg.table, alg.p
    if d < 1:
        raise NoUnit("zero-dimensional algebra")
    eye = la.identity(d)
    if not (np.array_equal(t[0], eye) and np.array_equal(t[:, 0, :], eye)):
        raise NoUnit("b_0 is not a two-sided unit")
    # (b_i b_j) b_k versus b_i (b_j b_k)
    left = la.tensordot(t, t, ([2], [0]), p)                      # i j k l
    right = la.tensordot(t, t, ([1], [2]), p).transpose(0, 2, 3, 1)  # i j k l
    bad = np.argwhere((left != right).any(axis=3))
    if bad.size:
        raise NotAssociative(tuple(int(v) for v in bad[0]))
    if d > 1:
        hits = np.argwhere(t[1:, 1:, 0] != 0)
        if hits.size:
            i, j = (int(v) + 1 for v in hits[0])
            raise NotLocal("b%d*b%d has a unit component" % (i, j), witness=(i, j))
        alg.radical_powers()
    for g in alg.generators:
        if not 1 <= g < d:
            raise NotLocal("generator index %d is not a radical basis element" % g)
    if d == 1:
        warnings.warn("algebra is the ground field (semisimple)", stacklevel=2)
    elif alg.loewy_length <= 1:
        warnings.warn("radical is zero (semisimple algebra)", stacklevel=2)
    if d > 1:
        alg.monomial_basis  # raises if the generators do not generate
    for key, vec in alg.named.items():
        if vec.shape != (d,):
            raise ValueError("named element %r has wrong length" % key)
    return alg


@dataclass
class SymmetricForm:
    """A symmetrising functional: lambda(ab) = lambda(ba), Gram invertible."""

    functional: np.ndarray
    gram: np.ndarray = field(repr=False)


def gram_matrix(alg: Algebra, lam) -> np.ndarray:
    return la.tensordot(alg.table, np.asarray(lam, dtype=np.int64), ([2], [0]), alg.p)


def find_symmetric_form(alg: Algebra, seed: int = 0, cap: int = 1000) -> SymmetricForm:
    """Search for a nondegenerate symmetric associative form.

    Solves lambda(b_i b_j - b_j b_i) = 0, then tries each basis vector of the
    solution space followed by ``cap`` seeded random combinations.  Failure
    only means no form was found (NotSymmetric), not a proof of absence.
    """
    d, p = alg.dim, alg.p
    comm = (alg.table - alg.table.transpose(1, 0, 2)).reshape(d * d, d) % p
    sols = la.kernel_basis(comm.T, p)
    if sols.shape[0] == 0:
        raise NotSymmetric("no nonzero trace functional")
    rng = np.random.default_rng(seed)
    cands = list(sols)
    cands.extend(la.matmul(rng.integers(0, p, (1, sols.shape[0])), sols, p)[0] for _ in range(cap))
    for lam in cands:
        gram = gram_matrix(alg, lam)
        if la.rank(gram, p) == d:
            return SymmetricForm(np.asarray(lam, dtype=np.int64), gram)
    raise NotSymmetric("no nondegenerate symmetric form found in %d candidates" % len(cands))


@dataclass
class SubalgebraData:
    """The subalgebra R = k[x] and the two-sided freeness of A over it.

    ``left_free_basis`` holds ``a_j`` with ``{x^i a_j}`` a basis of A.
    ``right_coeff[b][j]`` is an ``(r, m)`` array ``c`` with
    ``a_j * b_b = sum_{l,i} c[l, i] x^i a_l``; ``left_y_coeff`` stores the
    same expansion of ``y * a_j`` when requested.
    """

    x: np.ndarray
    m: int
    r: int
    left_free_basis: np.ndarray
    right_free_basis: np.ndarray
    right_coeff: np.ndarray = field(repr=False)
    left_ranks: list = field(default_factory=list)
    right_ranks: list = field(default_factory=list)
    x_chain_basis: np.ndarray = field(repr=False, default=None)

    def expand(self, vec: np.ndarray, p: int) -> np.ndarray:
        """Coefficients of ``vec`` in the basis ``{x^i a_l}`` as an (r, m) array."""
        coords = la.solve(self.x_chain_basis, vec, p)
        return coords.reshape(self.r, self.m)


def analyze_subalgebra(alg: Algebra, x) -> SubalgebraData:
    """Certify that A is free on both sides over R = k[x]."""
    p, d = alg.p, alg.dim
    x = alg.element(x)
    if not x.any():
        raise NotNilpotentElement("x is zero")
    if not alg.in_radical(x):
        raise NotNilpotentElement("x is not in the radical")
    m = alg.nilpotency_index(x)
    if m < 2:
        raise NotNilpotentElement("x^1 = 0")
    lx = alg.left_matrix(x)
    rx = alg.right_matrix(x)
    left_ranks = la.rank_sequence(lx, p, stop=m)
    right_ranks = la.rank_sequence(rx, p, stop=m)
    for side, ranks in (("left", left_ranks), ("right", right_ranks)):
        for i in range(m + 1):
            expected = d * (m - i) // m if d % m == 0 else -1
            got = ranks[i] if i < len(ranks) else 0
            if got != expected:
                raise FreenessFailed(side, i, got, expected)
    r = d // m
    left = la.jordan_chains(lx, p, expected_index=m)
    right = la.jordan_chains(rx, p, expected_index=m)
    # chain basis ordered (l, i) -> x^i a_l
    chain = la.zeros(d, d)
    powers = [la.identity(d)]
    for _ in range(1, m):
        powers.append(la.matmul(powers[-1], lx, p))
    for l, top in enumerate(left.chain_tops):
        for i in range(m):
            chain[l * m + i] = la.matmul(top.reshape(1, -1), powers[i], p)[0]
    inv = la.inverse(chain, p)
    right_coeff = np.empty((d, r, r, m), dtype=np.int64)
    for b in range(d):
        prods = la.matmul(left.chain_tops, alg.right_matrix(alg.basis_vector(b)), p)
        right_coeff[b] = la.matmul(prods, inv, p).reshape(r, r, m)
    return SubalgebraData(x, m, r, left.chain_tops, right.chain_tops, right_coeff,
                          left_ranks, right_ranks, chain)
