"""Example algebras and string modules.

Dihedral and semidihedral algebras are spanned by alternating words in
``x`` and ``y`` of length at most ``2q``; the two alternating words of
length ``2q`` are identified, giving dimension ``4q``.
"""
from __future__ import annotations

import itertools

import numpy as np

from . import exactla as la
from .algebra import Algebra, validate_algebra
from .errors import BadParameter, InvalidWord, ModuleError, RewriteDiverged
from .module import Module


def _alternating_words(q: int) -> list[str]:
    words = [""]
    for length in range(1, 2 * q):
        for first in "xy":
            other = "y" if first == "x" else "x"
            words.append("".join(first if i % 2 == 0 else other for i in range(length)))
    words.append("yx" * q)
    return words


def _word_name(w: str) -> str:
    return w if w else "1"


def _socle_form(w: str, q: int) -> str:
    return "yx" * q if w == "xy" * q else w


def _table_from_rewriter(words: list[str], p: int, normal) -> np.ndarray:
    index = {w: i for i, w in enumerate(words)}
    d = len(words)
    table = np.zeros((d, d, d), dtype=np.int64)
    for i, u in enumerate(words):
        for j, v in enumerate(words):
            for w, c in normal(u + v).items():
                table[i, j, index[w]] = (table[i, j, index[w]] + c) % p
    return table


def _check_params(q: int, p: int):
    if q < 2:
        raise BadParameter("q must be at least 2")
    la.FieldSpec(p)


def dihedral_algebra(q: int, p: int) -> Algebra:
    """k<x,y>/(x^2, y^2, (xy)^q - (yx)^q) over GF(p)."""
    _check_params(q, p)
    words = _alternating_words(q)

    def normal(w):
        if "xx" in w or "yy" in w or len(w) > 2 * q:
            return {}
        return {_socle_form(w, q): 1}

    table = _table_from_rewriter(words, p, normal)
    basis = [_word_name(w) for w in words]
    return validate_algebra(p, table, basis=basis, generators=[1, 2],
                            named={"x": np.eye(len(words), dtype=np.int64)[1],
                                   "y": np.eye(len(words), dtype=np.int64)[2]},
                            name="dihedral:q=%d:p=%d" % (q, p))


def semidihedral_algebra(q: int, delta: int, p: int) -> Algebra:
    """k<x,y>/(x^2, y^2 - (xy)^(q-1) x - delta (yx)^q, (xy)^q - (yx)^q)."""
    _check_params(q, p)
    delta %= p
    words = _alternating_words(q)
    cap = 8 * q
    yy_image = {"xy" * (q - 1) + "x": 1}
    if delta:
        yy_image["yx" * q] = delta

    def normal(word):
        out: dict[str, int] = {}
        stack = [(word, 1)]
        steps = 0
        while stack:
            w, c = stack.pop()
            # every word of length > 2q lies in rad^(2q+1) = 0
            if len(w) > 2 * q or "xx" in w:
                continue
            pos = w.find("yy")
            if pos < 0:
                w = _socle_form(w, q)
                out[w] = (out.get(w, 0) + c) % p
                continue
            steps += 1
            if steps > cap:
                raise RewriteDiverged("rewriting %r exceeded %d steps" % (word, cap))
            for rep, rc in yy_image.items():
                stack.append((w[:pos] + rep + w[pos + 2:], c * rc % p))
        return {w: c for w, c in out.items() if c}

    table = _table_from_rewriter(words, p, normal)
    basis = [_word_name(w) for w in words]
    eye = np.eye(len(words), dtype=np.int64)
    return validate_algebra(p, table, basis=basis, generators=[1, 2],
                            named={"x": eye[1], "y": eye[2]},
                            name="semidihedral:q=%d:p=%d:delta=%d" % (q, p, delta))


def klein_commutative_algebra(p: int) -> Algebra:
    """k[x,y]/(x^2, y^2) with basis 1, x, y, xy."""
    la.FieldSpec(p)
    table = np.zeros((4, 4, 4), dtype=np.int64)
    # monomials as exponent pairs
    mons = [(0, 0), (1, 0), (0, 1), (1, 1)]
    for i, (a, b) in enumerate(mons):
        for j, (c, e) in enumerate(mons):
            if a + c <= 1 and b + e <= 1:
                table[i, j, mons.index((a + c, b + e))] = 1
    eye = np.eye(4, dtype=np.int64)
    return validate_algebra(p, table, basis=["1", "x", "y", "xy"], generators=[1, 2],
                            named={"x": eye[1], "y": eye[2]}, name="klein:p=%d" % p)


# extraspecial group of order p^3 and exponent p

def heisenberg_mul(u, v, p):
    a, b, c = u
    a2, b2, c2 = v
    return ((a + a2) % p, (b + b2) % p, (c + c2 + a * b2) % p)


def heisenberg_inv(u, p):
    a, b, c = u
    return ((-a) % p, (-b) % p, (-c + a * b) % p)


def heisenberg_power(u, e, p):
    out = (0, 0, 0)
    for _ in range(e):
        out = heisenberg_mul(out, u, p)
    return out


def check_heisenberg(p: int) -> dict:
    """Exhaustively certify the group axioms used by the group algebra."""
    elems = list(itertools.product(range(p), repeat=3))
    e = (0, 0, 0)
    assoc = all(heisenberg_mul(heisenberg_mul(u, v, p), w, p) == heisenberg_mul(u, heisenberg_mul(v, w, p), p)
                for u in elems for v in elems for w in elems)
    inverses = all(heisenberg_mul(u, heisenberg_inv(u, p), p) == e for u in elems)
    exponent = all(heisenberg_power(u, p, p) == e for u in elems)
    center = sorted(u for u in elems if all(heisenberg_mul(u, v, p) == heisenberg_mul(v, u, p) for v in elems))
    g, h, z = (1, 0, 0), (0, 1, 0), (0, 0, 1)
    comm = heisenberg_mul(heisenberg_mul(heisenberg_inv(g, p), heisenberg_inv(h, p), p),
                          heisenberg_mul(g, h, p), p)
    return {"associative": assoc, "inverses": inverses, "order": len(elems),
            "exponent_p": exponent, "center": center == [(0, 0, c) for c in range(p)],
            "commutator_is_z": comm == z}


def extraspecial_group_algebra(p: int) -> Algebra:
    """Group algebra of the extraspecial group of order p^3, exponent p.

    Basis ``b_0 = 1`` and ``b_u = u - 1``.  Named elements: ``g, h, z`` (as
    group elements), ``x1..xp`` with ``x_i = 1 - g^i h``, ``x{p+1} = 1 - g``
    and ``y = 1 - z``.
    """
    if p == 2:
        raise BadParameter("p must be an odd prime")
    la.FieldSpec(p)
    facts = check_heisenberg(p)
    if not all(v is True or v == p ** 3 for v in facts.values()):
        raise BadParameter("group construction failed: %s" % facts)
    elems = list(itertools.product(range(p), repeat=3))
    index = {u: i for i, u in enumerate(elems)}
    d = len(elems)
    table = np.zeros((d, d, d), dtype=np.int64)
    table[0] = np.eye(d, dtype=np.int64)
    table[:, 0, :] = np.eye(d, dtype=np.int64)
    for u in elems[1:]:
        for v in elems[1:]:
            i, j = index[u], index[v]
            w = index[heisenberg_mul(u, v, p)]
            # (u-1)(v-1) = (uv-1) - (u-1) - (v-1)
            if w:
                table[i, j, w] += 1
            table[i, j, i] -= 1
            table[i, j, j] -= 1
    table %= p
    eye = np.eye(d, dtype=np.int64)

    def group_elem(u):
        return (eye[0] + eye[index[u]]) % p if index[u] else eye[0].copy()

    def one_minus(u):
        return (-eye[index[u]]) % p

    g, h, z = (1, 0, 0), (0, 1, 0), (0, 0, 1)
    named = {"g": group_elem(g), "h": group_elem(h), "z": group_elem(z), "y": one_minus(z)}
    for i in range(1, p + 1):
        named["x%d" % i] = one_minus(heisenberg_mul(heisenberg_power(g, i, p), h, p))
    named["x%d" % (p + 1)] = one_minus(g)
    basis = ["1"] + ["[%d,%d,%d]-1" % u for u in elems[1:]]
    return validate_algebra(p, table, basis=basis, generators=[index[g], index[h]],
                            named=named, name="extraspecial:p=%d" % p)


# string modules

_LETTERS = {"x": ("x", False), "y": ("y", False), "X": ("x", True), "Y": ("y", True)}


def parse_word(word: str) -> list[tuple[str, bool]]:
    """Letters ``x``/``y`` are direct, ``X``/``Y`` their inverses."""
    letters = []
    for ch in word.replace(" ", ""):
        if ch not in _LETTERS:
            raise InvalidWord("unknown letter %r" % ch)
        letters.append(_LETTERS[ch])
    for (a, ia), (b, ib) in zip(letters, letters[1:]):
        if a == b and ia != ib:
            raise InvalidWord("letter followed by its inverse")
        if a == b and ia == ib:
            raise InvalidWord("repeated letter %s%s violates %s^2 = 0" % (a, a, a))
    return letters


def tau_word(q: int) -> str:
    """The word x (xy)^(1-q) y^-1 written with inverse letters."""
    return "x" + "YX" * (q - 1) + "Y"


def string_module(alg: Algebra, word: str) -> Module:
    """String module with basis ``v_0..v_n`` for a word of length ``n``.

    A direct letter ``l_i`` acts by ``v_i -> v_{i-1}``; an inverse letter
    ``l_i`` acts by ``v_{i-1} -> v_i``.
    """
    letters = parse_word(word)
    n = len(letters) + 1
    gens = {alg.basis.index(g): np.zeros((n, n), dtype=np.int64) for g in ("x", "y")}
    for i, (g, inverse) in enumerate(letters, start=1):
        mat = gens[alg.basis.index(g)]
        if inverse:
            mat[i - 1, i] = 1
        else:
            mat[i, i - 1] = 1
    try:
        return Module.from_generators(alg, gens, check=True, name="string(%s)" % word)
    except ModuleError as exc:
        raise InvalidWord("word %r does not define a module: %s" % (word, exc)) from exc


# name parsing

def parse_algebra_spec(spec: str) -> Algebra:
    """Build a catalog algebra from ``family:key=value:...``."""
    family, *parts = spec.split(":")
    params = {}
    for part in parts:
        if "=" not in part:
            raise BadParameter("malformed parameter %r" % part)
        key, val = part.split("=", 1)
        try:
            params[key] = int(val)
        except ValueError as exc:
            raise BadParameter("parameter %s must be an integer" % key) from exc

    def take(*keys, **defaults):
        extra = set(params) - set(keys) - set(defaults)
        if extra:
            raise BadParameter("unknown parameters %s for %s" % (sorted(extra), family))
        missing = [k for k in keys if k not in params]
        if missing:
            raise BadParameter("missing parameters %s for %s" % (missing, family))
        return [params.get(k, defaults.get(k)) for k in list(keys) + list(defaults)]

    if family == "dihedral":
        q, p = take("q", "p")
        return dihedral_algebra(q, p)
    if family == "semidihedral":
        q, p, delta = take("q", "p", delta=1)
        return semidihedral_algebra(q, delta, p)
    if family == "klein":
        (p,) = take("p")
        return klein_commutative_algebra(p)
    if family == "extraspecial":
        (p,) = take("p")
        return extraspecial_group_algebra(p)
    raise BadParameter("unknown algebra family %r" % family)
