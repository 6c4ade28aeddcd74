"""Exact dense linear algebra over prime fields GF(p).

Matrices are plain ``numpy.int64`` arrays whose entries lie in ``[0, p)``.
Vectors are rows and maps act on the right: the image of ``v`` under ``m``
is ``v @ m``.  Small systems are eliminated with vectorised numpy; large
ones are handed to FLINT's ``nmod_mat``, which is observationally identical
(both produce the unique reduced row echelon form).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import flint
import numpy as np

from .errors import NoSolution, NotNilpotent, NotPrime

# Above this many entries elimination goes through FLINT.
FLINT_THRESHOLD = 40_000

_FLOAT_EXACT = 2 ** 53
_INT_EXACT = 2 ** 63 - 1


@dataclass(frozen=True)
class FieldSpec:
    """The prime field GF(p)."""

    p: int

    def __post_init__(self):
        p = int(self.p)
        if not 2 <= p < 2 ** 31:
            raise NotPrime("modulus %d outside [2, 2^31)" % p)
        if not flint.fmpz(p).is_prime():
            raise NotPrime("%d is not prime" % p)

    def inv(self, a: int) -> int:
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse mod %d" % self.p)
        return pow(a, self.p - 2, self.p)


def as_mat(rows, p: int) -> np.ndarray:
    """Coerce nested lists / arrays to a reduced int64 matrix."""
    a = np.array(rows, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(1, -1) if a.size else a.reshape(0, 0)
    return a % p


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def zeros(r: int, c: int) -> np.ndarray:
    return np.zeros((r, c), dtype=np.int64)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """``a @ b`` reduced mod p, using BLAS when the float result is exact."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    inner = a.shape[-1]
    bound = (p - 1) ** 2 * max(inner, 1)
    if bound < _FLOAT_EXACT:
        return np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64) % p
    if bound < _INT_EXACT:
        return (a @ b) % p
    step = max(1, _INT_EXACT // ((p - 1) ** 2))
    out = np.zeros(a.shape[:-1] + b.shape[-1:], dtype=np.int64)
    for s in range(0, inner, step):
        out = (out + a[..., s:s + step] @ b[..., s:s + step, :]) % p
    return out


def tensordot(a: np.ndarray, b: np.ndarray, axes, p: int) -> np.ndarray:
    """``np.tensordot`` reduced mod p (exact for every supported p)."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if isinstance(axes, int):
        inner = int(np.prod(b.shape[:axes]))
    else:
        inner = int(np.prod([b.shape[i] for i in axes[1]]))
    if (p - 1) ** 2 * max(inner, 1) < _FLOAT_EXACT:
        r = np.tensordot(a.astype(np.float64), b.astype(np.float64), axes)
        return np.rint(r).astype(np.int64) % p
    r = np.tensordot(a.astype(object), b.astype(object), axes)
    return (r % p).astype(np.int64)


def matpow(m: np.ndarray, e: int, p: int) -> np.ndarray:
    """``m**e`` by repeated squaring."""
    result = identity(m.shape[0])
    base = m % p
    while e:
        if e & 1:
            result = matmul(result, base, p)
        e >>= 1
        if e:
            base = matmul(base, base, p)
    return result


def _rref_numpy(a: np.ndarray, p: int):
    rows, cols = a.shape
    r = 0
    pivots = []
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        if inv != 1:
            a[r, c:] = (a[r, c:] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit, c:] = (a[hit, c:] - np.outer(col[hit], a[r, c:])) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def _rref_flint(a: np.ndarray, p: int):
    rows, cols = a.shape
    fm = flint.nmod_mat(rows, cols, a.ravel().tolist(), p)
    red, rank = fm.rref()
    out = np.fromiter(map(int, red.entries()), dtype=np.int64, count=rows * cols)
    out = out.reshape(rows, cols)[:rank]
    pivots = np.argmax(out != 0, axis=1).tolist() if rank else []
    return out, pivots


def rref(m: np.ndarray, p: int, backend: str | None = None):
    """Reduced row echelon form.

    Returns ``(R, pivots)`` where ``R`` holds only the nonzero rows and
    ``pivots[i]`` is the pivot column of row ``i``.
    """
    a = np.array(m, dtype=np.int64) % p
    if a.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    if backend is None:
        backend = "flint" if a.size > FLINT_THRESHOLD and min(a.shape) > 0 else "numpy"
    if backend == "flint" and min(a.shape) > 0:
        return _rref_flint(a, p)
    return _rref_numpy(a, p)


def rank(m: np.ndarray, p: int) -> int:
    m = np.asarray(m)
    if m.size == 0:
        return 0
    if m.shape[0] > m.shape[1]:
        m = m.T
    return len(rref(m, p)[1])


def row_space(m: np.ndarray, p: int) -> np.ndarray:
    """Reduced echelon basis of the row space (shape ``(rank, cols)``)."""
    m = np.asarray(m, dtype=np.int64)
    if m.shape[0] == 0:
        return zeros(0, m.shape[1])
    return rref(m, p)[0]


def independent_rows(m: np.ndarray, p: int) -> list[int]:
    """Indices of the greedy (first-come) maximal independent set of rows."""
    m = np.asarray(m, dtype=np.int64)
    if m.shape[0] == 0 or m.shape[1] == 0:
        return []
    return list(rref(m.T, p)[1])


def kernel_basis(m: np.ndarray, p: int) -> np.ndarray:
    """Basis of the left kernel ``{v : v @ m == 0}``, one vector per row.

    The basis is read off the reduced echelon form of ``m.T``: each free
    column contributes the vector with a 1 there and 0 at the other free
    columns, so the output is deterministic.
    """
    m = np.asarray(m, dtype=np.int64)
    n, c = m.shape
    if n == 0:
        return zeros(0, 0)
    if c == 0:
        return identity(n)
    red, piv = rref(m.T, p)
    free = [j for j in range(n) if j not in set(piv)]
    k = zeros(len(free), n)
    if free:
        k[np.arange(len(free)), free] = 1
        if piv:
            k[:, piv] = (-red[:, free].T) % p
    return k


def solve(m: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """One solution ``x`` of ``x @ m == b`` (free variables set to zero).

    ``b`` may be a single row or a stack of rows.  Raises NoSolution when
    the system is inconsistent.
    """
    m = np.asarray(m, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    single = b.ndim == 1
    if single:
        b = b.reshape(1, -1)
    n, c = m.shape
    s = b.shape[0]
    if c == 0:
        return zeros(s, n)[0] if single else zeros(s, n)
    aug = np.concatenate([m.T, b.T], axis=1)
    red, piv = rref(aug, p)
    if any(j >= n for j in piv):
        raise NoSolution("inconsistent system")
    xt = zeros(n, s)
    for i, j in enumerate(piv):
        xt[j] = red[i, n:]
    x = xt.T.copy()
    return x[0] if single else x


def inverse(m: np.ndarray, p: int) -> np.ndarray:
    m = np.asarray(m, dtype=np.int64)
    n = m.shape[0]
    if m.shape != (n, n) or rank(m, p) != n:
        raise NoSolution("matrix is not invertible")
    return solve(m, identity(n), p)


def complement_rows(sub: np.ndarray, candidates: np.ndarray, p: int) -> list[int]:
    """Indices of candidate rows extending an independent ``sub`` greedily."""
    sub = np.asarray(sub, dtype=np.int64).reshape(-1, candidates.shape[1])
    stacked = np.concatenate([sub, candidates], axis=0)
    k = sub.shape[0]
    return [i - k for i in independent_rows(stacked, p) if i >= k]


def coordinates(basis_rref: np.ndarray, pivots, v: np.ndarray, p: int) -> np.ndarray:
    """Coordinates of vectors lying in the span of an rref basis.

    No membership check: callers pass vectors known to lie in the span.
    """
    return np.asarray(v, dtype=np.int64)[..., list(pivots)] % p


@dataclass
class JordanReport:
    """Jordan type of a nilpotent operator with one chain top per block."""

    block_sizes: tuple
    chain_tops: np.ndarray
    index: int
    chains: np.ndarray = field(repr=False, default=None)

    def count(self, size: int) -> int:
        return sum(1 for b in self.block_sizes if b == size)


def rank_sequence(n: np.ndarray, p: int, stop: int | None = None) -> list[int]:
    """``[rank(n^0), rank(n^1), ...]`` until the rank reaches zero."""
    dim = n.shape[0]
    stop = dim + 1 if stop is None else stop
    ranks = [dim]
    power = identity(dim)
    while ranks[-1] > 0 and len(ranks) <= stop:
        power = matmul(power, n, p)
        ranks.append(rank(power, p))
    return ranks


def jordan_type(ranks: list[int]) -> tuple:
    """Block sizes (descending) from a rank sequence ending in 0."""
    r = list(ranks) + [0, 0]
    sizes = []
    for s in range(len(ranks) - 1, 0, -1):
        count = (r[s - 1] - r[s]) - (r[s] - r[s + 1])
        sizes.extend([s] * count)
    return tuple(sizes)


def jordan_chains(n: np.ndarray, p: int, expected_index: int | None = None) -> JordanReport:
    """Jordan chains of the nilpotent operator ``v -> v @ n``.

    Tops are chosen from the largest block size down.  At size ``s`` the
    new tops complete ``ker n^(s-1)`` plus the images of longer chains
    inside ``ker n^s``; candidates are scanned in the order of the
    deterministic kernel basis, so ties go to the lowest echelon pivot.
    """
    n = np.asarray(n, dtype=np.int64) % p
    dim = n.shape[0]
    if n.shape != (dim, dim):
        raise ValueError("jordan_chains needs a square matrix")
    if dim == 0:
        return JordanReport((), zeros(0, 0), 0, zeros(0, 0))
    if expected_index is not None and matpow(n, expected_index, p).any():
        raise NotNilpotent("n^%d != 0" % expected_index)
    powers = [identity(dim)]
    while powers[-1].any():
        if len(powers) > dim:
            raise NotNilpotent("matrix is not nilpotent")
        powers.append(matmul(powers[-1], n, p))
    index = len(powers) - 1
    ranks = [rank(pw, p) for pw in powers]
    kernels = [kernel_basis(pw, p) for pw in powers]
    tops: list[tuple[np.ndarray, int]] = []
    for s in range(index, 0, -1):
        want = (ranks[s - 1] - ranks[s]) - (ranks[s] - (ranks[s + 1] if s + 1 <= index else 0))
        if want == 0:
            continue
        known = [kernels[s - 1]] if kernels[s - 1].shape[0] else []
        for top, t in tops:
            known.append(matmul(top.reshape(1, -1), powers[t - s], p))
        known = np.concatenate(known, axis=0) if known else zeros(0, dim)
        known = row_space(known, p)
        picked = complement_rows(known, kernels[s], p)[:want]
        for i in picked:
            tops.append((kernels[s][i], s))
    chains = []
    for top, t in tops:
        for j in range(t):
            chains.append(matmul(top.reshape(1, -1), powers[j], p)[0])
    chains = np.array(chains, dtype=np.int64).reshape(-1, dim)
    report = JordanReport(tuple(t for _, t in tops),
                          np.array([tp for tp, _ in tops], dtype=np.int64).reshape(-1, dim),
                          index, chains)
    if sum(report.block_sizes) != dim or rank(chains, p) != dim:
        raise ArithmeticError("jordan chain construction failed")  # internal invariant
    return report
