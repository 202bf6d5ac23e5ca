"""Exact linear algebra and polynomial arithmetic over a prime field F_p.

Matrices are plain ``numpy`` int64 arrays with entries in ``[0, p)``.  With the
default modulus every product of two residues fits comfortably in 64 bits, and
dot products of length below ~10^9 cannot overflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np
from sympy import isprime

DEFAULT_PRIME = 32003

# p * p * n must stay below 2**63 for the int64 dot products below
_MAX_PRIME = 2**31 - 1


class FieldError(ValueError):
    """Raised on invalid moduli or malformed matrix/polynomial arguments."""


@lru_cache(maxsize=64)
def check_prime(p: int) -> int:
    if not isinstance(p, (int, np.integer)) or p < 2 or not isprime(int(p)):
        raise FieldError(f"modulus {p} is not prime")
    if p > _MAX_PRIME:
        raise FieldError(f"modulus {p} too large for int64 arithmetic")
    return int(p)


def inv(a: int, p: int) -> int:
    a = int(a) % p
    if a == 0:
        raise ZeroDivisionError("inverse of zero")
    return pow(a, -1, p)


def mat(rows, p: int, shape: Optional[tuple[int, int]] = None) -> np.ndarray:
    """Build a reduced int64 matrix from nested sequences (or an array)."""
    a = np.array(rows, dtype=object)
    if a.size == 0:
        if shape is None:
            shape = (a.shape[0], 0) if a.ndim == 2 else (0, 0)
        return zeros(*shape)
    if a.ndim != 2:
        raise FieldError(f"expected a 2-d matrix, got shape {a.shape}")
    a = np.array([[int(x) % p for x in row] for row in a], dtype=np.int64)
    if shape is not None and a.shape != shape:
        raise FieldError(f"matrix shape {a.shape} != expected {shape}")
    return a


def zeros(r: int, c: int) -> np.ndarray:
    return np.zeros((r, c), dtype=np.int64)


def eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise FieldError(f"cannot multiply {a.shape} by {b.shape}")
    if a.shape[1] == 0:
        return zeros(a.shape[0], b.shape[1])
    return (a @ b) % p


def chain(p: int, *ms: np.ndarray) -> np.ndarray:
    """Product ``ms[0] @ ms[1] @ ...`` mod p."""
    out = ms[0]
    for m in ms[1:]:
        out = mul(out, m, p)
    return out


def rref(m: np.ndarray, p: int) -> tuple[np.ndarray, list[int], int]:
    """Reduced row echelon form of ``m`` over F_p.

    Returns ``(reduced, pivots, rank)``.  The reduced matrix has the same shape
    as ``m``; rows past ``rank`` are zero.
    """
    a = np.array(m, dtype=np.int64) % p
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = (a[r] * inv(a[r, c], p)) % p
        col = a[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            a[nzr] = (a[nzr] - np.outer(col[nzr], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots, r


def rank(m: np.ndarray, p: int) -> int:
    if m.size == 0:
        return 0
    return rref(m, p)[2]


def kernel_basis(m: np.ndarray, p: int) -> np.ndarray:
    """Columns form a basis of the right kernel, one per free column, in order."""
    rows, cols = m.shape
    red, pivots, r = rref(m, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    k = zeros(cols, len(free))
    for j, fc in enumerate(free):
        k[fc, j] = 1
        for i, pc in enumerate(pivots):
            k[pc, j] = (-red[i, fc]) % p
    return k


def solve(a: np.ndarray, b: np.ndarray, p: int) -> Optional[np.ndarray]:
    """Particular solution of ``a @ x = b`` with free variables set to zero."""
    if a.shape[0] != b.shape[0]:
        raise FieldError(f"row mismatch: {a.shape} vs {b.shape}")
    n = a.shape[1]
    aug = np.concatenate([a % p, b % p], axis=1)
    red, pivots, r = rref(aug, p)
    if any(c >= n for c in pivots):
        return None
    x = zeros(n, b.shape[1])
    for i, c in enumerate(pivots):
        x[c] = red[i, n:]
    return x


def inverse(m: np.ndarray, p: int) -> np.ndarray:
    n = m.shape[0]
    if m.shape != (n, n):
        raise FieldError("inverse of a non-square matrix")
    x = solve(m, eye(n), p)
    if x is None:
        raise FieldError("matrix is singular")
    return x


def column_basis(m: np.ndarray, p: int) -> np.ndarray:
    """Canonical basis of the column space: transposed nonzero rows of rref(m^T)."""
    red, _, r = rref(m.T, p)
    return np.ascontiguousarray(red[:r].T)


@dataclass(frozen=True)
class Quotient:
    """Pivot-complement coordinates on ``F_p^n / span(sub)``.

    ``proj`` is the (n - r) x n quotient map, ``section`` the n x (n - r)
    inclusion of the standard complement, so that ``proj @ section = I``.
    """

    n: int
    reduced: np.ndarray
    pivots: tuple[int, ...]
    free: tuple[int, ...]
    proj: np.ndarray
    section: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.free)

    def coords(self, v: np.ndarray, p: int) -> np.ndarray:
        return mul(self.proj, v.reshape(self.n, -1), p)


def quotient(sub: np.ndarray, p: int) -> Quotient:
    """Quotient of F_p^n by the column span of ``sub`` (an n x k matrix)."""
    n = sub.shape[0]
    red, pivots, r = rref(sub.T, p) if sub.shape[1] else (zeros(0, n), [], 0)
    red = red[:r]
    pset = set(pivots)
    free = tuple(c for c in range(n) if c not in pset)
    # v -> v - sum_i v[piv_i] * row_i, restricted to free coordinates
    elim = eye(n)
    if r:
        elim = (elim - red.T @ eye(n)[list(pivots)]) % p
    proj = np.ascontiguousarray(elim[list(free)])
    section = np.ascontiguousarray(eye(n)[:, list(free)])
    return Quotient(n, red, tuple(pivots), free, proj, section)


def random_invertible(n: int, p: int, rng: np.random.Generator) -> np.ndarray:
    while True:
        g = rng.integers(0, p, size=(n, n), dtype=np.int64)
        if rank(g, p) == n:
            return g


# --------------------------------------------------------------------------
# polynomials: coefficient lists, lowest degree first, no trailing zeros


Poly = tuple[int, ...]


def poly(coeffs: Sequence[int], p: int) -> Poly:
    c = [int(x) % p for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def pdeg(f: Poly) -> int:
    return len(f) - 1


def padd(f: Poly, g: Poly, p: int) -> Poly:
    n = max(len(f), len(g))
    return poly([(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n)], p)


def psub(f: Poly, g: Poly, p: int) -> Poly:
    return padd(f, tuple(-c for c in g), p)


def pmul(f: Poly, g: Poly, p: int) -> Poly:
    if not f or not g:
        return ()
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return poly(out, p)


def pdivmod(f: Poly, g: Poly, p: int) -> tuple[Poly, Poly]:
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(f)
    q = [0] * max(len(f) - len(g) + 1, 0)
    lead = inv(g[-1], p)
    for k in range(len(f) - len(g), -1, -1):
        c = (r[k + len(g) - 1] * lead) % p
        q[k] = c
        if c:
            for j, b in enumerate(g):
                r[k + j] = (r[k + j] - c * b) % p
    return poly(q, p), poly(r[: len(g) - 1], p)


def pmod(f: Poly, g: Poly, p: int) -> Poly:
    return pdivmod(f, g, p)[1]


def monic(f: Poly, p: int) -> Poly:
    if not f:
        return f
    c = inv(f[-1], p)
    return poly([a * c for a in f], p)


def pgcd(f: Poly, g: Poly, p: int) -> Poly:
    while g:
        f, g = g, pmod(f, g, p)
    return monic(f, p)


def pderiv(f: Poly, p: int) -> Poly:
    return poly([i * f[i] for i in range(1, len(f))], p)


def ppowmod(f: Poly, e: int, m: Poly, p: int) -> Poly:
    result: Poly = (1,)
    base = pmod(f, m, p)
    while e:
        if e & 1:
            result = pmod(pmul(result, base, p), m, p)
        base = pmod(pmul(base, base, p), m, p)
        e >>= 1
    return result


def peval_matrix(f: Poly, m: np.ndarray, p: int) -> np.ndarray:
    """Evaluate ``f`` at a square matrix by Horner's rule."""
    n = m.shape[0]
    out = zeros(n, n)
    for c in reversed(f):
        out = (mul(out, m, p) + c * eye(n)) % p
    return out


def min_poly(m: np.ndarray, p: int) -> Poly:
    """Monic minimal polynomial: first linear dependency among I, m, m^2, ...

    Powers are reduced incrementally against an echelon basis that remembers
    how each basis vector combines the powers, so the dependency falls out
    directly.
    """
    n = m.shape[0]
    if m.shape != (n, n):
        raise FieldError("min_poly needs a square matrix")
    basis: list[tuple[int, np.ndarray, np.ndarray]] = []
    cur = eye(n)
    for k in range(n + 1):
        w = cur.reshape(-1).copy()
        combo = np.zeros(n + 1, dtype=np.int64)
        combo[k] = 1
        for piv, vec, cmb in basis:
            c = w[piv]
            if c:
                w = (w - c * vec) % p
                combo = (combo - c * cmb) % p
        nz = np.nonzero(w)[0]
        if nz.size == 0:
            return poly(combo[: k + 1].tolist(), p)
        piv = int(nz[0])
        s = inv(w[piv], p)
        basis.append((piv, (w * s) % p, (combo * s) % p))
        cur = mul(cur, m, p)
    raise AssertionError("Cayley-Hamilton violated")  # pragma: no cover


def _squarefree(f: Poly, p: int) -> list[tuple[Poly, int]]:
    """Square-free decomposition of a monic polynomial (Yun, adapted to char p)."""
    out: list[tuple[Poly, int]] = []
    if pdeg(f) <= 0:
        return out
    d = pderiv(f, p)
    if not d:
        # f is a p-th power
        root = poly([f[i] for i in range(0, len(f), p)], p)
        return [(g, k * p) for g, k in _squarefree(root, p)]
    c = pgcd(f, d, p)
    w = pdivmod(f, c, p)[0]
    i = 1
    while pdeg(w) > 0:
        y = pgcd(w, c, p)
        z = pdivmod(w, y, p)[0]
        if pdeg(z) > 0:
            out.append((monic(z, p), i))
        i += 1
        w = y
        c = pdivmod(c, y, p)[0]
    if pdeg(c) > 0:
        root = poly([c[i] for i in range(0, len(c), p)], p)
        out.extend((g, k * p) for g, k in _squarefree(root, p))
    return out


def _distinct_degree(f: Poly, p: int) -> list[tuple[Poly, int]]:
    out = []
    x: Poly = (0, 1)
    h = x
    i = 1
    while pdeg(f) >= 2 * i:
        h = ppowmod(h, p, f, p)
        g = pgcd(f, psub(h, x, p), p)
        if pdeg(g) > 0:
            out.append((g, i))
            f = pdivmod(f, g, p)[0]
            h = pmod(h, f, p)
        i += 1
    if pdeg(f) > 0:
        out.append((monic(f, p), pdeg(f)))
    return out


def _equal_degree(f: Poly, d: int, p: int, rng: np.random.Generator) -> list[Poly]:
    if pdeg(f) == d:
        return [f]
    n = pdeg(f)
    while True:
        a = poly([int(c) for c in rng.integers(0, p, size=n)], p)
        if pdeg(a) < 1:
            continue
        if p == 2:
            t, acc = a, a
            for _ in range(d - 1):
                t = pmod(pmul(t, t, p), f, p)
                acc = padd(acc, t, p)
            b = acc
        else:
            b = psub(ppowmod(a, (p**d - 1) // 2, f, p), (1,), p)
        g = pgcd(f, b, p)
        if 0 < pdeg(g) < n:
            return _equal_degree(g, d, p, rng) + _equal_degree(pdivmod(f, g, p)[0], d, p, rng)


def factor_squarefree_distinct(f: Poly, p: int, seed: int = 0) -> list[tuple[Poly, int]]:
    """Factor ``f`` into monic irreducibles with multiplicities.

    Randomized equal-degree splitting is driven by ``seed``; the returned list
    is sorted by (degree, coefficients) and hence seed-independent.
    """
    f = poly(f, p)
    if not f:
        raise FieldError("cannot factor the zero polynomial")
    rng = np.random.default_rng(seed)
    found: dict[Poly, int] = {}
    for sq, mult in _squarefree(monic(f, p), p):
        for block, d in _distinct_degree(sq, p):
            for g in _equal_degree(block, d, p, rng):
                found[g] = found.get(g, 0) + mult
    return sorted(found.items(), key=lambda gm: (pdeg(gm[0]), tuple(reversed(gm[0]))))
