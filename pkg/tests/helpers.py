"""Shared builders and independent oracles for the test-suite."""

from __future__ import annotations

import numpy as np
import sympy
from sympy import GF
from sympy.polys.matrices import DomainMatrix

from almostsplit import exactfield as ef
from almostsplit.quiver import Quiver
from almostsplit.repcore import Rep, direct_sum


def random_rep(q: Quiver, p: int, dims: dict, rng: np.random.Generator) -> Rep:
    mats = {a.id: rng.integers(0, p, size=(dims.get(a.target, 0), dims.get(a.source, 0)))
            for a in q.arrows}
    return Rep(q, p, dims, mats)


def transport(m: Rep, rng: np.random.Generator) -> Rep:
    """An isomorphic copy of ``m`` under a random change of basis at every vertex."""
    g = {v: ef.random_invertible(m.dims[v], m.p, rng) for v in m.quiver.vertices}
    mats = {a.id: ef.chain(m.p, g[a.target], m.mats[a.id], ef.inverse(g[a.source], m.p))
            for a in m.quiver.arrows}
    return Rep(m.quiver, m.p, m.dims, mats)


def scrambled_sum(reps, rng: np.random.Generator) -> Rep:
    return transport(direct_sum(reps), rng)


def nullity_gf(rows: list[list[int]], ncols: int, p: int) -> int:
    if ncols == 0:
        return 0
    if not rows:
        return ncols
    dm = DomainMatrix.from_list_sympy(len(rows), ncols, [[sympy.Integer(x) for x in r] for r in rows])
    return ncols - dm.convert_to(GF(p)).rank()


def hom_dim_oracle(m: Rep, n: Rep) -> int:
    """dim Hom(m, n) from the commuting squares written out entry by entry."""
    q, p = m.quiver, m.p
    offset, k = {}, 0
    for v in q.vertices:
        offset[v] = k
        k += n.dims[v] * m.dims[v]

    def var(v, i, j):  # entry (i, j) of the component at v
        return offset[v] + i * m.dims[v] + j

    rows = []
    for a in q.arrows:
        s, t = a.source, a.target
        A, B = m.mats[a.id], n.mats[a.id]
        # (B f_s - f_t A)[i, j] = 0
        for i in range(n.dims[t]):
            for j in range(m.dims[s]):
                row = [0] * k
                for r in range(n.dims[s]):
                    row[var(s, r, j)] += int(B[i, r])
                for r in range(m.dims[t]):
                    row[var(t, i, r)] -= int(A[r, j])
                rows.append(row)
    return nullity_gf(rows, k, p)


def euler_form(q: Quiver, d: tuple, e: tuple) -> int:
    idx = q.index
    out = sum(d[i] * e[i] for i in range(len(d)))
    return out - sum(d[idx[a.source]] * e[idx[a.target]] for a in q.arrows)


def coxeter(q: Quiver) -> np.ndarray:
    """Coxeter matrix -E^{-1} E^T on dimension vectors, E the Euler form matrix."""
    n = len(q.vertices)
    e = sympy.eye(n)
    for a in q.arrows:
        e[q.index[a.source], q.index[a.target]] -= 1
    return np.array((-e.inv() * e.T).tolist(), dtype=np.int64)


def brick_dimvecs(q: Quiver, bound: tuple, p: int) -> set[tuple]:
    """Dimension vectors of 0/1-matrix representations with one-dimensional End.

    Over a Dynkin quiver every indecomposable is a brick with a 0/1 realization
    and no decomposable representation is a brick, so this lists the
    indecomposables without going through the decomposition code.
    """
    import itertools

    out = set()
    ranges = [range(b + 1) for b in bound]
    for d in itertools.product(*ranges):
        if not any(d):
            continue
        dims = dict(zip(q.vertices, d))
        shapes = [(dims[a.target], dims[a.source]) for a in q.arrows]
        sizes = [r * c for r, c in shapes]
        for bits in itertools.product((0, 1), repeat=sum(sizes)):
            mats, k = {}, 0
            for a, (r, c), s in zip(q.arrows, shapes, sizes):
                mats[a.id] = np.array(bits[k:k + s], dtype=np.int64).reshape(r, c)
                k += s
            m = Rep(q, p, dims, mats)
            if hom_dim_oracle(m, m) == 1:
                out.add(d)
                break
    return out
