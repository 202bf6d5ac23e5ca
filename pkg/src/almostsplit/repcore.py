"""Representations of finite acyclic quivers over F_p.

A :class:`Rep` stores a dimension per vertex and one matrix per arrow (shape
``dim(target) x dim(source)``); a :class:`RepMorphism` stores one matrix per
vertex and refuses to exist unless every square commutes.  Everything here is
immutable and hashable by content, so the expensive constructions (Hom bases,
endomorphism algebras, presentations, decompositions) are memoised.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from . import exactfield as ef
from .quiver import Path, Quiver

_CACHE = 65536


class RepError(ValueError):
    """Usage errors: mismatched quivers/primes, bad shapes, violated contracts."""


class UndeterminedError(RepError):
    """The candidate budget could not settle whether a representation splits."""


class PrimeTooSmall(RepError):
    pass


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.setflags(write=False)
    return a


class Rep:
    """A representation: vector space dimensions at vertices, matrices on arrows."""

    def __init__(self, quiver: Quiver, p: int, dims: Mapping, mats: Optional[Mapping] = None):
        quiver.require_acyclic()
        self.quiver = quiver
        self.p = ef.check_prime(p)
        dims = {str(k): int(v) for k, v in dims.items()}
        for v, n in dims.items():
            quiver.check_vertex(v)
            if n < 0:
                raise RepError(f"negative dimension at vertex {v}")
        self.dims = {v: dims.get(v, 0) for v in quiver.vertices}
        mats = {str(k): v for k, v in (mats or {}).items()}
        for a in mats:
            if a not in quiver.arrow:
                raise RepError(f"unknown arrow {a}")
        self.mats: dict[str, np.ndarray] = {}
        for arr in quiver.arrows:
            shape = (self.dims[arr.target], self.dims[arr.source])
            if arr.id in mats:
                m = mats[arr.id]
                m = ef.mat(m, self.p, shape if not np.size(m) else None) if not isinstance(m, np.ndarray) \
                    else np.asarray(m) % self.p
                if m.shape != shape:
                    raise RepError(f"matrix for arrow {arr.id} has shape {m.shape}, expected {shape}")
            else:
                m = ef.zeros(*shape)
            self.mats[arr.id] = _frozen(m)

    @cached_property
    def dimvec(self) -> tuple[int, ...]:
        return tuple(self.dims[v] for v in self.quiver.vertices)

    @property
    def total_dim(self) -> int:
        return sum(self.dimvec)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def support(self) -> frozenset[str]:
        return frozenset(v for v, n in self.dims.items() if n)

    def path_action(self, x: str, path: Path) -> np.ndarray:
        """Matrix of the composite of arrow maps along ``path`` starting at ``x``."""
        out = ef.eye(self.dims[x])
        for a in path:
            out = ef.mul(self.mats[a], out, self.p)
        return out

    @cached_property
    def _key(self):
        return (self.quiver, self.p, self.dimvec,
                tuple(self.mats[a.id].tobytes() for a in self.quiver.arrows))

    def __eq__(self, other):
        return isinstance(other, Rep) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Rep({self.quiver.name}, dims={list(self.dimvec)})"

    def same_category(self, other: "Rep") -> None:
        if self.quiver != other.quiver or self.p != other.p:
            raise RepError("representations live over different quivers or primes")


class RepMorphism:
    """A family of vertex maps ``src -> dst`` commuting with all arrows."""

    def __init__(self, src: Rep, dst: Rep, comps: Mapping):
        src.same_category(dst)
        self.src, self.dst = src, dst
        p = src.p
        self.comps: dict[str, np.ndarray] = {}
        for v in src.quiver.vertices:
            shape = (dst.dims[v], src.dims[v])
            c = comps.get(v)
            if c is None:
                c = ef.zeros(*shape)
            else:
                c = np.asarray(c, dtype=np.int64) % p
            if c.shape != shape:
                raise RepError(f"component at {v} has shape {c.shape}, expected {shape}")
            self.comps[v] = _frozen(c)
        for a in src.quiver.arrows:
            lhs = ef.mul(dst.mats[a.id], self.comps[a.source], p)
            rhs = ef.mul(self.comps[a.target], src.mats[a.id], p)
            if not np.array_equal(lhs, rhs):
                raise RepError(f"square for arrow {a.id} does not commute")

    @property
    def p(self) -> int:
        return self.src.p

    def __matmul__(self, other: "RepMorphism") -> "RepMorphism":
        if other.dst != self.src:
            raise RepError("composition of non-composable morphisms")
        return RepMorphism(other.src, self.dst,
                           {v: ef.mul(self.comps[v], other.comps[v], self.p) for v in self.comps})

    def __add__(self, other: "RepMorphism") -> "RepMorphism":
        if other.src != self.src or other.dst != self.dst:
            raise RepError("sum of morphisms with different endpoints")
        return RepMorphism(self.src, self.dst,
                           {v: (self.comps[v] + other.comps[v]) % self.p for v in self.comps})

    def __sub__(self, other: "RepMorphism") -> "RepMorphism":
        return self + other.scale(-1)

    def scale(self, c: int) -> "RepMorphism":
        return RepMorphism(self.src, self.dst, {v: (int(c) * m) % self.p for v, m in self.comps.items()})

    def vector(self) -> np.ndarray:
        parts = [self.comps[v].reshape(-1) for v in self.src.quiver.vertices]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)

    def is_zero(self) -> bool:
        return all(not m.any() for m in self.comps.values())

    def is_iso(self) -> bool:
        return all(m.shape[0] == m.shape[1] and ef.rank(m, self.p) == m.shape[0]
                   for m in self.comps.values())

    def is_mono(self) -> bool:
        return all(ef.rank(m, self.p) == m.shape[1] for m in self.comps.values())

    def is_epi(self) -> bool:
        return all(ef.rank(m, self.p) == m.shape[0] for m in self.comps.values())

    def inverse(self) -> "RepMorphism":
        if not self.is_iso():
            raise RepError("morphism is not invertible")
        return RepMorphism(self.dst, self.src, {v: ef.inverse(m, self.p) for v, m in self.comps.items()})

    def __eq__(self, other):
        return (isinstance(other, RepMorphism) and self.src == other.src and self.dst == other.dst
                and all(np.array_equal(self.comps[v], other.comps[v]) for v in self.comps))

    def __hash__(self):
        return hash((self.src, self.dst, self.vector().tobytes()))

    def __repr__(self):
        return f"RepMorphism({self.src!r} -> {self.dst!r})"


# ---------------------------------------------------------------------------
# basic objects


def zero_rep(q: Quiver, p: int) -> Rep:
    return Rep(q, p, {})


def identity(m: Rep) -> RepMorphism:
    return RepMorphism(m, m, {v: ef.eye(n) for v, n in m.dims.items()})


def zero_map(m: Rep, n: Rep) -> RepMorphism:
    return RepMorphism(m, n, {})


def simple(q: Quiver, p: int, x: str) -> Rep:
    return Rep(q, p, {q.check_vertex(x): 1})


@lru_cache(maxsize=_CACHE)
def projective(q: Quiver, p: int, x: str) -> Rep:
    """P_x: basis at y is ``q.paths(x, y)``; arrows act by appending."""
    x = q.check_vertex(x)
    basis = {y: q.paths(x, y) for y in q.vertices}
    mats = {}
    for a in q.arrows:
        src, tgt = basis[a.source], basis[a.target]
        pos = {path: i for i, path in enumerate(tgt)}
        m = ef.zeros(len(tgt), len(src))
        for j, path in enumerate(src):
            m[pos[path + (a.id,)], j] = 1
        mats[a.id] = m
    return Rep(q, p, {y: len(b) for y, b in basis.items()}, mats)


def injective_basis(q: Quiver, x: str, z: str) -> tuple[Path, ...]:
    """Basis of I_x at z: the paths z -> x, ordered as in the opposite quiver."""
    return tuple(tuple(reversed(r)) for r in q.opposite().paths(x, z))


@lru_cache(maxsize=_CACHE)
def injective(q: Quiver, p: int, x: str) -> Rep:
    """I_x, the vector-space dual of the projective P_x of the opposite quiver."""
    return dual(projective(q.opposite(), p, x))


def direct_sum(reps: Sequence[Rep], q: Optional[Quiver] = None, p: Optional[int] = None) -> Rep:
    if not reps:
        if q is None or p is None:
            raise RepError("empty direct sum needs an explicit quiver and prime")
        return zero_rep(q, p)
    return _direct_sum(tuple(reps))


@lru_cache(maxsize=_CACHE)
def _direct_sum(reps: tuple[Rep, ...]) -> Rep:
    first = reps[0]
    for r in reps[1:]:
        first.same_category(r)
    q, p = first.quiver, first.p
    dims = {v: sum(r.dims[v] for r in reps) for v in q.vertices}
    mats = {}
    for a in q.arrows:
        m = ef.zeros(dims[a.target], dims[a.source])
        i = j = 0
        for r in reps:
            blk = r.mats[a.id]
            m[i:i + blk.shape[0], j:j + blk.shape[1]] = blk
            i += blk.shape[0]
            j += blk.shape[1]
        mats[a.id] = m
    return Rep(q, p, dims, mats)


def sum_injections(reps: Sequence[Rep], total: Rep) -> list[RepMorphism]:
    out, offs = [], {v: 0 for v in total.quiver.vertices}
    for r in reps:
        comps = {}
        for v in total.quiver.vertices:
            c = ef.zeros(total.dims[v], r.dims[v])
            c[offs[v]:offs[v] + r.dims[v], :] = ef.eye(r.dims[v])
            comps[v] = c
            offs[v] += r.dims[v]
        out.append(RepMorphism(r, total, comps))
    return out


def sum_projections(reps: Sequence[Rep], total: Rep) -> list[RepMorphism]:
    return [RepMorphism(total, i.src, {v: m.T for v, m in i.comps.items()})
            for i in sum_injections(reps, total)]


def block_morphism(srcs: Sequence[Rep], dsts: Sequence[Rep], blocks: Mapping[tuple[int, int], RepMorphism],
                   src: Optional[Rep] = None, dst: Optional[Rep] = None) -> RepMorphism:
    """Morphism between direct sums given by blocks ``(i, j): srcs[j] -> dsts[i]``."""
    ref = (srcs or dsts)[0]
    q, p = ref.quiver, ref.p
    src = src or direct_sum(srcs, q, p)
    dst = dst or direct_sum(dsts, q, p)
    comps = {}
    for v in q.vertices:
        c = ef.zeros(dst.dims[v], src.dims[v])
        roff = np.cumsum([0] + [d.dims[v] for d in dsts])
        coff = np.cumsum([0] + [s.dims[v] for s in srcs])
        for (i, j), f in blocks.items():
            c[roff[i]:roff[i + 1], coff[j]:coff[j + 1]] = f.comps[v]
        comps[v] = c
    return RepMorphism(src, dst, comps)


# ---------------------------------------------------------------------------
# Hom spaces


@lru_cache(maxsize=_CACHE)
def _hom_system(m: Rep, n: Rep) -> np.ndarray:
    m.same_category(n)
    q, p = m.quiver, m.p
    offs, k = {}, 0
    for v in q.vertices:
        offs[v] = k
        k += n.dims[v] * m.dims[v]
    rows = []
    for a in q.arrows:
        x, y = a.source, a.target
        blk = ef.zeros(n.dims[y] * m.dims[x], k)
        if blk.shape[0]:
            blk[:, offs[x]:offs[x] + n.dims[x] * m.dims[x]] += np.kron(n.mats[a.id], ef.eye(m.dims[x]))
            blk[:, offs[y]:offs[y] + n.dims[y] * m.dims[y]] -= np.kron(ef.eye(n.dims[y]), m.mats[a.id].T)
            rows.append(blk % p)
    system = np.concatenate(rows) if rows else ef.zeros(0, k)
    return _frozen(ef.kernel_basis(system, p))


def morphism_from_vector(m: Rep, n: Rep, vec: np.ndarray) -> RepMorphism:
    comps, k = {}, 0
    for v in m.quiver.vertices:
        size = n.dims[v] * m.dims[v]
        comps[v] = np.asarray(vec[k:k + size]).reshape(n.dims[v], m.dims[v])
        k += size
    return RepMorphism(m, n, comps)


@lru_cache(maxsize=_CACHE)
def hom_basis(m: Rep, n: Rep) -> tuple[RepMorphism, ...]:
    """Basis of Hom(m, n), in the column order of the commuting-square kernel."""
    k = _hom_system(m, n)
    return tuple(morphism_from_vector(m, n, k[:, j]) for j in range(k.shape[1]))


def hom_matrix(m: Rep, n: Rep) -> np.ndarray:
    """Columns are the flattened basis morphisms of Hom(m, n)."""
    return _hom_system(m, n)


def hom_dim(m: Rep, n: Rep) -> int:
    return _hom_system(m, n).shape[1]


def hom_coords(f: RepMorphism) -> np.ndarray:
    """Coordinates of ``f`` in :func:`hom_basis` (a 1-d array)."""
    x = ef.solve(hom_matrix(f.src, f.dst), f.vector().reshape(-1, 1), f.p)
    if x is None:
        raise RepError("vector is not a morphism")  # pragma: no cover
    return x[:, 0]


def combine(basis: Sequence[RepMorphism], coeffs: Iterable[int], m: Rep, n: Rep) -> RepMorphism:
    out = {v: ef.zeros(n.dims[v], m.dims[v]) for v in m.quiver.vertices}
    for f, c in zip(basis, coeffs):
        c = int(c) % m.p
        if c:
            for v in out:
                out[v] = (out[v] + c * f.comps[v]) % m.p
    return RepMorphism(m, n, out)


def factor_through(h: RepMorphism, through: RepMorphism, side: str) -> Optional[RepMorphism]:
    """Find ``w`` with ``through @ w == h`` (side='left', through: Y -> Z, h: L -> Z)
    or ``w @ through == h`` (side='right', through: X -> Y, h: X -> L)."""
    p = h.p
    if (side == "left" and through.dst != h.dst) or (side == "right" and through.src != h.src):
        raise RepError("factor_through: endpoints do not match")
    if side == "left":
        basis = hom_basis(h.src, through.src)
        cols = [(through @ w).vector() for w in basis]
        src, dst = h.src, through.src
    else:
        basis = hom_basis(through.dst, h.dst)
        cols = [(w @ through).vector() for w in basis]
        src, dst = through.dst, h.dst
    a = np.stack(cols, axis=1) if cols else ef.zeros(h.vector().size, 0)
    x = ef.solve(a, h.vector().reshape(-1, 1), p)
    if x is None:
        return None
    return combine(basis, x[:, 0], src, dst)


# ---------------------------------------------------------------------------
# sub- and quotient representations


def subrep(m: Rep, bases: Mapping[str, np.ndarray]) -> tuple[Rep, RepMorphism]:
    """Subrepresentation spanned by the columns of ``bases[v]`` (must be arrow-stable)."""
    p = m.p
    bases = {v: np.asarray(bases.get(v, ef.zeros(m.dims[v], 0))) for v in m.quiver.vertices}
    mats = {}
    for a in m.quiver.arrows:
        ux, uy = bases[a.source], bases[a.target]
        img = ef.mul(m.mats[a.id], ux, p)
        if uy.shape[1] == 0:
            if img.any():
                raise RepError(f"subspace not stable under arrow {a.id}")
            mats[a.id] = ef.zeros(0, ux.shape[1])
            continue
        x = ef.solve(uy, img, p)
        if x is None:
            raise RepError(f"subspace not stable under arrow {a.id}")
        mats[a.id] = x
    sub = Rep(m.quiver, p, {v: b.shape[1] for v, b in bases.items()}, mats)
    return sub, RepMorphism(sub, m, bases)


@dataclass(frozen=True)
class QuotientRep:
    rep: Rep
    proj: RepMorphism
    section: dict[str, np.ndarray]  # vertexwise linear sections of proj (not morphisms)


def quotient_rep(m: Rep, bases: Mapping[str, np.ndarray]) -> QuotientRep:
    p = m.p
    quots = {v: ef.quotient(np.asarray(bases.get(v, ef.zeros(m.dims[v], 0))), p) for v in m.quiver.vertices}
    mats = {a.id: ef.chain(p, quots[a.target].proj, m.mats[a.id], quots[a.source].section)
            for a in m.quiver.arrows}
    rep = Rep(m.quiver, p, {v: qu.dim for v, qu in quots.items()}, mats)
    return QuotientRep(rep, RepMorphism(m, rep, {v: qu.proj for v, qu in quots.items()}),
                       {v: qu.section for v, qu in quots.items()})


def induced_from_quotient(qr: QuotientRep, h: RepMorphism) -> RepMorphism:
    """The map ``qr.rep -> h.dst`` through which ``h`` (vanishing on the kernel) factors."""
    return RepMorphism(qr.rep, h.dst, {v: ef.mul(h.comps[v], qr.section[v], h.p) for v in h.comps})


def kernel(f: RepMorphism) -> tuple[Rep, RepMorphism]:
    return subrep(f.src, {v: ef.kernel_basis(c, f.p) for v, c in f.comps.items()})


def image(f: RepMorphism) -> tuple[Rep, RepMorphism, RepMorphism]:
    """``(im, incl, proj)`` with ``incl @ proj == f``."""
    im, incl = subrep(f.dst, {v: ef.column_basis(c, f.p) for v, c in f.comps.items()})
    proj = {v: ef.solve(incl.comps[v], f.comps[v], f.p) for v in f.comps}
    return im, incl, RepMorphism(f.src, im, proj)


def cokernel(f: RepMorphism) -> tuple[Rep, RepMorphism]:
    qr = quotient_rep(f.dst, {v: ef.column_basis(c, f.p) for v, c in f.comps.items()})
    return qr.rep, qr.proj


def restrict(f: RepMorphism, src_incl: RepMorphism, dst_incl: RepMorphism) -> RepMorphism:
    """The map ``A -> B`` with ``dst_incl @ it == f @ src_incl`` (A, B subobjects)."""
    g = f @ src_incl
    comps = {}
    for v in g.comps:
        x = ef.solve(dst_incl.comps[v], g.comps[v], f.p)
        if x is None:
            raise RepError("morphism does not restrict to the given subobjects")
        comps[v] = x
    return RepMorphism(src_incl.src, dst_incl.src, comps)


def radical_bases(m: Rep) -> dict[str, np.ndarray]:
    out = {}
    for v in m.quiver.vertices:
        ims = [m.mats[a.id] for a in m.quiver.incoming[v]]
        stack = np.concatenate(ims, axis=1) if ims else ef.zeros(m.dims[v], 0)
        out[v] = ef.column_basis(stack, m.p)
    return out


def socle_bases(m: Rep) -> dict[str, np.ndarray]:
    out = {}
    for v in m.quiver.vertices:
        maps = [m.mats[a.id] for a in m.quiver.outgoing[v]]
        stack = np.concatenate(maps, axis=0) if maps else ef.zeros(0, m.dims[v])
        out[v] = ef.kernel_basis(stack, m.p)
    return out


def radical_rep(m: Rep) -> tuple[Rep, RepMorphism]:
    return subrep(m, radical_bases(m))


def top(m: Rep) -> tuple[Rep, RepMorphism, dict[str, int]]:
    """Semisimple top ``m / rad m`` with its simple multiplicities."""
    qr = quotient_rep(m, radical_bases(m))
    return qr.rep, qr.proj, dict(qr.rep.dims)


def socle(m: Rep) -> tuple[Rep, RepMorphism, dict[str, int]]:
    s, incl = subrep(m, socle_bases(m))
    return s, incl, dict(s.dims)


# ---------------------------------------------------------------------------
# duality with the opposite quiver


def dual(m: Rep) -> Rep:
    """Vector-space dual, a representation of the opposite quiver."""
    return Rep(m.quiver.opposite(), m.p, m.dims, {a: mat.T for a, mat in m.mats.items()})


def dual_morphism(f: RepMorphism) -> RepMorphism:
    return RepMorphism(dual(f.dst), dual(f.src), {v: c.T for v, c in f.comps.items()})


# ---------------------------------------------------------------------------
# projective covers and presentations


def projective_sum(q: Quiver, p: int, vertices: Sequence[str]) -> Rep:
    return direct_sum([projective(q, p, x) for x in vertices], q, p)


def generator_position(q: Quiver, vertices: Sequence[str], i: int) -> int:
    """Index of the generator e_{x_i} inside ``(⊕ P_{x_k})_{x_i}``."""
    x = vertices[i]
    return sum(len(q.paths(vertices[k], x)) for k in range(i))


def from_projective(vertices: Sequence[str], target: Rep, vectors: Sequence[np.ndarray]) -> RepMorphism:
    """The morphism ``⊕ P_{x_i} -> target`` sending the generator e_{x_i} to ``vectors[i]``."""
    q, p = target.quiver, target.p
    src = projective_sum(q, p, vertices)
    comps = {}
    for z in q.vertices:
        cols = []
        for x, vec in zip(vertices, vectors):
            vec = np.asarray(vec, dtype=np.int64).reshape(-1)
            for path in q.paths(x, z):
                cols.append(ef.mul(target.path_action(x, path), vec.reshape(-1, 1), p)[:, 0])
        comps[z] = np.stack(cols, axis=1) if cols else ef.zeros(target.dims[z], 0)
    return RepMorphism(src, target, comps)


def generator_images(f: RepMorphism, vertices: Sequence[str]) -> list[np.ndarray]:
    """Inverse of :func:`from_projective`: the images of the generators."""
    q = f.src.quiver
    return [f.comps[x][:, generator_position(q, vertices, i)].copy() for i, x in enumerate(vertices)]


@dataclass(frozen=True)
class Presentation:
    """Minimal projective presentation ``p1 --f--> p0 --epi--> m -> 0`` (f is mono)."""

    m: Rep
    p1_vertices: tuple[str, ...]
    p0_vertices: tuple[str, ...]
    p1: Rep
    p0: Rep
    f: RepMorphism
    epi: RepMorphism


def _top_generators(m: Rep) -> tuple[list[str], list[np.ndarray]]:
    verts, vecs = [], []
    rad = radical_bases(m)
    for v in m.quiver.vertices:
        qu = ef.quotient(rad[v], m.p)
        for j in range(qu.dim):
            verts.append(v)
            vecs.append(qu.section[:, j])
    return verts, vecs


@lru_cache(maxsize=_CACHE)
def projective_cover(m: Rep) -> tuple[Rep, RepMorphism, tuple[str, ...]]:
    """``(p0, epi, vertices)`` where ``p0 = ⊕ P_x`` over ``vertices`` (with multiplicity)."""
    if m.is_zero():
        raise RepError("projective cover of the zero representation")
    verts, vecs = _top_generators(m)
    epi = from_projective(verts, m, vecs)
    return epi.src, epi, tuple(verts)


@lru_cache(maxsize=_CACHE)
def minimal_projective_presentation(m: Rep) -> Presentation:
    if m.is_zero():
        raise RepError("presentation of the zero representation")
    p0, epi, v0 = projective_cover(m)
    k, incl = kernel(epi)
    if k.is_zero():
        p1 = zero_rep(m.quiver, m.p)
        return Presentation(m, (), v0, p1, p0, zero_map(p1, p0), epi)
    p1, cov, v1 = projective_cover(k)
    f = incl @ cov
    if not f.is_mono():
        raise RepError("presentation is not minimal: kernel of the cover is not projective")
    return Presentation(m, v1, v0, p1, p0, f, epi)


def check_presentation_minimal(pr: Presentation) -> bool:
    """ker(epi) ⊆ rad(p0) and im f = ker epi, vertexwise."""
    p = pr.m.p
    rad = radical_bases(pr.p0)
    for v in pr.m.quiver.vertices:
        kb = ef.kernel_basis(pr.epi.comps[v], p)
        if ef.rank(np.concatenate([rad[v], kb], axis=1), p) != rad[v].shape[1]:
            return False
        fv = pr.f.comps[v]
        if ef.rank(fv, p) != kb.shape[1] or ef.mul(pr.epi.comps[v], fv, p).any():
            return False
    return True


@dataclass(frozen=True)
class Copresentation:
    """Minimal injective copresentation ``0 -> m --mono--> i0 --g--> i1 -> 0``."""

    m: Rep
    i0_vertices: tuple[str, ...]
    i1_vertices: tuple[str, ...]
    i0: Rep
    i1: Rep
    mono: RepMorphism
    g: RepMorphism


def injective_envelope(m: Rep) -> tuple[Rep, RepMorphism, tuple[str, ...]]:
    if m.is_zero():
        raise RepError("injective envelope of the zero representation")
    p0, epi, verts = projective_cover(dual(m))
    return dual(p0), dual_morphism(epi), verts


@lru_cache(maxsize=_CACHE)
def minimal_injective_copresentation(m: Rep) -> Copresentation:
    if m.is_zero():
        raise RepError("copresentation of the zero representation")
    pr = minimal_projective_presentation(dual(m))
    return Copresentation(m, pr.p0_vertices, pr.p1_vertices, dual(pr.p0), dual(pr.p1),
                          dual_morphism(pr.epi), dual_morphism(pr.f))


def is_projective(m: Rep) -> bool:
    return m.is_zero() or not minimal_projective_presentation(m).p1_vertices


def is_injective(m: Rep) -> bool:
    return m.is_zero() or not minimal_injective_copresentation(m).i1_vertices


# ---------------------------------------------------------------------------
# endomorphism algebras


@dataclass(frozen=True, eq=False)
class EndAlgebra:
    """End(m) with structure constants and its Jacobson radical.

    ``consts[i, j]`` holds the coordinates of ``basis[i] @ basis[j]``;
    ``radical`` is a d x r matrix whose columns span rad End(m) in coordinates.
    """

    m: Rep
    basis: tuple[RepMorphism, ...]
    consts: np.ndarray
    radical: np.ndarray
    residue: ef.Quotient = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def residue_dim(self) -> int:
        return self.dim - self.radical.shape[1]

    @property
    def is_local(self) -> bool:
        """Local with residue field F_p."""
        return self.residue_dim == 1

    def coords(self, f: RepMorphism) -> np.ndarray:
        return hom_coords(f)

    def element(self, coords: Iterable[int]) -> RepMorphism:
        return combine(self.basis, coords, self.m, self.m)

    def radical_basis(self) -> list[RepMorphism]:
        return [self.element(self.radical[:, j]) for j in range(self.radical.shape[1])]

    def in_radical(self, f: RepMorphism) -> bool:
        return not ef.mul(self.residue.proj, self.coords(f).reshape(-1, 1), self.m.p).any()

    def residue_scalar(self, f: RepMorphism) -> int:
        """For a local algebra: the scalar c with ``f - c * id`` in the radical."""
        if not self.is_local:
            raise RepError("residue scalar needs a local endomorphism algebra")
        p = self.m.p
        one = ef.mul(self.residue.proj, self.coords(identity(self.m)).reshape(-1, 1), p)[0, 0]
        val = ef.mul(self.residue.proj, self.coords(f).reshape(-1, 1), p)[0, 0]
        return int(val * ef.inv(one, p) % p)


@lru_cache(maxsize=_CACHE)
def end_algebra(m: Rep) -> EndAlgebra:
    """End(m) and its radical, the kernel of the trace form tr(L_x L_y).

    The trace-form description of the radical needs p > dim End(m).
    """
    p = m.p
    basis = hom_basis(m, m)
    d = len(basis)
    if d >= p:
        raise PrimeTooSmall(f"dim End = {d} is not below the prime {p}; increase prime")
    if d == 0:
        empty = ef.zeros(0, 0)
        return EndAlgebra(m, basis, np.zeros((0, 0, 0), dtype=np.int64), empty, ef.quotient(empty, p))
    prods = [(basis[i] @ basis[j]).vector() for i in range(d) for j in range(d)]
    consts = ef.solve(hom_matrix(m, m), np.stack(prods, axis=1), p)
    consts = consts.T.reshape(d, d, d)  # consts[i, j, k]: coefficient of e_k in e_i e_j
    # tr(L_{e_k}) = sum_j consts[k, j, j]
    traces = np.array([int(np.trace(consts[k]) % p) for k in range(d)], dtype=np.int64)
    form = np.einsum("ijk,k->ij", consts, traces) % p
    radical = ef.kernel_basis(form, p)
    return EndAlgebra(m, basis, _frozen(consts), _frozen(radical), ef.quotient(radical, p))


# ---------------------------------------------------------------------------
# Krull-Schmidt decomposition


CERTIFIED = "certified_indec"
UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class Part:
    rep: Rep
    multiplicity: int
    verdict: str


@dataclass(frozen=True, eq=False)
class DecompositionReport:
    """``iso: m -> total`` where ``total`` is the direct sum of the expanded parts."""

    m: Rep
    parts: tuple[Part, ...]
    total: Rep
    iso: RepMorphism

    def summands(self) -> list[Rep]:
        return [pt.rep for pt in self.parts for _ in range(pt.multiplicity)]

    def summand_verdicts(self) -> list[str]:
        return [pt.verdict for pt in self.parts for _ in range(pt.multiplicity)]

    @property
    def certified(self) -> bool:
        return all(pt.verdict == CERTIFIED for pt in self.parts)

    def projections(self) -> list[RepMorphism]:
        """Split epis ``m -> summand_k``."""
        return [pr @ self.iso for pr in sum_projections(self.summands(), self.total)]

    def inclusions(self) -> list[RepMorphism]:
        """Split monos ``summand_k -> m``."""
        inv = self.iso.inverse()
        return [inv @ inc for inc in sum_injections(self.summands(), self.total)]


def _block_diag_matrix(f: RepMorphism) -> np.ndarray:
    n = f.src.total_dim
    out = ef.zeros(n, n)
    k = 0
    for v in f.src.quiver.vertices:
        d = f.src.dims[v]
        out[k:k + d, k:k + d] = f.comps[v]
        k += d
    return out


def _candidates(alg: EndAlgebra, rng: np.random.Generator, budget: int):
    basis, p = alg.basis, alg.m.p
    d = len(basis)

    def gen():
        yield from basis
        for i, j in itertools.combinations(range(d), 2):
            yield basis[i] + basis[j]
        for i, j in itertools.product(range(d), repeat=2):
            yield basis[i] @ basis[j]
        while True:
            yield alg.element(rng.integers(0, p, size=d))

    return itertools.islice(gen(), budget)


def _fitting_split(f: RepMorphism, seed: int) -> Optional[list[tuple[Rep, RepMorphism]]]:
    """Split the source of ``f`` into generalized eigen-subreps, if there are >= 2."""
    p = f.p
    mu = ef.min_poly(_block_diag_matrix(f), p)
    factors = ef.factor_squarefree_distinct(mu, p, seed)
    if len(factors) < 2:
        return None
    pieces = []
    for g, k in factors:
        gk: ef.Poly = (1,)
        for _ in range(k):
            gk = ef.pmul(gk, g, p)
        bases = {v: ef.kernel_basis(ef.peval_matrix(gk, c, p), p) for v, c in f.comps.items()}
        pieces.append(subrep(f.src, bases))
    return pieces


def _split(m: Rep, rng: np.random.Generator, budget: int, seed: int) -> list[tuple[Rep, RepMorphism, str]]:
    """Leaves ``(part, inclusion part -> m, verdict)`` of the recursive splitting."""
    if m.is_zero():
        return []
    alg = end_algebra(m)
    if alg.is_local:
        return [(m, identity(m), CERTIFIED)]
    for cand in _candidates(alg, rng, budget):
        pieces = _fitting_split(cand, seed)
        if pieces:
            out = []
            for sub, incl in pieces:
                for part, inc2, verdict in _split(sub, rng, budget, seed):
                    out.append((part, incl @ inc2, verdict))
            return out
    return [(m, identity(m), UNDETERMINED)]


def iso_between_indecomposables(a: Rep, b: Rep) -> Optional[RepMorphism]:
    """An isomorphism a -> b, assuming End(a) is local.

    (f, g) -> class of g f in End(a)/rad is bilinear and nonzero iff a ≅ b, so
    some pair of basis morphisms already has an invertible composite.
    """
    if a.dimvec != b.dimvec:
        return None
    if a == b:
        return identity(a)
    back = hom_basis(b, a)
    for f in hom_basis(a, b):
        for g in back:
            if (g @ f).is_iso():
                return f
    return None


def _sort_key(m: Rep) -> tuple:
    q = m.quiver
    homs = tuple(hom_dim(m, projective(q, m.p, x)) for x in q.vertices)
    return (m.dimvec, hom_dim(m, m), homs, m._key[3])


@lru_cache(maxsize=_CACHE)
def decompose(m: Rep, seed: int = 0, budget: int = 200) -> DecompositionReport:
    """Krull-Schmidt decomposition by idempotent (Fitting) splitting.

    Parts whose endomorphism algebra is local with residue field F_p are
    certified indecomposable; anything the candidate budget fails to split is
    reported as undetermined rather than guessed.
    """
    q, p = m.quiver, m.p
    rng = np.random.default_rng(seed)
    leaves = _split(m, rng, budget, seed)
    # group isomorphic certified leaves: classes[i] = [rep, verdict, [(leaf incl @ iso)]]
    classes: list[list] = []
    for part, incl, verdict in leaves:
        for cls in classes:
            if verdict == CERTIFIED and cls[1] == CERTIFIED:
                phi = iso_between_indecomposables(cls[0], part)
                if phi is not None:
                    cls[2].append(incl @ phi)
                    break
            elif part == cls[0]:
                cls[2].append(incl)
                break
        else:
            classes.append([part, verdict, [incl]])
    classes.sort(key=lambda c: _sort_key(c[0]))
    parts = tuple(Part(c[0], len(c[2]), c[1]) for c in classes)
    summands = [c[0] for c in classes for _ in c[2]]
    incls = [i for c in classes for i in c[2]]
    total = direct_sum(summands, q, p)
    back = {v: (np.concatenate([i.comps[v] for i in incls], axis=1) if incls else ef.zeros(m.dims[v], 0))
            for v in q.vertices}
    iso = RepMorphism(total, m, back).inverse()
    return DecompositionReport(m, parts, total, iso)


def require_indecomposable(m: Rep, seed: int = 0, err: type = RepError) -> None:
    """Raise ``err`` unless ``m`` is certified indecomposable (UndeterminedError if unsettled)."""
    if m.is_zero():
        raise err("the zero representation is not indecomposable")
    d = decompose(m, seed)
    if len(d.parts) != 1 or d.parts[0].multiplicity != 1:
        raise err(f"representation with dims {list(m.dimvec)} is decomposable")
    if d.parts[0].verdict != CERTIFIED:
        raise UndeterminedError(f"representation with dims {list(m.dimvec)} could not be certified "
                                "indecomposable within the candidate budget")


@dataclass(frozen=True)
class IsoVerdict:
    verdict: str  # "yes" | "no" | "undetermined"
    iso: Optional[RepMorphism] = None
    witness: str = ""

    def __bool__(self):
        return self.verdict == "yes"


def is_isomorphic(m: Rep, n: Rep, seed: int = 0, budget: int = 64) -> IsoVerdict:
    m.same_category(n)
    if m.dimvec != n.dimvec:
        return IsoVerdict("no", witness=f"dimension vectors differ: {list(m.dimvec)} vs {list(n.dimvec)}")
    if m == n:
        return IsoVerdict("yes", identity(m))
    dm, dn = decompose(m, seed), decompose(n, seed)
    if dm.certified and dn.certified:
        sm, sn = dm.summands(), dn.summands()
        used = [False] * len(sn)
        blocks = {}
        for i, a in enumerate(sm):
            for j, b in enumerate(sn):
                if not used[j]:
                    phi = iso_between_indecomposables(a, b)
                    if phi is not None:
                        used[j] = True
                        blocks[(j, i)] = phi
                        break
            else:
                return IsoVerdict("no", witness=f"summand with dims {list(a.dimvec)} of the first "
                                                "has no isomorphic partner in the second")
        mid = block_morphism(sm, sn, blocks, dm.total, dn.total)
        return IsoVerdict("yes", dn.iso.inverse() @ mid @ dm.iso)
    rng = np.random.default_rng(seed)
    basis = hom_basis(m, n)
    for _ in range(budget if basis else 0):
        f = combine(basis, rng.integers(0, m.p, size=len(basis)), m, n)
        if f.is_iso():
            return IsoVerdict("yes", f)
    return IsoVerdict("undetermined", witness="decomposition not certified and random search failed")
