"""Short exact sequences, coordinatized Ext^1 and stable Hom spaces.

Ext^1(Z, X) is the cokernel of ``Hom(p0, X) -> Hom(p1, X)`` for the minimal
projective presentation ``p1 -> p0 -> Z``.  A morphism out of a sum of
indecomposable projectives is determined by the images of its generators, so
``Hom(p1, X)`` is identified with ``⊕_j X_{y_j}`` and every class is a vector
of cokernel coordinates.  Baer sum is then plain vector addition.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from . import exactfield as ef
from .repcore import (
    Rep,
    RepError,
    RepMorphism,
    block_morphism,
    combine,
    direct_sum,
    factor_through,
    from_projective,
    generator_images,
    generator_position,
    hom_basis,
    hom_coords,
    identity,
    induced_from_quotient,
    injective_envelope,
    kernel,
    minimal_projective_presentation,
    projective_cover,
    quotient_rep,
    sum_injections,
    sum_projections,
    zero_map,
)


class ShortExact:
    """``0 -> X --i--> Y --p--> Z -> 0``, exactness checked vertexwise."""

    def __init__(self, i: RepMorphism, p: RepMorphism):
        if i.dst != p.src:
            raise RepError("the two legs do not share a middle term")
        prime = i.p
        for v in i.src.quiver.vertices:
            iv, pv = i.comps[v], p.comps[v]
            if ef.rank(iv, prime) != iv.shape[1]:
                raise RepError(f"left leg is not injective at vertex {v}")
            if ef.rank(pv, prime) != pv.shape[0]:
                raise RepError(f"right leg is not surjective at vertex {v}")
            if ef.mul(pv, iv, prime).any():
                raise RepError(f"composite of the legs is nonzero at vertex {v}")
            if iv.shape[1] != pv.shape[1] - pv.shape[0]:
                raise RepError(f"sequence is not exact in the middle at vertex {v}")
        self.i, self.p = i, p

    @property
    def X(self) -> Rep:
        return self.i.src

    @property
    def Y(self) -> Rep:
        return self.i.dst

    @property
    def Z(self) -> Rep:
        return self.p.dst

    def retraction(self) -> Optional[RepMorphism]:
        """Some ``r: Y -> X`` with ``r @ i == id``, or None if the sequence does not split."""
        return factor_through(identity(self.X), self.i, "right")

    def section(self) -> Optional[RepMorphism]:
        return factor_through(identity(self.Z), self.p, "left")

    def is_split(self) -> bool:
        return self.retraction() is not None

    def __repr__(self):
        return f"ShortExact({list(self.X.dimvec)} -> {list(self.Y.dimvec)} -> {list(self.Z.dimvec)})"


def split_sequence(x: Rep, z: Rep) -> ShortExact:
    y = direct_sum([x, z])
    return ShortExact(sum_injections([x, z], y)[0], sum_projections([x, z], y)[1])


class ExtSpace:
    """Ext^1(Z, X) with a fixed coordinatization."""

    def __init__(self, Z: Rep, X: Rep):
        Z.same_category(X)
        self.Z, self.X = Z, X
        prime = Z.p
        q = Z.quiver
        if Z.is_zero():
            self.pres = None
            self._block_dims: list[int] = []
            self._quot = ef.quotient(ef.zeros(0, 0), prime)
            return
        pr = minimal_projective_presentation(Z)
        self.pres = pr
        self._block_dims = [X.dims[y] for y in pr.p1_vertices]
        src_dims = [X.dims[x] for x in pr.p0_vertices]
        t = ef.zeros(sum(self._block_dims), sum(src_dims))
        roff = np.cumsum([0] + self._block_dims)
        coff = np.cumsum([0] + src_dims)
        for j, y in enumerate(pr.p1_vertices):
            col = pr.f.comps[y][:, generator_position(q, pr.p1_vertices, j)]
            row = 0
            for i, x in enumerate(pr.p0_vertices):
                paths = q.paths(x, y)
                blk = ef.zeros(X.dims[y], X.dims[x])
                for k, path in enumerate(paths):
                    c = int(col[row + k])
                    if c:
                        blk = (blk + c * X.path_action(x, path)) % prime
                row += len(paths)
                t[roff[j]:roff[j + 1], coff[i]:coff[i + 1]] = blk
        self.boundary = t
        self._quot = ef.quotient(ef.column_basis(t, prime), prime)

    @property
    def p(self) -> int:
        return self.Z.p

    @property
    def dim(self) -> int:
        return self._quot.dim

    def zero(self) -> "ExtClass":
        return ExtClass(self, np.zeros(self.dim, dtype=np.int64))

    def basis(self) -> list["ExtClass"]:
        return [ExtClass(self, ef.eye(self.dim)[:, k]) for k in range(self.dim)]

    def element(self, coords) -> "ExtClass":
        return ExtClass(self, np.asarray(coords, dtype=np.int64))

    # cocycles: morphisms p1 -> X, recorded by generator images

    def cocycle_vector(self, phi: RepMorphism) -> np.ndarray:
        imgs = generator_images(phi, self.pres.p1_vertices)
        return np.concatenate(imgs) if imgs else np.zeros(0, dtype=np.int64)

    def class_of_cocycle(self, phi: RepMorphism) -> "ExtClass":
        if self.pres is None or not self.pres.p1_vertices:
            return self.zero()
        v = self.cocycle_vector(phi)
        return ExtClass(self, ef.mul(self._quot.proj, v.reshape(-1, 1), self.p)[:, 0])

    def cocycle(self, c: "ExtClass", target: Optional[Rep] = None) -> RepMorphism:
        """The canonical representative ``p1 -> X`` of ``c``."""
        pr = self.pres
        target = target or self.X
        vec = ef.mul(self._quot.section, np.asarray(c.coords).reshape(-1, 1), self.p)[:, 0]
        offs = np.cumsum([0] + self._block_dims)
        vecs = [vec[offs[j]:offs[j + 1]] for j in range(len(pr.p1_vertices))]
        return from_projective(pr.p1_vertices, target, vecs)

    def __repr__(self):
        return f"ExtSpace(Z={list(self.Z.dimvec)}, X={list(self.X.dimvec)}, dim={self.dim})"


@lru_cache(maxsize=65536)
def ext_space(Z: Rep, X: Rep) -> ExtSpace:
    return ExtSpace(Z, X)


def ext_dim(Z: Rep, X: Rep) -> int:
    return ext_space(Z, X).dim


@dataclass(frozen=True, eq=False)
class ExtClass:
    space: ExtSpace
    coords: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=np.int64).reshape(-1) % self.space.p
        if c.size != self.space.dim:
            raise RepError(f"class has {c.size} coordinates, space has dimension {self.space.dim}")
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    def _check(self, other: "ExtClass"):
        if other.space is not self.space and (other.space.Z != self.space.Z or other.space.X != self.space.X):
            raise RepError("classes live in different Ext spaces")

    def __add__(self, other: "ExtClass") -> "ExtClass":
        return baer_sum(self, other)

    def __neg__(self) -> "ExtClass":
        return scale(self, -1)

    def __sub__(self, other: "ExtClass") -> "ExtClass":
        return baer_sum(self, scale(other, -1))

    def __eq__(self, other):
        return (isinstance(other, ExtClass) and other.space.Z == self.space.Z
                and other.space.X == self.space.X and np.array_equal(self.coords, other.coords))

    def __hash__(self):
        return hash((self.space.Z, self.space.X, self.coords.tobytes()))

    def is_zero(self) -> bool:
        return not self.coords.any()

    def __repr__(self):
        return f"ExtClass({self.coords.tolist()})"


def baer_sum(c1: ExtClass, c2: ExtClass) -> ExtClass:
    c1._check(c2)
    return ExtClass(c1.space, (c1.coords + c2.coords) % c1.space.p)


def scale(c: ExtClass, lam: int) -> ExtClass:
    return ExtClass(c.space, (int(lam) * c.coords) % c.space.p)


# ---------------------------------------------------------------------------
# classes <-> sequences


def class_to_ses(c: ExtClass) -> ShortExact:
    """Pushout of the presentation sequence ``0 -> p1 -> p0 -> Z -> 0`` along the cocycle."""
    sp = c.space
    X, Z = sp.X, sp.Z
    if Z.is_zero():
        return split_sequence(X, Z)
    pr = sp.pres
    phi = sp.cocycle(c)
    mid = direct_sum([X, pr.p0])
    inj = sum_injections([X, pr.p0], mid)
    prj = sum_projections([X, pr.p0], mid)
    rel = inj[0] @ phi - inj[1] @ pr.f
    qr = quotient_rep(mid, {v: ef.column_basis(m, sp.p) for v, m in rel.comps.items()})
    i = qr.proj @ inj[0]
    p = induced_from_quotient(qr, pr.epi @ prj[1])
    return ShortExact(i, p)


def ses_to_class(s: ShortExact, space: Optional[ExtSpace] = None) -> ExtClass:
    sp = space or ext_space(s.Z, s.X)
    if sp.Z != s.Z or sp.X != s.X:
        raise RepError("sequence endpoints do not match the Ext space")
    if s.Z.is_zero() or not sp.pres.p1_vertices:
        return sp.zero()
    pr = sp.pres
    lift = _lift_through_epi(pr.epi, s.p, pr.p0_vertices)
    lf = lift @ pr.f
    phi = restrict_to_sub(lf, s.i)
    return sp.class_of_cocycle(phi)


def _lift_through_epi(h: RepMorphism, epi: RepMorphism, vertices: Sequence[str]) -> RepMorphism:
    """For ``h: ⊕P_x -> Z`` and an epi ``epi: Y -> Z``, some ``l`` with ``epi @ l == h``."""
    prime = h.p
    imgs = []
    for x, v in zip(vertices, generator_images(h, vertices)):
        w = ef.solve(epi.comps[x], v.reshape(-1, 1), prime)
        if w is None:
            raise RepError("map is not surjective at a generator vertex")
        imgs.append(w[:, 0])
    return from_projective(vertices, epi.src, imgs)


def restrict_to_sub(h: RepMorphism, incl: RepMorphism) -> RepMorphism:
    """The map ``g`` with ``incl @ g == h`` (image of h inside the subobject)."""
    comps = {}
    for v in h.comps:
        x = ef.solve(incl.comps[v], h.comps[v], h.p)
        if x is None:
            raise RepError("morphism does not land in the subobject")
        comps[v] = x
    return RepMorphism(h.src, incl.src, comps)


# ---------------------------------------------------------------------------
# bimodule structure


def pushout(u: RepMorphism, c: ExtClass) -> ExtClass:
    """``u c`` in Ext^1(Z, M) for ``u: X -> M``."""
    sp = c.space
    if u.src != sp.X:
        raise RepError("pushout: morphism source is not the left end of the class")
    target = ext_space(sp.Z, u.dst)
    if sp.pres is None or not sp.pres.p1_vertices:
        return target.zero()
    return target.class_of_cocycle(u @ sp.cocycle(c))


@lru_cache(maxsize=65536)
def _presentation_lift(v: RepMorphism) -> RepMorphism:
    """``v1: p1(N) -> p1(Z)`` in a chain map lifting ``v: N -> Z`` to presentations."""
    pn = minimal_projective_presentation(v.src)
    pz = minimal_projective_presentation(v.dst)
    v0 = _lift_through_epi(v @ pn.epi, pz.epi, pn.p0_vertices)
    h = v0 @ pn.f
    if not pn.p1_vertices:
        return zero_map(pn.p1, pz.p1)
    imgs = []
    for y, w in zip(pn.p1_vertices, generator_images(h, pn.p1_vertices)):
        t = ef.solve(pz.f.comps[y], w.reshape(-1, 1), v.p)
        if t is None:
            raise RepError("presentation lift failed")  # pragma: no cover
        imgs.append(t[:, 0])
    return from_projective(pn.p1_vertices, pz.p1, imgs)


def pullback(c: ExtClass, v: RepMorphism) -> ExtClass:
    """``c v`` in Ext^1(N, X) for ``v: N -> Z``."""
    sp = c.space
    if v.dst != sp.Z:
        raise RepError("pullback: morphism target is not the right end of the class")
    target = ext_space(v.src, sp.X)
    if v.src.is_zero() or sp.Z.is_zero() or not target.pres.p1_vertices or not sp.pres.p1_vertices:
        return target.zero()
    return target.class_of_cocycle(sp.cocycle(c) @ _presentation_lift(v))


def pushout_sequence(u: RepMorphism, s: ShortExact) -> tuple[ShortExact, RepMorphism]:
    """Diagrammatic pushout along ``u: X -> M``; also returns the middle map ``Y -> Y'``."""
    M = u.dst
    mid = direct_sum([M, s.Y])
    inj = sum_injections([M, s.Y], mid)
    prj = sum_projections([M, s.Y], mid)
    rel = inj[0] @ u - inj[1] @ s.i
    qr = quotient_rep(mid, {v: ef.column_basis(m, u.p) for v, m in rel.comps.items()})
    new = ShortExact(qr.proj @ inj[0], induced_from_quotient(qr, s.p @ prj[1]))
    return new, qr.proj @ inj[1]


def pullback_sequence(s: ShortExact, v: RepMorphism) -> tuple[ShortExact, RepMorphism]:
    """Diagrammatic pullback along ``v: N -> Z``; also returns the middle map ``Y' -> Y``."""
    N = v.src
    mid = direct_sum([s.Y, N])
    inj = sum_injections([s.Y, N], mid)
    prj = sum_projections([s.Y, N], mid)
    k, incl = kernel(s.p @ prj[0] - v @ prj[1])
    i_new = restrict_to_sub(inj[0] @ s.i, incl)
    new = ShortExact(i_new, prj[1] @ incl)
    return new, prj[0] @ incl


def baer_sum_sequence(s1: ShortExact, s2: ShortExact) -> ShortExact:
    """Diagrammatic Baer sum: pull back the sum along the diagonal, push out along the codiagonal."""
    X, Z = s1.X, s1.Z
    total = ShortExact(
        block_morphism([X, X], [s1.Y, s2.Y], {(0, 0): s1.i, (1, 1): s2.i}),
        block_morphism([s1.Y, s2.Y], [Z, Z], {(0, 0): s1.p, (1, 1): s2.p}),
    )
    diag = block_morphism([Z], [Z, Z], {(0, 0): identity(Z), (1, 0): identity(Z)})
    pulled, _ = pullback_sequence(total, diag)
    codiag = block_morphism([X, X], [X], {(0, 0): identity(X), (0, 1): identity(X)})
    pushed, _ = pushout_sequence(codiag, pulled)
    return pushed


# ---------------------------------------------------------------------------
# trivial morphisms and stable Hom


def is_injectively_trivial(u: RepMorphism) -> bool:
    """u factors through the injective envelope of its source."""
    if u.is_zero():
        return True
    _, mono, _ = injective_envelope(u.src)
    return factor_through(u, mono, "right") is not None


def is_projectively_trivial(u: RepMorphism) -> bool:
    """u factors through the projective cover of its target."""
    if u.is_zero():
        return True
    _, epi, _ = projective_cover(u.dst)
    return factor_through(u, epi, "left") is not None


@dataclass(frozen=True, eq=False)
class StableHom:
    """Hom(src, dst) modulo a subspace of trivial morphisms, in Hom-basis coordinates."""

    src: Rep
    dst: Rep
    basis: tuple[RepMorphism, ...]
    trivial: np.ndarray  # columns span the trivial subspace
    quot: ef.Quotient

    @property
    def dim(self) -> int:
        return self.quot.dim

    def coords(self, f: RepMorphism) -> np.ndarray:
        if not self.basis:
            return np.zeros(0, dtype=np.int64)
        return ef.mul(self.quot.proj, hom_coords(f).reshape(-1, 1), self.src.p)[:, 0]

    def reps(self) -> list[RepMorphism]:
        """Canonical representatives of a basis of the stable Hom space."""
        s = self.quot.section
        return [combine(self.basis, s[:, k], self.src, self.dst) for k in range(self.dim)]

    def is_trivial(self, f: RepMorphism) -> bool:
        return not self.coords(f).any()


def _stable(src: Rep, dst: Rep, trivial_maps: list[RepMorphism]) -> StableHom:
    basis = hom_basis(src, dst)
    prime = src.p
    if trivial_maps and basis:
        cols = np.stack([hom_coords(f) for f in trivial_maps], axis=1)
        triv = ef.column_basis(cols, prime)
    else:
        triv = ef.zeros(len(basis), 0)
    return StableHom(src, dst, basis, triv, ef.quotient(triv, prime))


@lru_cache(maxsize=65536)
def stable_hom_inj(L: Rep, X: Rep) -> StableHom:
    """Hom-bar(L, X): Hom modulo maps factoring through L -> I(L)."""
    if L.is_zero() or X.is_zero():
        return _stable(L, X, [])
    env, mono, _ = injective_envelope(L)
    return _stable(L, X, [w @ mono for w in hom_basis(env, X)])


@lru_cache(maxsize=65536)
def stable_hom_proj(Z: Rep, L: Rep) -> StableHom:
    """Hom-under(Z, L): Hom modulo maps factoring through P(L) -> L."""
    if Z.is_zero() or L.is_zero():
        return _stable(Z, L, [])
    cov, epi, _ = projective_cover(L)
    return _stable(Z, L, [epi @ w for w in hom_basis(Z, cov)])


def pairing_matrix(space: ExtSpace, phi: Sequence[int], L: Rep, side: str) -> np.ndarray:
    """Matrix of the pairing induced by the linear form ``phi`` on Ext^1(Z, X).

    side="inj": rows Hom-bar(L, X), columns Ext^1(Z, L), entry phi(f eta).
    side="proj": rows Ext^1(L, X), columns Hom-under(Z, L), entry phi(zeta g).
    """
    prime = space.p
    phi = np.asarray(phi, dtype=np.int64) % prime
    if phi.size != space.dim:
        raise RepError("linear form has the wrong length")
    Z, X = space.Z, space.X
    if side == "inj":
        rows = stable_hom_inj(L, X).reps()
        cols = ext_space(Z, L).basis()
        entry = lambda f, eta: pushout(f, eta)  # noqa: E731
    elif side == "proj":
        rows = ext_space(L, X).basis()
        cols = stable_hom_proj(Z, L).reps()
        entry = lambda zeta, g: pullback(zeta, g)  # noqa: E731
    else:
        raise RepError(f"unknown side {side!r}")
    out = ef.zeros(len(rows), len(cols))
    for a, r in enumerate(rows):
        for b, c in enumerate(cols):
            out[a, b] = int(phi @ entry(r, c).coords) % prime
    return out


def ses_morphism_check(s: ShortExact, t: ShortExact, mid: RepMorphism) -> bool:
    """Whether ``mid: s.Y -> t.Y`` fits in a ladder with identity ends."""
    return (mid @ s.i) == t.i and (t.p @ mid) == s.p


__all__ = [
    "ShortExact", "ExtSpace", "ExtClass", "StableHom",
    "ext_space", "ext_dim", "split_sequence", "baer_sum", "scale",
    "class_to_ses", "ses_to_class", "pushout", "pullback",
    "pushout_sequence", "pullback_sequence", "baer_sum_sequence",
    "is_injectively_trivial", "is_projectively_trivial",
    "stable_hom_inj", "stable_hom_proj", "pairing_matrix", "restrict_to_sub",
    "ses_morphism_check",
]
