"""Finitely presented representations of ray quivers and their AR translates.

Rays point into the core, so every projective P_x is finite-dimensional and a
finitely presented representation is the cokernel of a map between finite sums
of them.  Injectives are infinite along the rays, but past the last vertex
touched by a presentation their vertex maps repeat literally; the kernel of
ν(f) is therefore decided by two consecutive rings of a finite truncation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import exactfield as ef
from .artrans import (
    AlmostSplitCertificate,
    ARError,
    ProjMap,
    almost_split_sequence,
    ar_quiver,
    nakayama,
    verify_ass,
)
from .extensions import ShortExact
from .quiver import Quiver, RayQuiver, Truncation
from .repcore import (
    Rep,
    RepError,
    RepMorphism,
    cokernel,
    decompose,
    dual,
    dual_morphism,
    is_projective,
    kernel,
    minimal_projective_presentation,
    require_indecomposable,
)


class InfRepError(RepError):
    pass


@dataclass(frozen=True)
class FPRep:
    """coker(f: ⊕ P_{p1[i]} -> ⊕ P_{p0[j]}) over a ray quiver.

    ``blocks[j][i]`` holds coefficients over ``paths(p0[j], p1[i])``.
    """

    rq: RayQuiver
    p: int
    p1: tuple[str, ...]
    p0: tuple[str, ...]
    blocks: tuple[tuple[tuple[int, ...], ...], ...]
    name: str = "M"

    def __post_init__(self):
        for v in self.p1 + self.p0:
            self.rq.locate(v)
        if not self.p0:
            raise InfRepError("presentation has no degree-zero projective")
        if len(self.blocks) != len(self.p0) or any(len(r) != len(self.p1) for r in self.blocks):
            raise InfRepError("presentation matrix shape does not match the projective lists")
        q = self.rq.truncate(self.min_depth).quiver
        for j, y in enumerate(self.p0):
            for i, x in enumerate(self.p1):
                n = len(q.paths(y, x))
                if len(self.blocks[j][i]) != n:
                    raise InfRepError(f"entry ({j}, {i}) needs {n} path coefficients")

    @property
    def support_index(self) -> int:
        """Largest ray position among the presentation vertices (0 if all in the core)."""
        return max((self.rq.locate(v)[1] for v in self.p1 + self.p0), default=0)

    @property
    def min_depth(self) -> int:
        return self.support_index + 1

    def truncation(self, depth: int) -> Truncation:
        if depth < self.min_depth:
            raise InfRepError(f"truncation depth {depth} too small: need at least {self.min_depth}")
        return self.rq.truncate(depth)

    def projmap(self, depth: int) -> ProjMap:
        q = self.truncation(depth).quiver
        blocks = tuple(tuple(np.asarray(c, dtype=np.int64) for c in row) for row in self.blocks)
        return ProjMap(q, self.p, self.p1, self.p0, blocks)


def coker_rep(m: FPRep, depth: Optional[int] = None) -> Rep:
    """The presented representation, over the truncation of the given depth."""
    depth = m.min_depth if depth is None else depth
    f = m.projmap(depth).to_morphism()
    return cokernel(f)[0]


def restrict_rep(r: Rep, q: Quiver) -> Rep:
    """Restriction to a full subquiver with the same vertex and arrow names."""
    return Rep(q, r.p, {v: r.dims[v] for v in q.vertices}, {a.id: r.mats[a.id] for a in q.arrows})


@dataclass(frozen=True, eq=False)
class DtrVerdict:
    kind: str  # "finite" | "infinite"
    depth: int
    stabilization_index: int
    stable_dims: dict[str, int]
    certificate: dict[str, bool]
    rep: Optional[Rep] = None
    ray_witness: Optional[str] = None
    stable_dim: int = 0

    @property
    def certified(self) -> bool:
        return all(self.certificate.values())


def _ring_certificate(nu: RepMorphism, rq: RayQuiver, k: int) -> dict[str, bool]:
    """Literal equality of ν(f) at rings k+1 and k+2, with identity connecting maps."""
    out = {}
    for r in rq.rays:
        a, b = rq.ray_vertex(r.id, k + 1), rq.ray_vertex(r.id, k + 2)
        arrow = rq.ray_arrow(r.id, k + 2)
        same = np.array_equal(nu.comps[a], nu.comps[b])
        for rep in (nu.src, nu.dst):
            m = rep.mats[arrow]
            same = same and m.shape[0] == m.shape[1] and np.array_equal(m, ef.eye(m.shape[0]))
        out[r.id] = bool(same)
    return out


def dtr_inf(m: FPRep, depth: Optional[int] = None) -> DtrVerdict:
    """Decide whether DTr of a finitely presented representation is finite-dimensional."""
    k = m.support_index
    depth = max(k + 2, depth or 0)
    rep = coker_rep(m, depth)
    if rep.is_zero():
        raise InfRepError("the presented representation is zero")
    for part in decompose(rep).parts:
        if is_projective(part.rep):
            raise InfRepError(f"projective direct summand with dimension vector {list(part.rep.dimvec)}")
    pr = minimal_projective_presentation(rep)
    nu = nakayama(ProjMap.from_morphism(pr.f, pr.p1_vertices, pr.p0_vertices))
    cert = _ring_certificate(nu, m.rq, k)
    if not all(cert.values()):
        raise InfRepError("internal failure: ring matrices do not repeat")  # pragma: no cover
    stable = {}
    for r in m.rq.rays:
        c = nu.comps[m.rq.ray_vertex(r.id, k + 1)]
        stable[r.id] = c.shape[1] - ef.rank(c, m.p)
    ker, _ = kernel(nu)
    for r in m.rq.rays:
        if stable[r.id]:
            return DtrVerdict("infinite", depth, k + 1, stable, cert, ray_witness=r.id, stable_dim=stable[r.id])
    window = m.rq.truncate(k + 1).quiver
    return DtrVerdict("finite", depth, k + 1, stable, cert, rep=restrict_rep(ker, window))


@dataclass(frozen=True, eq=False)
class RepPlusOutcome:
    kind: str  # "sequence" | "no_ass"
    verdict: DtrVerdict
    sequence: Optional[ShortExact] = None
    certificate: Optional[AlmostSplitCertificate] = None
    boundary_clear: bool = False
    test_set_complete: bool = False
    window_depth: int = 0
    witness: str = ""


def _extend_by_zero(r: Rep, q: Quiver) -> Rep:
    return Rep(q, r.p, dict(r.dims), dict(r.mats))


def window_indecomposables(tr: Truncation, p: int, seed: int = 0) -> tuple[list[Rep], bool]:
    """Indecomposables supported in the interior of a truncation window.

    Returns ``(reps, complete)``; ``complete`` is False when the interior is not
    representation-finite within the enumeration budget, in which case only the
    indecomposable projectives and injectives of the interior are returned.
    """
    inner = tr.quiver.full_subquiver(tr.interior, tr.quiver.name + ".interior")
    try:
        reps = [_extend_by_zero(n.rep, tr.quiver) for n in ar_quiver(inner, p, seed).nodes]
        return reps, True
    except ARError:
        from .repcore import injective, projective
        reps = [projective(inner, p, v) for v in inner.vertices] + [injective(inner, p, v) for v in inner.vertices]
        return [_extend_by_zero(r, tr.quiver) for r in reps], False


def ass_in_rep_plus(m: FPRep, depth: Optional[int] = None, seed: int = 0) -> RepPlusOutcome:
    """The almost split sequence ending at ``m`` in rep+, or a ray witness that none exists."""
    v = dtr_inf(m, depth)
    if v.kind == "infinite":
        return RepPlusOutcome("no_ass", v, witness=f"DTr is infinite along ray {v.ray_witness} "
                                                   f"(stable dimension {v.stable_dim})")
    w = v.stabilization_index
    tr = m.rq.truncate(w)
    z = coker_rep(m, w)
    require_indecomposable(z, seed, InfRepError)
    ass = almost_split_sequence(z, seed)
    s = ass.sequence
    clear = all(r.dims[b] == 0 for r in (s.X, s.Y, s.Z) for b in tr.boundary)
    tests, complete = window_indecomposables(tr, m.p, seed)
    cert = verify_ass(s, tests)
    return RepPlusOutcome("sequence", v, s, cert, clear, complete, w)


# ---------------------------------------------------------------------------
# the mirror side: rays out of the core, handled on the opposite quiver


@dataclass(frozen=True, eq=False)
class MirrorVerdict:
    """TrD of the dual object; ``rep`` lives over the opposite of the truncation."""

    kind: str
    base: DtrVerdict
    rep: Optional[Rep] = None


def trd_inf(m: FPRep, depth: Optional[int] = None) -> MirrorVerdict:
    """TrD of ``D coker(m)``, a finitely copresented representation of the reversed quiver."""
    v = dtr_inf(m, depth)
    return MirrorVerdict(v.kind, v, dual(v.rep) if v.rep is not None else None)


def ass_in_rep_minus(m: FPRep, depth: Optional[int] = None, seed: int = 0) -> RepPlusOutcome:
    """Almost split sequence starting at ``D coker(m)`` over the reversed quiver."""
    out = ass_in_rep_plus(m, depth, seed)
    if out.sequence is None:
        return out
    s = out.sequence
    mirrored = ShortExact(dual_morphism(s.p), dual_morphism(s.i))
    return RepPlusOutcome(out.kind, out.verdict, mirrored, out.certificate, out.boundary_clear,
                          out.test_set_complete, out.window_depth, out.witness)


__all__ = [
    "InfRepError", "FPRep", "coker_rep", "restrict_rep", "DtrVerdict", "dtr_inf",
    "RepPlusOutcome", "window_indecomposables", "ass_in_rep_plus",
    "MirrorVerdict", "trd_inf", "ass_in_rep_minus",
]
