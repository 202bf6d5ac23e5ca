"""Nakayama functor, AR translates, almost split sequences and AR quivers."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from . import exactfield as ef
from .extensions import (
    ExtClass,
    ShortExact,
    class_to_ses,
    ext_dim,
    ext_space,
    factor_through,
    pullback,
    pushout,
    ses_to_class,
    stable_hom_inj,
    stable_hom_proj,
)
from .quiver import Quiver
from .repcore import (
    Rep,
    RepError,
    RepMorphism,
    combine,
    decompose,
    dual,
    end_algebra,
    from_projective,
    generator_images,
    hom_basis,
    injective_basis,
    is_injective,
    is_projective,
    iso_between_indecomposables,
    kernel,
    minimal_projective_presentation,
    projective,
    projective_sum,
    radical_rep,
    require_indecomposable,
)


class ARError(RepError):
    """Contract violations: projective/injective input, uncertified objects, budget overruns."""


# ---------------------------------------------------------------------------
# maps between sums of projectives in path coordinates


@dataclass(frozen=True, eq=False)
class ProjMap:
    """A morphism ``⊕_i P_{src[i]} -> ⊕_j P_{dst[j]}``.

    ``blocks[j][i]`` is the coefficient vector of the component
    ``P_{src[i]} -> P_{dst[j]}`` over ``quiver.paths(dst[j], src[i])``.
    """

    quiver: Quiver
    p: int
    src: tuple[str, ...]
    dst: tuple[str, ...]
    blocks: tuple[tuple[np.ndarray, ...], ...]

    def __post_init__(self):
        q = self.quiver
        if len(self.blocks) != len(self.dst) or any(len(row) != len(self.src) for row in self.blocks):
            raise ARError("ProjMap block layout does not match the summand lists")
        for j, y in enumerate(self.dst):
            for i, x in enumerate(self.src):
                n = len(q.paths(y, x))
                if np.asarray(self.blocks[j][i]).size != n:
                    raise ARError(f"block P_{x} -> P_{y} needs {n} path coefficients")

    @classmethod
    def from_morphism(cls, f: RepMorphism, src: Sequence[str], dst: Sequence[str]) -> "ProjMap":
        q = f.src.quiver
        rows: list[list[np.ndarray]] = [[] for _ in dst]
        for x, img in zip(src, generator_images(f, src)):
            k = 0
            for j, y in enumerate(dst):
                n = len(q.paths(y, x))
                rows[j].append(img[k:k + n].copy())
                k += n
        return cls(q, f.p, tuple(src), tuple(dst), tuple(tuple(r) for r in rows))

    def to_morphism(self) -> RepMorphism:
        target = projective_sum(self.quiver, self.p, self.dst)
        vecs = [np.concatenate([np.asarray(self.blocks[j][i], dtype=np.int64) for j in range(len(self.dst))])
                if self.dst else np.zeros(0, dtype=np.int64) for i in range(len(self.src))]
        return from_projective(self.src, target, vecs)

    def entries(self, j: int, i: int) -> list[tuple[tuple[str, ...], int]]:
        """Nonzero ``(path, coefficient)`` pairs of block (j, i)."""
        paths = self.quiver.paths(self.dst[j], self.src[i])
        return [(q, int(c) % self.p) for q, c in zip(paths, self.blocks[j][i]) if int(c) % self.p]


def injective_sum(q: Quiver, p: int, vertices: Sequence[str]) -> Rep:
    return dual(projective_sum(q.opposite(), p, vertices))


def nakayama(pm: ProjMap) -> RepMorphism:
    """Apply ν: the path q in block P_x -> P_y becomes I_x -> I_y, r ↦ s where r = s·q."""
    q, p = pm.quiver, pm.p
    src = injective_sum(q, p, pm.src)
    dst = injective_sum(q, p, pm.dst)
    comps = {}
    for z in q.vertices:
        cb = [injective_basis(q, x, z) for x in pm.src]
        rb = [injective_basis(q, y, z) for y in pm.dst]
        coff = np.cumsum([0] + [len(b) for b in cb])
        roff = np.cumsum([0] + [len(b) for b in rb])
        m = ef.zeros(int(roff[-1]), int(coff[-1]))
        for j in range(len(pm.dst)):
            rpos = {s: k for k, s in enumerate(rb[j])}
            for i in range(len(pm.src)):
                for path, c in pm.entries(j, i):
                    n = len(path)
                    for k, r in enumerate(cb[i]):
                        if len(r) >= n and r[len(r) - n:] == path:
                            row = roff[j] + rpos[r[:len(r) - n]]
                            m[row, coff[i] + k] = (m[row, coff[i] + k] + c) % p
        comps[z] = m
    return RepMorphism(src, dst, comps)


# ---------------------------------------------------------------------------
# translates


def _forbid_summands(m: Rep, test, what: str) -> None:
    if m.is_zero():
        raise ARError("the zero representation has no translate")
    rep = decompose(m)
    for part in rep.parts:
        if test(part.rep):
            raise ARError(f"{what} direct summand with dimension vector {list(part.rep.dimvec)}")


@lru_cache(maxsize=65536)
def dtr_with_inclusion(m: Rep) -> tuple[Rep, RepMorphism]:
    """``DTr m`` as the kernel of ν applied to the minimal projective presentation."""
    _forbid_summands(m, is_projective, "projective")
    pr = minimal_projective_presentation(m)
    nu = nakayama(ProjMap.from_morphism(pr.f, pr.p1_vertices, pr.p0_vertices))
    return kernel(nu)


def dtr(m: Rep) -> Rep:
    return dtr_with_inclusion(m)[0]


@lru_cache(maxsize=65536)
def trd(m: Rep) -> Rep:
    """``TrD m``, computed as ``D DTr D`` over the opposite quiver."""
    _forbid_summands(m, is_injective, "injective")
    return dual(dtr(dual(m)))


# ---------------------------------------------------------------------------
# almost split sequences


def _radical_action_matrix(space, left_basis, right_basis) -> np.ndarray:
    """Stacked matrices of c ↦ r c (r in left_basis) and c ↦ c r' (r' in right_basis)."""
    classes = space.basis()
    blocks = []
    for r in left_basis:
        blocks.append(np.stack([pushout(r, c).coords for c in classes], axis=1))
    for r in right_basis:
        blocks.append(np.stack([pullback(c, r).coords for c in classes], axis=1))
    if not blocks:
        return ef.zeros(0, space.dim)
    return np.concatenate(blocks, axis=0) % space.p


def ext_socle(Z: Rep, X: Rep) -> np.ndarray:
    """Columns span the classes of Ext^1(Z, X) killed by rad End(X) and rad End(Z)."""
    sp = ext_space(Z, X)
    a = _radical_action_matrix(sp, end_algebra(X).radical_basis(), end_algebra(Z).radical_basis())
    return ef.kernel_basis(a, sp.p)


@dataclass(frozen=True, eq=False)
class AlmostSplit:
    delta: ExtClass
    sequence: ShortExact
    socle_dim: int


def _require_certified_indec(z: Rep, seed: int) -> None:
    require_indecomposable(z, seed, ARError)


@lru_cache(maxsize=65536)
def almost_split_sequence(z: Rep, seed: int = 0) -> AlmostSplit:
    """The almost split sequence ending at the indecomposable non-projective ``z``."""
    _require_certified_indec(z, seed)
    if is_projective(z):
        raise ARError("projective: no almost split sequence ends here")
    x = dtr(z)
    soc = ext_socle(z, x)
    if soc.shape[1] == 0:
        raise ARError("internal consistency failure: Ext socle is zero")
    delta = ext_space(z, x).element(soc[:, 0])
    return AlmostSplit(delta, class_to_ses(delta), soc.shape[1])


def almost_split_sequence_starting(x: Rep, seed: int = 0) -> AlmostSplit:
    """The almost split sequence starting at the indecomposable non-injective ``x``."""
    _require_certified_indec(x, seed)
    if is_injective(x):
        raise ARError("injective: no almost split sequence starts here")
    return almost_split_sequence(trd(x), seed)


def _non_retractions(L: Rep, Z: Rep) -> list[RepMorphism]:
    """Basis of the non-split-epi maps L -> Z (End(Z) local)."""
    basis = hom_basis(L, Z)
    if not basis:
        return []
    ez = end_algebra(Z)
    back = hom_basis(Z, L)
    rows = [[ez.residue_scalar(h @ g) for h in basis] for g in back]
    cond = ef.mat(rows, Z.p, (len(back), len(basis)))
    k = ef.kernel_basis(cond, Z.p)
    return [combine(basis, k[:, j], L, Z) for j in range(k.shape[1])]


def _non_sections(X: Rep, L: Rep) -> list[RepMorphism]:
    """Basis of the non-split-mono maps X -> L (End(X) local)."""
    basis = hom_basis(X, L)
    if not basis:
        return []
    ex_ = end_algebra(X)
    back = hom_basis(L, X)
    rows = [[ex_.residue_scalar(g @ h) for h in basis] for g in back]
    cond = ef.mat(rows, X.p, (len(back), len(basis)))
    k = ef.kernel_basis(cond, X.p)
    return [combine(basis, k[:, j], X, L) for j in range(k.shape[1])]


@dataclass
class AlmostSplitCertificate:
    sequence: ShortExact
    non_split: bool = False
    end_local: tuple[bool, bool] = (False, False)
    socle: bool = False
    ras_report: list[dict] = field(default_factory=list)
    las_report: list[dict] = field(default_factory=list)
    summands_ok: bool = False
    failures: list[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.valid


def verify_ass(s: ShortExact, test_indecs: Sequence[Rep]) -> AlmostSplitCertificate:
    """Check that ``s`` is almost split against the objects of ``test_indecs``."""
    cert = AlmostSplitCertificate(s)
    X, Z = s.X, s.Z
    cert.non_split = not s.is_split()
    if not cert.non_split:
        cert.failures.append("(a) sequence splits: the left leg has a retraction")
    lx = not X.is_zero() and end_algebra(X).is_local
    lz = not Z.is_zero() and end_algebra(Z).is_local
    cert.end_local = (lx, lz)
    if not (lx and lz):
        cert.failures.append(f"(b) endomorphism algebra not local: End(X) local={lx}, End(Z) local={lz}")
        return cert
    delta = ses_to_class(s)
    cert.socle = (all(pushout(r, delta).is_zero() for r in end_algebra(X).radical_basis())
                  and all(pullback(delta, r).is_zero() for r in end_algebra(Z).radical_basis()))
    if not cert.socle and cert.non_split:
        cert.failures.append("class is not annihilated by the radicals of End(X) and End(Z)")
    for L in test_indecs:
        hs = _non_retractions(L, Z)
        bad = [h for h in hs if factor_through(h, s.p, "left") is None]
        cert.ras_report.append({"dims": list(L.dimvec), "tested": len(hs), "factored": len(hs) - len(bad)})
        if bad:
            cert.failures.append(f"(c) a non-retraction from {list(L.dimvec)} does not factor through Y -> Z")
        hs = _non_sections(X, L)
        bad = [h for h in hs if factor_through(h, s.i, "right") is None]
        cert.las_report.append({"dims": list(L.dimvec), "tested": len(hs), "factored": len(hs) - len(bad)})
        if bad:
            cert.failures.append(f"(d) a non-section to {list(L.dimvec)} does not factor through X -> Y")
    dec = decompose(s.Y)
    ok = True
    for inc, prj in zip(dec.inclusions(), dec.projections()):
        if (s.p @ inc).is_zero() or (prj @ s.i).is_zero():
            ok = False
    cert.summands_ok = ok
    if not ok:
        cert.failures.append("(e) a direct summand of Y is killed by Y -> Z or missed by X -> Y")
    return cert


# ---------------------------------------------------------------------------
# duality dimension table


def duality_report(z: Rep, test_indecs: Sequence[Rep]) -> list[dict]:
    x = dtr(z)
    rows = []
    for L in test_indecs:
        a, b = ext_dim(z, L), stable_hom_inj(L, x).dim
        c, d = ext_dim(L, x), stable_hom_proj(z, L).dim
        rows.append({"dims": list(L.dimvec), "ext_zl": a, "hombar_l_tz": b, "ext_l_tz": c,
                     "homunder_z_l": d, "left_ok": a == b, "right_ok": c == d})
    return rows


# ---------------------------------------------------------------------------
# AR quivers of representation-finite quivers


@dataclass(frozen=True, eq=False)
class ARNode:
    name: str
    rep: Rep
    orbit: str  # vertex x of the starting projective P_x
    power: int  # the node is TrD^power P_x


@dataclass(eq=False)
class ARQuiver:
    quiver: Quiver
    nodes: list[ARNode]
    arrows: list[tuple[str, str, int]]
    tau: list[tuple[str, str]]  # (Z, DTr Z)
    meshes: list[tuple[str, tuple[str, ...], str]]
    sequences: dict[str, AlmostSplit]

    def node(self, name: str) -> ARNode:
        for n in self.nodes:
            if n.name == name:
                return n
        raise KeyError(name)

    def find(self, m: Rep) -> Optional[str]:
        for n in self.nodes:
            if n.rep.dimvec == m.dimvec and iso_between_indecomposables(n.rep, m) is not None:
                return n.name
        return None

    def indecomposables(self) -> list[Rep]:
        return [n.rep for n in self.nodes]

    def to_dot(self) -> str:
        lines = [f'digraph "{self.quiver.name}" {{', "  rankdir=LR;"]
        for n in self.nodes:
            label = f"{n.name} [{','.join(str(d) for d in n.rep.dimvec)}]"
            lines.append(f'  "{n.name}" [label="{label}"];')
        for a, b, mult in self.arrows:
            lines.append(f'  "{a}" -> "{b}" [multiplicity={mult}, label="{mult if mult > 1 else ""}"];')
        for z, x in self.tau:
            lines.append(f'  "{z}" -> "{x}" [style=dashed, label="tau"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _node_name(x: str, k: int) -> str:
    return f"P{x}" if k == 0 else f"TrD{k}P{x}" if k > 1 else f"TrDP{x}"


def ar_quiver(q: Quiver, p: int = ef.DEFAULT_PRIME, seed: int = 0, cap: int = 200) -> ARQuiver:
    """All indecomposables of a representation-finite quiver by TrD-orbits of projectives."""
    q.require_acyclic()
    nodes: list[ARNode] = []
    for x in q.vertices:
        m, k = projective(q, p, x), 0
        while True:
            _require_certified_indec(m, seed)
            nodes.append(ARNode(_node_name(x, k), m, x, k))
            if len(nodes) > cap:
                raise ARError("not representation-finite within budget")
            if is_injective(m):
                break
            m, k = trd(m), k + 1
    order = {x: i for i, x in enumerate(q.vertices)}
    nodes.sort(key=lambda n: (order[n.orbit], n.power))
    g = ARQuiver(q, nodes, [], [], [], {})
    by_key = {(n.orbit, n.power): n for n in nodes}
    arrows: dict[tuple[str, str], int] = {}

    def match(m: Rep) -> str:
        name = g.find(m)
        if name is None:
            raise ARError(f"indecomposable with dims {list(m.dimvec)} missing from the enumeration")
        return name

    for n in nodes:
        if n.power == 0:
            rad, _ = radical_rep(n.rep)
            for part in decompose(rad, seed).parts:
                key = (match(part.rep), n.name)
                arrows[key] = max(arrows.get(key, 0), part.multiplicity)
            continue
        ass = almost_split_sequence(n.rep, seed)
        xname = by_key[(n.orbit, n.power - 1)].name
        if iso_between_indecomposables(by_key[(n.orbit, n.power - 1)].rep, ass.sequence.X) is None:
            raise ARError("DTr does not invert TrD on an orbit")  # pragma: no cover
        g.sequences[n.name] = ass
        g.tau.append((n.name, xname))
        middle = []
        for part in decompose(ass.sequence.Y, seed).parts:
            mid = match(part.rep)
            middle.extend([mid] * part.multiplicity)
            for key in ((xname, mid), (mid, n.name)):
                arrows[key] = max(arrows.get(key, 0), part.multiplicity)
        g.meshes.append((xname, tuple(middle), n.name))
    pos = {n.name: i for i, n in enumerate(nodes)}
    g.arrows = sorted(((a, b, m) for (a, b), m in arrows.items()), key=lambda t: (pos[t[0]], pos[t[1]]))
    return g


def hom_dims_table(reps: Sequence[Rep]) -> np.ndarray:
    """``out[i, j] = dim Hom(reps[i], reps[j])``; handy as an isomorphism-invariant fingerprint."""
    from .repcore import hom_dim
    return np.array([[hom_dim(a, b) for b in reps] for a in reps], dtype=np.int64)


__all__ = [
    "ARError", "ProjMap", "nakayama", "dtr", "trd", "dtr_with_inclusion", "ext_socle",
    "AlmostSplit", "almost_split_sequence", "almost_split_sequence_starting",
    "AlmostSplitCertificate", "verify_ass", "duality_report",
    "ARNode", "ARQuiver", "ar_quiver", "hom_dims_table",
]
